// Model quality metrics: left-to-right held-out log probability, topic
// coherence over co-document frequencies, topic entropy, top words.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "slda/corpus.hpp"
#include "slda/global_state.hpp"
#include "slda/rng.hpp"

namespace slda {

// Posterior-mean point estimates p(w|k) = (eta + N~_kw) / (V eta + N~_k.),
// stored as log probabilities.
struct PointEstimate {
  int num_topics = 0;
  int vocab_size = 0;
  std::vector<double> log_p;  // K x V row-major

  double log_prob(int k, int w) const {
    return log_p[static_cast<std::size_t>(k) * vocab_size + w];
  }
  double prob(int k, int w) const { return std::exp(log_prob(k, w)); }
};

struct EvalConfig {
  double alpha_eval = 0.1;
  int particles = 10;  // independent left-to-right passes
  int top_w = 20;      // words per topic for coherence
  double epsilon = 0.01;

  void validate() const;
};

PointEstimate point_estimate(const GlobalState& state);
// Same with the smoothing hyperparameter overridden at evaluation time.
PointEstimate point_estimate(const GlobalState& state, double eta_eval);

// Per-token average log probability of a held-out document (left-to-right
// sequential sampling, particle-averaged marginals).
double left_to_right(const Document& doc, const PointEstimate& estimate,
                     const EvalConfig& config, Rng& rng);

// Same, also returning the particle-averaged marginal at every position
// (the terms whose logs are summed into the score).
struct LeftToRightTrace {
  std::vector<double> position_marginals;
  double score = 0.0;
};
LeftToRightTrace left_to_right_trace(const Document& doc,
                                     const PointEstimate& estimate,
                                     const EvalConfig& config, Rng& rng);

// n most probable words for topic k, ties broken by ascending word id.
std::vector<int> top_words(const PointEstimate& estimate, int k, int n);

// Sum over ranked top-word pairs of log((D(w_i, w_j) + eps) / D(w_j)), the
// denominator indexed by the higher-ranked word. Closer to zero is better.
double coherence(int k, const PointEstimate& estimate,
                 const DocFrequencies& freqs, const EvalConfig& config);

double topic_entropy(const PointEstimate& estimate, int k);

// Report writers. Held-out: "doc_id,n_tokens,avg_log_prob". Topics:
// "topic,coherence,entropy,top_words" with words |-joined.
struct HeldOutRecord {
  int doc_id;
  int n_tokens;
  double avg_log_prob;
};
void write_holdout_report(std::ostream& out,
                          const std::vector<HeldOutRecord>& records);
void write_topic_report(std::ostream& out, const PointEstimate& estimate,
                        const DocFrequencies& freqs, const Vocabulary& vocab,
                        const EvalConfig& config);

}  // namespace slda
