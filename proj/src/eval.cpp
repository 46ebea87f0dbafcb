#include "slda/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace slda {

void EvalConfig::validate() const {
  if (!(alpha_eval > 0.0)) throw std::invalid_argument("eval: alpha must be > 0");
  if (particles < 1) throw std::invalid_argument("eval: particles must be >= 1");
  if (top_w < 2) throw std::invalid_argument("eval: top_w must be >= 2");
  if (!(epsilon > 0.0)) throw std::invalid_argument("eval: epsilon must be > 0");
}

PointEstimate point_estimate(const GlobalState& state) {
  return point_estimate(state, state.eta());
}

PointEstimate point_estimate(const GlobalState& state, double eta_eval) {
  if (!(eta_eval > 0.0)) {
    throw std::invalid_argument("point_estimate: eta must be > 0");
  }
  const int k_count = state.num_topics();
  const int v = state.vocab_size();
  PointEstimate est;
  est.num_topics = k_count;
  est.vocab_size = v;
  est.log_p.resize(static_cast<std::size_t>(k_count) * v);

  const double log_eta = std::log(eta_eval);
  std::vector<double> log_denom(k_count);
  for (int k = 0; k < k_count; ++k) {
    log_denom[k] = std::log(v * eta_eval + state.topic_total(k));
    const double base = log_eta - log_denom[k];
    double* row = est.log_p.data() + static_cast<std::size_t>(k) * v;
    for (int w = 0; w < v; ++w) row[w] = base;
  }
  const double pi = state.scale();
  for (int w = 0; w < v; ++w) {
    for (const auto& e : state.word_entries(w)) {
      est.log_p[static_cast<std::size_t>(e.topic) * v + w] =
          std::log(eta_eval + pi * e.scaled) - log_denom[e.topic];
    }
  }
  return est;
}

LeftToRightTrace left_to_right_trace(const Document& doc,
                                     const PointEstimate& estimate,
                                     const EvalConfig& config, Rng& rng) {
  config.validate();
  if (doc.empty()) throw std::invalid_argument("left_to_right: empty document");
  const int k_count = estimate.num_topics;
  const int r_count = config.particles;
  const double alpha = config.alpha_eval;

  std::vector<double> prob_w(k_count);  // p(w_i | k) scratch
  std::vector<int> counts(static_cast<std::size_t>(r_count) * k_count, 0);
  std::vector<double> terms(k_count);

  LeftToRightTrace trace;
  trace.position_marginals.reserve(doc.length());
  double log_sum = 0.0;
  for (int i = 0; i < doc.length(); ++i) {
    const int w = doc.tokens[i];
    if (w < 0 || w >= estimate.vocab_size) {
      throw std::invalid_argument("left_to_right: token " + std::to_string(w) +
                                  " outside the model vocabulary");
    }
    for (int k = 0; k < k_count; ++k) prob_w[k] = estimate.prob(k, w);
    const double prior_denom = k_count * alpha + i;

    double marginal_sum = 0.0;
    for (int r = 0; r < r_count; ++r) {
      int* count_row = counts.data() + static_cast<std::size_t>(r) * k_count;
      double total = 0.0;
      for (int k = 0; k < k_count; ++k) {
        terms[k] = (alpha + count_row[k]) * prob_w[k];
        total += terms[k];
      }
      marginal_sum += total / prior_denom;
      // z_i drawn proportional to the summand terms
      const double u = rng.uniform01() * total;
      double cum = 0.0;
      int z = k_count - 1;
      for (int k = 0; k < k_count; ++k) {
        cum += terms[k];
        if (cum >= u) {
          z = k;
          break;
        }
      }
      ++count_row[z];
    }
    const double marginal = marginal_sum / r_count;
    trace.position_marginals.push_back(marginal);
    log_sum += std::log(marginal);
  }
  trace.score = log_sum / doc.length();
  return trace;
}

double left_to_right(const Document& doc, const PointEstimate& estimate,
                     const EvalConfig& config, Rng& rng) {
  return left_to_right_trace(doc, estimate, config, rng).score;
}

std::vector<int> top_words(const PointEstimate& estimate, int k, int n) {
  if (n > estimate.vocab_size) {
    throw std::invalid_argument("top_words: n exceeds vocabulary size");
  }
  std::vector<int> ids(estimate.vocab_size);
  std::iota(ids.begin(), ids.end(), 0);
  const double* row =
      estimate.log_p.data() + static_cast<std::size_t>(k) * estimate.vocab_size;
  std::partial_sort(ids.begin(), ids.begin() + n, ids.end(),
                    [row](int a, int b) {
                      if (row[a] != row[b]) return row[a] > row[b];
                      return a < b;
                    });
  ids.resize(n);
  return ids;
}

double coherence(int k, const PointEstimate& estimate,
                 const DocFrequencies& freqs, const EvalConfig& config) {
  config.validate();
  const std::vector<int> top = top_words(estimate, k, config.top_w);
  double score = 0.0;
  for (std::size_t i = 1; i < top.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const int higher = top[j];
      const int dj = freqs.single(higher);
      if (dj == 0) {
        throw std::runtime_error("coherence: top word '" + std::to_string(higher) +
                                 "' absent from the reference corpus");
      }
      score += std::log((freqs.pair(top[i], higher) + config.epsilon) / dj);
    }
  }
  return score;
}

double topic_entropy(const PointEstimate& estimate, int k) {
  const double* row =
      estimate.log_p.data() + static_cast<std::size_t>(k) * estimate.vocab_size;
  double h = 0.0;
  for (int w = 0; w < estimate.vocab_size; ++w) {
    h -= std::exp(row[w]) * row[w];
  }
  return h;
}

void write_holdout_report(std::ostream& out,
                          const std::vector<HeldOutRecord>& records) {
  out << "doc_id,n_tokens,avg_log_prob\n";
  char buf[32];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%.10g", r.avg_log_prob);
    out << r.doc_id << ',' << r.n_tokens << ',' << buf << "\n";
  }
}

void write_topic_report(std::ostream& out, const PointEstimate& estimate,
                        const DocFrequencies& freqs, const Vocabulary& vocab,
                        const EvalConfig& config) {
  out << "topic,coherence,entropy,top_words\n";
  char buf[32];
  for (int k = 0; k < estimate.num_topics; ++k) {
    const auto words = top_words(estimate, k, config.top_w);
    std::snprintf(buf, sizeof buf, "%.10g", coherence(k, estimate, freqs, config));
    out << k << ',' << buf;
    std::snprintf(buf, sizeof buf, "%.10g", topic_entropy(estimate, k));
    out << ',' << buf << ',';
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (i) out << '|';
      out << vocab.word(words[i]);
    }
    out << "\n";
  }
}

}  // namespace slda
