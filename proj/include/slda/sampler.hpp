// Per-document collapsed Gibbs sampling from q*(z_d). The per-token
// conditional is evaluated as the Eq-15 two-part split: a word-specific sum
// over topics with stored mass, plus a smooth term maintained in O(1) per
// token. Element selection inside the smooth term splits again into the
// static alpha component (binary search over a per-minibatch CDF) and the
// document component (scan of topics with nonzero doc counts), so per-token
// work tracks the number of nonzero entries, not K.
#pragma once

#include <cstdint>
#include <vector>

#include "slda/global_state.hpp"
#include "slda/rng.hpp"

namespace slda {

struct SamplerConfig {
  double alpha = 0.1;
  int burnin = 2;   // B discarded sweeps
  int samples = 3;  // S saved sweeps

  void validate() const;
};

// Per-topic quantities that change only when the global state does; built
// once per minibatch and shared read-only by all document samplers.
struct TopicCache {
  double exp_psi_eta = 0.0;       // e^Psi(eta)
  std::vector<double> inv_denom;  // 1 / e^Psi(V eta + N~_k.)
  std::vector<double> alpha_cdf;  // cumulative alpha * e^Psi(eta) * inv_denom
  double alpha_smooth = 0.0;      // alpha_cdf back
};

TopicCache make_topic_cache(const GlobalState& state, double alpha);

struct GibbsWorkspace {
  std::vector<int> z;          // token assignments
  std::vector<int> doc_topic;  // N_dk, dense
  std::vector<int> nz_topics;  // topics with N_dk > 0
  std::vector<int> nz_pos;     // index into nz_topics, -1 if absent
  double smooth_sum = 0.0;     // second summation of Eq. 15, incremental
  std::uint64_t touched = 0;   // distinct topic-entries examined
  std::uint64_t token_updates = 0;

  std::vector<std::pair<int, double>> word_cum;  // scratch: (topic, cumsum)

  void increment(int k, const TopicCache& cache);
  void decrement(int k, const TopicCache& cache);
  // From-scratch evaluation of the smooth term, for drift checks.
  double recompute_smooth(const TopicCache& cache, double alpha) const;
};

// Sequential initialization: token i is assigned with probability
// proportional to (alpha + #{j<i assigned k}) * exp(E[log beta_kw]).
GibbsWorkspace init_assignments(const Document& doc, const GlobalState& state,
                                const TopicCache& cache,
                                const SamplerConfig& config, Rng& rng);

// Resample every token once in position order.
void sweep(GibbsWorkspace& ws, const Document& doc, const GlobalState& state,
           const TopicCache& cache, const SamplerConfig& config, Rng& rng);

// Resample one position (cavity decrement, draw, increment). Returns the new
// topic.
int resample_token(GibbsWorkspace& ws, const Document& doc,
                   const GlobalState& state, const TopicCache& cache,
                   const SamplerConfig& config, Rng& rng, int position);

// Unnormalized conditional q*(z = k) for word w given cavity counts,
// materialized densely for inspection. Sampling never builds this vector.
std::vector<double> conditional(const GlobalState& state,
                                const TopicCache& cache,
                                const GibbsWorkspace& ws, int w, double alpha);

// Normalizer computed exactly as the sampling path does (word-specific part
// plus the cached smooth term).
double sparse_normalizer(const GlobalState& state, const TopicCache& cache,
                         const GibbsWorkspace& ws, int w, double alpha);

// Sparse per-document contribution to the minibatch statistics. Values are
// multiples of 1/S and sum to N_d.
struct DocContribution {
  std::vector<std::pair<std::uint64_t, double>> entries;  // sorted by (w, k)
  int tokens = 0;
  std::uint64_t touched = 0;
  std::uint64_t token_updates = 0;
};

DocContribution sample_document(const Document& doc, const GlobalState& state,
                                const TopicCache& cache,
                                const SamplerConfig& config, Rng& rng);
DocContribution sample_document(const Document& doc, const GlobalState& state,
                                const SamplerConfig& config, Rng& rng);

// Exact E_q*[N_dkw] by enumeration of all K^N_d topic configurations.
// Tractable only for tiny instances; throws if K^N_d > 1e6.
std::vector<std::pair<std::uint64_t, double>> exact_moments(
    const Document& doc, const GlobalState& state, double alpha);

}  // namespace slda
