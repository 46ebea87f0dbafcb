#include "slda/sampler.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "slda/special.hpp"

namespace slda {

void SamplerConfig::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("sampler: alpha must be > 0");
  if (burnin < 0) throw std::invalid_argument("sampler: burnin must be >= 0");
  if (samples < 1) throw std::invalid_argument("sampler: samples must be >= 1");
}

TopicCache make_topic_cache(const GlobalState& state, double alpha) {
  TopicCache cache;
  const int k_count = state.num_topics();
  cache.exp_psi_eta = exp_digamma(state.eta());
  cache.inv_denom.resize(k_count);
  cache.alpha_cdf.resize(k_count);
  const double v_eta = state.vocab_size() * state.eta();
  double cum = 0.0;
  for (int k = 0; k < k_count; ++k) {
    cache.inv_denom[k] = 1.0 / exp_digamma(v_eta + state.topic_total(k));
    cum += alpha * cache.exp_psi_eta * cache.inv_denom[k];
    cache.alpha_cdf[k] = cum;
  }
  cache.alpha_smooth = cum;
  return cache;
}

void GibbsWorkspace::increment(int k, const TopicCache& cache) {
  if (doc_topic[k]++ == 0) {
    nz_pos[k] = static_cast<int>(nz_topics.size());
    nz_topics.push_back(k);
  }
  smooth_sum += cache.exp_psi_eta * cache.inv_denom[k];
}

void GibbsWorkspace::decrement(int k, const TopicCache& cache) {
  assert(doc_topic[k] > 0);
  if (--doc_topic[k] == 0) {
    const int pos = nz_pos[k];
    const int last = nz_topics.back();
    nz_topics[pos] = last;
    nz_pos[last] = pos;
    nz_topics.pop_back();
    nz_pos[k] = -1;
  }
  smooth_sum -= cache.exp_psi_eta * cache.inv_denom[k];
}

double GibbsWorkspace::recompute_smooth(const TopicCache& cache,
                                        double alpha) const {
  double total = 0.0;
  for (std::size_t k = 0; k < doc_topic.size(); ++k) {
    total += (alpha + doc_topic[k]) * cache.exp_psi_eta * cache.inv_denom[k];
  }
  return total;
}

namespace {

// Word-specific part of Eq. 15 for the cavity counts in ws. Fills ws.word_cum
// with (topic, running sum) and returns the part's total mass.
double eval_word_bucket(const GlobalState& state, const TopicCache& cache,
                        GibbsWorkspace& ws, int w, double alpha) {
  const double pi = state.scale();
  const double eta = state.eta();
  ws.word_cum.clear();
  double total = 0.0;
  for (const auto& e : state.word_entries(w)) {
    const double weight = (alpha + ws.doc_topic[e.topic]) *
                          (exp_digamma(eta + pi * e.scaled) - cache.exp_psi_eta) *
                          cache.inv_denom[e.topic];
    total += weight;
    ws.word_cum.emplace_back(e.topic, total);
  }
  return total;
}

int draw_topic(GibbsWorkspace& ws, const GlobalState& state,
               const TopicCache& cache, int w, double alpha, Rng& rng) {
  const int k_count = state.num_topics();
  std::uint64_t work = 0;

  const double word_sum = eval_word_bucket(state, cache, ws, w, alpha);
  work += ws.word_cum.size();

  const double u = rng.uniform01() * (word_sum + ws.smooth_sum);
  int topic = -1;
  if (u < word_sum) {
    for (const auto& [k, cum] : ws.word_cum) {
      if (cum >= u) {
        topic = k;
        break;
      }
    }
    if (topic < 0) topic = ws.word_cum.back().first;
  } else {
    double v = u - word_sum;
    if (v < cache.alpha_smooth || ws.nz_topics.empty()) {
      auto it = std::lower_bound(cache.alpha_cdf.begin(), cache.alpha_cdf.end(),
                                 std::min(v, cache.alpha_smooth));
      topic = std::min(static_cast<int>(it - cache.alpha_cdf.begin()),
                       k_count - 1);
      work += std::bit_width(static_cast<unsigned>(k_count));
    } else {
      v -= cache.alpha_smooth;
      double run = 0.0;
      for (int k : ws.nz_topics) {
        ++work;
        run += ws.doc_topic[k] * cache.exp_psi_eta * cache.inv_denom[k];
        if (run >= v) {
          topic = k;
          break;
        }
      }
      if (topic < 0) topic = ws.nz_topics.back();
    }
  }
  ws.touched += std::min<std::uint64_t>(work, k_count);
  ++ws.token_updates;
  return topic;
}

}  // namespace

GibbsWorkspace init_assignments(const Document& doc, const GlobalState& state,
                                const TopicCache& cache,
                                const SamplerConfig& config, Rng& rng) {
  if (doc.empty()) {
    throw std::invalid_argument("init_assignments: empty document");
  }
  const int k_count = state.num_topics();
  GibbsWorkspace ws;
  ws.z.resize(doc.length());
  ws.doc_topic.assign(k_count, 0);
  ws.nz_pos.assign(k_count, -1);
  ws.smooth_sum = cache.alpha_smooth;

  if (k_count == 1) {
    for (int i = 0; i < doc.length(); ++i) {
      ws.z[i] = 0;
      ws.increment(0, cache);
    }
    ws.touched += doc.length();
    ws.token_updates += doc.length();
    return ws;
  }
  for (int i = 0; i < doc.length(); ++i) {
    const int k = draw_topic(ws, state, cache, doc.tokens[i], config.alpha, rng);
    ws.z[i] = k;
    ws.increment(k, cache);
  }
  return ws;
}

int resample_token(GibbsWorkspace& ws, const Document& doc,
                   const GlobalState& state, const TopicCache& cache,
                   const SamplerConfig& config, Rng& rng, int position) {
  ws.decrement(ws.z[position], cache);
  const int k =
      draw_topic(ws, state, cache, doc.tokens[position], config.alpha, rng);
  ws.z[position] = k;
  ws.increment(k, cache);
  return k;
}

void sweep(GibbsWorkspace& ws, const Document& doc, const GlobalState& state,
           const TopicCache& cache, const SamplerConfig& config, Rng& rng) {
  if (state.num_topics() == 1) return;
  for (int i = 0; i < doc.length(); ++i) {
    resample_token(ws, doc, state, cache, config, rng, i);
  }
}

std::vector<double> conditional(const GlobalState& state,
                                const TopicCache& cache,
                                const GibbsWorkspace& ws, int w, double alpha) {
  const int k_count = state.num_topics();
  std::vector<double> out(k_count);
  for (int k = 0; k < k_count; ++k) {
    out[k] = (alpha + ws.doc_topic[k]) * cache.exp_psi_eta * cache.inv_denom[k];
  }
  const double pi = state.scale();
  for (const auto& e : state.word_entries(w)) {
    out[e.topic] += (alpha + ws.doc_topic[e.topic]) *
                    (exp_digamma(state.eta() + pi * e.scaled) - cache.exp_psi_eta) *
                    cache.inv_denom[e.topic];
  }
  return out;
}

double sparse_normalizer(const GlobalState& state, const TopicCache& cache,
                         const GibbsWorkspace& ws, int w, double alpha) {
  const double pi = state.scale();
  const double eta = state.eta();
  double word_sum = 0.0;
  for (const auto& e : state.word_entries(w)) {
    word_sum += (alpha + ws.doc_topic[e.topic]) *
                (exp_digamma(eta + pi * e.scaled) - cache.exp_psi_eta) *
                cache.inv_denom[e.topic];
  }
  return word_sum + ws.smooth_sum;
}

DocContribution sample_document(const Document& doc, const GlobalState& state,
                                const TopicCache& cache,
                                const SamplerConfig& config, Rng& rng) {
  config.validate();
  GibbsWorkspace ws = init_assignments(doc, state, cache, config, rng);
  for (int b = 0; b < config.burnin; ++b) {
    sweep(ws, doc, state, cache, config, rng);
  }
  std::unordered_map<std::uint64_t, int> accum;
  for (int s = 0; s < config.samples; ++s) {
    sweep(ws, doc, state, cache, config, rng);
    for (int i = 0; i < doc.length(); ++i) {
      ++accum[wk_key(doc.tokens[i], ws.z[i])];
    }
  }
  DocContribution out;
  out.tokens = doc.length();
  out.touched = ws.touched;
  out.token_updates = ws.token_updates;
  out.entries.reserve(accum.size());
  const double inv_s = 1.0 / config.samples;
  for (const auto& [key, count] : accum) {
    out.entries.emplace_back(key, count * inv_s);
  }
  std::sort(out.entries.begin(), out.entries.end());
  return out;
}

DocContribution sample_document(const Document& doc, const GlobalState& state,
                                const SamplerConfig& config, Rng& rng) {
  const TopicCache cache = make_topic_cache(state, config.alpha);
  return sample_document(doc, state, cache, config, rng);
}

std::vector<std::pair<std::uint64_t, double>> exact_moments(
    const Document& doc, const GlobalState& state, double alpha) {
  const int k_count = state.num_topics();
  const int n = doc.length();
  double configs = 1.0;
  for (int i = 0; i < n; ++i) {
    configs *= k_count;
    if (configs > 1e6) {
      throw std::invalid_argument("exact_moments: K^N_d exceeds 1e6");
    }
  }

  // exp E[log beta] per (token, topic)
  std::vector<double> token_beta(static_cast<std::size_t>(n) * k_count);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < k_count; ++k) {
      token_beta[static_cast<std::size_t>(i) * k_count + k] =
          std::exp(state.expected_log_beta(k, doc.tokens[i]));
    }
  }

  std::vector<int> assignment(n, 0);
  std::vector<int> counts(k_count, 0);
  counts[0] = n;
  std::unordered_map<std::uint64_t, double> moments;
  double normalizer = 0.0;
  for (;;) {
    double weight = 1.0;
    for (int k = 0; k < k_count; ++k) {
      if (counts[k] > 0) weight *= rising_factorial(alpha, counts[k]);
    }
    for (int i = 0; i < n; ++i) {
      weight *= token_beta[static_cast<std::size_t>(i) * k_count + assignment[i]];
    }
    normalizer += weight;
    for (int i = 0; i < n; ++i) {
      moments[wk_key(doc.tokens[i], assignment[i])] += weight;
    }
    // odometer
    int pos = 0;
    while (pos < n) {
      --counts[assignment[pos]];
      if (++assignment[pos] < k_count) {
        ++counts[assignment[pos]];
        break;
      }
      assignment[pos] = 0;
      ++counts[0];
      ++pos;
    }
    if (pos == n) break;
  }

  std::vector<std::pair<std::uint64_t, double>> out(moments.begin(),
                                                    moments.end());
  for (auto& [key, value] : out) value /= normalizer;
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace slda
