#include "slda/baseline_vb.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "slda/special.hpp"

namespace slda {

LocalVB vb_local_fit(const Document& doc, const GlobalState& state,
                     const TopicCache& cache, double alpha, int rounds) {
  if (doc.empty()) throw std::invalid_argument("vb_local_fit: empty document");
  if (rounds < 1) throw std::invalid_argument("vb_local_fit: rounds must be >= 1");

  const int k_count = state.num_topics();
  LocalVB local;
  {
    std::map<int, int> counts;
    for (int w : doc.tokens) ++counts[w];
    local.words.reserve(counts.size());
    local.word_counts.reserve(counts.size());
    for (const auto& [w, c] : counts) {
      local.words.push_back(w);
      local.word_counts.push_back(c);
    }
  }
  const std::size_t n_words = local.words.size();

  // exp E[log beta_kw] per distinct word; fixed across rounds.
  std::vector<double> beta(n_words * k_count);
  const double pi = state.scale();
  for (std::size_t j = 0; j < n_words; ++j) {
    double* row = beta.data() + j * k_count;
    for (int k = 0; k < k_count; ++k) {
      row[k] = cache.exp_psi_eta * cache.inv_denom[k];
    }
    for (const auto& e : state.word_entries(local.words[j])) {
      row[e.topic] = exp_digamma(state.eta() + pi * e.scaled) *
                     cache.inv_denom[e.topic];
    }
  }

  local.gamma.assign(k_count,
                     alpha + static_cast<double>(doc.length()) / k_count);
  local.phi.assign(n_words * k_count, 0.0);
  std::vector<double> exp_elog_theta(k_count);

  for (int round = 0; round < rounds; ++round) {
    for (int k = 0; k < k_count; ++k) {
      exp_elog_theta[k] = exp_digamma(local.gamma[k]);
    }
    std::vector<double> gamma_new(k_count, alpha);
    for (std::size_t j = 0; j < n_words; ++j) {
      const double* beta_row = beta.data() + j * k_count;
      double* phi_row = local.phi.data() + j * k_count;
      double norm = 0.0;
      for (int k = 0; k < k_count; ++k) {
        phi_row[k] = exp_elog_theta[k] * beta_row[k];
        norm += phi_row[k];
      }
      const double inv = 1.0 / norm;
      for (int k = 0; k < k_count; ++k) {
        phi_row[k] *= inv;
        gamma_new[k] += local.word_counts[j] * phi_row[k];
      }
    }
    local.gamma = std::move(gamma_new);
  }
  return local;
}

DocContribution vb_local_step(const Document& doc, const GlobalState& state,
                              const TopicCache& cache, double alpha,
                              int rounds) {
  const LocalVB local = vb_local_fit(doc, state, cache, alpha, rounds);
  const int k_count = state.num_topics();

  DocContribution out;
  out.tokens = doc.length();
  out.token_updates =
      static_cast<std::uint64_t>(doc.length()) * rounds;
  out.touched = out.token_updates * k_count;  // dense by construction
  out.entries.reserve(local.words.size() * k_count);
  for (std::size_t j = 0; j < local.words.size(); ++j) {
    const double* phi_row = local.phi.data() + j * k_count;
    for (int k = 0; k < k_count; ++k) {
      const double value = local.word_counts[j] * phi_row[k];
      if (value > 0.0) {
        out.entries.emplace_back(wk_key(local.words[j], k), value);
      }
    }
  }
  std::sort(out.entries.begin(), out.entries.end());
  return out;
}

}  // namespace slda
