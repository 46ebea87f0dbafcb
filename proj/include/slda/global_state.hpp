// Sparse scaled topic-word parameters. Stores s_kw = N~_kw / pi_t per word so
// that a minibatch update touches only the entries with nonzero statistics;
// the smoothing eta is factored out entirely and re-added when computing
// expectations.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slda/rng.hpp"

namespace slda {

// (word, topic) key packing used by sparse statistics.
inline std::uint64_t wk_key(int w, int k) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(w)) << 32) |
         static_cast<std::uint32_t>(k);
}
inline int wk_word(std::uint64_t key) { return static_cast<int>(key >> 32); }
inline int wk_topic(std::uint64_t key) {
  return static_cast<int>(key & 0xffffffffULL);
}

// rho_t = (tau0 + t)^(-kappa); D is the corpus size entering Eq-11-style
// rescaling of minibatch statistics.
struct LearningSchedule {
  double kappa = 0.6;
  double tau0 = 100.0;
  double corpus_docs = 0.0;

  double rho(std::int64_t t) const;
};

// Averaged sufficient statistics for one minibatch, sorted by (word, topic).
struct MinibatchStats {
  std::vector<std::pair<std::uint64_t, double>> counts;
  int batch_size = 0;
  double token_total = 0.0;
};

class GlobalState {
 public:
  struct Entry {
    int topic;
    double scaled;  // s_kw = N~_kw / pi
  };

  // pi drops below this => rescale stored values back to N~ units.
  static constexpr double kScaleResetThreshold = 1e-6;
  // N~ mass below this is dropped at each reset.
  static constexpr double kPruneThreshold = 1e-8;

  GlobalState(int num_topics, int vocab_size, double eta);

  // Sparse random seeding: each word gets `seeds_per_word` distinct topics
  // with mass uniform on (0, seed_mass]. seed_mass = 0 leaves the state
  // fully smoothed (lambda = eta everywhere).
  static GlobalState init(int num_topics, int vocab_size, double eta,
                          int seeds_per_word, double seed_mass, Rng& rng);

  int num_topics() const { return num_topics_; }
  int vocab_size() const { return vocab_size_; }
  double eta() const { return eta_; }
  double scale() const { return scale_; }
  std::int64_t step() const { return step_; }

  const std::vector<Entry>& word_entries(int w) const { return entries_[w]; }
  double topic_total(int k) const { return topic_totals_[k]; }
  const std::vector<double>& topic_totals() const { return topic_totals_; }

  // N~_kw = pi * s_kw, zero if the entry is absent.
  double mass(int k, int w) const;
  // lambda_kw = eta + N~_kw.
  double lambda(int k, int w) const { return eta_ + mass(k, w); }

  // Psi(eta + N~_kw) - Psi(V*eta + N~_k.)
  double expected_log_beta(int k, int w) const;

  // Lazy Eq-19 update, equivalent to the dense convex combination
  // lambda <- (1-rho) lambda + rho (eta + (D/|B|) N^). Touches only entries
  // with nonzero statistics; auto-resets when pi underflows the threshold.
  void apply_update(const MinibatchStats& stats, double rho, double corpus_docs);

  // Fold pi into the stored values; observationally identity.
  void reset_scale();

  // Drop entries with N~_kw < threshold, reducing topic totals accordingly.
  void prune(double threshold);

  double nonzero_fraction() const;
  std::int64_t nonzero_entries() const;

  // |topic_total - pi * sum(s)| <= 1e-6 * max(1, topic_total) per topic.
  bool totals_consistent() const;

  // Text checkpoint: "sparse-lda-v1 K V eta step pi" header then one line
  // per entry "w k scaled_value", 17 significant digits, sorted by (w, k).
  void save_checkpoint(const std::string& path) const;
  static GlobalState load_checkpoint(const std::string& path);

 private:
  int num_topics_;
  int vocab_size_;
  double eta_;
  double scale_ = 1.0;  // pi_t
  std::int64_t step_ = 0;
  std::vector<std::vector<Entry>> entries_;  // per word, sorted by topic
  std::vector<double> topic_totals_;         // N~_k., unscaled
};

}  // namespace slda
