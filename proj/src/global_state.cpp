#include "slda/global_state.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "slda/special.hpp"

namespace slda {

double LearningSchedule::rho(std::int64_t t) const {
  const double base = tau0 + static_cast<double>(t);
  if (!(base > 0.0)) {
    throw std::domain_error("LearningSchedule::rho: tau0 + t must be positive");
  }
  return std::pow(base, -kappa);
}

GlobalState::GlobalState(int num_topics, int vocab_size, double eta)
    : num_topics_(num_topics), vocab_size_(vocab_size), eta_(eta) {
  if (num_topics < 1 || vocab_size < 1) {
    throw std::invalid_argument("GlobalState: K and V must be >= 1");
  }
  if (!(eta > 0.0)) {
    throw std::invalid_argument("GlobalState: eta must be positive");
  }
  entries_.resize(vocab_size);
  topic_totals_.assign(num_topics, 0.0);
}

GlobalState GlobalState::init(int num_topics, int vocab_size, double eta,
                              int seeds_per_word, double seed_mass, Rng& rng) {
  if (seeds_per_word > num_topics) {
    throw std::invalid_argument("init: seeds_per_word exceeds topic count");
  }
  if (seed_mass < 0.0) {
    throw std::invalid_argument("init: seed_mass must be >= 0");
  }
  GlobalState state(num_topics, vocab_size, eta);
  if (seeds_per_word == 0 || seed_mass == 0.0) return state;

  std::vector<int> topics;
  for (int w = 0; w < vocab_size; ++w) {
    topics.clear();
    // Floyd's sampling: seeds_per_word distinct topics.
    for (int j = num_topics - seeds_per_word; j < num_topics; ++j) {
      const int t = static_cast<int>(rng.uniform_int(j + 1));
      if (std::find(topics.begin(), topics.end(), t) != topics.end()) {
        topics.push_back(j);
      } else {
        topics.push_back(t);
      }
    }
    std::sort(topics.begin(), topics.end());
    auto& list = state.entries_[w];
    list.reserve(topics.size());
    for (int k : topics) {
      const double value = seed_mass * (1.0 - rng.uniform01());  // (0, seed_mass]
      list.push_back({k, value});
      state.topic_totals_[k] += value;
    }
  }
  return state;
}

double GlobalState::mass(int k, int w) const {
  const auto& list = entries_[w];
  auto it = std::lower_bound(
      list.begin(), list.end(), k,
      [](const Entry& e, int topic) { return e.topic < topic; });
  if (it == list.end() || it->topic != k) return 0.0;
  return scale_ * it->scaled;
}

double GlobalState::expected_log_beta(int k, int w) const {
  return digamma(eta_ + mass(k, w)) -
         digamma(vocab_size_ * eta_ + topic_totals_[k]);
}

void GlobalState::apply_update(const MinibatchStats& stats, double rho,
                               double corpus_docs) {
  if (!(rho > 0.0 && rho < 1.0)) {
    throw std::invalid_argument("apply_update: rho must lie in (0, 1)");
  }
  if (stats.batch_size < 1) {
    throw std::invalid_argument("apply_update: batch_size must be >= 1");
  }
  const double rescale = corpus_docs / stats.batch_size;

  scale_ *= 1.0 - rho;
  const double add = rho * rescale / scale_;

  std::vector<double> topic_new_mass(num_topics_, 0.0);
  // counts are sorted by (w, k): per-word runs, ascending topic within a run.
  std::size_t i = 0;
  while (i < stats.counts.size()) {
    const int w = wk_word(stats.counts[i].first);
    auto& list = entries_[w];
    auto it = list.begin();
    for (; i < stats.counts.size() && wk_word(stats.counts[i].first) == w; ++i) {
      const int k = wk_topic(stats.counts[i].first);
      const double value = stats.counts[i].second;
      topic_new_mass[k] += value;
      it = std::lower_bound(it, list.end(), k, [](const Entry& e, int topic) {
        return e.topic < topic;
      });
      if (it == list.end() || it->topic != k) {
        it = list.insert(it, {k, 0.0});
      }
      it->scaled += add * value;
      ++it;
    }
  }
  for (int k = 0; k < num_topics_; ++k) {
    topic_totals_[k] =
        (1.0 - rho) * topic_totals_[k] + rho * rescale * topic_new_mass[k];
  }
  ++step_;

  if (scale_ < kScaleResetThreshold) {
    reset_scale();
    prune(kPruneThreshold);
  }
}

void GlobalState::reset_scale() {
  if (scale_ == 1.0) return;
  for (auto& list : entries_) {
    for (auto& e : list) e.scaled *= scale_;
  }
  scale_ = 1.0;
}

void GlobalState::prune(double threshold) {
  if (threshold < 0.0) {
    throw std::invalid_argument("prune: threshold must be >= 0");
  }
  if (threshold == 0.0) return;
  for (auto& list : entries_) {
    auto keep = list.begin();
    for (auto& e : list) {
      const double mass = scale_ * e.scaled;
      if (mass < threshold) {
        topic_totals_[e.topic] = std::max(0.0, topic_totals_[e.topic] - mass);
      } else {
        *keep++ = e;
      }
    }
    list.erase(keep, list.end());
  }
}

std::int64_t GlobalState::nonzero_entries() const {
  std::int64_t n = 0;
  for (const auto& list : entries_) n += static_cast<std::int64_t>(list.size());
  return n;
}

double GlobalState::nonzero_fraction() const {
  return static_cast<double>(nonzero_entries()) /
         (static_cast<double>(num_topics_) * vocab_size_);
}

bool GlobalState::totals_consistent() const {
  std::vector<double> sums(num_topics_, 0.0);
  for (const auto& list : entries_) {
    for (const auto& e : list) sums[e.topic] += e.scaled;
  }
  for (int k = 0; k < num_topics_; ++k) {
    const double diff = std::abs(topic_totals_[k] - scale_ * sums[k]);
    if (diff > 1e-6 * std::max(1.0, topic_totals_[k])) return false;
  }
  return true;
}

void GlobalState::save_checkpoint(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", eta_);
  out << "sparse-lda-v1 " << num_topics_ << ' ' << vocab_size_ << ' ' << buf
      << ' ' << step_;
  std::snprintf(buf, sizeof buf, "%.17g", scale_);
  out << ' ' << buf << "\n";
  for (int w = 0; w < vocab_size_; ++w) {
    for (const auto& e : entries_[w]) {
      std::snprintf(buf, sizeof buf, "%.17g", e.scaled);
      out << w << ' ' << e.topic << ' ' << buf << "\n";
    }
  }
}

GlobalState GlobalState::load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  std::string magic;
  int num_topics = 0, vocab_size = 0;
  double eta = 0.0, pi = 0.0;
  std::int64_t step = 0;
  in >> magic >> num_topics >> vocab_size >> eta >> step >> pi;
  if (!in || magic != "sparse-lda-v1") {
    throw std::runtime_error("bad checkpoint header in " + path);
  }
  GlobalState state(num_topics, vocab_size, eta);
  state.scale_ = pi;
  state.step_ = step;
  int w, k;
  double s;
  while (in >> w >> k >> s) {
    if (w < 0 || w >= vocab_size || k < 0 || k >= num_topics) {
      throw std::runtime_error("checkpoint entry out of range in " + path);
    }
    state.entries_[w].push_back({k, s});
    state.topic_totals_[k] += pi * s;
  }
  for (auto& list : state.entries_) {
    if (!std::is_sorted(list.begin(), list.end(),
                        [](const Entry& a, const Entry& b) {
                          return a.topic < b.topic;
                        })) {
      throw std::runtime_error("checkpoint entries not sorted in " + path);
    }
  }
  return state;
}

}  // namespace slda
