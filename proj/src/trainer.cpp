#include "slda/trainer.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace slda {

void TrainConfig::validate() const {
  if (num_topics < 1) throw std::invalid_argument("config: num_topics must be >= 1");
  if (!(alpha > 0.0)) throw std::invalid_argument("config: alpha must be > 0");
  if (!(eta > 0.0)) throw std::invalid_argument("config: eta must be > 0");
  if (!(kappa > 0.5 && kappa <= 1.0)) {
    throw std::invalid_argument("config: kappa must lie in (0.5, 1]");
  }
  if (!(tau0 > 0.0)) throw std::invalid_argument("config: tau0 must be > 0");
  if (batch_size < 1) throw std::invalid_argument("config: batch_size must be >= 1");
  if (burnin < 0) throw std::invalid_argument("config: burnin must be >= 0");
  if (samples < 1) throw std::invalid_argument("config: samples must be >= 1");
  if (minibatches < 1) throw std::invalid_argument("config: minibatches must be >= 1");
  if (threads < 1) throw std::invalid_argument("config: threads must be >= 1");
  if (checkpoint_every < 0) {
    throw std::invalid_argument("config: checkpoint_every must be >= 0");
  }
  if (seeds_per_word < 0 || seeds_per_word > num_topics) {
    throw std::invalid_argument("config: seeds_per_word must lie in [0, K]");
  }
  if (seed_mass < 0.0) throw std::invalid_argument("config: seed_mass must be >= 0");
}

double RunMetrics::mean_touched_per_token() const {
  std::uint64_t touched = 0, updates = 0;
  for (const auto& r : rows) {
    touched += r.touched;
    updates += r.token_updates;
  }
  return updates ? static_cast<double>(touched) / updates : 0.0;
}

void RunMetrics::write_csv_row(std::ostream& out, const MinibatchMetrics& r) {
  const double mean_touched =
      r.token_updates ? static_cast<double>(r.touched) / r.token_updates : 0.0;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%lld,%.10g,%.6g,%lld,%.10g,%.10g",
                static_cast<long long>(r.minibatch), r.rho, r.seconds,
                static_cast<long long>(r.tokens), mean_touched, r.nnz_fraction);
  out << buf << "\n";
}

void RunMetrics::write_csv(std::ostream& out) const {
  out << kCsvHeader << "\n";
  for (const auto& r : rows) write_csv_row(out, r);
}

bool skip_document(const Document& doc) { return doc.empty(); }

MinibatchStats aggregate(const std::vector<DocContribution>& contributions,
                         int batch_size) {
  MinibatchStats stats;
  stats.batch_size = batch_size;
  std::unordered_map<std::uint64_t, double> merged;
  std::int64_t tokens = 0;
  for (const auto& c : contributions) {
    tokens += c.tokens;
    for (const auto& [key, value] : c.entries) merged[key] += value;
  }
  stats.token_total = static_cast<double>(tokens);
  stats.counts.assign(merged.begin(), merged.end());
  std::sort(stats.counts.begin(), stats.counts.end());
  return stats;
}

namespace {

std::vector<const Document*> draw_minibatch(const Corpus& corpus,
                                            int batch_size, Rng& rng) {
  std::vector<const Document*> batch;
  batch.reserve(batch_size);
  const auto n = static_cast<std::uint64_t>(corpus.documents.size());
  std::int64_t failed = 0;
  const std::int64_t max_failures = static_cast<std::int64_t>(batch_size) * 100;
  while (static_cast<int>(batch.size()) < batch_size) {
    const Document& doc = corpus.documents[rng.uniform_int(n)];
    if (skip_document(doc)) {
      if (++failed >= max_failures) {
        throw std::runtime_error(
            "minibatch sampling: no non-empty documents after " +
            std::to_string(failed) + " draws");
      }
      continue;
    }
    batch.push_back(&doc);
  }
  return batch;
}

void run_slots(int slots, int threads, const std::function<void(int)>& work) {
  if (threads <= 1 || slots <= 1) {
    for (int i = 0; i < slots; ++i) work(i);
    return;
  }
  std::atomic<int> next{0};
  auto loop = [&] {
    for (int i = next.fetch_add(1); i < slots; i = next.fetch_add(1)) work(i);
  };
  std::vector<std::thread> pool;
  const int n = std::min(threads, slots);
  pool.reserve(n - 1);
  for (int i = 1; i < n; ++i) pool.emplace_back(loop);
  loop();
  for (auto& t : pool) t.join();
}

}  // namespace

std::pair<GlobalState, RunMetrics> train(const Corpus& corpus,
                                         const TrainConfig& config,
                                         const TrainHooks& hooks) {
  config.validate();
  if (corpus.documents.empty()) {
    throw std::invalid_argument("train: corpus is empty");
  }

  Rng init_rng = Rng::derive(config.seed, stream::kInit);
  GlobalState state =
      GlobalState::init(config.num_topics, corpus.vocab_size(), config.eta,
                        config.seeds_per_word, config.seed_mass, init_rng);
  const LearningSchedule schedule{config.kappa, config.tau0,
                                  static_cast<double>(corpus.num_documents())};
  const SamplerConfig sampler_config = config.sampler();
  const int vb_rounds = config.burnin + config.samples;

  RunMetrics metrics;
  metrics.rows.reserve(config.minibatches);
  if (hooks.metrics_stream) {
    *hooks.metrics_stream << RunMetrics::kCsvHeader << "\n";
  }

  std::vector<DocContribution> contributions(config.batch_size);
  for (std::int64_t t = 1; t <= config.minibatches; ++t) {
    const auto started = std::chrono::steady_clock::now();
    const double rho = schedule.rho(t);

    Rng batch_rng = Rng::derive(config.seed, stream::kMinibatch, t);
    const auto batch = draw_minibatch(corpus, config.batch_size, batch_rng);

    // Read-only phase: workers sample against the frozen state.
    const TopicCache cache = make_topic_cache(state, config.alpha);
    run_slots(config.batch_size, config.threads, [&](int slot) {
      if (config.algo == Algorithm::kSampled) {
        Rng doc_rng = Rng::derive(config.seed, stream::kDocument, t, slot);
        contributions[slot] = sample_document(*batch[slot], state, cache,
                                              sampler_config, doc_rng);
      } else {
        contributions[slot] =
            vb_local_step(*batch[slot], state, cache, config.alpha, vb_rounds);
      }
    });

    // Exclusive phase: fold the minibatch into the global state.
    const MinibatchStats stats = aggregate(contributions, config.batch_size);
    state.apply_update(stats, rho, schedule.corpus_docs);

    MinibatchMetrics row;
    row.minibatch = t;
    row.rho = rho;
    row.tokens = static_cast<std::int64_t>(stats.token_total);
    for (const auto& c : contributions) {
      row.token_updates += c.token_updates;
      row.touched += c.touched;
    }
    row.nnz_fraction = state.nonzero_fraction();
    row.seconds = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - started)
                      .count();
    metrics.rows.push_back(row);
    if (hooks.metrics_stream) {
      RunMetrics::write_csv_row(*hooks.metrics_stream, row);
    }
    if (hooks.on_checkpoint && config.checkpoint_every > 0 &&
        t % config.checkpoint_every == 0) {
      hooks.on_checkpoint(state, t);
    }
  }
  return {std::move(state), std::move(metrics)};
}

}  // namespace slda
