// Algorithm 1 orchestration: schedule, minibatch loop, parallel per-document
// local steps, aggregation, and the global natural-gradient update. The
// global state is read-only while documents are in flight and exclusively
// written between minibatches; per-document RNG streams are derived from
// (seed, minibatch, slot) so thread count never changes the result.
#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "slda/baseline_vb.hpp"
#include "slda/corpus.hpp"
#include "slda/global_state.hpp"
#include "slda/sampler.hpp"

namespace slda {

enum class Algorithm { kSampled, kVb };

struct TrainConfig {
  int num_topics = 0;  // required
  double alpha = 0.1;
  double eta = 0.4;
  double kappa = 0.6;
  double tau0 = 100.0;
  int batch_size = 100;
  int burnin = 2;
  int samples = 3;
  std::int64_t minibatches = 0;  // required
  std::uint64_t seed = 1;
  int threads = 1;
  std::int64_t checkpoint_every = 0;  // 0 = final only
  int seeds_per_word = 5;
  double seed_mass = 1.0;
  Algorithm algo = Algorithm::kSampled;

  void validate() const;  // throws std::invalid_argument
  SamplerConfig sampler() const { return {alpha, burnin, samples}; }
};

struct MinibatchMetrics {
  std::int64_t minibatch = 0;
  double rho = 0.0;
  double seconds = 0.0;
  std::int64_t tokens = 0;  // sum of N_d over the minibatch
  std::uint64_t token_updates = 0;
  std::uint64_t touched = 0;
  double nnz_fraction = 0.0;
};

struct RunMetrics {
  static constexpr const char* kCsvHeader =
      "minibatch,rho,seconds,tokens,touched_topics,nnz_fraction";

  std::vector<MinibatchMetrics> rows;

  // Mean distinct topic-entries examined per token update over the run.
  double mean_touched_per_token() const;
  // One row per minibatch; touched_topics is the row's per-token mean.
  static void write_csv_row(std::ostream& out, const MinibatchMetrics& row);
  void write_csv(std::ostream& out) const;
};

// Empty documents carry no statistics and are replaced by a fresh draw.
bool skip_document(const Document& doc);

// Entrywise sum of per-document contributions taken in slot order.
MinibatchStats aggregate(const std::vector<DocContribution>& contributions,
                         int batch_size);

struct TrainHooks {
  std::ostream* metrics_stream = nullptr;  // CSV streamed row by row
  std::function<void(const GlobalState&, std::int64_t)> on_checkpoint;
};

std::pair<GlobalState, RunMetrics> train(const Corpus& corpus,
                                         const TrainConfig& config,
                                         const TrainHooks& hooks = {});

}  // namespace slda
