// Command-line front end: train, eval, topics, coherence, defaults.
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <unordered_set>
#include <vector>

#include <CLI11.hpp>

#include "slda/baseline_vb.hpp"
#include "slda/corpus.hpp"
#include "slda/eval.hpp"
#include "slda/manifest.hpp"
#include "slda/trainer.hpp"

namespace {

using namespace slda;

struct CliError : std::runtime_error {
  int code;
  CliError(int code, const std::string& what)
      : std::runtime_error(what), code(code) {}
};

void require_file(const std::string& path, const char* what) {
  if (path.empty()) throw CliError(2, std::string("missing ") + what + " path");
  if (!std::filesystem::exists(path)) {
    throw CliError(2, std::string("cannot open ") + what + ": " + path);
  }
}

Corpus load_corpus(const std::string& docword, const std::string& vocab,
                   const std::string& format) {
  if (format != "uci") {
    throw CliError(2, "unsupported corpus format: " + format);
  }
  require_file(docword, "corpus file");
  require_file(vocab, "vocab file");
  return load_uci(docword, vocab);
}

struct TrainArgs {
  RunManifest manifest;
  std::string from_manifest;
  std::string manifest_out;
};

int run_train(TrainArgs& args) {
  RunManifest& m = args.manifest;
  if (!args.from_manifest.empty()) {
    require_file(args.from_manifest, "manifest");
    m = RunManifest::load(args.from_manifest);
  }
  Corpus corpus = load_corpus(m.corpus_path, m.vocab_path, m.format);
  Corpus holdout;
  if (m.holdout_fraction > 0.0) {
    Rng split_rng = Rng::derive(m.config.seed, stream::kSplit);
    auto parts = split_holdout(corpus, m.holdout_fraction, split_rng);
    corpus = std::move(parts.first);
    holdout = std::move(parts.second);
  }
  m.config.validate();
  if (m.checkpoint_path.empty()) {
    throw CliError(2, "missing --checkpoint output path");
  }

  std::ofstream metrics_file;
  TrainHooks hooks;
  if (!m.metrics_path.empty()) {
    metrics_file.open(m.metrics_path);
    if (!metrics_file) {
      throw CliError(2, "cannot write metrics file: " + m.metrics_path);
    }
    hooks.metrics_stream = &metrics_file;
  }
  hooks.on_checkpoint = [&](const GlobalState& state, std::int64_t t) {
    state.save_checkpoint(m.checkpoint_path + ".t" + std::to_string(t));
  };

  auto [state, metrics] = train(corpus, m.config, hooks);
  state.save_checkpoint(m.checkpoint_path);
  const std::string manifest_path =
      args.manifest_out.empty() ? m.checkpoint_path + ".manifest.json"
                                : args.manifest_out;
  m.save(manifest_path);

  std::cout << "trained " << m.config.minibatches << " minibatches on "
            << corpus.num_documents() << " documents (K=" << m.config.num_topics
            << ", V=" << corpus.vocab_size() << ")\n"
            << "nonzero fraction " << state.nonzero_fraction()
            << ", mean touched topics/token " << metrics.mean_touched_per_token()
            << "\n"
            << "checkpoint: " << m.checkpoint_path << "\n"
            << "manifest:   " << manifest_path << "\n";
  return 0;
}

struct EvalArgs {
  std::string checkpoint, corpus, vocab, format = "uci", report_out;
  double holdout_fraction = 0.0;
  double alpha_eval = 0.1;
  double eta_eval = 0.0;  // 0 = use the trained eta
  int particles = 10;
  std::uint64_t seed = 1;
};

int run_eval(EvalArgs& args) {
  require_file(args.checkpoint, "checkpoint");
  const GlobalState state = GlobalState::load_checkpoint(args.checkpoint);
  Corpus corpus = load_corpus(args.corpus, args.vocab, args.format);
  if (corpus.vocab_size() != state.vocab_size()) {
    throw CliError(2, "vocabulary mismatch: checkpoint has V=" +
                          std::to_string(state.vocab_size()) + ", corpus has V=" +
                          std::to_string(corpus.vocab_size()));
  }
  if (args.holdout_fraction > 0.0) {
    Rng split_rng = Rng::derive(args.seed, stream::kSplit);
    corpus = split_holdout(corpus, args.holdout_fraction, split_rng).second;
  }

  EvalConfig config;
  config.alpha_eval = args.alpha_eval;
  config.particles = args.particles;
  const PointEstimate estimate = args.eta_eval > 0.0
                                     ? point_estimate(state, args.eta_eval)
                                     : point_estimate(state);

  std::vector<HeldOutRecord> records;
  double total = 0.0;
  int scored = 0;
  for (const auto& doc : corpus.documents) {
    if (doc.empty()) continue;
    Rng rng = Rng::derive(args.seed, stream::kEval, doc.id);
    const double score = left_to_right(doc, estimate, config, rng);
    records.push_back({doc.id, doc.length(), score});
    total += score;
    ++scored;
  }
  if (!args.report_out.empty()) {
    std::ofstream out(args.report_out);
    if (!out) throw CliError(2, "cannot write report: " + args.report_out);
    write_holdout_report(out, records);
  }
  std::cout << "documents scored: " << scored << "\n"
            << "mean held-out log prob/token: "
            << (scored ? total / scored : 0.0) << "\n";
  return 0;
}

struct TopicsArgs {
  std::string checkpoint, vocab, corpus, format = "uci", report_out;
  int top = 20;
  double epsilon = 0.01;
  bool csv = false;
};

int run_topics(TopicsArgs& args, bool as_csv) {
  require_file(args.checkpoint, "checkpoint");
  require_file(args.vocab, "vocab file");
  const GlobalState state = GlobalState::load_checkpoint(args.checkpoint);

  std::ifstream vf(args.vocab);
  std::vector<std::string> words;
  std::string line;
  while (std::getline(vf, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    words.push_back(line);
  }
  const Vocabulary vocab(std::move(words));
  if (vocab.size() != state.vocab_size()) {
    throw CliError(2, "vocabulary mismatch: checkpoint has V=" +
                          std::to_string(state.vocab_size()) + ", vocab file has " +
                          std::to_string(vocab.size()) + " words");
  }

  EvalConfig config;
  config.top_w = args.top;
  config.epsilon = args.epsilon;
  const PointEstimate estimate = point_estimate(state);

  const bool with_corpus = !args.corpus.empty();
  if (as_csv && !with_corpus) {
    throw CliError(2, "coherence requires --corpus for document frequencies");
  }

  DocFrequencies freqs;
  if (with_corpus) {
    const Corpus corpus = load_corpus(args.corpus, args.vocab, args.format);
    std::unordered_set<int> word_set;
    for (int k = 0; k < state.num_topics(); ++k) {
      for (int w : top_words(estimate, k, config.top_w)) word_set.insert(w);
    }
    freqs = doc_frequencies(corpus, word_set);
  }

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!args.report_out.empty()) {
    file.open(args.report_out);
    if (!file) throw CliError(2, "cannot write report: " + args.report_out);
    out = &file;
  }

  if (as_csv) {
    write_topic_report(*out, estimate, freqs, vocab, config);
    return 0;
  }
  for (int k = 0; k < state.num_topics(); ++k) {
    *out << k;
    if (with_corpus) {
      *out << "\tcoherence=" << coherence(k, estimate, freqs, config);
    }
    *out << '\t';
    const auto top = top_words(estimate, k, config.top_w);
    for (std::size_t i = 0; i < top.size(); ++i) {
      if (i) *out << ' ';
      *out << vocab.word(top[i]);
    }
    *out << "\n";
  }
  return 0;
}

int run_defaults() {
  const TrainConfig t;
  const EvalConfig e;
  std::cout << "alpha=" << t.alpha << "\n"
            << "eta=" << t.eta << "\n"
            << "kappa=" << t.kappa << "\n"
            << "tau0=" << t.tau0 << "\n"
            << "batch_size=" << t.batch_size << "\n"
            << "burnin=" << t.burnin << "\n"
            << "samples=" << t.samples << "\n"
            << "seed=" << t.seed << "\n"
            << "threads=" << t.threads << "\n"
            << "checkpoint_every=" << t.checkpoint_every << "\n"
            << "seeds_per_word=" << t.seeds_per_word << "\n"
            << "seed_mass=" << t.seed_mass << "\n"
            << "algo=" << (t.algo == Algorithm::kSampled ? "sampled" : "vb") << "\n"
            << "alpha_eval=" << e.alpha_eval << "\n"
            << "particles=" << e.particles << "\n"
            << "top=" << e.top_w << "\n"
            << "epsilon=" << e.epsilon << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse hybrid stochastic-variational/Gibbs topic modeling"};
  app.require_subcommand(1);

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "Train a topic model");
  {
    RunManifest& m = train_args.manifest;
    train_cmd->add_option("--corpus", m.corpus_path, "UCI docword file");
    train_cmd->add_option("--vocab", m.vocab_path, "vocabulary file");
    train_cmd->add_option("--format", m.format, "corpus format (uci)");
    train_cmd->add_option("--k", m.config.num_topics, "number of topics");
    train_cmd->add_option("--alpha", m.config.alpha, "document-topic hyperparameter");
    train_cmd->add_option("--eta", m.config.eta, "topic-word smoothing");
    train_cmd->add_option("--kappa", m.config.kappa, "learning-rate exponent");
    train_cmd->add_option("--tau0", m.config.tau0, "learning-rate offset");
    train_cmd->add_option("--batch-size", m.config.batch_size, "documents per minibatch");
    train_cmd->add_option("--burnin", m.config.burnin, "burn-in sweeps per document");
    train_cmd->add_option("--samples", m.config.samples, "saved sweeps per document");
    train_cmd->add_option("--minibatches", m.config.minibatches, "minibatches to run");
    train_cmd->add_option("--seed", m.config.seed, "RNG seed");
    train_cmd->add_option("--threads", m.config.threads, "worker threads");
    train_cmd->add_option("--checkpoint", m.checkpoint_path, "checkpoint output path");
    train_cmd->add_option("--checkpoint-every", m.config.checkpoint_every,
                          "also checkpoint every N minibatches");
    train_cmd->add_option("--metrics-out", m.metrics_path, "metrics CSV path");
    train_cmd->add_option("--seeds-per-word", m.config.seeds_per_word,
                          "topics seeded per word at init");
    train_cmd->add_option("--seed-mass", m.config.seed_mass, "maximum seed mass");
    train_cmd->add_option("--holdout-fraction", m.holdout_fraction,
                          "hold out this fraction before training");
    std::map<std::string, Algorithm> algos{{"sampled", Algorithm::kSampled},
                                           {"vb", Algorithm::kVb}};
    train_cmd->add_option("--algo", m.config.algo, "local step: sampled or vb")
        ->transform(CLI::CheckedTransformer(algos, CLI::ignore_case));
    train_cmd->add_option("--from-manifest", train_args.from_manifest,
                          "re-run a recorded manifest (other flags ignored)");
    train_cmd->add_option("--manifest-out", train_args.manifest_out,
                          "manifest output path");
  }

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "Held-out left-to-right scoring");
  eval_cmd->add_option("--checkpoint", eval_args.checkpoint, "trained checkpoint");
  eval_cmd->add_option("--corpus", eval_args.corpus, "UCI docword file");
  eval_cmd->add_option("--vocab", eval_args.vocab, "vocabulary file");
  eval_cmd->add_option("--format", eval_args.format, "corpus format (uci)");
  eval_cmd->add_option("--holdout-fraction", eval_args.holdout_fraction,
                       "score only the held-out split of --corpus");
  eval_cmd->add_option("--alpha-eval", eval_args.alpha_eval,
                       "document-topic hyperparameter for scoring");
  eval_cmd->add_option("--eta-eval", eval_args.eta_eval,
                       "override smoothing in the point estimate");
  eval_cmd->add_option("--particles", eval_args.particles,
                       "independent left-to-right passes");
  eval_cmd->add_option("--seed", eval_args.seed, "RNG seed");
  eval_cmd->add_option("--report-out", eval_args.report_out,
                       "per-document CSV output path");

  TopicsArgs topics_args;
  auto* topics_cmd = app.add_subcommand("topics", "Print top words per topic");
  TopicsArgs coherence_args;
  auto* coherence_cmd =
      app.add_subcommand("coherence", "Per-topic coherence/entropy CSV");
  for (auto [cmd, args] : {std::pair{topics_cmd, &topics_args},
                           std::pair{coherence_cmd, &coherence_args}}) {
    cmd->add_option("--checkpoint", args->checkpoint, "trained checkpoint");
    cmd->add_option("--vocab", args->vocab, "vocabulary file");
    cmd->add_option("--corpus", args->corpus,
                    "corpus for document frequencies");
    cmd->add_option("--format", args->format, "corpus format (uci)");
    cmd->add_option("--top", args->top, "words per topic");
    cmd->add_option("--epsilon", args->epsilon, "coherence epsilon");
    cmd->add_option("--report-out", args->report_out, "output path");
  }

  auto* defaults_cmd =
      app.add_subcommand("defaults", "Print default configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (train_cmd->parsed()) return run_train(train_args);
    if (eval_cmd->parsed()) return run_eval(eval_args);
    if (topics_cmd->parsed()) return run_topics(topics_args, false);
    if (coherence_cmd->parsed()) return run_topics(coherence_args, true);
    if (defaults_cmd->parsed()) return run_defaults();
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
