#include "slda/manifest.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace slda {

namespace {
using nlohmann::json;

const char* algo_name(Algorithm a) {
  return a == Algorithm::kSampled ? "sampled" : "vb";
}

Algorithm algo_from(const std::string& name) {
  if (name == "sampled") return Algorithm::kSampled;
  if (name == "vb") return Algorithm::kVb;
  throw std::invalid_argument("manifest: unknown algorithm '" + name + "'");
}
}  // namespace

std::string RunManifest::to_json() const {
  json j;
  j["version"] = version;
  j["corpus"] = corpus_path;
  j["vocab"] = vocab_path;
  j["format"] = format;
  j["holdout_fraction"] = holdout_fraction;
  j["checkpoint"] = checkpoint_path;
  j["metrics"] = metrics_path;
  json c;
  c["k"] = config.num_topics;
  c["alpha"] = config.alpha;
  c["eta"] = config.eta;
  c["kappa"] = config.kappa;
  c["tau0"] = config.tau0;
  c["batch_size"] = config.batch_size;
  c["burnin"] = config.burnin;
  c["samples"] = config.samples;
  c["minibatches"] = config.minibatches;
  c["seed"] = config.seed;
  c["threads"] = config.threads;
  c["checkpoint_every"] = config.checkpoint_every;
  c["seeds_per_word"] = config.seeds_per_word;
  c["seed_mass"] = config.seed_mass;
  c["algo"] = algo_name(config.algo);
  j["config"] = c;
  return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json(const std::string& text) {
  const json j = json::parse(text);
  RunManifest m;
  m.version = j.at("version").get<std::string>();
  m.corpus_path = j.at("corpus").get<std::string>();
  m.vocab_path = j.at("vocab").get<std::string>();
  m.format = j.value("format", std::string("uci"));
  m.holdout_fraction = j.value("holdout_fraction", 0.0);
  m.checkpoint_path = j.at("checkpoint").get<std::string>();
  m.metrics_path = j.value("metrics", std::string());
  const json& c = j.at("config");
  m.config.num_topics = c.at("k").get<int>();
  m.config.alpha = c.at("alpha").get<double>();
  m.config.eta = c.at("eta").get<double>();
  m.config.kappa = c.at("kappa").get<double>();
  m.config.tau0 = c.at("tau0").get<double>();
  m.config.batch_size = c.at("batch_size").get<int>();
  m.config.burnin = c.at("burnin").get<int>();
  m.config.samples = c.at("samples").get<int>();
  m.config.minibatches = c.at("minibatches").get<std::int64_t>();
  m.config.seed = c.at("seed").get<std::uint64_t>();
  m.config.threads = c.at("threads").get<int>();
  m.config.checkpoint_every = c.at("checkpoint_every").get<std::int64_t>();
  m.config.seeds_per_word = c.at("seeds_per_word").get<int>();
  m.config.seed_mass = c.at("seed_mass").get<double>();
  m.config.algo = algo_from(c.at("algo").get<std::string>());
  return m;
}

void RunManifest::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write manifest: " + path);
  out << to_json();
}

RunManifest RunManifest::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

}  // namespace slda
