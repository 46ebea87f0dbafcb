// Run manifest: everything needed to reproduce a training run byte-for-byte
// at threads=1.
#pragma once

#include <string>

#include "slda/trainer.hpp"

namespace slda {

inline constexpr const char* kVersion = "sparselda 0.1.0";

struct RunManifest {
  std::string version = kVersion;
  std::string corpus_path;
  std::string vocab_path;
  std::string format = "uci";
  double holdout_fraction = 0.0;  // 0 = train on the full corpus
  std::string checkpoint_path;
  std::string metrics_path;
  TrainConfig config;

  std::string to_json() const;
  static RunManifest from_json(const std::string& text);

  void save(const std::string& path) const;
  static RunManifest load(const std::string& path);
};

}  // namespace slda
