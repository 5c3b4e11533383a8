#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "reqdsl/corpus.hpp"

namespace testing {

inline std::filesystem::path fixture_dir() { return REQDSL_FIXTURE_DIR; }
inline std::filesystem::path corpus_dir() { return fixture_dir() / "paper_corpus"; }
inline std::filesystem::path golden_dir() { return REQDSL_GOLDEN_DIR; }

inline const reqdsl::CorpusStore& paper_corpus() {
  static const auto store = reqdsl::load_corpus(corpus_dir());
  return store;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  static std::mt19937_64 rng{std::random_device{}()};
  auto dir = std::filesystem::temp_directory_path() /
             ("reqdsl-" + name + "-" + std::to_string(rng()));
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing
