#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <unistd.h>

namespace testing {

namespace fs = std::filesystem;

fs::path fixture(const std::string& name) { return fs::path(POLBIAS_FIXTURE_DIR) / name; }

TempDir::TempDir(const std::string& tag) {
  static int counter = 0;
  path_ = fs::temp_directory_path() /
          ("polbias-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

double gaussian(polbias::RandomStream& rng) {
  double u1 = polbias::unit_uniform(rng);
  while (u1 <= 0.0) u1 = polbias::unit_uniform(rng);
  const double u2 = polbias::unit_uniform(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

polbias::gateway::EmbeddingVector unit_vector(std::vector<double> v) { return polbias::gateway::normalize(std::move(v)); }

polbias::gateway::EmbeddingVector random_unit(polbias::RandomStream& rng, std::size_t dim) {
  std::vector<double> v(dim);
  for (auto& x : v) x = gaussian(rng);
  return unit_vector(std::move(v));
}

std::vector<polbias::gateway::EmbeddingVector> random_units(polbias::RandomStream& rng, std::size_t n,
                                                            std::size_t dim) {
  std::vector<polbias::gateway::EmbeddingVector> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(random_unit(rng, dim));
  return out;
}

std::vector<OracleMatch> brute_force_nn(const std::vector<polbias::gateway::EmbeddingVector>& samples,
                                        const std::vector<polbias::gateway::EmbeddingVector>& anchors) {
  std::vector<OracleMatch> out;
  for (const auto& s : samples) {
    OracleMatch best{0, -2.0};
    for (std::size_t j = 0; j < anchors.size(); ++j) {
      double dot = 0.0, ns = 0.0, na = 0.0;
      for (std::size_t d = 0; d < s.dim(); ++d) {
        dot += s.values[d] * anchors[j].values[d];
        ns += s.values[d] * s.values[d];
        na += anchors[j].values[d] * anchors[j].values[d];
      }
      const double cos = dot / std::sqrt(ns * na);
      if (cos > best.similarity) best = {j, cos};
    }
    out.push_back(best);
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> read_tree(const fs::path& dir) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out.emplace_back(fs::relative(e.path(), dir).generic_string(), polbias::read_text_file(e.path()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

polbias::Json e2e_config(const fs::path& out_dir) {
  auto doc = polbias::read_json_file(fixture("e2e_config.json"));
  doc["output_dir"] = out_dir.string();
  return doc;
}

}  // namespace testing
