#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "polbias/common/json_io.hpp"
#include "polbias/common/random.hpp"
#include "polbias/gateway/types.hpp"

namespace testing {

std::filesystem::path fixture(const std::string& name);

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

// Standard-normal draw via Box-Muller on the raw engine.
double gaussian(polbias::RandomStream& rng);

polbias::gateway::EmbeddingVector unit_vector(std::vector<double> v);
polbias::gateway::EmbeddingVector random_unit(polbias::RandomStream& rng, std::size_t dim);
std::vector<polbias::gateway::EmbeddingVector> random_units(polbias::RandomStream& rng, std::size_t n, std::size_t dim);

// Exhaustive O(n*m) cosine nearest neighbour, lowest index on ties.
struct OracleMatch {
  std::size_t index;
  double similarity;
};
std::vector<OracleMatch> brute_force_nn(const std::vector<polbias::gateway::EmbeddingVector>& samples,
                                        const std::vector<polbias::gateway::EmbeddingVector>& anchors);

// Every file under dir (relative path -> bytes).
std::vector<std::pair<std::string, std::string>> read_tree(const std::filesystem::path& dir);

polbias::Json e2e_config(const std::filesystem::path& out_dir);

}  // namespace testing
