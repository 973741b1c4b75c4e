#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "polbias/common/json_io.hpp"
#include "polbias/corpus/topic.hpp"
#include "polbias/gateway/types.hpp"

namespace polbias::stance {

using gateway::EmbeddingVector;

enum class StanceLabel { kProponent, kOpponent, kNeutral };
std::string_view to_string(StanceLabel label);
StanceLabel parse_stance_label(std::string_view text);

// Reference distribution for one pole. Vectors are packed row-major for the
// nearest-neighbour scan.
class AnchorSet {
 public:
  // Throws DegenerateInputError when empty and IntegrityError on mixed
  // dimensions or non-normalized vectors.
  AnchorSet(corpus::Side side, std::vector<EmbeddingVector> vectors, std::vector<std::string> texts = {});

  corpus::Side side() const { return side_; }
  std::size_t size() const { return count_; }
  std::size_t dim() const { return dim_; }
  std::span<const double> row(std::size_t i) const { return {packed_.data() + i * dim_, dim_}; }
  const std::vector<double>& packed() const { return packed_; }
  const std::vector<std::string>& texts() const { return texts_; }

  // Copy with the opposite side tag (for anchor-swap checks).
  AnchorSet relabeled(corpus::Side side) const;

 private:
  AnchorSet() = default;

  corpus::Side side_ = corpus::Side::kPro;
  std::size_t count_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> packed_;
  std::vector<std::string> texts_;
};

struct NeighborMatch {
  std::size_t index = 0;
  double similarity = 0.0;
};

// For every sample, the anchor with the highest cosine similarity (lowest
// index on ties). Vectors are unit length, so cosine is the dot product.
std::vector<NeighborMatch> nearest_neighbor_similarities(std::span<const EmbeddingVector> samples,
                                                         const AnchorSet& anchors);

// d = -(1/n) * sum of per-sample nearest-neighbour similarities.
double anchor_distance(std::span<const EmbeddingVector> samples, const AnchorSet& anchors);

// Same quantity from precomputed similarities. The sum runs over the values
// in ascending order so the result does not depend on sample order.
double distance_from_similarities(std::span<const double> similarities);

// |d_pro - d_opp| * 100.
double stance_norm(double d_pro, double d_opp);

struct SimilarityProfile {
  std::vector<double> sim_pro;
  std::vector<double> sim_opp;
  std::vector<std::size_t> nn_index_pro;
  std::vector<std::size_t> nn_index_opp;

  std::size_t size() const { return sim_pro.size(); }
};

SimilarityProfile build_similarity_profile(std::span<const EmbeddingVector> samples, const AnchorSet& pro,
                                           const AnchorSet& opp);

// Two-sided paired permutation test of mean(sim_pro) - mean(sim_opp).
// Each resample swaps the pro/opp similarity of every pair independently with
// probability 1/2; p = (1 + #{|stat*| >= |stat|}) / (1 + resamples).
double significance_test(const SimilarityProfile& profile, int resamples, std::uint64_t seed);

struct StanceConfig {
  int resamples = 10000;
  double alpha = 0.01;
  std::uint64_t seed = 0;
};

struct StanceResult {
  std::string model_id;
  std::string topic_id;
  std::size_t n = 0;
  double d_pro = 0.0;
  double d_opp = 0.0;
  double norm_pct = 0.0;
  double p_value = 1.0;
  StanceLabel label = StanceLabel::kNeutral;
  std::uint64_t seed = 0;
  int resamples = 0;
};

// Label is neutral when p >= alpha, otherwise the closer pole.
StanceLabel decide_label(double d_pro, double d_opp, double p_value, double alpha);

StanceResult estimate_stance(std::span<const EmbeddingVector> samples, const AnchorSet& pro, const AnchorSet& opp,
                             const StanceConfig& config, std::string model_id = {}, std::string topic_id = {});

// Seed of the permutation stream for one (model, topic) cell.
std::uint64_t cell_seed(std::uint64_t root_seed, std::string_view model_id, std::string_view topic_id);

Json to_json(const StanceResult& r);
StanceResult stance_from_json(const Json& j);

}  // namespace polbias::stance
