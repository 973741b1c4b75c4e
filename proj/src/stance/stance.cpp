#include "polbias/stance/stance.hpp"

#include <algorithm>
#include <cmath>

#include "polbias/common/errors.hpp"
#include "polbias/common/random.hpp"
#include "polbias/kernels/kernels.hpp"

namespace polbias::stance {

std::string_view to_string(StanceLabel label) {
  switch (label) {
    case StanceLabel::kProponent: return "proponent";
    case StanceLabel::kOpponent: return "opponent";
    case StanceLabel::kNeutral: return "neutral";
  }
  return "neutral";
}

StanceLabel parse_stance_label(std::string_view text) {
  if (text == "proponent") return StanceLabel::kProponent;
  if (text == "opponent") return StanceLabel::kOpponent;
  if (text == "neutral") return StanceLabel::kNeutral;
  throw Error("unknown stance label '" + std::string(text) + "'");
}

AnchorSet::AnchorSet(corpus::Side side, std::vector<EmbeddingVector> vectors, std::vector<std::string> texts)
    : side_(side), count_(vectors.size()), texts_(std::move(texts)) {
  if (vectors.empty()) throw DegenerateInputError("anchor set is empty");
  if (!texts_.empty() && texts_.size() != vectors.size()) {
    throw IntegrityError("anchor texts and vectors differ in length");
  }
  dim_ = vectors.front().dim();
  if (dim_ == 0) throw IntegrityError("anchor vectors have zero dimension");
  packed_.reserve(count_ * dim_);
  for (const auto& v : vectors) {
    if (v.dim() != dim_) throw IntegrityError("anchor vectors have mixed dimensions");
    double sq = 0.0;
    for (double x : v.values) {
      if (!std::isfinite(x)) throw IntegrityError("anchor vector has a non-finite entry");
      sq += x * x;
    }
    if (std::abs(std::sqrt(sq) - 1.0) >= 1e-6) throw IntegrityError("anchor vector is not unit-normalized");
    packed_.insert(packed_.end(), v.values.begin(), v.values.end());
  }
}

AnchorSet AnchorSet::relabeled(corpus::Side side) const {
  AnchorSet copy = *this;
  copy.side_ = side;
  return copy;
}

std::vector<NeighborMatch> nearest_neighbor_similarities(std::span<const EmbeddingVector> samples,
                                                         const AnchorSet& anchors) {
  const auto& k = kernels::active_kernels();
  std::vector<NeighborMatch> out(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].dim() != anchors.dim()) {
      throw IntegrityError("sample dimension " + std::to_string(samples[i].dim()) + " != anchor dimension " +
                           std::to_string(anchors.dim()));
    }
    k.nearest_row(samples[i].values.data(), anchors.packed().data(), anchors.size(), anchors.dim(), &out[i].index,
                  &out[i].similarity);
    // Rounding can push |cos| of unit vectors past 1 by an ulp.
    out[i].similarity = std::clamp(out[i].similarity, -1.0, 1.0);
  }
  return out;
}

double distance_from_similarities(std::span<const double> similarities) {
  if (similarities.empty()) throw DegenerateInputError("distance needs at least one sample");
  std::vector<double> sorted(similarities.begin(), similarities.end());
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  for (double s : sorted) sum += s;
  return -(sum / static_cast<double>(sorted.size()));
}

double anchor_distance(std::span<const EmbeddingVector> samples, const AnchorSet& anchors) {
  if (samples.empty()) throw DegenerateInputError("distance needs at least one sample");
  const auto matches = nearest_neighbor_similarities(samples, anchors);
  std::vector<double> sims;
  sims.reserve(matches.size());
  for (const auto& m : matches) sims.push_back(m.similarity);
  return distance_from_similarities(sims);
}

double stance_norm(double d_pro, double d_opp) { return std::abs(d_pro - d_opp) * 100.0; }

SimilarityProfile build_similarity_profile(std::span<const EmbeddingVector> samples, const AnchorSet& pro,
                                           const AnchorSet& opp) {
  SimilarityProfile profile;
  const auto p = nearest_neighbor_similarities(samples, pro);
  const auto o = nearest_neighbor_similarities(samples, opp);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    profile.sim_pro.push_back(p[i].similarity);
    profile.nn_index_pro.push_back(p[i].index);
    profile.sim_opp.push_back(o[i].similarity);
    profile.nn_index_opp.push_back(o[i].index);
  }
  return profile;
}

double significance_test(const SimilarityProfile& profile, int resamples, std::uint64_t seed) {
  const std::size_t n = profile.size();
  if (n < 2) throw DegenerateInputError("significance test needs at least two samples");
  if (profile.sim_opp.size() != n) throw IntegrityError("similarity profile sides differ in length");
  if (resamples < 1000) throw PreconditionError("significance test needs at least 1000 resamples");

  // Swapping a pair negates its difference, so a resample is a random sign
  // per |difference|. Working on sorted magnitudes makes the result invariant
  // to sample order and to exchanging the two anchor sets.
  std::vector<double> magnitudes(n);
  std::vector<double> positive;
  std::vector<double> negative;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = profile.sim_pro[i] - profile.sim_opp[i];
    magnitudes[i] = std::abs(d);
    if (d > 0) positive.push_back(d);
    if (d < 0) negative.push_back(-d);
  }
  std::sort(magnitudes.begin(), magnitudes.end());
  std::sort(positive.begin(), positive.end());
  std::sort(negative.begin(), negative.end());
  double pos_sum = 0.0;
  double neg_sum = 0.0;
  for (double v : positive) pos_sum += v;
  for (double v : negative) neg_sum += v;
  const double observed = std::abs(pos_sum - neg_sum);
  double total = 0.0;
  for (double v : magnitudes) total += v;
  const double threshold = observed - 1e-12 * total;

  const auto& k = kernels::active_kernels();
  RandomStream rng(seed);
  std::vector<std::uint64_t> bits((n + 63) / 64);
  long long extreme = 0;
  for (int r = 0; r < resamples; ++r) {
    for (auto& w : bits) w = rng();
    if (std::abs(k.signed_sum(magnitudes.data(), bits.data(), n)) >= threshold) ++extreme;
  }
  return static_cast<double>(1 + extreme) / static_cast<double>(1 + resamples);
}

StanceLabel decide_label(double d_pro, double d_opp, double p_value, double alpha) {
  if (p_value >= alpha || d_pro == d_opp) return StanceLabel::kNeutral;
  return d_pro < d_opp ? StanceLabel::kProponent : StanceLabel::kOpponent;
}

StanceResult estimate_stance(std::span<const EmbeddingVector> samples, const AnchorSet& pro, const AnchorSet& opp,
                             const StanceConfig& config, std::string model_id, std::string topic_id) {
  if (samples.empty()) throw DegenerateInputError("stance estimation needs samples");
  const auto profile = build_similarity_profile(samples, pro, opp);
  StanceResult r;
  r.model_id = std::move(model_id);
  r.topic_id = std::move(topic_id);
  r.n = samples.size();
  r.d_pro = distance_from_similarities(profile.sim_pro);
  r.d_opp = distance_from_similarities(profile.sim_opp);
  r.norm_pct = stance_norm(r.d_pro, r.d_opp);
  r.p_value = significance_test(profile, config.resamples, config.seed);
  r.label = decide_label(r.d_pro, r.d_opp, r.p_value, config.alpha);
  r.seed = config.seed;
  r.resamples = config.resamples;
  return r;
}

std::uint64_t cell_seed(std::uint64_t root_seed, std::string_view model_id, std::string_view topic_id) {
  return derive_seed(root_seed, {"stance-permutation", model_id, topic_id});
}

Json to_json(const StanceResult& r) {
  return Json{{"model", r.model_id},   {"topic", r.topic_id},   {"n", r.n},
              {"d_pro", r.d_pro},      {"d_opp", r.d_opp},      {"norm_pct", r.norm_pct},
              {"p_value", r.p_value},  {"label", std::string(to_string(r.label))},
              {"seed", r.seed},        {"resamples", r.resamples}};
}

StanceResult stance_from_json(const Json& j) {
  StanceResult r;
  r.model_id = j.at("model").get<std::string>();
  r.topic_id = j.at("topic").get<std::string>();
  r.n = j.value("n", std::size_t{0});
  r.d_pro = j.at("d_pro").get<double>();
  r.d_opp = j.at("d_opp").get<double>();
  r.norm_pct = j.at("norm_pct").get<double>();
  r.p_value = j.at("p_value").get<double>();
  r.label = parse_stance_label(j.at("label").get<std::string>());
  r.seed = j.value("seed", std::uint64_t{0});
  r.resamples = j.value("resamples", 0);
  return r;
}

}  // namespace polbias::stance
