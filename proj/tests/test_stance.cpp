#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "polbias/common/errors.hpp"
#include "polbias/stance/stance.hpp"
#include "support.hpp"

using namespace polbias;
using namespace polbias::stance;
using corpus::Side;
using gateway::EmbeddingVector;
using testing::unit_vector;

namespace {

// Exact two-sided sign-flip p-value by enumerating all 2^n assignments.
double exact_permutation_p(const std::vector<double>& diffs) {
  const auto n = diffs.size();
  const double observed = std::abs(std::accumulate(diffs.begin(), diffs.end(), 0.0));
  std::size_t extreme = 0;
  for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += ((mask >> i) & 1u) ? -diffs[i] : diffs[i];
    if (std::abs(s) >= observed - 1e-12) ++extreme;
  }
  return static_cast<double>(extreme) / static_cast<double>(1ull << n);
}

SimilarityProfile profile_from(std::vector<double> pro, std::vector<double> opp) {
  SimilarityProfile p;
  p.sim_pro = std::move(pro);
  p.sim_opp = std::move(opp);
  p.nn_index_pro.assign(p.sim_pro.size(), 0);
  p.nn_index_opp.assign(p.sim_opp.size(), 0);
  return p;
}

// Product of two Householder reflections: a random proper rotation.
std::vector<EmbeddingVector> rotate(const std::vector<EmbeddingVector>& vs, const std::vector<double>& u,
                                    const std::vector<double>& w) {
  auto reflect = [](std::vector<double> x, const std::vector<double>& h) {
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) d += x[i] * h[i];
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= 2.0 * d * h[i];
    return x;
  };
  std::vector<EmbeddingVector> out;
  for (const auto& v : vs) out.push_back(unit_vector(reflect(reflect(v.values, u), w)));
  return out;
}

// Samples near the given pool: each is a pool member plus small noise.
std::vector<EmbeddingVector> near(RandomStream& rng, const std::vector<EmbeddingVector>& pool, std::size_t n,
                                  double noise) {
  std::vector<EmbeddingVector> out;
  for (std::size_t i = 0; i < n; ++i) {
    auto v = pool[pick_index(rng, pool.size())].values;
    for (auto& x : v) x += noise * testing::gaussian(rng);
    out.push_back(unit_vector(std::move(v)));
  }
  return out;
}

}  // namespace

TEST_CASE("nearest neighbour examples") {
  const AnchorSet one(Side::kPro, {unit_vector({1, 0})});
  const std::vector<EmbeddingVector> s1{unit_vector({1, 0})};
  const auto m1 = nearest_neighbor_similarities(s1, one);
  CHECK(m1[0].index == 0);
  CHECK(m1[0].similarity == 1.0);

  const AnchorSet two(Side::kPro, {unit_vector({1, 0}), unit_vector({-1, 0})});
  const std::vector<EmbeddingVector> s2{unit_vector({0, 1})};
  const auto m2 = nearest_neighbor_similarities(s2, two);
  CHECK(m2[0].index == 0);
  CHECK(m2[0].similarity == 0.0);
}

TEST_CASE("nearest neighbour matches the exhaustive oracle") {
  auto rng = make_stream(11, {"nn-oracle"});
  for (std::size_t dim : {3u, 16u, 384u}) {
    const auto samples = testing::random_units(rng, 50, dim);
    const auto anchors = testing::random_units(rng, 80, dim);
    const auto oracle = testing::brute_force_nn(samples, anchors);
    const auto got = nearest_neighbor_similarities(samples, AnchorSet(Side::kOpp, anchors));
    REQUIRE(got.size() == oracle.size());
    for (std::size_t k = 0; k < got.size(); ++k) {
      CHECK(got[k].index == oracle[k].index);
      CHECK(std::abs(got[k].similarity - oracle[k].similarity) < 1e-12);
    }
  }
}

TEST_CASE("anchor distance examples") {
  auto rng = make_stream(12, {"self"});
  const auto pool = testing::random_units(rng, 20, 8);
  CHECK(anchor_distance(pool, AnchorSet(Side::kPro, pool)) == doctest::Approx(-1.0).epsilon(1e-12));

  const std::vector<EmbeddingVector> s{unit_vector({1, 0}), unit_vector({0, 1})};
  CHECK(anchor_distance(s, AnchorSet(Side::kPro, {unit_vector({1, 0})})) == -0.5);

  const std::vector<EmbeddingVector> ortho{unit_vector({0, 0, 1}), unit_vector({0, 0, -1})};
  CHECK(anchor_distance(ortho, AnchorSet(Side::kPro, {unit_vector({1, 0, 0}), unit_vector({0, 1, 0})})) == 0.0);

  CHECK_THROWS_AS(anchor_distance(std::vector<EmbeddingVector>{}, AnchorSet(Side::kPro, {unit_vector({1, 0})})),
                  DegenerateInputError);
}

TEST_CASE("anchor set invariants") {
  CHECK_THROWS_AS(AnchorSet(Side::kPro, {}), DegenerateInputError);
  CHECK_THROWS_AS(AnchorSet(Side::kPro, {unit_vector({1, 0}), unit_vector({1, 0, 0})}), IntegrityError);
  CHECK_THROWS_AS(AnchorSet(Side::kPro, {EmbeddingVector{{2.0, 0.0}, false}}), IntegrityError);
  const AnchorSet a(Side::kPro, {unit_vector({1, 0})});
  const std::vector<EmbeddingVector> bad{unit_vector({1, 0, 0})};
  CHECK_THROWS_AS(nearest_neighbor_similarities(bad, a), IntegrityError);
}

TEST_CASE("stance norm examples") {
  CHECK(stance_norm(-0.5, -0.5) == 0.0);
  CHECK(stance_norm(-0.80, -0.57) == doctest::Approx(23.0).epsilon(1e-12));
  CHECK(stance_norm(-0.6, -0.632) == doctest::Approx(3.2).epsilon(1e-12));
  CHECK(stance_norm(-0.57, -0.80) == stance_norm(-0.80, -0.57));
}

TEST_CASE("significance test edge cases") {
  const std::vector<double> same{0.1, 0.5, 0.3, 0.9, 0.2};
  CHECK(significance_test(profile_from(same, same), 1000, 1) == 1.0);

  std::vector<double> opp(100), pro(100);
  auto rng = make_stream(13, {"shift"});
  for (std::size_t k = 0; k < 100; ++k) {
    opp[k] = unit_uniform(rng) * 0.4;
    pro[k] = opp[k] + 0.5;
  }
  CHECK(significance_test(profile_from(pro, opp), 10000, 2) <= 0.001);

  CHECK_THROWS_AS(significance_test(profile_from({0.1}, {0.2}), 1000, 1), DegenerateInputError);
  CHECK_THROWS_AS(significance_test(profile_from(same, same), 999, 1), PreconditionError);
}

TEST_CASE("Monte-Carlo p-values track the exact permutation distribution") {
  auto rng = make_stream(14, {"exact"});
  for (int trial = 0; trial < 6; ++trial) {
    std::vector<double> pro(12), opp(12), diffs(12);
    for (std::size_t k = 0; k < 12; ++k) {
      opp[k] = unit_uniform(rng);
      pro[k] = opp[k] + 0.15 * testing::gaussian(rng) + 0.05 * trial;
      diffs[k] = pro[k] - opp[k];
    }
    const double exact = exact_permutation_p(diffs);
    const double mc = significance_test(profile_from(pro, opp), 40000, static_cast<std::uint64_t>(trial));
    CAPTURE(exact);
    CHECK(std::abs(mc - exact) < 0.012);
  }
}

TEST_CASE("decide_label") {
  CHECK(decide_label(-0.8, -0.6, 0.001, 0.01) == StanceLabel::kProponent);
  CHECK(decide_label(-0.6, -0.8, 0.001, 0.01) == StanceLabel::kOpponent);
  CHECK(decide_label(-0.8, -0.6, 0.01, 0.01) == StanceLabel::kNeutral);
  CHECK(decide_label(-0.8, -0.6, 0.5, 0.01) == StanceLabel::kNeutral);
}

TEST_CASE("samples from the pro pool are labelled proponent") {
  auto rng = make_stream(15, {"pools"});
  const auto pro_pool = testing::random_units(rng, 60, 32);
  const auto opp_pool = testing::random_units(rng, 60, 32);
  const auto samples = near(rng, pro_pool, 80, 0.05);
  const auto r = estimate_stance(samples, AnchorSet(Side::kPro, pro_pool), AnchorSet(Side::kOpp, opp_pool),
                                 StanceConfig{2000, 0.01, 3}, "m", "t");
  CHECK(r.label == StanceLabel::kProponent);
  CHECK(r.p_value < 0.01);
  CHECK(r.d_pro < r.d_opp);
  CHECK(r.n == 80);
  CHECK(r.norm_pct == doctest::Approx(std::abs(r.d_pro - r.d_opp) * 100).epsilon(1e-15));
}

TEST_CASE("result invariants, anchor swap, order and rotation invariance, determinism") {
  auto rng = make_stream(16, {"props"});
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t dim = 24;
    const auto pro_pool = testing::random_units(rng, 40, dim);
    const auto opp_pool = testing::random_units(rng, 40, dim);
    auto samples = near(rng, pro_pool, 30 + trial, 0.6);
    auto more = near(rng, opp_pool, 30, 0.6);
    samples.insert(samples.end(), more.begin(), more.end());
    const AnchorSet pro(Side::kPro, pro_pool), opp(Side::kOpp, opp_pool);
    const StanceConfig cfg{2000, 0.01, cell_seed(9, "m", std::to_string(trial))};
    const auto r = estimate_stance(samples, pro, opp, cfg);

    CHECK(r.p_value > 0.0);
    CHECK(r.p_value <= 1.0);
    CHECK((r.label == StanceLabel::kNeutral) == (r.p_value >= 0.01));
    if (r.label == StanceLabel::kProponent) CHECK(r.d_pro < r.d_opp);
    if (r.label == StanceLabel::kOpponent) CHECK(r.d_opp < r.d_pro);

    const auto again = estimate_stance(samples, pro, opp, cfg);
    CHECK(to_json(again).dump() == to_json(r).dump());

    const auto swapped = estimate_stance(samples, opp.relabeled(Side::kPro), pro.relabeled(Side::kOpp), cfg);
    CHECK(swapped.d_pro - swapped.d_opp == -(r.d_pro - r.d_opp));
    CHECK(swapped.norm_pct == r.norm_pct);
    CHECK(swapped.p_value == r.p_value);

    auto shuffled = samples;
    std::reverse(shuffled.begin(), shuffled.end());
    std::rotate(shuffled.begin(), shuffled.begin() + 7, shuffled.end());
    CHECK(to_json(estimate_stance(shuffled, pro, opp, cfg)).dump() == to_json(r).dump());

    const auto u = testing::random_unit(rng, dim).values;
    const auto w = testing::random_unit(rng, dim).values;
    const auto rs = estimate_stance(rotate(samples, u, w), AnchorSet(Side::kPro, rotate(pro_pool, u, w)),
                                    AnchorSet(Side::kOpp, rotate(opp_pool, u, w)), cfg);
    CHECK(std::abs(rs.norm_pct - r.norm_pct) < 1e-9);
    CHECK(rs.label == r.label);
  }
}

TEST_CASE("adding an anchor never increases d") {
  auto rng = make_stream(17, {"monotone"});
  const auto samples = testing::random_units(rng, 40, 10);
  auto pool = testing::random_units(rng, 5, 10);
  double prev = anchor_distance(samples, AnchorSet(Side::kPro, pool));
  for (int i = 0; i < 30; ++i) {
    pool.push_back(testing::random_unit(rng, 10));
    const double d = anchor_distance(samples, AnchorSet(Side::kPro, pool));
    CHECK(d <= prev);
    prev = d;
  }
}

TEST_CASE("distance is summed in sorted order") {
  std::vector<double> sims{0.3, 1e-17, -0.2, 0.7, 1e-17};
  const double d = distance_from_similarities(sims);
  std::reverse(sims.begin(), sims.end());
  CHECK(distance_from_similarities(sims) == d);
  CHECK(d == doctest::Approx(-0.16));
}

TEST_CASE("cell seeds separate cells and results round-trip") {
  CHECK(cell_seed(1, "a", "b") == cell_seed(1, "a", "b"));
  CHECK(cell_seed(1, "a", "b") != cell_seed(1, "b", "a"));
  CHECK(cell_seed(1, "a", "b") != cell_seed(2, "a", "b"));
  StanceResult r{"m", "t", 5, -0.81, -0.7, 11.0, 0.002, StanceLabel::kProponent, 77, 10000};
  const auto j = to_json(r);
  CHECK(j.at("label") == "proponent");
  const auto back = stance_from_json(j);
  CHECK(back.d_pro == r.d_pro);
  CHECK(back.label == r.label);
  CHECK(back.seed == 77);
  CHECK(parse_stance_label("opponent") == StanceLabel::kOpponent);
}
