#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "polbias/style/style.hpp"
#include "support.hpp"

using namespace polbias;
using namespace polbias::style;

namespace {

std::vector<PolarityRecord> records_for(const std::string& entity, std::initializer_list<Polarity> labels) {
  std::vector<PolarityRecord> out;
  std::size_t i = 0;
  for (auto p : labels) out.push_back(PolarityRecord{"m", "t", 0, i++, entity, entity, p});
  return out;
}

constexpr auto kPos = Polarity::kPositive;
constexpr auto kNeg = Polarity::kNegative;
constexpr auto kNeu = Polarity::kNeutral;

}  // namespace

TEST_CASE("dominant polarity needs a strict majority") {
  auto agg = aggregate_entity_polarity(records_for("Same Sex Marriage Ban", {kPos, kPos, kNeg}));
  CHECK(agg.at("Same Sex Marriage Ban").dominant == kPos);
  agg = aggregate_entity_polarity(records_for("X", {kPos, kNeg}));
  CHECK(agg.at("X").dominant == kNeu);
  CHECK(dominant_polarity(2, 1, 1) == kNeu);  // plurality only
  CHECK(dominant_polarity(0, 3, 2) == kNeg);
  CHECK(dominant_polarity(0, 0, 0) == kNeu);
}

TEST_CASE("per-entity counts sum to the record count") {
  auto rng = make_stream(31, {"style-sum"});
  std::vector<PolarityRecord> rs;
  std::map<std::string, std::size_t> expected;
  for (int i = 0; i < 500; ++i) {
    const std::string e = "E" + std::to_string(pick_index(rng, 7));
    rs.push_back(PolarityRecord{"m", "t", 0, 0, e, e, static_cast<Polarity>(pick_index(rng, 3))});
    ++expected[e];
  }
  for (const auto& [e, d] : aggregate_entity_polarity(rs)) CHECK(d.total() == expected.at(e));
}

TEST_CASE("lexical polarity rate") {
  CHECK(lexical_polarity_rate(records_for("x", {kNeu, kNeu, kPos, kNeg})) == 0.5);
  CHECK(lexical_polarity_rate(records_for("x", {kNeu, kNeu})) == 0.0);
  CHECK(lexical_polarity_rate(records_for("x", {kPos, kNeg, kNeg})) == 1.0);
  CHECK_FALSE(lexical_polarity_rate(std::span<const PolarityRecord>{}));
}

TEST_CASE("lexical rate ignores order and positive/negative relabeling") {
  auto rng = make_stream(32, {"style-props"});
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<PolarityRecord> rs;
    const auto n = 1 + pick_index(rng, 40);
    for (std::size_t i = 0; i < n; ++i) {
      rs.push_back(PolarityRecord{"m", "t", 0, i, "e", "e", static_cast<Polarity>(pick_index(rng, 3))});
    }
    const auto rate = lexical_polarity_rate(rs);
    auto flipped = rs;
    for (auto& r : flipped) {
      if (r.polarity == kPos) r.polarity = kNeg;
      else if (r.polarity == kNeg) r.polarity = kPos;
    }
    std::reverse(flipped.begin(), flipped.end());
    CHECK(lexical_polarity_rate(flipped) == rate);
  }
}

TEST_CASE("media bias rate") {
  std::vector<MediaBiasLabel> labels(160, MediaBiasLabel::kUnbiased);
  for (int i = 0; i < 3; ++i) labels[static_cast<std::size_t>(i * 50)] = MediaBiasLabel::kBiased;
  CHECK(*media_bias_rate(std::span<const MediaBiasLabel>(labels)) == doctest::Approx(0.01875).epsilon(1e-15));

  const std::vector<MediaBiasLabel> none(20, MediaBiasLabel::kUnbiased);
  CHECK(media_bias_rate(std::span<const MediaBiasLabel>(none)) == 0.0);

  const std::vector<std::optional<MediaBiasLabel>> partial{MediaBiasLabel::kBiased, std::nullopt,
                                                           MediaBiasLabel::kUnbiased, std::nullopt};
  CHECK(media_bias_rate(std::span<const std::optional<MediaBiasLabel>>(partial)) == 0.5);
  const std::vector<std::optional<MediaBiasLabel>> failed(3);
  CHECK_FALSE(media_bias_rate(std::span<const std::optional<MediaBiasLabel>>(failed)));
}

TEST_CASE("per-topic media bias rates of the reference model summarize to 4.11% / 5.28%") {
  const auto fx = read_json_file(testing::fixture("media_bias_jais.json"));
  const double per_topic = fx.at("headlines_per_topic").get<double>();
  std::vector<std::optional<double>> rates;
  for (const auto& [topic, biased] : fx.at("biased_counts").items()) {
    std::vector<MediaBiasLabel> labels(static_cast<std::size_t>(per_topic), MediaBiasLabel::kUnbiased);
    std::fill_n(labels.begin(), biased.get<std::size_t>(), MediaBiasLabel::kBiased);
    rates.push_back(media_bias_rate(std::span<const MediaBiasLabel>(labels)));
  }
  rates.push_back(std::nullopt);  // an absent topic does not count
  const auto s = summarize_rates(rates);
  REQUIRE(s);
  CHECK(s->n == 14);

  // Two-pass population moments as the oracle.
  double mean = 0.0;
  for (const auto& r : rates) mean += r.value_or(0.0);
  mean /= 14.0;
  double var = 0.0;
  for (const auto& r : rates) {
    if (r) var += (*r - mean) * (*r - mean);
  }
  const double sd = std::sqrt(var / 14.0);
  CHECK(s->mean == doctest::Approx(mean).epsilon(1e-12));
  CHECK(s->stddev == doctest::Approx(sd).epsilon(1e-12));
  CHECK(std::abs(s->mean * 100 - 4.11) <= 0.01);
  CHECK(std::abs(s->stddev * 100 - 5.28) <= 0.01);

  const auto mn = *std::min_element(rates.begin(), rates.end() - 1);
  const auto mx = *std::max_element(rates.begin(), rates.end() - 1);
  CHECK(*mn == doctest::Approx(0.005));
  CHECK(*mx == doctest::Approx(0.188));

  CHECK_FALSE(summarize_rates(std::vector<std::optional<double>>{std::nullopt}));
}

TEST_CASE("style profile fields and JSON") {
  const auto rs = records_for("NRA", {kNeg, kNeg, kNeu, kPos});
  const std::vector<std::optional<MediaBiasLabel>> bias{MediaBiasLabel::kBiased, std::nullopt,
                                                        MediaBiasLabel::kUnbiased, MediaBiasLabel::kUnbiased};
  const auto p = build_style_profile("m", "t", rs, bias);
  CHECK(p.lexical_polarity.rate == 0.75);
  CHECK(p.lexical_polarity.count == 3);
  CHECK(p.lexical_polarity.denominator == 4);
  CHECK(*p.media_bias.rate == doctest::Approx(1.0 / 3.0));
  CHECK(p.media_bias.denominator == 3);
  CHECK(p.media_bias_excluded == 1);
  CHECK(p.entities.at("NRA").dominant == kNeu);

  const auto j = to_json(p);
  CHECK(j.at("lexical_polarity_basis") == "per-record");
  const auto back = style_profile_from_json(j);
  CHECK(to_json(back) == j);
  CHECK(polarity_record_from_json(to_json(rs[0])).polarity == kNeg);

  const auto empty = build_style_profile("m", "t", {}, {});
  CHECK_FALSE(empty.lexical_polarity.rate);
  CHECK_FALSE(empty.media_bias.rate);
  CHECK(to_json(empty).at("lexical_polarity").at("rate").is_null());
}
