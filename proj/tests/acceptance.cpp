// One PASS/FAIL line per acceptance criterion. Exit status is nonzero if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "polbias/corpus/headline.hpp"
#include "polbias/framing/entities.hpp"
#include "polbias/framing/frames.hpp"
#include "polbias/gateway/transport.hpp"
#include "polbias/pipeline/bundle.hpp"
#include "polbias/pipeline/config.hpp"
#include "polbias/pipeline/pipeline.hpp"
#include "polbias/report/report.hpp"
#include "polbias/stance/stance.hpp"
#include "polbias/style/style.hpp"
#include "support.hpp"

using namespace polbias;
using corpus::Side;
using gateway::EmbeddingVector;
using stance::AnchorSet;
using stance::StanceLabel;

namespace {

namespace tol {
constexpr double kNnSimilarity = 1e-9;
constexpr double kIdentity = 1e-9;
constexpr double kSwap = 1e-12;
constexpr double kNullRateLow = 0.002;
constexpr double kNullRateHigh = 0.025;
constexpr double kMixtureNeutralShare = 0.95;
constexpr double kNeutralityPp = 0.05;
constexpr double kMediaBiasPp = 0.01;
constexpr double kNnSeconds = 10.0;
constexpr double kCalibrationSeconds = 120.0;
constexpr double kEndToEndSeconds = 300.0;
}  // namespace tol

struct Verdict {
  bool pass = true;
  std::string detail;
};

class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    verdict_.pass = false;
    if (failures_++ < 3) verdict_.detail += (verdict_.detail.empty() ? "" : "; ") + what;
  }
  void note(const std::string& s) {
    if (verdict_.pass) verdict_.detail += (verdict_.detail.empty() ? "" : "; ") + s;
  }
  Verdict done() {
    if (failures_ > 3) verdict_.detail += "; +" + std::to_string(failures_ - 3) + " more";
    return verdict_;
  }

 private:
  Verdict verdict_;
  int failures_ = 0;
};

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<EmbeddingVector> near(RandomStream& rng, const std::vector<EmbeddingVector>& pool, std::size_t n,
                                  double noise) {
  std::vector<EmbeddingVector> out;
  for (std::size_t i = 0; i < n; ++i) {
    auto v = pool[pick_index(rng, pool.size())].values;
    for (auto& x : v) x += noise * testing::gaussian(rng);
    out.push_back(testing::unit_vector(std::move(v)));
  }
  return out;
}

Verdict nn_oracle() {
  Checker c;
  const auto t0 = std::chrono::steady_clock::now();
  auto rng = make_stream(1, {"acceptance", "nn"});
  for (int inst = 0; inst < 100; ++inst) {
    const auto n = 1 + pick_index(rng, 200);
    const auto m = 1 + pick_index(rng, 200);
    const auto samples = testing::random_units(rng, n, 16);
    const auto anchors = testing::random_units(rng, m, 16);
    const auto oracle = testing::brute_force_nn(samples, anchors);
    const auto got = stance::nearest_neighbor_similarities(samples, AnchorSet(Side::kPro, anchors));
    for (std::size_t k = 0; k < n; ++k) {
      c.expect(got[k].index == oracle[k].index, "index mismatch in instance " + std::to_string(inst));
      c.expect(std::abs(got[k].similarity - oracle[k].similarity) <= tol::kNnSimilarity,
               "similarity off in instance " + std::to_string(inst));
    }
  }
  const double secs = seconds_since(t0);
  c.expect(secs < tol::kNnSeconds, "took " + fmt(secs, 2) + " s");
  c.note("100 instances, " + fmt(secs, 2) + " s");
  return c.done();
}

Verdict distance_identities() {
  Checker c;
  auto rng = make_stream(2, {"acceptance", "identities"});
  const auto pool = testing::random_units(rng, 50, 16);
  const double self = stance::anchor_distance(pool, AnchorSet(Side::kPro, pool));
  c.expect(std::abs(self + 1.0) <= tol::kIdentity, "self distance " + fmt(self, 12));

  std::vector<EmbeddingVector> samples, anchors;
  for (int i = 0; i < 8; ++i) {
    std::vector<double> s(16, 0.0), a(16, 0.0);
    for (int j = 0; j < 8; ++j) s[static_cast<std::size_t>(j)] = testing::gaussian(rng);
    for (int j = 8; j < 16; ++j) a[static_cast<std::size_t>(j)] = testing::gaussian(rng);
    samples.push_back(testing::unit_vector(s));
    anchors.push_back(testing::unit_vector(a));
  }
  const double ortho = stance::anchor_distance(samples, AnchorSet(Side::kPro, anchors));
  c.expect(std::abs(ortho) <= tol::kIdentity, "orthogonal distance " + fmt(ortho, 12));

  const std::vector<EmbeddingVector> worked{testing::unit_vector({1, 0}), testing::unit_vector({0, 1})};
  const double d_pro = stance::anchor_distance(worked, AnchorSet(Side::kPro, {testing::unit_vector({1, 0})}));
  c.expect(d_pro == -0.5, "worked example d_pro = " + fmt(d_pro, 17));
  c.note("self " + fmt(self, 12) + ", orthogonal " + fmt(ortho, 12) + ", worked " + fmt(d_pro, 1));
  return c.done();
}

Verdict anchor_swap() {
  Checker c;
  auto rng = make_stream(3, {"acceptance", "swap"});
  int non_neutral = 0;
  for (int inst = 0; inst < 50; ++inst) {
    const auto pro_pool = testing::random_units(rng, 30 + pick_index(rng, 30), 16);
    const auto opp_pool = testing::random_units(rng, 30 + pick_index(rng, 30), 16);
    const double share = unit_uniform(rng);
    const auto n = 40 + pick_index(rng, 60);
    const auto n_pro = static_cast<std::size_t>(share * static_cast<double>(n));
    auto samples = near(rng, pro_pool, n_pro, 0.5);
    auto rest = near(rng, opp_pool, n - n_pro, 0.5);
    samples.insert(samples.end(), rest.begin(), rest.end());
    const stance::StanceConfig cfg{2000, 0.01, stance::cell_seed(3, "swap", std::to_string(inst))};
    const AnchorSet pro(Side::kPro, pro_pool), opp(Side::kOpp, opp_pool);
    const auto r = stance::estimate_stance(samples, pro, opp, cfg);
    const auto s = stance::estimate_stance(samples, opp.relabeled(Side::kPro), pro.relabeled(Side::kOpp), cfg);
    const auto tag = " in instance " + std::to_string(inst);
    c.expect(std::abs((s.d_pro - s.d_opp) + (r.d_pro - r.d_opp)) <= tol::kSwap, "difference not negated" + tag);
    c.expect(s.norm_pct == r.norm_pct, "norm_pct changed" + tag);
    c.expect(s.p_value == r.p_value, "p_value changed" + tag);
    if (r.label == StanceLabel::kNeutral) {
      c.expect(s.label == StanceLabel::kNeutral, "neutral label changed" + tag);
    } else {
      ++non_neutral;
      c.expect(s.label == (r.label == StanceLabel::kProponent ? StanceLabel::kOpponent : StanceLabel::kProponent),
               "label not swapped" + tag);
    }
  }
  c.note("50 instances, " + std::to_string(non_neutral) + " non-neutral");
  return c.done();
}

Verdict calibration() {
  Checker c;
  const auto t0 = std::chrono::steady_clock::now();
  auto rng = make_stream(4, {"acceptance", "null"});
  int rejections = 0;
  constexpr int kTrials = 1000;
  for (int t = 0; t < kTrials; ++t) {
    stance::SimilarityProfile p;
    const std::size_t n = 60;
    for (std::size_t k = 0; k < n; ++k) {
      // Pairs share a per-sample level; both members come from one distribution.
      const double level = 0.4 + 0.1 * testing::gaussian(rng);
      p.sim_pro.push_back(level + 0.05 * testing::gaussian(rng));
      p.sim_opp.push_back(level + 0.05 * testing::gaussian(rng));
    }
    p.nn_index_pro.assign(n, 0);
    p.nn_index_opp.assign(n, 0);
    if (stance::significance_test(p, 1000, derive_seed(4, {"null-test", std::to_string(t)})) < 0.01) ++rejections;
  }
  const double rate = static_cast<double>(rejections) / kTrials;
  const double secs = seconds_since(t0);
  c.expect(rate >= tol::kNullRateLow && rate <= tol::kNullRateHigh, "rejection rate " + fmt(rate));
  c.expect(secs < tol::kCalibrationSeconds, "took " + fmt(secs, 1) + " s");
  c.note("rejection rate " + fmt(rate, 3) + " over 1000 trials, " + fmt(secs, 1) + " s");
  return c.done();
}

Verdict mixture() {
  Checker c;
  const std::vector<double> fractions{0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<double> mean_diff(fractions.size(), 0.0);
  int neutral_at_half = 0;
  constexpr int kSeeds = 20;
  for (int seed = 0; seed < kSeeds; ++seed) {
    auto rng = make_stream(5, {"acceptance", "mixture", std::to_string(seed)});
    const auto pro_pool = testing::random_units(rng, 100, 32);
    const auto opp_pool = testing::random_units(rng, 100, 32);
    const AnchorSet pro(Side::kPro, pro_pool), opp(Side::kOpp, opp_pool);
    for (std::size_t i = 0; i < fractions.size(); ++i) {
      const std::size_t n = 200;
      const auto n_pro = static_cast<std::size_t>(std::lround(fractions[i] * static_cast<double>(n)));
      auto samples = near(rng, pro_pool, n_pro, 0.3);
      auto rest = near(rng, opp_pool, n - n_pro, 0.3);
      samples.insert(samples.end(), rest.begin(), rest.end());
      const auto r = stance::estimate_stance(
          samples, pro, opp, stance::StanceConfig{2000, 0.01, derive_seed(5, {"mix", std::to_string(seed)})});
      mean_diff[i] += (r.d_pro - r.d_opp) / kSeeds;
      if (fractions[i] == 0.5 && r.label == StanceLabel::kNeutral) ++neutral_at_half;
    }
  }
  std::string means;
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    means += (i ? ", " : "") + fmt(mean_diff[i]);
    if (i > 0) c.expect(mean_diff[i] < mean_diff[i - 1], "not strictly decreasing at " + fmt(fractions[i], 2));
  }
  const double share = static_cast<double>(neutral_at_half) / kSeeds;
  c.expect(share >= tol::kMixtureNeutralShare, "neutral share at 0.5 = " + fmt(share, 2));
  c.note("mean d_pro-d_opp [" + means + "], neutral at 0.5: " + std::to_string(neutral_at_half) + "/20");
  return c.done();
}

Verdict parser() {
  Checker c;
  const auto fx = read_json_file(testing::fixture("sample_generations.json"));
  std::size_t blocks = 0;
  for (const auto& [model, block] : fx.at("samples").items()) {
    const auto headlines = block.get<std::vector<std::string>>();
    std::string raw;
    for (const auto& h : headlines) raw += "Title: " + h + "\n";
    const auto parsed = corpus::parse_headline_texts(raw, "Title:");
    c.expect(parsed.size() == 4, model + " parsed " + std::to_string(parsed.size()));
    c.expect(parsed == headlines, model + " text changed");
    ++blocks;
  }

  static const std::vector<std::string> pieces{"a", "Z", "9", " ", ".", ")", "-", "*", "\"", "'", "\xE2\x80\xA2",
                                               ":", "Gun", "Pro-gun", "1.", "\t", "(", "é", "Same-Sex", "Title"};
  auto rng = make_stream(6, {"acceptance", "parser"});
  int round_trips = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<std::string> headlines;
    const auto count = 1 + pick_index(rng, 10);
    for (std::size_t h = 0; h < count; ++h) {
      std::string raw;
      const auto len = 1 + pick_index(rng, 10);
      for (std::size_t i = 0; i < len; ++i) raw += pieces[pick_index(rng, pieces.size())];
      auto norm = corpus::normalize_headline(raw);
      if (!norm.empty() && norm.find("Title:") == std::string::npos) headlines.push_back(std::move(norm));
    }
    const std::string tag = trial % 2 ? "Title:" : "Anti-gun Title:";
    const auto parsed = corpus::parse_headline_texts(corpus::join_headlines(headlines, tag), tag);
    c.expect(parsed == headlines, "round trip failed on trial " + std::to_string(trial));
    round_trips += parsed == headlines;
  }
  c.note(std::to_string(blocks) + " blocks x 4 headlines, " + std::to_string(round_trips) + "/1000 round trips");
  return c.done();
}

Verdict frame_entity_arithmetic() {
  Checker c;
  const std::vector<FrameSet> labels{{Frame::kMorality}, {Frame::kMorality, Frame::kPolitical}, {}, {Frame::kPolitical}};
  const auto fp = framing::build_frame_profile(labels, "m", "t");
  c.expect(fp.ratio(Frame::kMorality) == 0.5 && fp.ratio(Frame::kPolitical) == 0.5 && fp.ratio(Frame::kOther) == 0.25,
           "frame ratio example");

  auto profile = [](const std::string& model, const std::map<std::string, std::size_t>& counts) {
    std::vector<std::vector<gateway::EntityMention>> hs;
    for (const auto& [name, n] : counts) {
      for (std::size_t i = 0; i < n; ++i) hs.push_back({gateway::EntityMention{name, EntityType::kOrg, 0, 0}});
    }
    return framing::build_entity_profile(hs, {}, model, "t");
  };
  const std::vector<framing::EntityProfile> ps{profile("m1", {{"X", 2}, {"UAE", 9}}), profile("m2", {{"X", 4}}),
                                               profile("m3", {{"X", 6}})};
  const auto x = framing::cross_model_normalize(ps, "X", 10);
  c.expect(x && x->mean == 4.0 && x->ratios == std::vector<double>{0.5, 1.0, 1.5}, "normalize [2,4,6]");
  const auto uae = framing::cross_model_normalize(ps, "UAE", 10);
  c.expect(uae && uae->mean == 3.0 && uae->ratios == std::vector<double>{3.0, 0.0, 0.0} && uae->unique,
           "normalize [9,0,0] with unique flag");
  c.expect(x && !x->unique, "shared entity flagged unique");

  const auto tie = framing::top_k_entities(profile("m", {{"C", 1}, {"B", 5}, {"A", 5}}), 2);
  c.expect(tie.size() == 2 && tie[0].canonical == "A" && tie[1].canonical == "B", "top-k tie-break");

  auto rng = make_stream(7, {"acceptance", "frame-mass"});
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<FrameSet> sets(1 + pick_index(rng, 50));
    std::size_t mass = 0;
    for (auto& s : sets) {
      const auto k = pick_index(rng, 6);
      for (std::size_t i = 0; i < k; ++i) s.insert(static_cast<Frame>(pick_index(rng, kFrameCount)));
      mass += s.empty() ? 1 : s.size();
    }
    const auto p = framing::build_frame_profile(sets, "m", "t");
    double total = 0.0;
    for (double r : p.ratios) total += r * static_cast<double>(sets.size());
    c.expect(std::abs(total - static_cast<double>(mass)) < 1e-9, "mass identity trial " + std::to_string(trial));
  }
  c.note("examples exact, mass identity on 1000 fuzzed label sets");
  return c.done();
}

Verdict derived_statistics() {
  Checker c;
  const auto grid_fx = read_json_file(testing::fixture("stance_grid_110.json"));
  std::vector<stance::StanceResult> grid;
  std::set<std::string> topics;
  for (const auto& cell : grid_fx.at("cells")) {
    grid.push_back(stance::stance_from_json(cell));
    topics.insert(grid.back().topic_id);
  }
  const auto s = report::build_summary(grid, topics);
  c.expect(s.policy_cells == 110, "policy cells " + std::to_string(s.policy_cells));
  c.expect(std::abs(s.neutrality_rate * 100 - 10.9) <= tol::kNeutralityPp,
           "neutrality " + fmt(s.neutrality_rate * 100, 3) + "%");

  const auto mb_fx = read_json_file(testing::fixture("media_bias_jais.json"));
  const auto per_topic = mb_fx.at("headlines_per_topic").get<std::size_t>();
  std::vector<std::optional<double>> rates;
  for (const auto& [topic, biased] : mb_fx.at("biased_counts").items()) {
    std::vector<MediaBiasLabel> labels(per_topic, MediaBiasLabel::kUnbiased);
    std::fill_n(labels.begin(), biased.get<std::size_t>(), MediaBiasLabel::kBiased);
    rates.push_back(style::media_bias_rate(std::span<const MediaBiasLabel>(labels)));
  }
  const auto summary = style::summarize_rates(rates);
  c.expect(summary.has_value(), "no media-bias summary");
  if (summary) {
    c.expect(std::abs(summary->mean * 100 - 4.11) <= tol::kMediaBiasPp, "mean " + fmt(summary->mean * 100) + "%");
    c.expect(std::abs(summary->stddev * 100 - 5.28) <= tol::kMediaBiasPp,
             "stddev " + fmt(summary->stddev * 100) + "%");
    c.note("neutrality " + std::to_string(s.neutral_cells) + "/110 = " + fmt(s.neutrality_rate * 100, 2) +
           "%, media bias " + fmt(summary->mean * 100, 2) + "% +- " + fmt(summary->stddev * 100, 2) + "%");
  }
  return c.done();
}

Verdict end_to_end() {
  Checker c;
  const auto t0 = std::chrono::steady_clock::now();
  testing::TempDir dir("acceptance-e2e");
  const auto cfg = pipeline::load_run_config(testing::e2e_config(dir / "live"));
  c.expect(cfg.models.size() == 2 && cfg.topics.size() == 3 && cfg.samples_per_topic == 60, "fixture shape");
  pipeline::Pipeline(cfg).run_all();
  pipeline::export_bundle(cfg, dir / "bundle");

  const auto before = gateway::network_operation_count();
  const auto r1 = pipeline::replay(dir / "bundle", dir / "replay1", 1);
  const auto r2 = pipeline::replay(dir / "bundle", dir / "replay2", 2);
  const auto network = gateway::network_operation_count() - before;
  c.expect(network == 0, std::to_string(network) + " network operations during replay");
  c.expect(r1.backend_calls == 0 && r2.backend_calls == 0, "backend calls during replay");

  auto json_only = [](const std::filesystem::path& report) {
    std::vector<std::pair<std::string, std::string>> out;
    for (auto& [rel, bytes] : testing::read_tree(report)) {
      if (rel.ends_with(".json")) out.emplace_back(rel, bytes);
    }
    return out;
  };
  const auto live = json_only(dir / "live" / "report");
  const auto a = json_only(r1.report_dir);
  const auto b = json_only(r2.report_dir);
  c.expect(!live.empty(), "no report JSON");
  c.expect(a == b, "replays differ");
  c.expect(a == live, "replay differs from the exported run");
  const double secs = seconds_since(t0);
  c.expect(secs < tol::kEndToEndSeconds, "took " + fmt(secs, 1) + " s");
  c.note(std::to_string(live.size()) + " report JSON files identical across live and two replays, 0 network ops, " +
         fmt(secs, 1) + " s");
  return c.done();
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"nearest-neighbour oracle equivalence", nn_oracle},
      {"distance identities", distance_identities},
      {"anchor-swap antisymmetry", anchor_swap},
      {"permutation-test calibration", calibration},
      {"mixture monotonicity", mixture},
      {"parser fixtures and round trip", parser},
      {"frame and entity arithmetic", frame_entity_arithmetic},
      {"derived-statistic reproduction", derived_statistics},
      {"end-to-end replay determinism", end_to_end},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = Verdict{false, std::string("threw: ") + e.what()};
    }
    failed += v.pass ? 0 : 1;
    std::printf("criterion %zu %s: %s (%s)\n", i + 1, v.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                v.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
