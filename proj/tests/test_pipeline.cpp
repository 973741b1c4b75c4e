#include <algorithm>
#include <fstream>

#include "doctest.h"
#include "polbias/common/errors.hpp"
#include "polbias/gateway/transport.hpp"
#include "polbias/pipeline/bundle.hpp"
#include "polbias/pipeline/config.hpp"
#include "polbias/pipeline/manifest.hpp"
#include "polbias/pipeline/pipeline.hpp"
#include "support.hpp"

using namespace polbias;
using namespace polbias::pipeline;

namespace {

bool any_starts_with(const std::vector<std::string>& xs, std::string_view prefix) {
  return std::any_of(xs.begin(), xs.end(), [&](const std::string& x) { return x.starts_with(prefix); });
}

bool mentions(const std::vector<Diagnostic>& ds, std::string_view needle) {
  return std::any_of(ds.begin(), ds.end(), [&](const Diagnostic& d) {
    return d.level == Diagnostic::Level::kError && format_diagnostic(d).find(needle) != std::string::npos;
  });
}

std::vector<std::pair<std::string, std::string>> data_tree(const std::filesystem::path& out) {
  std::vector<std::pair<std::string, std::string>> kept;
  for (auto& [rel, bytes] : testing::read_tree(out)) {
    if (rel.starts_with("cache/") || rel.starts_with("bundle/") || rel == "manifest.json") continue;
    kept.emplace_back(rel, bytes);
  }
  return kept;
}

}  // namespace

TEST_CASE("config defaults") {
  auto doc = testing::e2e_config("unused");
  doc.erase("samples_per_topic");
  doc.erase("resamples");
  doc.erase("k");
  doc.erase("seed");
  const auto cfg = load_run_config(doc);
  CHECK(cfg.samples_per_topic == 1000);
  CHECK(cfg.headlines_per_request == 10);
  CHECK(cfg.anchor_samples == 1000);
  CHECK(cfg.resamples == 10000);
  CHECK(cfg.alpha == 0.01);
  CHECK(cfg.k == 10);
  CHECK(cfg.seed == 0);
  CHECK(cfg.mode == gateway::Mode::kLive);
  CHECK(cfg.cache_dir == cfg.output_dir / "cache");
  CHECK(cfg.anchor_model_for("mock-lefty") == "mock-lefty");

  auto no_topics = testing::e2e_config("unused");
  no_topics.erase("topics");
  CHECK(load_run_config(no_topics).topics.size() == 14);
}

TEST_CASE("config validation errors and overrides") {
  auto doc = testing::e2e_config("unused");
  doc["samples_per_topic"] = 5;
  CHECK_THROWS_AS(load_run_config(doc), ConfigError);
  doc = testing::e2e_config("unused");
  CHECK_THROWS_AS(load_run_config(doc, Overrides{gateway::Mode::kReplay}), ConfigError);

  Overrides o;
  o.models = {"mock-righty"};
  o.topics = {"gun_control"};
  o.seed = 5;
  const auto cfg = load_run_config(doc, o);
  REQUIRE(cfg.models.size() == 1);
  CHECK(cfg.models[0].id == "mock-righty");
  CHECK(cfg.topics.size() == 1);
  CHECK(cfg.seed == 5);
  o.models = {"nope"};
  CHECK_THROWS_AS(load_run_config(doc, o), ConfigError);

  // Paths and worker count do not change the analysis hash; the seed does.
  auto moved = testing::e2e_config("elsewhere");
  moved["workers"] = 4;
  CHECK(config_hash(load_run_config(moved)) == config_hash(load_run_config(testing::e2e_config("unused"))));
  moved["seed"] = 1;
  CHECK(config_hash(load_run_config(moved)) != config_hash(load_run_config(testing::e2e_config("unused"))));
}

TEST_CASE("validate reports missing anchors, missing roles and unreachable endpoints") {
  auto doc = testing::e2e_config("unused");
  CHECK_FALSE(has_errors(validate(doc, {}, true)));

  doc["topics"][0].erase("anchors");
  const auto ds = validate(doc, {}, false);
  CHECK(has_errors(ds));
  CHECK(mentions(ds, "same_sex_marriage"));

  doc = testing::e2e_config("unused");
  doc.erase("ner");
  CHECK(mentions(validate(doc, {}, false), "ner"));

  doc = testing::e2e_config("unused");
  doc["models"][1] = Json{{"id", "remote-model"},
                          {"backend", "http"},
                          {"base_url", "http://127.0.0.1:1"},
                          {"model_name", "remote"},
                          {"timeout", 0.5}};
  CHECK(mentions(validate(doc, {}, true), "remote-model"));
  CHECK_FALSE(has_errors(validate(doc, {}, false)));

  doc["models"][1]["auth_token_env"] = "POLBIAS_SURELY_UNSET_TOKEN";
  CHECK(mentions(validate(doc, {}, false), "POLBIAS_SURELY_UNSET_TOKEN"));
}

TEST_CASE("end-to-end: interrupt, resume, idempotence, export, tamper, replay") {
  testing::TempDir dir("e2e");
  const auto out = dir / "live";
  const auto cfg = load_run_config(testing::e2e_config(out));

  {
    Pipeline p(cfg);
    const auto first = p.run_all(Stage::kEmbed);
    CHECK(any_starts_with(first.executed, "embed:"));
    CHECK_FALSE(any_starts_with(first.executed, "stance:"));
    CHECK(p.stage_complete(Stage::kEmbed));
    CHECK_FALSE(p.stage_complete(Stage::kStance));
    CHECK(first.backend_calls > 0);
  }

  // Export before the classifier stages ran names what is missing.
  try {
    export_bundle(cfg, dir / "early-bundle");
    FAIL("expected PreconditionError");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("frames") != std::string::npos);
  }

  {
    Pipeline p(cfg);
    const auto resumed = p.run_all();
    CHECK_FALSE(any_starts_with(resumed.executed, "generate:"));
    CHECK_FALSE(any_starts_with(resumed.executed, "parse:"));
    CHECK_FALSE(any_starts_with(resumed.executed, "embed:"));
    CHECK(any_starts_with(resumed.executed, "stance:"));
    CHECK(any_starts_with(resumed.executed, "frames:"));
    CHECK(any_starts_with(resumed.executed, "style:"));
    CHECK(any_starts_with(resumed.executed, "report:"));
    CHECK(std::filesystem::exists(resumed.report_dir / "heatmap.json"));
    // Embed and stance cover policy topics only; the event still gets frames.
    CHECK(p.units(Stage::kStance).size() == 4);
    CHECK(p.units(Stage::kFrames).size() == 6);
  }

  const auto live_tree = data_tree(out);
  {
    Pipeline p(cfg);
    const auto again = p.run_all();
    CHECK(again.executed.empty());
    CHECK(again.backend_calls == 0);
  }
  CHECK(data_tree(out) == live_tree);

  const auto bundle = dir / "bundle";
  const auto info = export_bundle(cfg, bundle);
  CHECK(info.config_hash == config_hash(cfg));
  CHECK(bundle_problems(bundle).empty());

  Json replay_doc = testing::e2e_config(dir / "unused");
  replay_doc["mode"] = "replay";
  replay_doc["bundle"] = bundle.string();
  CHECK(validate(replay_doc, {}, true).empty());

  const auto before = gateway::network_operation_count();
  const auto r1 = replay(bundle, dir / "replay1", 1);
  const auto r2 = replay(bundle, dir / "replay2", 3);
  CHECK(gateway::network_operation_count() == before);
  CHECK(r1.backend_calls == 0);
  CHECK(data_tree(dir / "replay1") == live_tree);
  CHECK(data_tree(dir / "replay2") == live_tree);

  // Tamper with one envelope.
  const auto files = read_bundle_info(bundle).files;
  REQUIRE_FALSE(files.empty());
  const auto victim = bundle / files.begin()->first;
  {
    std::ofstream f(victim, std::ios::app);
    f << ' ';
  }
  CHECK_FALSE(bundle_problems(bundle).empty());
  CHECK(has_errors(validate(replay_doc, {}, false)));
  CHECK_THROWS_AS(verify_bundle(bundle), IntegrityError);
  try {
    replay(bundle, dir / "replay3", 1);
    FAIL("expected IntegrityError");
  } catch (const Error& e) {
    CHECK(e.exit_code() == ExitCode::kIntegrity);
  }
}

TEST_CASE("worker count does not change any data artifact") {
  testing::TempDir dir("workers");
  auto serial_doc = testing::e2e_config(dir / "serial");
  auto parallel_doc = testing::e2e_config(dir / "parallel");
  parallel_doc["workers"] = 4;
  Pipeline(load_run_config(serial_doc)).run_all();
  Pipeline(load_run_config(parallel_doc)).run_all();
  CHECK(data_tree(dir / "serial") == data_tree(dir / "parallel"));
}

TEST_CASE("a missing artifact reruns only its own unit") {
  testing::TempDir dir("inputs");
  const auto cfg = load_run_config(testing::e2e_config(dir / "out"));
  Pipeline(cfg).run_all();
  const auto rel = stance_path("mock-lefty", "gun_control");
  const auto original = read_text_file(cfg.output_dir / rel);
  std::filesystem::remove(cfg.output_dir / rel);
  Pipeline p(cfg);
  const auto rerun = p.run_all();
  CHECK(rerun.executed == std::vector<std::string>{"stance:mock-lefty/gun_control"});
  CHECK(rerun.backend_calls == 0);
  // Identical bytes come back, so the report's inputs still match.
  CHECK(read_text_file(cfg.output_dir / rel) == original);
}

TEST_CASE("a failing stage names itself and keeps earlier progress") {
  testing::TempDir dir("fail");
  auto doc = testing::e2e_config(dir / "out");
  doc["models"][1] = Json{{"id", "remote-model"},
                          {"backend", "http"},
                          {"base_url", "http://127.0.0.1:1"},
                          {"model_name", "remote"},
                          {"timeout", 0.5},
                          {"max_retries", 0}};
  const auto cfg = load_run_config(doc);
  Pipeline p(cfg);
  p.set_retry_sleeper([](std::chrono::milliseconds) {});
  try {
    p.run_all();
    FAIL("expected StageError");
  } catch (const StageError& e) {
    CHECK(e.stage() == "generate");
    CHECK(e.exit_code() == ExitCode::kStageFailure);
  }
  RunManifest manifest(cfg.output_dir, config_hash(cfg));
  CHECK(manifest.unit_complete(Stage::kGenerate, "mock-lefty/same_sex_marriage"));
  CHECK_FALSE(manifest.unit_complete(Stage::kGenerate, "remote-model/same_sex_marriage"));
  CHECK_THROWS_AS(export_bundle(cfg, dir / "bundle"), PreconditionError);
}

TEST_CASE("stage names and prerequisites") {
  CHECK(parse_stage("stance") == Stage::kStance);
  CHECK(to_string(Stage::kStyle) == "style");
  CHECK_THROWS(parse_stage("bogus"));
}
