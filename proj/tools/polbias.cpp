#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "polbias/common/errors.hpp"
#include "polbias/common/log.hpp"
#include "polbias/pipeline/bundle.hpp"
#include "polbias/pipeline/config.hpp"
#include "polbias/pipeline/pipeline.hpp"

namespace pl = polbias::pipeline;

namespace {

struct CommonFlags {
  std::string config;
  std::string mode;
  std::string bundle;
  std::optional<std::uint64_t> seed;
  std::string models;
  std::string topics;
  std::string out;
  bool verbose = false;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool needs_config = true) {
  auto* c = cmd->add_option("--config", f.config, "Run configuration (JSON)");
  if (needs_config) c->required();
  cmd->add_option("--mode", f.mode, "live|replay")->check(CLI::IsMember({"live", "replay"}));
  cmd->add_option("--bundle", f.bundle, "Replay bundle directory");
  cmd->add_option("--seed", f.seed, "Root seed");
  cmd->add_option("--models", f.models, "Comma-separated model ids");
  cmd->add_option("--topics", f.topics, "Comma-separated topic ids");
  cmd->add_option("--out", f.out, "Output directory");
  cmd->add_flag("-v,--verbose", f.verbose, "Debug logging");
}

pl::Overrides overrides(const CommonFlags& f) {
  pl::Overrides o;
  if (!f.mode.empty()) o.mode = polbias::gateway::parse_mode(f.mode);
  if (!f.bundle.empty()) o.bundle = f.bundle;
  o.seed = f.seed;
  if (!f.models.empty()) o.models.push_back(f.models);
  if (!f.topics.empty()) o.topics.push_back(f.topics);
  if (!f.out.empty()) o.output_dir = f.out;
  return o;
}

int report_outcome(const pl::RunOutcome& outcome) {
  for (const auto& w : outcome.warnings) polbias::log::warn(w);
  std::cout << "executed " << outcome.executed.size() << " unit(s), skipped " << outcome.skipped.size()
            << ", backend calls " << outcome.backend_calls << "\n";
  if (!outcome.report_dir.empty()) std::cout << "report: " << outcome.report_dir.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Political bias probing harness for LLM headline generation"};
  app.require_subcommand(1);

  CommonFlags f;
  std::string stage;

  auto* validate = app.add_subcommand("validate", "Check a config without running anything");
  add_common(validate, f);
  bool no_probe = false;
  validate->add_flag("--no-probe", no_probe, "Skip endpoint reachability checks");

  auto* generate = app.add_subcommand("generate", "Generate and parse headlines");
  add_common(generate, f);
  auto* analyze = app.add_subcommand("analyze", "Run one analysis stage (and anything it needs)");
  add_common(analyze, f);
  analyze->add_option("--stage", stage, "stance|frames|style")
      ->required()
      ->check(CLI::IsMember({"stance", "frames", "style"}));
  auto* report = app.add_subcommand("report", "Build the report directory");
  add_common(report, f);
  auto* run = app.add_subcommand("run", "Run every stage");
  add_common(run, f);
  auto* export_cmd = app.add_subcommand("export-bundle", "Write a replay bundle for a completed run");
  add_common(export_cmd, f);
  std::string bundle_out;
  export_cmd->add_option("--to", bundle_out, "Bundle directory (default <output_dir>/bundle)");
  auto* replay = app.add_subcommand("replay", "Re-run every stage from a bundle, offline");
  add_common(replay, f, false);
  std::size_t workers = 1;
  replay->add_option("--workers", workers, "Worker threads");

  CLI11_PARSE(app, argc, argv);
  if (f.verbose) polbias::log::set_level(polbias::log::Level::kDebug);

  try {
    if (validate->parsed()) {
      polbias::Json doc;
      try {
        doc = polbias::Json::parse(polbias::read_text_file(f.config));
      } catch (const std::exception& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return static_cast<int>(polbias::ExitCode::kValidation);
      }
      const auto diagnostics = pl::validate(doc, overrides(f), !no_probe);
      for (const auto& d : diagnostics) std::cout << pl::format_diagnostic(d) << "\n";
      if (pl::has_errors(diagnostics)) return static_cast<int>(polbias::ExitCode::kValidation);
      std::cout << "ok\n";
      return 0;
    }
    if (replay->parsed() && f.config.empty()) {
      if (f.bundle.empty() || f.out.empty()) throw polbias::ConfigError("replay needs --bundle and --out");
      return report_outcome(pl::replay(f.bundle, f.out, workers));
    }

    auto config = pl::load_run_config_file(f.config, overrides(f));
    if (replay->parsed()) {
      config.mode = polbias::gateway::Mode::kReplay;
      if (config.bundle.empty()) throw polbias::ConfigError("replay needs --bundle");
    }
    if (export_cmd->parsed()) {
      const auto dest = bundle_out.empty() ? config.output_dir / "bundle" : std::filesystem::path(bundle_out);
      const auto info = pl::export_bundle(config, dest);
      std::cout << "bundle: " << dest.string() << " (" << info.files.size() << " envelopes)\n";
      return 0;
    }

    pl::Pipeline pipeline(config);
    if (generate->parsed()) return report_outcome(pipeline.run({pl::Stage::kParse}));
    if (analyze->parsed()) return report_outcome(pipeline.run({pl::parse_stage(stage)}));
    if (report->parsed()) return report_outcome(pipeline.run({pl::Stage::kReport}));
    return report_outcome(pipeline.run_all());
  } catch (const polbias::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.exit_code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(polbias::ExitCode::kStageFailure);
  }
}
