#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "polbias/common/json_io.hpp"
#include "polbias/corpus/topic.hpp"
#include "polbias/framing/entities.hpp"
#include "polbias/framing/frames.hpp"
#include "polbias/stance/stance.hpp"
#include "polbias/style/style.hpp"

namespace polbias::report {

using CellKey = std::pair<std::string, std::string>;  // (model, topic)

struct HeatmapCell {
  std::string model_id;
  std::string topic_id;
  stance::StanceLabel label = stance::StanceLabel::kNeutral;
  double norm_pct = 0.0;
  double p_value = 1.0;
  int intensity_bin = 0;  // 0..4, quintile of non-neutral norm_pct
};

struct Heatmap {
  std::vector<std::string> models;
  std::vector<std::string> topics;
  // Row-major (model, topic); nullopt marks an explicit gap.
  std::vector<std::optional<HeatmapCell>> cells;
  std::vector<double> thresholds;  // quintile boundaries

  const std::optional<HeatmapCell>& at(std::size_t model, std::size_t topic) const {
    return cells[model * topics.size() + topic];
  }
};

// Orders follow the given lists; empty lists take first-appearance order.
// Duplicate cells and missing cells that are not declared gaps are IntegrityErrors.
Heatmap build_heatmap(std::span<const stance::StanceResult> results, std::vector<std::string> model_order = {},
                      std::vector<std::string> topic_order = {}, const std::set<CellKey>& gaps = {});

// Linear-interpolated 20/40/60/80th percentiles.
std::vector<double> quintile_thresholds(std::vector<double> values);
int intensity_bin(double norm_pct, std::span<const double> thresholds);
std::string color_class(stance::StanceLabel label, int bin);
std::string format_one_decimal(double v);

Json heatmap_to_json(const Heatmap& h);
std::string heatmap_to_csv(const Heatmap& h);
std::string heatmap_to_svg(const Heatmap& h);

struct EntityConcentration {
  std::string canonical;
  std::size_t lists = 0;
  std::size_t containing = 0;
  double fraction = 0.0;
};

struct SummaryStats {
  std::size_t policy_cells = 0;
  std::size_t neutral_cells = 0;
  double neutrality_rate = 0.0;
  std::map<std::string, double> model_mean_norm;
  std::map<std::string, double> topic_mean_norm;
  // topic -> entity key -> share of that topic's top-k lists containing it
  std::map<std::string, std::map<std::string, EntityConcentration>> entity_concentration;
  // model -> per-topic media-bias rates and their mean/stddev
  std::map<std::string, std::map<std::string, std::optional<double>>> media_bias_rates;
  std::map<std::string, std::optional<style::RateSummary>> media_bias_summary;
};

// Stance means are over policy cells only (all cells when policy_topics is empty).
SummaryStats build_summary(std::span<const stance::StanceResult> results, const std::set<std::string>& policy_topics,
                           std::span<const framing::EntityProfile> entity_profiles = {}, std::size_t k = 10,
                           std::span<const style::StyleProfile> style_profiles = {});

Json summary_to_json(const SummaryStats& s);

struct Provenance {
  std::map<std::string, std::string> backend_ids;  // role -> backend id
  std::uint64_t root_seed = 0;
  int resamples = 0;
  std::string manifest_hash;
};

struct ReportInputs {
  std::vector<corpus::TopicSpec> topics;
  std::vector<std::string> models;
  std::vector<stance::StanceResult> stance;
  std::vector<framing::FrameProfile> frames;
  std::vector<framing::EntityProfile> entities;
  std::vector<style::StyleProfile> style;
  std::size_t k = 10;
  Provenance provenance;
};

struct CardResult {
  Json card;
  std::vector<std::string> absent;  // "<topic>/<section>" entries
};

CardResult build_bias_card(const std::string& model_id, const ReportInputs& inputs);
std::string render_card_markdown(const Json& card);

// Normalized views over the cross-model top-k union for one topic.
Json entity_comparison(const std::string& topic_id, const ReportInputs& inputs);

std::string frame_chart_svg(const std::string& topic_name, std::span<const framing::FrameProfile> profiles);
Json frame_chart_data(const std::string& topic_id, std::span<const framing::FrameProfile> profiles);

struct ReportOutcome {
  std::vector<std::filesystem::path> files;
  std::vector<std::string> warnings;
};

// Writes heatmap.{json,csv,svg}, summary.json, cards/, entities/ and frames/ under dir.
ReportOutcome write_report(const ReportInputs& inputs, const std::filesystem::path& dir);

}  // namespace polbias::report
