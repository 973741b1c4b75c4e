#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "polbias/common/errors.hpp"
#include "polbias/report/report.hpp"

namespace polbias::report {

using stance::StanceLabel;

std::vector<double> quintile_thresholds(std::vector<double> values) {
  if (values.empty()) return {};
  std::sort(values.begin(), values.end());
  std::vector<double> out;
  for (int q = 1; q <= 4; ++q) {
    const double pos = 0.2 * q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    out.push_back(values[lo] + frac * (values[hi] - values[lo]));
  }
  return out;
}

int intensity_bin(double norm_pct, std::span<const double> thresholds) {
  int bin = 0;
  for (double t : thresholds) bin += norm_pct > t ? 1 : 0;
  return bin;
}

std::string color_class(StanceLabel label, int bin) {
  switch (label) {
    case StanceLabel::kProponent: return "pro-" + std::to_string(bin);
    case StanceLabel::kOpponent: return "opp-" + std::to_string(bin);
    case StanceLabel::kNeutral: break;
  }
  return "neutral";
}

std::string format_one_decimal(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

Heatmap build_heatmap(std::span<const stance::StanceResult> results, std::vector<std::string> model_order,
                      std::vector<std::string> topic_order, const std::set<CellKey>& gaps) {
  auto append_unique = [](std::vector<std::string>& order, const std::string& id) {
    if (std::find(order.begin(), order.end(), id) == order.end()) order.push_back(id);
  };
  const bool derive_models = model_order.empty();
  const bool derive_topics = topic_order.empty();
  for (const auto& r : results) {
    if (derive_models) append_unique(model_order, r.model_id);
    if (derive_topics) append_unique(topic_order, r.topic_id);
  }

  Heatmap h;
  h.models = std::move(model_order);
  h.topics = std::move(topic_order);
  h.cells.assign(h.models.size() * h.topics.size(), std::nullopt);

  auto index_of = [](const std::vector<std::string>& v, const std::string& id) -> std::optional<std::size_t> {
    auto it = std::find(v.begin(), v.end(), id);
    if (it == v.end()) return std::nullopt;
    return static_cast<std::size_t>(it - v.begin());
  };

  std::vector<double> polarized;
  for (const auto& r : results) {
    const auto mi = index_of(h.models, r.model_id);
    const auto ti = index_of(h.topics, r.topic_id);
    if (!mi || !ti) continue;
    auto& slot = h.cells[*mi * h.topics.size() + *ti];
    if (slot) throw IntegrityError("duplicate stance result for (" + r.model_id + ", " + r.topic_id + ")");
    slot = HeatmapCell{r.model_id, r.topic_id, r.label, r.norm_pct, r.p_value, 0};
    if (r.label != StanceLabel::kNeutral) polarized.push_back(r.norm_pct);
  }

  for (std::size_t m = 0; m < h.models.size(); ++m) {
    for (std::size_t t = 0; t < h.topics.size(); ++t) {
      if (h.at(m, t)) continue;
      if (!gaps.contains({h.models[m], h.topics[t]})) {
        throw IntegrityError("heatmap cell (" + h.models[m] + ", " + h.topics[t] + ") missing and not marked as a gap");
      }
    }
  }

  h.thresholds = quintile_thresholds(polarized);
  for (auto& c : h.cells) {
    if (c && c->label != StanceLabel::kNeutral) c->intensity_bin = intensity_bin(c->norm_pct, h.thresholds);
  }
  return h;
}

Json heatmap_to_json(const Heatmap& h) {
  Json cells = Json::array();
  for (std::size_t m = 0; m < h.models.size(); ++m) {
    for (std::size_t t = 0; t < h.topics.size(); ++t) {
      const auto& c = h.at(m, t);
      if (!c) {
        cells.push_back(Json{{"model", h.models[m]}, {"topic", h.topics[t]}, {"gap", true}});
        continue;
      }
      cells.push_back(Json{{"model", c->model_id},
                           {"topic", c->topic_id},
                           {"label", std::string(stance::to_string(c->label))},
                           {"norm_pct", c->norm_pct},
                           {"p_value", c->p_value},
                           {"intensity_bin", c->intensity_bin},
                           {"color_class", color_class(c->label, c->intensity_bin)},
                           {"text", format_one_decimal(c->norm_pct)}});
    }
  }
  return Json{{"models", h.models},
              {"topics", h.topics},
              {"cells", cells},
              {"meta",
               {{"intensity_binning", "quintiles of non-neutral norm_pct (harness convention)"},
                {"thresholds", h.thresholds},
                {"colors", {{"proponent", "blue"}, {"opponent", "red"}, {"neutral", "white"}}}}}};
}

std::string heatmap_to_csv(const Heatmap& h) {
  std::ostringstream out;
  out << "model,topic,label,norm_pct,p_value,intensity_bin\n";
  for (std::size_t m = 0; m < h.models.size(); ++m) {
    for (std::size_t t = 0; t < h.topics.size(); ++t) {
      const auto& c = h.at(m, t);
      out << h.models[m] << ',' << h.topics[t] << ',';
      if (!c) {
        out << "gap,,,\n";
        continue;
      }
      out << stance::to_string(c->label) << ',' << Json(c->norm_pct).dump() << ',' << Json(c->p_value).dump() << ','
          << c->intensity_bin << '\n';
    }
  }
  return out.str();
}

namespace {

constexpr std::array<const char*, 5> kBlues{"#dbe9f6", "#bad6eb", "#89bedc", "#539ecd", "#2b7bba"};
constexpr std::array<const char*, 5> kReds{"#fde0d2", "#fcbba1", "#fc9272", "#ef6548", "#cb181d"};

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::string heatmap_to_svg(const Heatmap& h) {
  constexpr int kCellW = 64, kCellH = 28, kLeft = 170, kTop = 150;
  const int width = kLeft + kCellW * static_cast<int>(h.topics.size()) + 20;
  const int height = kTop + kCellH * static_cast<int>(h.models.size()) + 20;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (std::size_t t = 0; t < h.topics.size(); ++t) {
    const int x = kLeft + kCellW * static_cast<int>(t) + kCellW / 2;
    out << "  <text x=\"" << x << "\" y=\"" << kTop - 6 << "\" transform=\"rotate(-45 " << x << ' ' << kTop - 6
        << ")\">" << xml_escape(h.topics[t]) << "</text>\n";
  }
  for (std::size_t m = 0; m < h.models.size(); ++m) {
    const int y = kTop + kCellH * static_cast<int>(m);
    out << "  <text x=\"" << kLeft - 6 << "\" y=\"" << y + kCellH / 2 + 4 << "\" text-anchor=\"end\">"
        << xml_escape(h.models[m]) << "</text>\n";
    for (std::size_t t = 0; t < h.topics.size(); ++t) {
      const int x = kLeft + kCellW * static_cast<int>(t);
      const auto& c = h.at(m, t);
      std::string fill = "#eeeeee", cls = "gap", text;
      if (c) {
        cls = color_class(c->label, c->intensity_bin);
        text = format_one_decimal(c->norm_pct);
        if (c->label == StanceLabel::kProponent) fill = kBlues[static_cast<std::size_t>(c->intensity_bin)];
        else if (c->label == StanceLabel::kOpponent) fill = kReds[static_cast<std::size_t>(c->intensity_bin)];
        else fill = "#ffffff";
      }
      out << "  <rect class=\"" << cls << "\" x=\"" << x << "\" y=\"" << y << "\" width=\"" << kCellW
          << "\" height=\"" << kCellH << "\" fill=\"" << fill << "\" stroke=\"#999999\"/>\n";
      if (!text.empty()) {
        out << "  <text x=\"" << x + kCellW / 2 << "\" y=\"" << y + kCellH / 2 + 4 << "\" text-anchor=\"middle\">"
            << text << "</text>\n";
      }
    }
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace polbias::report
