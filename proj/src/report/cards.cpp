#include <algorithm>
#include <cstdio>
#include <sstream>

#include "polbias/report/report.hpp"

namespace polbias::report {
namespace {

template <typename T>
std::vector<const T*> for_topic(const std::vector<T>& items, const std::string& topic_id) {
  std::vector<const T*> out;
  for (const auto& it : items) {
    if (it.topic_id == topic_id) out.push_back(&it);
  }
  return out;
}

template <typename T>
const T* find_cell(const std::vector<T>& items, const std::string& model_id, const std::string& topic_id) {
  for (const auto& it : items) {
    if (it.model_id == model_id && it.topic_id == topic_id) return &it;
  }
  return nullptr;
}

// Profiles of a topic in configured model order.
std::vector<framing::EntityProfile> ordered_entity_profiles(const ReportInputs& in, const std::string& topic_id) {
  std::vector<framing::EntityProfile> out;
  for (const auto& m : in.models) {
    if (const auto* p = find_cell(in.entities, m, topic_id)) out.push_back(*p);
  }
  return out;
}

Json absent() { return Json{{"absent", true}}; }

Json rate_or_null(const std::optional<double>& r) { return r ? Json(*r) : Json(nullptr); }

}  // namespace

CardResult build_bias_card(const std::string& model_id, const ReportInputs& in) {
  CardResult result;
  Json topics = Json::array();
  for (const auto& topic : in.topics) {
    Json t{{"topic", topic.id}, {"name", topic.name}, {"kind", std::string(corpus::to_string(topic.kind))}};

    if (!topic.is_policy()) {
      t["stance"] = Json{{"excluded", "event topic"}};
    } else if (const auto* r = find_cell(in.stance, model_id, topic.id)) {
      t["stance"] = Json{{"label", std::string(stance::to_string(r->label))},
                         {"norm_pct", r->norm_pct},
                         {"p_value", r->p_value},
                         {"d_pro", r->d_pro},
                         {"d_opp", r->d_opp},
                         {"n", r->n}};
    } else {
      t["stance"] = absent();
      result.absent.push_back(topic.id + "/stance");
    }

    const auto* style_profile = find_cell(in.style, model_id, topic.id);
    const auto profiles = ordered_entity_profiles(in, topic.id);
    const auto own = std::find_if(profiles.begin(), profiles.end(),
                                  [&](const framing::EntityProfile& p) { return p.model_id == model_id; });
    if (own == profiles.end()) {
      t["entities"] = absent();
      result.absent.push_back(topic.id + "/entities");
    } else {
      Json rows = Json::array();
      for (const auto& e : framing::top_k_entities(*own, in.k)) {
        Json row{{"canonical", e.canonical}, {"count", e.count}, {"per_1000", e.per_1000}};
        if (profiles.size() >= 2) {
          const auto view = framing::cross_model_normalize(profiles, e.key, in.k);
          const auto idx = static_cast<std::size_t>(own - profiles.begin());
          row["ratio"] = view ? Json(view->ratios[idx]) : Json(nullptr);
          row["unique"] = view ? view->unique : false;
        } else {
          row["ratio"] = nullptr;
          row["unique"] = nullptr;
        }
        const style::PolarityDistribution* dist = nullptr;
        if (style_profile) {
          auto it = style_profile->entities.find(e.canonical);
          if (it != style_profile->entities.end()) dist = &it->second;
        }
        row["dominant_sentiment"] = dist ? Json(std::string(to_string(dist->dominant))) : Json(nullptr);
        rows.push_back(row);
      }
      t["entities"] = Json{{"top_k", rows}, {"n_headlines", own->n_headlines}};
    }

    if (const auto* f = find_cell(in.frames, model_id, topic.id)) {
      Json ratios = Json::object();
      for (std::size_t i = 0; i < kFrameCount; ++i) ratios[std::string(kFrameNames[i])] = f->ratios[i];
      t["frames"] = Json{{"n_headlines", f->n_headlines}, {"ratios", ratios}};
    } else {
      t["frames"] = absent();
      result.absent.push_back(topic.id + "/frames");
    }

    if (style_profile) {
      t["style"] = Json{{"lexical_polarity_rate", rate_or_null(style_profile->lexical_polarity.rate)},
                        {"lexical_polarity_denominator", style_profile->lexical_polarity.denominator},
                        {"media_bias_rate", rate_or_null(style_profile->media_bias.rate)},
                        {"media_bias_denominator", style_profile->media_bias.denominator}};
    } else {
      t["style"] = absent();
      result.absent.push_back(topic.id + "/style");
    }
    topics.push_back(t);
  }

  Json backends = Json::object();
  for (const auto& [role, id] : in.provenance.backend_ids) backends[role] = id;
  result.card = Json{{"model", model_id},
                     {"topics", topics},
                     {"absent_sections", result.absent},
                     {"provenance",
                      {{"backend_ids", backends},
                       {"root_seed", in.provenance.root_seed},
                       {"resamples", in.provenance.resamples},
                       {"manifest_hash", in.provenance.manifest_hash}}}};
  return result;
}

namespace {

std::string cell(const Json& v) {
  if (v.is_null()) return "-";
  if (v.is_number_float()) return format_one_decimal(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string pct(const Json& v) { return v.is_null() ? "-" : format_one_decimal(100.0 * v.get<double>()) + "%"; }

}  // namespace

std::string render_card_markdown(const Json& card) {
  std::ostringstream md;
  md << "# " << card.at("model").get<std::string>() << "\n\n## Stance\n\n| Topic | Label | norm % | p |\n|---|---|---|---|\n";
  for (const auto& t : card.at("topics")) {
    const auto& s = t.at("stance");
    if (s.contains("excluded")) continue;
    if (s.contains("absent")) {
      md << "| " << t.at("name").get<std::string>() << " | absent | - | - |\n";
      continue;
    }
    md << "| " << t.at("name").get<std::string>() << " | " << s.at("label").get<std::string>() << " | "
       << cell(s.at("norm_pct")) << " | " << s.at("p_value").dump() << " |\n";
  }
  for (const auto& t : card.at("topics")) {
    md << "\n## " << t.at("name").get<std::string>();
    if (t.at("stance").contains("excluded")) md << " (event, stance excluded)";
    md << "\n\n";
    const auto& ents = t.at("entities");
    if (ents.contains("absent")) {
      md << "Entities: absent\n\n";
    } else {
      md << "| Entity | Count | Ratio | Sentiment | Unique |\n|---|---|---|---|---|\n";
      for (const auto& e : ents.at("top_k")) {
        md << "| " << e.at("canonical").get<std::string>() << " | " << e.at("count").dump() << " | "
           << (e.at("ratio").is_null() ? "-" : Json(e.at("ratio")).dump()) << " | " << cell(e.at("dominant_sentiment"))
           << " | " << cell(e.at("unique")) << " |\n";
      }
      md << '\n';
    }
    const auto& frames = t.at("frames");
    if (frames.contains("absent")) {
      md << "Frames: absent\n\n";
    } else {
      md << "Frames:";
      for (const auto& [name, r] : frames.at("ratios").items()) {
        if (r.get<double>() > 0.0) md << ' ' << name << ' ' << pct(r) << ';';
      }
      md << "\n\n";
    }
    const auto& st = t.at("style");
    if (st.contains("absent")) {
      md << "Style: absent\n";
    } else {
      md << "Style: lexical polarity " << pct(st.at("lexical_polarity_rate")) << ", media bias "
         << pct(st.at("media_bias_rate")) << "\n";
    }
  }
  const auto& prov = card.at("provenance");
  md << "\n---\nseed " << prov.at("root_seed").dump() << ", resamples " << prov.at("resamples").dump()
     << ", manifest " << prov.at("manifest_hash").get<std::string>() << "\n";
  return md.str();
}

Json entity_comparison(const std::string& topic_id, const ReportInputs& in) {
  const auto profiles = ordered_entity_profiles(in, topic_id);
  Json rows = Json::array();
  for (const auto& key : framing::top_k_union(profiles, in.k)) {
    Json row;
    if (profiles.size() >= 2) {
      const auto view = framing::cross_model_normalize(profiles, key, in.k);
      if (!view) continue;
      row = framing::to_json(*view);
    } else {
      const auto* e = profiles.front().find(key);
      row = Json{{"canonical", e->canonical},
                 {"key", key},
                 {"per_model", Json::array({{{"model", profiles.front().model_id}, {"count", e->count}}})}};
    }
    for (auto& pm : row["per_model"]) {
      const auto* sp = find_cell(in.style, pm.at("model").get<std::string>(), topic_id);
      const style::PolarityDistribution* dist = nullptr;
      if (sp) {
        auto it = sp->entities.find(row.at("canonical").get<std::string>());
        if (it != sp->entities.end()) dist = &it->second;
      }
      pm["sentiment"] = dist ? style::to_json(*dist) : Json(nullptr);
    }
    rows.push_back(row);
  }
  std::vector<std::string> models;
  for (const auto& p : profiles) models.push_back(p.model_id);
  return Json{{"topic", topic_id}, {"k", in.k}, {"models", models}, {"entities", rows}};
}

Json frame_chart_data(const std::string& topic_id, std::span<const framing::FrameProfile> profiles) {
  Json series = Json::array();
  for (const auto& p : profiles) series.push_back(framing::to_json(p));
  return Json{{"topic", topic_id}, {"frames", kFrameNames}, {"series", series}};
}

std::string frame_chart_svg(const std::string& topic_name, std::span<const framing::FrameProfile> profiles) {
  static constexpr std::array<const char*, 8> kPalette{"#4e79a7", "#f28e2b", "#e15759", "#76b7b2",
                                                       "#59a14f", "#edc948", "#b07aa1", "#9c755f"};
  constexpr int kLeft = 240, kBarH = 8, kGap = 6, kScale = 300, kTop = 40;
  const int group = kBarH * static_cast<int>(std::max<std::size_t>(profiles.size(), 1)) + kGap;
  const int height = kTop + group * static_cast<int>(kFrameCount) + 20 + 14 * static_cast<int>(profiles.size());
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kLeft + kScale + 60 << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "  <text x=\"10\" y=\"20\" font-size=\"14\">" << topic_name << ": frame dimension ratios</text>\n";
  for (std::size_t f = 0; f < kFrameCount; ++f) {
    const int y0 = kTop + group * static_cast<int>(f);
    out << "  <text x=\"" << kLeft - 6 << "\" y=\"" << y0 + group / 2 << "\" text-anchor=\"end\">" << kFrameNames[f]
        << "</text>\n";
    for (std::size_t m = 0; m < profiles.size(); ++m) {
      const double r = profiles[m].ratios[f];
      char w[32];
      std::snprintf(w, sizeof w, "%.2f", r * kScale);
      out << "  <rect x=\"" << kLeft << "\" y=\"" << y0 + kBarH * static_cast<int>(m) << "\" width=\"" << w
          << "\" height=\"" << kBarH << "\" fill=\"" << kPalette[m % kPalette.size()] << "\"/>\n";
    }
  }
  const int legend = kTop + group * static_cast<int>(kFrameCount) + 10;
  for (std::size_t m = 0; m < profiles.size(); ++m) {
    const int y = legend + 14 * static_cast<int>(m);
    out << "  <rect x=\"" << kLeft << "\" y=\"" << y << "\" width=\"10\" height=\"10\" fill=\""
        << kPalette[m % kPalette.size()] << "\"/><text x=\"" << kLeft + 14 << "\" y=\"" << y + 9 << "\">"
        << profiles[m].model_id << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

ReportOutcome write_report(const ReportInputs& in, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  ReportOutcome outcome;
  auto emit = [&](const fs::path& rel, const std::string& contents) {
    const auto path = dir / rel;
    fs::create_directories(path.parent_path());
    write_text_file_atomic(path, contents);
    outcome.files.push_back(rel);
  };

  std::vector<std::string> policy_ids;
  std::set<std::string> policy_set;
  for (const auto& t : in.topics) {
    if (t.is_policy()) {
      policy_ids.push_back(t.id);
      policy_set.insert(t.id);
    }
  }
  std::vector<stance::StanceResult> policy_results;
  for (const auto& r : in.stance) {
    if (policy_set.contains(r.topic_id)) policy_results.push_back(r);
  }
  std::set<CellKey> gaps;
  for (const auto& m : in.models) {
    for (const auto& t : policy_ids) {
      if (!find_cell(policy_results, m, t)) {
        gaps.insert({m, t});
        outcome.warnings.push_back("no stance result for (" + m + ", " + t + ")");
      }
    }
  }
  const auto heatmap = build_heatmap(policy_results, in.models, policy_ids, gaps);
  emit("heatmap.json", dump_pretty(heatmap_to_json(heatmap)));
  emit("heatmap.csv", heatmap_to_csv(heatmap));
  emit("heatmap.svg", heatmap_to_svg(heatmap));

  const auto summary = build_summary(policy_results, policy_set, in.entities, in.k, in.style);
  emit("summary.json", dump_pretty(summary_to_json(summary)));

  for (const auto& m : in.models) {
    auto card = build_bias_card(m, in);
    for (const auto& a : card.absent) outcome.warnings.push_back(m + ": absent " + a);
    emit(fs::path("cards") / (m + ".json"), dump_pretty(card.card));
    emit(fs::path("cards") / (m + ".md"), render_card_markdown(card.card));
  }

  for (const auto& t : in.topics) {
    if (std::any_of(in.entities.begin(), in.entities.end(), [&](const auto& p) { return p.topic_id == t.id; })) {
      emit(fs::path("entities") / (t.id + ".json"), dump_pretty(entity_comparison(t.id, in)));
    }
    std::vector<framing::FrameProfile> frames;
    for (const auto& m : in.models) {
      if (const auto* f = find_cell(in.frames, m, t.id)) frames.push_back(*f);
    }
    if (!frames.empty()) {
      emit(fs::path("frames") / (t.id + ".json"), dump_pretty(frame_chart_data(t.id, frames)));
      emit(fs::path("frames") / (t.id + ".svg"), frame_chart_svg(t.name, frames));
    }
  }
  return outcome;
}

}  // namespace polbias::report
