#include "polbias/framing/frames.hpp"

#include "polbias/common/errors.hpp"

namespace polbias::framing {

FrameProfile build_frame_profile(std::span<const FrameSet> labels, std::string model_id, std::string topic_id) {
  if (labels.empty()) throw DegenerateInputError("frame profile needs at least one headline");
  FrameProfile p;
  p.model_id = std::move(model_id);
  p.topic_id = std::move(topic_id);
  p.n_headlines = labels.size();
  for (const auto& set : labels) {
    if (set.empty()) {
      ++p.counts[static_cast<std::size_t>(Frame::kOther)];
      continue;
    }
    for (auto f : set.frames()) ++p.counts[static_cast<std::size_t>(f)];
  }
  for (std::size_t i = 0; i < kFrameCount; ++i) {
    p.ratios[i] = static_cast<double>(p.counts[i]) / static_cast<double>(p.n_headlines);
  }
  return p;
}

FrameProfile build_frame_profile(const std::vector<std::vector<std::string>>& labels, std::string model_id,
                                 std::string topic_id) {
  std::vector<FrameSet> sets;
  sets.reserve(labels.size());
  for (const auto& names : labels) {
    FrameSet set;
    for (const auto& name : names) {
      const auto f = frame_from_name(name);
      if (!f) throw IntegrityError("frame label '" + name + "' is not one of the 15 frame dimensions");
      set.insert(*f);
    }
    sets.push_back(set);
  }
  return build_frame_profile(sets, std::move(model_id), std::move(topic_id));
}

Json to_json(const FrameProfile& p) {
  Json ratios = Json::object();
  Json counts = Json::object();
  for (std::size_t i = 0; i < kFrameCount; ++i) {
    ratios[std::string(kFrameNames[i])] = p.ratios[i];
    counts[std::string(kFrameNames[i])] = p.counts[i];
  }
  return Json{{"model", p.model_id},
              {"topic", p.topic_id},
              {"n_headlines", p.n_headlines},
              {"ratios", ratios},
              {"counts", counts}};
}

FrameProfile frame_profile_from_json(const Json& j) {
  FrameProfile p;
  p.model_id = j.at("model").get<std::string>();
  p.topic_id = j.at("topic").get<std::string>();
  p.n_headlines = j.at("n_headlines").get<std::size_t>();
  for (std::size_t i = 0; i < kFrameCount; ++i) {
    const std::string name(kFrameNames[i]);
    p.counts[i] = j.at("counts").value(name, std::size_t{0});
    p.ratios[i] = j.at("ratios").value(name, 0.0);
  }
  return p;
}

}  // namespace polbias::framing
