#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "polbias/common/json_io.hpp"
#include "polbias/gateway/labels.hpp"

namespace polbias::framing {

struct FrameProfile {
  std::string model_id;
  std::string topic_id;
  std::size_t n_headlines = 0;
  std::array<std::size_t, kFrameCount> counts{};
  // counts[f] / n_headlines; multi-label, so ratios need not sum to 1.
  std::array<double, kFrameCount> ratios{};

  double ratio(Frame f) const { return ratios[static_cast<std::size_t>(f)]; }
};

// Empty label sets count as {Other}. Throws DegenerateInputError for zero headlines.
FrameProfile build_frame_profile(std::span<const FrameSet> labels, std::string model_id, std::string topic_id);

// String-label variant; a label outside the 15 classes is an IntegrityError.
FrameProfile build_frame_profile(const std::vector<std::vector<std::string>>& labels, std::string model_id,
                                 std::string topic_id);

Json to_json(const FrameProfile& p);
FrameProfile frame_profile_from_json(const Json& j);

}  // namespace polbias::framing
