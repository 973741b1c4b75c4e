#include "polbias/gateway/labels.hpp"

#include <algorithm>
#include <bit>
#include <cctype>

namespace polbias {
namespace {

std::string fold(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  std::string out(s.substr(b, e - b + 1));
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::optional<Frame> frame_from_name(std::string_view name) {
  const auto key = fold(name);
  for (std::size_t i = 0; i < kFrameCount; ++i) {
    if (fold(kFrameNames[i]) == key) return static_cast<Frame>(i);
  }
  return std::nullopt;
}

std::size_t FrameSet::size() const { return static_cast<std::size_t>(std::popcount(bits_)); }

std::vector<Frame> FrameSet::frames() const {
  std::vector<Frame> out;
  for (std::size_t i = 0; i < kFrameCount; ++i) {
    if (bits_ & (1u << i)) out.push_back(static_cast<Frame>(i));
  }
  return out;
}

std::string_view to_string(EntityType t) {
  switch (t) {
    case EntityType::kPer: return "PER";
    case EntityType::kOrg: return "ORG";
    case EntityType::kLoc: return "LOC";
    case EntityType::kMisc: return "MISC";
  }
  return "MISC";
}

std::optional<EntityType> entity_type_from_string(std::string_view s) {
  auto key = fold(s);
  if (key.size() > 2 && (key.starts_with("b-") || key.starts_with("i-"))) key = key.substr(2);
  if (key == "per" || key == "person") return EntityType::kPer;
  if (key == "org" || key == "organization" || key == "organisation") return EntityType::kOrg;
  if (key == "loc" || key == "location" || key == "gpe") return EntityType::kLoc;
  if (key == "misc" || key == "miscellaneous") return EntityType::kMisc;
  return std::nullopt;
}

std::string_view to_string(Polarity p) {
  switch (p) {
    case Polarity::kPositive: return "positive";
    case Polarity::kNegative: return "negative";
    case Polarity::kNeutral: return "neutral";
  }
  return "neutral";
}

std::optional<Polarity> polarity_from_string(std::string_view s) {
  const auto key = fold(s);
  if (key == "positive" || key == "pos") return Polarity::kPositive;
  if (key == "negative" || key == "neg") return Polarity::kNegative;
  if (key == "neutral" || key == "neu") return Polarity::kNeutral;
  return std::nullopt;
}

std::string_view to_string(MediaBiasLabel l) { return l == MediaBiasLabel::kBiased ? "biased" : "unbiased"; }

std::optional<MediaBiasLabel> media_bias_from_string(std::string_view s) {
  const auto key = fold(s);
  if (key == "biased" || key == "label_1") return MediaBiasLabel::kBiased;
  if (key == "unbiased" || key == "non-biased" || key == "label_0") return MediaBiasLabel::kUnbiased;
  return std::nullopt;
}

}  // namespace polbias
