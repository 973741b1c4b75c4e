#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace polbias {

// The 15 cross-cutting policy frame dimensions, in their canonical order.
enum class Frame : std::uint8_t {
  kEconomic,
  kCapacityAndResources,
  kMorality,
  kFairnessAndEquality,
  kConstitutionalityAndJurisprudence,
  kPolicyPrescriptionAndEvaluation,
  kLawAndOrder,
  kSecurityAndDefense,
  kHealthAndSafety,
  kQualityOfLife,
  kCulturalIdentity,
  kPublicOpinion,
  kPolitical,
  kExternalRegulationAndReputation,
  kOther,
};

inline constexpr std::size_t kFrameCount = 15;

inline constexpr std::array<std::string_view, kFrameCount> kFrameNames{
    "Economic",
    "Capacity and resources",
    "Morality",
    "Fairness and equality",
    "Constitutionality and jurisprudence",
    "Policy prescription and evaluation",
    "Law and order, crime and justice",
    "Security and defense",
    "Health and safety",
    "Quality of life",
    "Cultural identity",
    "Public opinion",
    "Political",
    "External regulation and reputation",
    "Other",
};

inline std::string_view frame_name(Frame f) { return kFrameNames[static_cast<std::size_t>(f)]; }

// Exact (ASCII case-insensitive, whitespace-trimmed) match against the 15 names.
std::optional<Frame> frame_from_name(std::string_view name);

// Set of frames as a bitmask; iteration is in canonical frame order.
class FrameSet {
 public:
  FrameSet() = default;
  FrameSet(std::initializer_list<Frame> frames) {
    for (auto f : frames) insert(f);
  }

  void insert(Frame f) { bits_ |= bit(f); }
  bool contains(Frame f) const { return (bits_ & bit(f)) != 0; }
  bool empty() const { return bits_ == 0; }
  std::size_t size() const;
  std::vector<Frame> frames() const;
  std::uint16_t bits() const { return bits_; }

  bool operator==(const FrameSet&) const = default;

 private:
  static std::uint16_t bit(Frame f) { return static_cast<std::uint16_t>(1u << static_cast<unsigned>(f)); }
  std::uint16_t bits_ = 0;
};

enum class EntityType : std::uint8_t { kPer, kOrg, kLoc, kMisc };
std::string_view to_string(EntityType t);
// Accepts "PER", "B-PER", "I-ORG", "person", ... Returns nullopt when unknown.
std::optional<EntityType> entity_type_from_string(std::string_view s);

enum class Polarity : std::uint8_t { kPositive, kNegative, kNeutral };
std::string_view to_string(Polarity p);
std::optional<Polarity> polarity_from_string(std::string_view s);

enum class MediaBiasLabel : std::uint8_t { kBiased, kUnbiased };
std::string_view to_string(MediaBiasLabel l);
std::optional<MediaBiasLabel> media_bias_from_string(std::string_view s);

}  // namespace polbias
