#include "polbias/common/random.hpp"

#include <string>

#include "polbias/common/digest.hpp"

namespace polbias {

std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::string_view> parts) {
  std::string material = std::to_string(root);
  for (auto part : parts) {
    material.push_back('\x1f');
    material.append(part);
  }
  const std::string hex = sha256_hex(material);
  return std::stoull(hex.substr(0, 16), nullptr, 16);
}

}  // namespace polbias
