#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace polbias {

std::string sha256_hex(std::string_view data);
std::string file_sha256_hex(const std::filesystem::path& path);

}  // namespace polbias
