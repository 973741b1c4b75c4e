#pragma once

#include <string_view>

namespace polbias::log {

enum class Level { kDebug, kInfo, kWarn, kError, kQuiet };

void set_level(Level level);
Level level();

void debug(std::string_view message);
void info(std::string_view message);
void warn(std::string_view message);
void error(std::string_view message);

}  // namespace polbias::log
