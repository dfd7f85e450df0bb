#pragma once

#include <string>

namespace gnqc::log {

enum class Level { debug = 0, info = 1, warn = 2, error = 3 };

void set_level(Level lvl);
Level level();
Level level_from_string(const std::string& s);

void write(Level lvl, const std::string& msg);

inline void debug(const std::string& msg) { write(Level::debug, msg); }
inline void info(const std::string& msg) { write(Level::info, msg); }
inline void warn(const std::string& msg) { write(Level::warn, msg); }
inline void error(const std::string& msg) { write(Level::error, msg); }

}  // namespace gnqc::log
