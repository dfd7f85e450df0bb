#include "gnqc/log.hpp"

#include <cstdio>

#include "gnqc/core.hpp"

namespace gnqc {

const char* to_string(ErrorCategory cat) {
  switch (cat) {
    case ErrorCategory::config: return "config";
    case ErrorCategory::io: return "io";
    case ErrorCategory::solver: return "solver";
    case ErrorCategory::domain: return "domain";
    case ErrorCategory::internal: return "internal";
  }
  return "internal";
}

}  // namespace gnqc

namespace gnqc::log {

namespace {
Level g_level = Level::warn;

const char* prefix(Level lvl) {
  switch (lvl) {
    case Level::debug: return "debug";
    case Level::info: return "info";
    case Level::warn: return "warning";
    case Level::error: return "error";
  }
  return "?";
}
}  // namespace

void set_level(Level lvl) { g_level = lvl; }
Level level() { return g_level; }

Level level_from_string(const std::string& s) {
  if (s == "debug") return Level::debug;
  if (s == "info") return Level::info;
  if (s == "warn" || s == "warning") return Level::warn;
  if (s == "error") return Level::error;
  throw ConfigError("unknown log level: " + s);
}

void write(Level lvl, const std::string& msg) {
  if (static_cast<int>(lvl) < static_cast<int>(g_level)) return;
  std::fprintf(stderr, "[%s] %s\n", prefix(lvl), msg.c_str());
}

}  // namespace gnqc::log
