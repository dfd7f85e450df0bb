#include "gnqc/presets.hpp"

#include <algorithm>

namespace gnqc {

std::optional<std::string> find_preset(const std::string& name) {
  for (const auto& [n, text] : preset_table()) {
    if (n == name) return text;
  }
  return std::nullopt;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [n, text] : preset_table()) names.push_back(n);
  std::sort(names.begin(), names.end());
  return names;
}

}  // namespace gnqc
