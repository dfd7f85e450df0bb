#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gnqc {

/// Built-in experiment presets (the ini files under presets/ are embedded
/// at build time).
const std::vector<std::pair<std::string, std::string>>& preset_table();
std::optional<std::string> find_preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace gnqc
