#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gnqc/lattice.hpp"
#include "gnqc/sampling.hpp"

namespace gnqc {

/// Node selector for boundary conditions: a named boundary set of the
/// lattice ("bottom", "top", "left", "right") or "point" with coordinates
/// snapped to the nearest node.
struct BcEntry {
  std::string selector;
  Vec2 point{0.0, 0.0};  // for selector == "point"
  bool axis_x = false;
  bool axis_y = false;
  double value = 0.0;  // prescribed displacement, mm (0 for fix entries)
};

/// One experiment case: lattice, coarse mesh, sampling scheme, boundary
/// conditions and the loading program. Parsed from the INI-style config
/// described in the README; unknown keys are rejected.
struct CaseConfig {
  std::string name = "case";
  int version = 1;

  LatticeKind lattice_type = LatticeKind::square;
  int nx = 1;
  int ny = 1;
  double l0 = 10.0;
  Bracing bracing = Bracing::x_braced;
  Material material;
  std::optional<Rect> notch;

  double element_size_l0 = 0.0;  // 0 = full resolution (no coarse mesh)
  std::vector<Rect> fr_rects;
  std::vector<double> x_bounds_mm;  // optional explicit element grid
  std::vector<int> y_rows;

  Scheme scheme = Scheme::ISS;
  PsnSelection psn_selection = PsnSelection::spread;

  std::vector<BcEntry> fixes;
  std::vector<BcEntry> prescribes;

  bool fracture = false;
  int steps = 100;
  bool batch_removal = false;

  double tolerance = 1e-10;
};

CaseConfig parse_config(const std::string& text);
CaseConfig load_config_file(const std::string& path);

}  // namespace gnqc
