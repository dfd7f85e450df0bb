#pragma once

#include <set>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gnqc/core.hpp"

namespace gnqc {

/// Truss material constants. Units: MPa, mm, mm^2.
struct Material {
  double young_modulus = 70.0e3;  // E
  double yield_stress = 134.0;    // sigma_y
  double strut_length = 10.0;     // l0
  double cross_section = 1.0;     // A

  void validate() const;
};

enum class Region { full_resolution, coarse };

struct LatticeNode {
  int id = -1;
  Vec2 position{0.0, 0.0};
  Region region = Region::coarse;
  std::set<std::string> boundary_sets;
};

struct Strut {
  int id = -1;
  int a = -1;  // endpoint node ids, a < b
  int b = -1;
  double rest_length = 0.0;
  Vec2 direction{0.0, 0.0};  // unit vector from a to b
  Vec2 offset{0.0, 0.0};     // position(b) - position(a), exact
  bool alive = true;
};

enum class LatticeKind { square, triangular };
enum class Bracing { none, x_braced };

/// Neighbor offsets of a node with the full interior coordination.
std::vector<Vec2> coordination_offsets(LatticeKind kind, Bracing bracing, double l0);

/// Periodic 2D truss lattice: nodes, struts, incidence, material.
/// Immutable after generation except for the strut alive flags, which the
/// fracture driver toggles through remove_strut().
struct LatticeModel {
  LatticeKind kind = LatticeKind::square;
  Bracing bracing = Bracing::none;
  std::vector<LatticeNode> nodes;
  std::vector<Strut> struts;
  std::vector<std::vector<int>> adjacency;  // node id -> incident strut ids
  Material material;
  Vec2 bbox_min{0.0, 0.0};
  Vec2 bbox_max{0.0, 0.0};
  double pitch_x = 0.0;  // node column spacing along x
  double pitch_y = 0.0;  // node row spacing along y

  int node_count() const { return static_cast<int>(nodes.size()); }
  int strut_count() const { return static_cast<int>(struts.size()); }
  int live_strut_count() const;

  std::vector<int> nodes_with_tag(const std::string& tag) const;
  /// Nearest node to p; returns -1 if farther than max_dist.
  int nearest_node(const Vec2& p, double max_dist) const;
};

LatticeModel generate_square_lattice(int nx, int ny, double l0, Bracing bracing = Bracing::x_braced);
LatticeModel generate_triangular_lattice(int width_cells, int height_rows, double l0);

struct CarveResult {
  LatticeModel model;
  std::vector<int> old_to_new;  // -1 for removed nodes
};

/// Removes nodes strictly inside the rectangle and struts that lose an
/// endpoint or cross the open interior. Node ids are re-densified.
CarveResult carve_notch(const LatticeModel& model, const Rect& notch);

/// Small-strain elongation e = (u_b - u_a) . n_hat. u is the flat 2N field.
double strut_elongation(const LatticeModel& model, const Strut& strut, const Eigen::VectorXd& u);

/// Axial stress sigma = E * e / l.
double strut_axial_stress(const LatticeModel& model, const Strut& strut, const Eigen::VectorXd& u);

/// Strut strain energy 1/2 * (EA/l) * e^2.
double strut_energy(const LatticeModel& model, const Strut& strut, const Eigen::VectorXd& u);

/// Node-wise energy: half of each incident live strut's energy.
double node_energy(const LatticeModel& model, int node, const Eigen::VectorXd& u);

/// Sum of node_energy over all nodes (equals the strut-wise sum).
double total_lattice_energy(const LatticeModel& model, const Eigen::VectorXd& u);

inline Vec2 node_disp(const Eigen::VectorXd& u, int node) {
  return Vec2(u[2 * node], u[2 * node + 1]);
}

}  // namespace gnqc
