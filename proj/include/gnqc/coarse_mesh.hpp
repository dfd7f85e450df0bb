#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "gnqc/lattice.hpp"

namespace gnqc {

/// 4-node bilinear quadrilateral over an axis-aligned rectangle of lattice
/// nodes. Corners are stored counter-clockwise from the lower-left.
struct QuadElement {
  int id = -1;
  std::array<int, 4> corner_rn_ids{{-1, -1, -1, -1}};
  std::array<Vec2, 4> corner_positions;
  std::vector<int> member_nodes;  // every lattice node owned by this element
  Rect bounds;
};

enum class NodeRole { IRN, NIRN, GN };

struct DofMap {
  std::vector<int> node_to_rn;  // node id -> rn index, -1 for ghost nodes
  std::vector<int> rn_to_node;  // rn index -> node id

  int rn_count() const { return static_cast<int>(rn_to_node.size()); }
  int dof_count() const { return 2 * rn_count(); }
  int dof(int node, int axis) const { return 2 * node_to_rn[node] + axis; }
};

struct RoleCounts {
  int irn = 0;
  int nirn = 0;
  int gn = 0;
};

/// Coarse-graining of a lattice: bilinear elements tiling the coarse region,
/// node roles, ghost-node ownership and the reduced DOF map.
struct CoarseMesh {
  std::vector<QuadElement> elements;
  std::vector<NodeRole> roles;  // per lattice node
  std::vector<int> owner;       // node id -> owning element id (-1 for RNs)
  std::vector<int> rn_ids;      // ascending node ids of all RNs
  DofMap dof_map;
  double element_size = 0.0;  // nominal request, mm

  // Tensor grid the elements were carved from (kept cells only become
  // elements); retained for scheme classification and diagnostics.
  std::vector<double> x_bounds;
  std::vector<double> y_bounds;
  std::vector<int> cell_element;  // (cell_x, cell_y) -> element id or -1

  int cells_x() const { return static_cast<int>(x_bounds.size()) - 1; }
  int cells_y() const { return static_cast<int>(y_bounds.size()) - 1; }
  int cell_index(int cx, int cy) const { return cy * cells_x() + cx; }
  bool cell_kept(int cx, int cy) const {
    return cx >= 0 && cy >= 0 && cx < cells_x() && cy < cells_y() &&
           cell_element[cell_index(cx, cy)] >= 0;
  }

  RoleCounts role_counts() const;
  bool on_grid_line(const Vec2& p, double tol) const;
};

/// Tiles the complement of fr_region with axis-aligned bilinear elements
/// whose corners coincide with lattice nodes. Element strip counts are the
/// closest fit to element_size; for triangular lattices the horizontal strip
/// boundaries are snapped to even node rows so that corners exist. Cells
/// overlapping any fr_region rectangle are left at full resolution.
CoarseMesh build_coarse_mesh(const LatticeModel& model, double element_size,
                             const std::vector<Rect>& fr_region);

/// Same, with explicit grid boundaries (x in mm, y as node-row indices).
CoarseMesh build_coarse_mesh_explicit(const LatticeModel& model, double element_size,
                                      const std::vector<Rect>& fr_region,
                                      const std::vector<double>& x_bounds_mm,
                                      const std::vector<int>& y_bound_rows);

/// Degenerate mesh with zero elements: every node an NIRN (full resolution).
CoarseMesh make_full_resolution_mesh(const LatticeModel& model);

/// phi_1..phi_4 of the bilinear element at a point inside it (tolerance
/// 1e-9 * element extent); Kronecker at corners, sums to one.
Eigen::Vector4d bilinear_shape_eval(const QuadElement& element, const Vec2& point);

RoleCounts classify_dof_roles(const CoarseMesh& mesh);

/// Sparse interpolation operator P (2N x 2R): identity rows for RNs, owner
/// element shape weights for ghost nodes. Full fields are P * u_rn.
Eigen::SparseMatrix<double> build_interpolation_matrix(const LatticeModel& model,
                                                       const CoarseMesh& mesh);

/// Recovers the full displacement field from RN DOFs.
Eigen::VectorXd interpolate_full_field(const LatticeModel& model, const CoarseMesh& mesh,
                                       const Eigen::VectorXd& u_rn);

/// Stamps LatticeNode::region from the mesh roles (NIRN -> full_resolution).
void tag_regions(LatticeModel& model, const CoarseMesh& mesh);

}  // namespace gnqc
