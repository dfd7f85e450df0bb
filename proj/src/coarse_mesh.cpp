#include "gnqc/coarse_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "gnqc/log.hpp"

namespace gnqc {

namespace {

// Number of equal-as-possible strips whose size best matches the nominal
// element size; ties prefer the finer tiling.
int choose_strip_count(double extent, double nominal, int max_units) {
  int best = 1;
  double best_err = std::abs(extent - nominal);
  for (int n = 2; n <= max_units; ++n) {
    const double err = std::abs(extent / n - nominal);
    if (err < best_err - 1e-12 || (std::abs(err - best_err) <= 1e-12)) {
      best = n;
      best_err = err;
    }
  }
  return best;
}

// Splits total_units into n strips differing by at most one unit.
std::vector<int> distribute_units(int total_units, int n) {
  std::vector<int> sizes(n, total_units / n);
  for (int i = 0; i < total_units % n; ++i) sizes[i] += 1;
  return sizes;
}

struct NodeLookup {
  std::map<std::pair<long, long>, int> index;
  double half_px = 0.0;
  double py = 0.0;

  explicit NodeLookup(const LatticeModel& m) {
    half_px = 0.5 * m.pitch_x;
    py = m.pitch_y;
    for (const auto& n : m.nodes) index[key(n.position)] = n.id;
  }
  std::pair<long, long> key(const Vec2& p) const {
    return {std::lround(p.x() / half_px), std::lround(p.y() / py)};
  }
  int find(const Vec2& p) const {
    auto it = index.find(key(p));
    return it == index.end() ? -1 : it->second;
  }
};

CoarseMesh build_from_grid(const LatticeModel& model, double element_size,
                           const std::vector<Rect>& fr_region, std::vector<double> xb,
                           std::vector<double> yb) {
  CoarseMesh mesh;
  mesh.element_size = element_size;
  mesh.x_bounds = std::move(xb);
  mesh.y_bounds = std::move(yb);
  const int ncx = mesh.cells_x();
  const int ncy = mesh.cells_y();
  mesh.cell_element.assign(static_cast<size_t>(ncx) * ncy, -1);

  const double tol = 1e-9 * std::max(model.pitch_x, model.pitch_y) * 100.0;
  NodeLookup lookup(model);

  // Keep cells whose open interior avoids every full-resolution rectangle.
  for (int cy = 0; cy < ncy; ++cy) {
    for (int cx = 0; cx < ncx; ++cx) {
      const Rect cell{Vec2(mesh.x_bounds[cx], mesh.y_bounds[cy]),
                      Vec2(mesh.x_bounds[cx + 1], mesh.y_bounds[cy + 1])};
      bool dropped = false;
      for (const auto& fr : fr_region) {
        if (fr.empty()) continue;
        const double ox = std::min(cell.hi.x(), fr.hi.x()) - std::max(cell.lo.x(), fr.lo.x());
        const double oy = std::min(cell.hi.y(), fr.hi.y()) - std::max(cell.lo.y(), fr.lo.y());
        if (ox > tol && oy > tol) {
          dropped = true;
          break;
        }
      }
      if (dropped) continue;

      QuadElement e;
      e.id = static_cast<int>(mesh.elements.size());
      e.bounds = cell;
      e.corner_positions = {Vec2(cell.lo.x(), cell.lo.y()), Vec2(cell.hi.x(), cell.lo.y()),
                            Vec2(cell.hi.x(), cell.hi.y()), Vec2(cell.lo.x(), cell.hi.y())};
      for (int k = 0; k < 4; ++k) {
        const int nid = lookup.find(e.corner_positions[k]);
        if (nid < 0 || (model.nodes[nid].position - e.corner_positions[k]).norm() > tol) {
          throw ConfigError("element corner does not coincide with a lattice node");
        }
        e.corner_rn_ids[k] = nid;
      }
      mesh.cell_element[mesh.cell_index(cx, cy)] = e.id;
      mesh.elements.push_back(std::move(e));
    }
  }

  // Ownership and roles. A node on a shared boundary goes to the kept cell
  // with the lowest element id; grid corners adjacent to a kept cell are IRNs.
  const int n_nodes = model.node_count();
  mesh.roles.assign(n_nodes, NodeRole::NIRN);
  mesh.owner.assign(n_nodes, -1);

  auto strip_candidates = [&](const std::vector<double>& bounds, double v, int& lo, int& hi) {
    lo = hi = -1;
    const int nc = static_cast<int>(bounds.size()) - 1;
    for (int i = 0; i < nc; ++i) {
      if (v >= bounds[i] - tol && v <= bounds[i + 1] + tol) {
        if (lo < 0) lo = i;
        hi = i;
      }
    }
  };
  auto on_any_bound = [&](const std::vector<double>& bounds, double v) {
    for (double b : bounds)
      if (std::abs(v - b) <= tol) return true;
    return false;
  };

  for (const auto& node : model.nodes) {
    int cx_lo, cx_hi, cy_lo, cy_hi;
    strip_candidates(mesh.x_bounds, node.position.x(), cx_lo, cx_hi);
    strip_candidates(mesh.y_bounds, node.position.y(), cy_lo, cy_hi);
    // Nodes on shared grid lines alternate owner by node parity so that the
    // owner-extension mismatches of neighboring line nodes cancel instead of
    // accumulating into the corner forces.
    const bool flip = ((std::lround(node.position.x() / model.pitch_x) +
                        std::lround(node.position.y() / model.pitch_y)) &
                       1) != 0;
    int own = -1;
    if (cx_lo >= 0 && cy_lo >= 0) {
      for (int cy = cy_lo; cy <= cy_hi; ++cy) {
        for (int cx = cx_lo; cx <= cx_hi; ++cx) {
          const int el = mesh.cell_kept(cx, cy) ? mesh.cell_element[mesh.cell_index(cx, cy)] : -1;
          if (el < 0) continue;
          if (own < 0 || (flip ? el > own : el < own)) own = el;
        }
      }
    }
    if (own < 0) continue;  // full-resolution node
    mesh.elements[own].member_nodes.push_back(node.id);
    const bool corner = on_any_bound(mesh.x_bounds, node.position.x()) &&
                        on_any_bound(mesh.y_bounds, node.position.y());
    if (corner) {
      mesh.roles[node.id] = NodeRole::IRN;
    } else {
      mesh.roles[node.id] = NodeRole::GN;
      mesh.owner[node.id] = own;
    }
  }

  for (int i = 0; i < n_nodes; ++i) {
    if (mesh.roles[i] != NodeRole::GN) mesh.rn_ids.push_back(i);
  }
  mesh.dof_map.node_to_rn.assign(n_nodes, -1);
  for (int k = 0; k < static_cast<int>(mesh.rn_ids.size()); ++k)
    mesh.dof_map.node_to_rn[mesh.rn_ids[k]] = k;
  mesh.dof_map.rn_to_node = mesh.rn_ids;
  return mesh;
}

}  // namespace

CoarseMesh build_coarse_mesh(const LatticeModel& model, double element_size,
                             const std::vector<Rect>& fr_region) {
  if (!(element_size > 0.0)) throw ConfigError("element size must be positive");
  const double width = model.bbox_max.x() - model.bbox_min.x();
  const double height = model.bbox_max.y() - model.bbox_min.y();

  const int cols = static_cast<int>(std::lround(width / model.pitch_x));
  std::vector<double> xb{model.bbox_min.x()};
  {
    const int nx = choose_strip_count(width, element_size, std::max(1, cols));
    double acc = model.bbox_min.x();
    for (int w : distribute_units(cols, nx)) {
      acc += w * model.pitch_x;
      xb.push_back(acc);
    }
  }

  std::vector<double> yb{model.bbox_min.y()};
  if (model.kind == LatticeKind::triangular) {
    // Horizontal boundaries must sit on even node rows so that corners exist
    // at every grid point (odd rows are offset by half a pitch).
    const int gaps = static_cast<int>(std::lround(height / model.pitch_y));
    if (gaps % 2 != 0) {
      throw ConfigError("triangular lattice needs an odd node-row count for coarse-graining");
    }
    const int pairs = gaps / 2;
    const int ny = choose_strip_count(height, element_size, std::max(1, pairs));
    double acc = model.bbox_min.y();
    for (int p : distribute_units(pairs, ny)) {
      acc += 2.0 * p * model.pitch_y;
      yb.push_back(acc);
    }
  } else {
    const int rows = static_cast<int>(std::lround(height / model.pitch_y));
    const int ny = choose_strip_count(height, element_size, std::max(1, rows));
    double acc = model.bbox_min.y();
    for (int h : distribute_units(rows, ny)) {
      acc += h * model.pitch_y;
      yb.push_back(acc);
    }
  }
  return build_from_grid(model, element_size, fr_region, std::move(xb), std::move(yb));
}

CoarseMesh build_coarse_mesh_explicit(const LatticeModel& model, double element_size,
                                      const std::vector<Rect>& fr_region,
                                      const std::vector<double>& x_bounds_mm,
                                      const std::vector<int>& y_bound_rows) {
  if (x_bounds_mm.size() < 2 || y_bound_rows.size() < 2) {
    throw ConfigError("explicit mesh boundaries need at least two entries per axis");
  }
  std::vector<double> yb;
  yb.reserve(y_bound_rows.size());
  for (int r : y_bound_rows) yb.push_back(model.bbox_min.y() + r * model.pitch_y);
  return build_from_grid(model, element_size, fr_region, x_bounds_mm, std::move(yb));
}

CoarseMesh make_full_resolution_mesh(const LatticeModel& model) {
  CoarseMesh mesh;
  mesh.roles.assign(model.node_count(), NodeRole::NIRN);
  mesh.owner.assign(model.node_count(), -1);
  mesh.rn_ids.resize(model.node_count());
  for (int i = 0; i < model.node_count(); ++i) mesh.rn_ids[i] = i;
  mesh.dof_map.node_to_rn = mesh.rn_ids;
  mesh.dof_map.rn_to_node = mesh.rn_ids;
  return mesh;
}

RoleCounts CoarseMesh::role_counts() const {
  RoleCounts c;
  for (NodeRole r : roles) {
    if (r == NodeRole::IRN) ++c.irn;
    else if (r == NodeRole::NIRN) ++c.nirn;
    else ++c.gn;
  }
  return c;
}

bool CoarseMesh::on_grid_line(const Vec2& p, double tol) const {
  for (double b : x_bounds)
    if (std::abs(p.x() - b) <= tol) return true;
  for (double b : y_bounds)
    if (std::abs(p.y() - b) <= tol) return true;
  return false;
}

RoleCounts classify_dof_roles(const CoarseMesh& mesh) { return mesh.role_counts(); }

Eigen::Vector4d bilinear_shape_eval(const QuadElement& element, const Vec2& point) {
  const double w = element.bounds.hi.x() - element.bounds.lo.x();
  const double h = element.bounds.hi.y() - element.bounds.lo.y();
  const double xi = (point.x() - element.bounds.lo.x()) / w;
  const double eta = (point.y() - element.bounds.lo.y()) / h;
  const double tol = 1e-9;
  if (xi < -tol || xi > 1.0 + tol || eta < -tol || eta > 1.0 + tol) {
    throw DomainError("bilinear shape evaluation outside element");
  }
  Eigen::Vector4d phi;
  phi << (1.0 - xi) * (1.0 - eta), xi * (1.0 - eta), xi * eta, (1.0 - xi) * eta;
  return phi;
}

Eigen::SparseMatrix<double> build_interpolation_matrix(const LatticeModel& model,
                                                       const CoarseMesh& mesh) {
  const int n = model.node_count();
  Eigen::SparseMatrix<double> P(2 * n, mesh.dof_map.dof_count());
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(2 * n) * 2);
  for (int i = 0; i < n; ++i) {
    if (mesh.roles[i] != NodeRole::GN) {
      for (int ax = 0; ax < 2; ++ax)
        trips.emplace_back(2 * i + ax, mesh.dof_map.dof(i, ax), 1.0);
    } else {
      const int el = mesh.owner[i];
      if (el < 0) throw DomainError("ghost node without owner element");
      const QuadElement& e = mesh.elements[el];
      const Eigen::Vector4d phi = bilinear_shape_eval(e, model.nodes[i].position);
      for (int k = 0; k < 4; ++k) {
        const int cn = e.corner_rn_ids[k];
        for (int ax = 0; ax < 2; ++ax)
          trips.emplace_back(2 * i + ax, mesh.dof_map.dof(cn, ax), phi[k]);
      }
    }
  }
  P.setFromTriplets(trips.begin(), trips.end());
  return P;
}

Eigen::VectorXd interpolate_full_field(const LatticeModel& model, const CoarseMesh& mesh,
                                       const Eigen::VectorXd& u_rn) {
  if (u_rn.size() != mesh.dof_map.dof_count()) {
    throw DomainError("RN displacement vector does not match the DOF map");
  }
  return build_interpolation_matrix(model, mesh) * u_rn;
}

void tag_regions(LatticeModel& model, const CoarseMesh& mesh) {
  for (auto& n : model.nodes) {
    n.region =
        mesh.roles[n.id] == NodeRole::NIRN ? Region::full_resolution : Region::coarse;
  }
}

}  // namespace gnqc
