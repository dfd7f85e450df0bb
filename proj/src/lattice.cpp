#include "gnqc/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gnqc/log.hpp"

namespace gnqc {

void Material::validate() const {
  if (!(young_modulus > 0.0) || !(yield_stress > 0.0) || !(strut_length > 0.0) ||
      !(cross_section > 0.0)) {
    throw DomainError("material constants must be strictly positive");
  }
}

int LatticeModel::live_strut_count() const {
  int n = 0;
  for (const auto& s : struts)
    if (s.alive) ++n;
  return n;
}

std::vector<int> LatticeModel::nodes_with_tag(const std::string& tag) const {
  std::vector<int> out;
  for (const auto& n : nodes)
    if (n.boundary_sets.count(tag)) out.push_back(n.id);
  return out;
}

int LatticeModel::nearest_node(const Vec2& p, double max_dist) const {
  int best = -1;
  double best_d = max_dist;
  for (const auto& n : nodes) {
    double d = (n.position - p).norm();
    if (d <= best_d) {
      best_d = d;
      best = n.id;
    }
  }
  return best;
}

namespace {

void add_strut(LatticeModel& m, int a, int b) {
  if (a > b) std::swap(a, b);
  Strut s;
  s.id = static_cast<int>(m.struts.size());
  s.a = a;
  s.b = b;
  s.offset = m.nodes[b].position - m.nodes[a].position;
  s.rest_length = s.offset.norm();
  s.direction = s.offset / s.rest_length;
  m.struts.push_back(s);
}

void rebuild_adjacency(LatticeModel& m) {
  m.adjacency.assign(m.nodes.size(), {});
  for (const auto& s : m.struts) {
    m.adjacency[s.a].push_back(s.id);
    m.adjacency[s.b].push_back(s.id);
  }
}

void compute_bbox(LatticeModel& m) {
  Vec2 lo(std::numeric_limits<double>::max(), std::numeric_limits<double>::max());
  Vec2 hi = -lo;
  for (const auto& n : m.nodes) {
    lo = lo.cwiseMin(n.position);
    hi = hi.cwiseMax(n.position);
  }
  m.bbox_min = lo;
  m.bbox_max = hi;
}

void tag_extremes(LatticeModel& m) {
  const double tol = 1e-9 * std::max(1.0, (m.bbox_max - m.bbox_min).norm());
  for (auto& n : m.nodes) {
    if (std::abs(n.position.y() - m.bbox_min.y()) <= tol) n.boundary_sets.insert("bottom");
    if (std::abs(n.position.y() - m.bbox_max.y()) <= tol) n.boundary_sets.insert("top");
    if (std::abs(n.position.x() - m.bbox_min.x()) <= tol) n.boundary_sets.insert("left");
    if (std::abs(n.position.x() - m.bbox_max.x()) <= tol) n.boundary_sets.insert("right");
  }
}

}  // namespace

std::vector<Vec2> coordination_offsets(LatticeKind kind, Bracing bracing, double l0) {
  std::vector<Vec2> offsets;
  if (kind == LatticeKind::square) {
    offsets = {Vec2(l0, 0), Vec2(-l0, 0), Vec2(0, l0), Vec2(0, -l0)};
    if (bracing == Bracing::x_braced) {
      offsets.insert(offsets.end(),
                     {Vec2(l0, l0), Vec2(-l0, l0), Vec2(l0, -l0), Vec2(-l0, -l0)});
    }
  } else {
    const double h = 0.5 * std::sqrt(3.0) * l0;
    offsets = {Vec2(l0, 0),        Vec2(-l0, 0),      Vec2(0.5 * l0, h),
               Vec2(-0.5 * l0, h), Vec2(0.5 * l0, -h), Vec2(-0.5 * l0, -h)};
  }
  return offsets;
}

LatticeModel generate_square_lattice(int nx, int ny, double l0, Bracing bracing) {
  if (nx < 1 || ny < 1 || !(l0 > 0.0)) {
    throw DomainError("square lattice requires nx, ny >= 1 and l0 > 0");
  }
  LatticeModel m;
  m.kind = LatticeKind::square;
  m.bracing = bracing;
  m.material.strut_length = l0;
  m.pitch_x = l0;
  m.pitch_y = l0;
  m.nodes.reserve(static_cast<size_t>(nx + 1) * (ny + 1));
  for (int iy = 0; iy <= ny; ++iy) {
    for (int ix = 0; ix <= nx; ++ix) {
      LatticeNode n;
      n.id = iy * (nx + 1) + ix;
      n.position = Vec2(ix * l0, iy * l0);
      m.nodes.push_back(n);
    }
  }
  auto id = [nx](int ix, int iy) { return iy * (nx + 1) + ix; };
  for (int iy = 0; iy <= ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) add_strut(m, id(ix, iy), id(ix + 1, iy));
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix <= nx; ++ix) add_strut(m, id(ix, iy), id(ix, iy + 1));
  if (bracing == Bracing::x_braced) {
    for (int iy = 0; iy < ny; ++iy) {
      for (int ix = 0; ix < nx; ++ix) {
        add_strut(m, id(ix, iy), id(ix + 1, iy + 1));
        add_strut(m, id(ix + 1, iy), id(ix, iy + 1));
      }
    }
  }
  rebuild_adjacency(m);
  compute_bbox(m);
  tag_extremes(m);
  return m;
}

LatticeModel generate_triangular_lattice(int width_cells, int height_rows, double l0) {
  if (width_cells < 1 || height_rows < 1 || !(l0 > 0.0)) {
    throw DomainError("triangular lattice requires width_cells, height_rows >= 1 and l0 > 0");
  }
  const double row_h = 0.5 * std::sqrt(3.0) * l0;
  LatticeModel m;
  m.kind = LatticeKind::triangular;
  m.material.strut_length = l0;
  m.pitch_x = l0;
  m.pitch_y = row_h;

  // Even rows carry width_cells+1 nodes, odd rows width_cells nodes shifted by l0/2.
  std::vector<int> row_start(height_rows + 1, 0);
  for (int r = 0; r < height_rows; ++r) {
    const int count = (r % 2 == 0) ? width_cells + 1 : width_cells;
    row_start[r + 1] = row_start[r] + count;
    for (int c = 0; c < count; ++c) {
      LatticeNode n;
      n.id = row_start[r] + c;
      const double x0 = (r % 2 == 0) ? 0.0 : 0.5 * l0;
      n.position = Vec2(x0 + c * l0, r * row_h);
      m.nodes.push_back(n);
    }
  }

  auto row_count = [&](int r) { return (r % 2 == 0) ? width_cells + 1 : width_cells; };
  for (int r = 0; r < height_rows; ++r) {
    for (int c = 0; c + 1 < row_count(r); ++c)
      add_strut(m, row_start[r] + c, row_start[r] + c + 1);
  }
  for (int r = 0; r + 1 < height_rows; ++r) {
    // The odd row of the pair indexes the diagonals: odd node j pairs with
    // even nodes j and j+1 in the adjacent row.
    if (r % 2 == 0) {
      for (int j = 0; j < row_count(r + 1); ++j) {
        add_strut(m, row_start[r + 1] + j, row_start[r] + j);
        add_strut(m, row_start[r + 1] + j, row_start[r] + j + 1);
      }
    } else {
      for (int j = 0; j < row_count(r); ++j) {
        add_strut(m, row_start[r] + j, row_start[r + 1] + j);
        add_strut(m, row_start[r] + j, row_start[r + 1] + j + 1);
      }
    }
  }
  rebuild_adjacency(m);
  compute_bbox(m);
  tag_extremes(m);
  return m;
}

namespace {

// Liang-Barsky clip of segment p->q against the closed rectangle; returns the
// parameter interval of the intersection, or an empty interval.
bool clip_segment(const Rect& r, const Vec2& p, const Vec2& q, double& t0, double& t1) {
  t0 = 0.0;
  t1 = 1.0;
  const Vec2 d = q - p;
  for (int axis = 0; axis < 2; ++axis) {
    const double lo = r.lo[axis], hi = r.hi[axis];
    if (std::abs(d[axis]) < 1e-300) {
      if (p[axis] < lo || p[axis] > hi) return false;
      continue;
    }
    double ta = (lo - p[axis]) / d[axis];
    double tb = (hi - p[axis]) / d[axis];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return false;
  }
  return true;
}

}  // namespace

CarveResult carve_notch(const LatticeModel& model, const Rect& notch) {
  CarveResult result;
  result.old_to_new.assign(model.nodes.size(), -1);

  std::vector<char> node_removed(model.nodes.size(), 0);
  if (!notch.empty()) {
    for (const auto& n : model.nodes)
      if (notch.contains_open(n.position)) node_removed[n.id] = 1;
  }

  LatticeModel out;
  out.kind = model.kind;
  out.material = model.material;
  out.pitch_x = model.pitch_x;
  out.pitch_y = model.pitch_y;
  int next = 0;
  for (const auto& n : model.nodes) {
    if (node_removed[n.id]) continue;
    result.old_to_new[n.id] = next;
    LatticeNode nn = n;
    nn.id = next++;
    out.nodes.push_back(nn);
  }

  for (const auto& s : model.struts) {
    if (node_removed[s.a] || node_removed[s.b]) continue;
    if (!notch.empty()) {
      double t0, t1;
      const Vec2& pa = model.nodes[s.a].position;
      const Vec2& pb = model.nodes[s.b].position;
      if (clip_segment(notch, pa, pb, t0, t1) && t1 - t0 > 1e-12) {
        const Vec2 mid = pa + 0.5 * (t0 + t1) * (pb - pa);
        if (notch.contains_open(mid)) continue;  // crosses the open interior
      }
    }
    Strut ns = s;
    ns.id = static_cast<int>(out.struts.size());
    ns.a = result.old_to_new[s.a];
    ns.b = result.old_to_new[s.b];
    out.struts.push_back(ns);
  }

  rebuild_adjacency(out);
  compute_bbox(out);
  result.model = std::move(out);
  return result;
}

double strut_elongation(const LatticeModel& model, const Strut& strut, const Eigen::VectorXd& u) {
  if (!strut.alive) throw DomainError("elongation requested for a dead strut");
  const Vec2 du = node_disp(u, strut.b) - node_disp(u, strut.a);
  return du.dot(strut.direction);
}

double strut_axial_stress(const LatticeModel& model, const Strut& strut, const Eigen::VectorXd& u) {
  const double e = strut_elongation(model, strut, u);
  return model.material.young_modulus * e / strut.rest_length;
}

double strut_energy(const LatticeModel& model, const Strut& strut, const Eigen::VectorXd& u) {
  const double e = strut_elongation(model, strut, u);
  const double k = model.material.young_modulus * model.material.cross_section / strut.rest_length;
  return 0.5 * k * e * e;
}

double node_energy(const LatticeModel& model, int node, const Eigen::VectorXd& u) {
  double acc = 0.0;
  for (int sid : model.adjacency[node]) {
    const Strut& s = model.struts[sid];
    if (!s.alive) continue;
    acc += 0.5 * strut_energy(model, s, u);
  }
  return acc;
}

double total_lattice_energy(const LatticeModel& model, const Eigen::VectorXd& u) {
  double acc = 0.0;
  for (int i = 0; i < model.node_count(); ++i) acc += node_energy(model, i, u);
  return acc;
}

}  // namespace gnqc
