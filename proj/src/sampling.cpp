#include "gnqc/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/SVD>

#include "gnqc/log.hpp"

namespace gnqc {

constexpr std::array<std::array<int, 2>, 6> MonomialBasis::exponents;

Scheme scheme_from_string(const std::string& s) {
  if (s == "fs") return Scheme::FS;
  if (s == "ess") return Scheme::ESS;
  if (s == "iss") return Scheme::ISS;
  if (s == "nas") return Scheme::NAS;
  if (s == "nss") return Scheme::NSS;
  throw ConfigError("unknown sampling scheme: " + s);
}

const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::FS: return "fs";
    case Scheme::ESS: return "ess";
    case Scheme::ISS: return "iss";
    case Scheme::NAS: return "nas";
    case Scheme::NSS: return "nss";
  }
  return "?";
}

Mat6 build_vandermonde(const std::array<Vec2, 6>& positions, const Vec2& center, double scale) {
  for (int i = 0; i < 6; ++i) {
    for (int j = i + 1; j < 6; ++j) {
      if ((positions[i] - positions[j]).norm() < 1e-12 * std::max(1.0, scale)) {
        throw DomainError("duplicate primary sampling node positions");
      }
    }
  }
  Mat6 A;
  for (int i = 0; i < 6; ++i) {
    A.row(i) = MonomialBasis::eval((positions[i] - center) / scale).transpose();
  }
  return A;
}

Vec6 eval_psi(const PsnSet& psns, const Vec2& point) {
  const Vec6 m = MonomialBasis::eval((point - psns.center) / psns.scale);
  return psns.solver.solve(m);
}

int SamplingAssignment::sampling_node_count() const {
  int n = 0;
  for (SamplingRole r : roles)
    if (r != SamplingRole::NSN) ++n;
  return n;
}

namespace {

double condition_estimate(const Mat6& A) {
  Eigen::JacobiSVD<Mat6> svd(A);
  const double smin = svd.singularValues()(5);
  const double smax = svd.singularValues()(0);
  if (smin <= 0.0 || !std::isfinite(smin)) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

double boundary_distance(const QuadElement& e, const Vec2& p) {
  return std::min(std::min(p.x() - e.bounds.lo.x(), e.bounds.hi.x() - p.x()),
                  std::min(p.y() - e.bounds.lo.y(), e.bounds.hi.y() - p.y()));
}

// Farthest-point ordering over the candidate pool, seeded at the node
// nearest the element centroid. Ties resolve toward larger boundary
// distance, then lower node id.
std::vector<int> fps_order(const LatticeModel& model, const QuadElement& e,
                           const std::vector<int>& pool) {
  const Vec2 centroid = 0.5 * (e.bounds.lo + e.bounds.hi);
  std::vector<int> order;
  std::vector<char> used(pool.size(), 0);
  order.reserve(pool.size());

  auto pick_seed = [&]() {
    int best = -1;
    double best_d = std::numeric_limits<double>::max();
    for (size_t k = 0; k < pool.size(); ++k) {
      const double d = (model.nodes[pool[k]].position - centroid).norm();
      if (d < best_d - 1e-12 ||
          (std::abs(d - best_d) <= 1e-12 && (best < 0 || pool[k] < pool[best]))) {
        best = static_cast<int>(k);
        best_d = d;
      }
    }
    return best;
  };

  int seed = pick_seed();
  used[seed] = 1;
  order.push_back(pool[seed]);

  std::vector<double> min_dist(pool.size(), std::numeric_limits<double>::max());
  while (order.size() < pool.size()) {
    for (size_t k = 0; k < pool.size(); ++k) {
      if (used[k]) continue;
      const double d = (model.nodes[pool[k]].position - model.nodes[order.back()].position).norm();
      min_dist[k] = std::min(min_dist[k], d);
    }
    int best = -1;
    for (size_t k = 0; k < pool.size(); ++k) {
      if (used[k]) continue;
      if (best < 0) {
        best = static_cast<int>(k);
        continue;
      }
      const double db = min_dist[best];
      const double dk = min_dist[k];
      if (dk > db + 1e-12) {
        best = static_cast<int>(k);
      } else if (std::abs(dk - db) <= 1e-12) {
        const double bb = boundary_distance(e, model.nodes[pool[best]].position);
        const double bk = boundary_distance(e, model.nodes[pool[k]].position);
        if (bk > bb + 1e-12 || (std::abs(bk - bb) <= 1e-12 && pool[k] < pool[best]))
          best = static_cast<int>(k);
      }
    }
    used[best] = 1;
    order.push_back(pool[best]);
  }
  return order;
}

PsnSet make_psn_set(const LatticeModel& model, const QuadElement& e,
                    const std::array<int, 6>& ids) {
  PsnSet set;
  set.element_id = e.id;
  set.node_ids = ids;
  for (int i = 0; i < 6; ++i) set.positions[i] = model.nodes[ids[i]].position;
  set.center = 0.5 * (e.bounds.lo + e.bounds.hi);
  set.scale = 0.5 * std::max(e.bounds.hi.x() - e.bounds.lo.x(),
                             e.bounds.hi.y() - e.bounds.lo.y());
  set.vandermonde = build_vandermonde(set.positions, set.center, set.scale);
  set.vandermonde_condition = condition_estimate(set.vandermonde);
  set.solver.compute(set.vandermonde.transpose());
  return set;
}

}  // namespace

std::optional<PsnSet> select_primary_sampling_nodes(const LatticeModel& model,
                                                    const QuadElement& element,
                                                    const std::vector<int>& eligible,
                                                    PsnSelection mode) {
  if (eligible.size() < 6) return std::nullopt;

  // Prefer candidates deep enough that their whole neighborhood lies in the
  // element; the energy of such nodes follows the element's quadratic.
  const double deep = 1.0001 * std::max(model.pitch_x, model.pitch_y);
  std::vector<int> pool;
  for (int id : eligible) {
    if (boundary_distance(element, model.nodes[id].position) >= deep) pool.push_back(id);
  }
  if (pool.size() < 6) pool = eligible;

  std::vector<int> order = fps_order(model, element, pool);
  if (mode == PsnSelection::perturbed && order.size() > 6) {
    order.erase(order.begin());  // drop the seed, forcing a distinct set
    order = fps_order(model, element, order);
  }

  const int k = std::min<int>(static_cast<int>(order.size()), 14);
  std::array<int, 6> comb{{0, 1, 2, 3, 4, 5}};
  int attempts = 0;
  while (attempts < 2000) {
    ++attempts;
    std::array<int, 6> ids;
    for (int i = 0; i < 6; ++i) ids[i] = order[comb[i]];
    PsnSet set = make_psn_set(model, element, ids);
    if (set.vandermonde_condition <= 1e8) return set;

    // advance to the next lexicographic 6-combination of [0, k)
    int i = 5;
    while (i >= 0 && comb[i] == k - 6 + i) --i;
    if (i < 0) break;
    ++comb[i];
    for (int j = i + 1; j < 6; ++j) comb[j] = comb[j - 1] + 1;
  }
  return std::nullopt;
}

namespace {

// Does any node on this edge segment connect to a full-resolution node?
bool edge_touches_full_resolution(const LatticeModel& model, const CoarseMesh& mesh,
                                  const std::vector<int>& edge_nodes) {
  for (int id : edge_nodes) {
    for (int sid : model.adjacency[id]) {
      const Strut& s = model.struts[sid];
      if (!s.alive) continue;
      const int other = s.a == id ? s.b : s.a;
      if (mesh.roles[other] == NodeRole::NIRN) return true;
    }
  }
  return false;
}

}  // namespace

SamplingAssignment assign_sampling_scheme(const LatticeModel& model, const CoarseMesh& mesh,
                                          Scheme scheme) {
  SamplingAssignment a;
  a.scheme = scheme;
  a.roles.assign(model.node_count(), SamplingRole::NSN);
  a.element_explicit.assign(mesh.elements.size(), 0);
  a.node_is_nirn.assign(model.node_count(), 0);
  for (int i = 0; i < model.node_count(); ++i) {
    if (mesh.roles[i] != NodeRole::GN) a.roles[i] = SamplingRole::SSN;  // every RN
    if (mesh.roles[i] == NodeRole::NIRN) a.node_is_nirn[i] = 1;
  }

  const double tol = 1e-7 * std::max(model.pitch_x, model.pitch_y);
  switch (scheme) {
    case Scheme::FS:
      for (int i = 0; i < model.node_count(); ++i) a.roles[i] = SamplingRole::SSN;
      break;
    case Scheme::ESS:
      for (int i = 0; i < model.node_count(); ++i) {
        if (mesh.roles[i] == NodeRole::GN &&
            mesh.on_grid_line(model.nodes[i].position, tol))
          a.roles[i] = SamplingRole::SSN;
      }
      break;
    case Scheme::ISS: {
      // Secondary sampling only on element edges abutting the full-resolution
      // region: the cell across the edge was dropped, or a node on the edge
      // has a strut into the full-resolution region.
      for (int cy = 0; cy < mesh.cells_y(); ++cy) {
        for (int cx = 0; cx < mesh.cells_x(); ++cx) {
          if (!mesh.cell_kept(cx, cy)) continue;
          const QuadElement& e = mesh.elements[mesh.cell_element[mesh.cell_index(cx, cy)]];
          struct EdgeSpec {
            int dx, dy;
            bool vertical;
            double line;
          };
          const std::array<EdgeSpec, 4> edges{{{-1, 0, true, e.bounds.lo.x()},
                                               {+1, 0, true, e.bounds.hi.x()},
                                               {0, -1, false, e.bounds.lo.y()},
                                               {0, +1, false, e.bounds.hi.y()}}};
          for (const auto& ed : edges) {
            std::vector<int> edge_gns;
            for (int id = 0; id < model.node_count(); ++id) {
              if (mesh.roles[id] != NodeRole::GN) continue;
              const Vec2& p = model.nodes[id].position;
              const bool on_line = ed.vertical ? std::abs(p.x() - ed.line) <= tol
                                               : std::abs(p.y() - ed.line) <= tol;
              if (!on_line) continue;
              const bool in_span = ed.vertical
                                       ? (p.y() >= e.bounds.lo.y() - tol &&
                                          p.y() <= e.bounds.hi.y() + tol)
                                       : (p.x() >= e.bounds.lo.x() - tol &&
                                          p.x() <= e.bounds.hi.x() + tol);
              if (in_span) edge_gns.push_back(id);
            }
            const int ncx = cx + ed.dx, ncy = cy + ed.dy;
            const bool neighbor_in_grid = ncx >= 0 && ncy >= 0 && ncx < mesh.cells_x() &&
                                          ncy < mesh.cells_y();
            const bool abuts_dropped = neighbor_in_grid && !mesh.cell_kept(ncx, ncy);
            if (abuts_dropped || edge_touches_full_resolution(model, mesh, edge_gns)) {
              for (int id : edge_gns) a.roles[id] = SamplingRole::SSN;
            }
          }
        }
      }
      break;
    }
    case Scheme::NAS:
      for (int i = 0; i < model.node_count(); ++i) {
        if (mesh.roles[i] != NodeRole::GN) continue;
        for (int sid : model.adjacency[i]) {
          const Strut& s = model.struts[sid];
          if (!s.alive) continue;
          const int other = s.a == i ? s.b : s.a;
          if (mesh.roles[other] != NodeRole::GN) {
            a.roles[i] = SamplingRole::SSN;
            break;
          }
        }
      }
      break;
    case Scheme::NSS:
      break;
  }
  return a;
}

void compute_sampling_weights(const LatticeModel& model, const CoarseMesh& mesh,
                              SamplingAssignment& a, PsnSelection mode) {
  a.psn_sets.clear();
  a.negative_weight_count = 0;

  if (a.scheme != Scheme::FS) {
    for (const auto& e : mesh.elements) {
      std::vector<int> eligible;
      for (int id : e.member_nodes)
        if (a.roles[id] == SamplingRole::NSN) eligible.push_back(id);
      if (eligible.empty()) continue;
      auto set = select_primary_sampling_nodes(model, e, eligible, mode);
      if (!set) {
        a.element_explicit[e.id] = 1;
        for (int id : eligible) a.roles[id] = SamplingRole::SSN;
        log::warn("element " + std::to_string(e.id) +
                  ": no usable primary sampling set, sampling all members explicitly");
        continue;
      }
      for (int id : set->node_ids) a.roles[id] = SamplingRole::PSN;
      a.psn_sets.push_back(std::move(*set));
    }
  }

  a.weights = Eigen::VectorXd::Zero(model.node_count());
  for (int i = 0; i < model.node_count(); ++i) {
    if (a.roles[i] == SamplingRole::SSN) a.weights[i] = 1.0;
  }
  for (const auto& set : a.psn_sets) {
    const QuadElement& e = mesh.elements[set.element_id];
    Vec6 w = Vec6::Zero();
    for (int id : e.member_nodes) {
      if (a.roles[id] == SamplingRole::SSN) continue;  // no re-sampling of SSNs
      w += eval_psi(set, model.nodes[id].position);
    }
    for (int i = 0; i < 6; ++i) {
      a.weights[set.node_ids[i]] = w[i];
      if (w[i] < 0.0) ++a.negative_weight_count;
    }
  }
  if (a.negative_weight_count > 0) {
    log::warn(std::to_string(a.negative_weight_count) +
              " negative primary sampling weights; the reduced system may be indefinite");
  }

  // Cancel the phantom half-struts the weights implicitly assign to
  // re-sampled nodes with incomplete neighborhoods (domain boundaries,
  // notch faces). Quadratic form over the owner element's corner DOFs,
  // using the element-extended bilinear field.
  const auto offsets = coordination_offsets(model.kind, model.bracing,
                                            model.material.strut_length);
  const double match_tol = 1e-6 * model.material.strut_length;
  std::vector<Eigen::Triplet<double>> ctrips;
  auto phi_extended = [](const QuadElement& e, const Vec2& p) {
    const double xi = (p.x() - e.bounds.lo.x()) / (e.bounds.hi.x() - e.bounds.lo.x());
    const double eta = (p.y() - e.bounds.lo.y()) / (e.bounds.hi.y() - e.bounds.lo.y());
    Eigen::Vector4d phi;
    phi << (1.0 - xi) * (1.0 - eta), xi * (1.0 - eta), xi * eta, (1.0 - xi) * eta;
    return phi;
  };
  for (const auto& e : mesh.elements) {
    for (int id : e.member_nodes) {
      if (a.roles[id] == SamplingRole::SSN) continue;  // explicit, no phantom
      for (const Vec2& C : offsets) {
        bool present = false;
        for (int sid : model.adjacency[id]) {
          const Strut& s = model.struts[sid];
          if (!s.alive) continue;
          const Vec2 off = s.a == id ? Vec2(s.offset) : Vec2(-s.offset);
          if ((off - C).norm() <= match_tol) {
            present = true;
            break;
          }
        }
        if (present) continue;
        const double k =
            model.material.young_modulus * model.material.cross_section / C.norm();
        const Vec2 nh = C / C.norm();
        const Vec2 r = model.nodes[id].position;
        const Eigen::Vector4d dphi = phi_extended(e, r + C) - phi_extended(e, r);
        for (int ci = 0; ci < 4; ++ci) {
          for (int cj = 0; cj < 4; ++cj) {
            const double g = dphi[ci] * dphi[cj];
            if (g == 0.0) continue;
            for (int xi = 0; xi < 2; ++xi) {
              for (int xj = 0; xj < 2; ++xj) {
                ctrips.emplace_back(mesh.dof_map.dof(e.corner_rn_ids[ci], xi),
                                    mesh.dof_map.dof(e.corner_rn_ids[cj], xj),
                                    -0.5 * k * g * nh[xi] * nh[xj]);
              }
            }
          }
        }
      }
    }
  }
  a.environment_correction.resize(mesh.dof_map.dof_count(), mesh.dof_map.dof_count());
  a.environment_correction.setFromTriplets(ctrips.begin(), ctrips.end());
}

SamplingAssignment build_sampling(const LatticeModel& model, const CoarseMesh& mesh, Scheme scheme,
                                  PsnSelection mode) {
  SamplingAssignment a = assign_sampling_scheme(model, mesh, scheme);
  compute_sampling_weights(model, mesh, a, mode);
  return a;
}

}  // namespace gnqc
