#pragma once

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "gnqc/coarse_mesh.hpp"
#include "gnqc/lattice.hpp"

namespace gnqc {

/// Monomial basis spanning the node-wise energy of a bilinear element:
/// {1, x, y, x^2, y^2, xy}. Its size fixes the PSN count per element.
struct MonomialBasis {
  static constexpr int size = 6;
  static constexpr std::array<std::array<int, 2>, 6> exponents{
      {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {0, 2}, {1, 1}}};

  static Vec6 eval(const Vec2& p) {
    Vec6 m;
    m << 1.0, p.x(), p.y(), p.x() * p.x(), p.y() * p.y(), p.x() * p.y();
    return m;
  }
};

/// Six primary sampling nodes of one element together with the factorized
/// Vandermonde system used to evaluate the energy shape functions psi.
struct PsnSet {
  int element_id = -1;
  std::array<int, 6> node_ids{{-1, -1, -1, -1, -1, -1}};
  std::array<Vec2, 6> positions;
  double vandermonde_condition = 0.0;

  // psi is evaluated in a translated/scaled frame for conditioning; values
  // are invariant because the basis span is closed under affine maps.
  Vec2 center{0.0, 0.0};
  double scale = 1.0;
  Mat6 vandermonde;                  // A, rows = basis at PSNs (local frame)
  Eigen::PartialPivLU<Mat6> solver;  // factorization of A^T
};

/// Vandermonde matrix of Eq-style row layout: row i = basis monomials at
/// PSN i, evaluated in the local frame ((p - center) / scale).
Mat6 build_vandermonde(const std::array<Vec2, 6>& positions, const Vec2& center, double scale);

/// psi_1..psi_6 at a point: Kronecker delta at PSNs, partition of unity,
/// exact for any quadratic. Solves A^T c = m(point) (Cramer-equivalent).
Vec6 eval_psi(const PsnSet& psns, const Vec2& point);

enum class Scheme { FS, ESS, ISS, NAS, NSS };
enum class SamplingRole { PSN, SSN, NSN };
enum class PsnSelection { spread, perturbed };

Scheme scheme_from_string(const std::string& s);
const char* to_string(Scheme s);

/// Per-node sampling roles and weights for one mesh + scheme.
struct SamplingAssignment {
  Scheme scheme = Scheme::FS;
  std::vector<SamplingRole> roles;  // per lattice node
  Eigen::VectorXd weights;          // per lattice node; SSN 1, NSN 0
  std::vector<PsnSet> psn_sets;     // one per non-explicit element with PSNs
  std::vector<char> element_explicit;
  // Endpoint weight-0 half-shares of struts that cross into the
  // full-resolution region are kept explicit: the element phantom behind the
  // sampling weights can only represent in-element neighborhoods, and the
  // resolution interface must transfer force at full stiffness.
  std::vector<char> node_is_nirn;
  // The sampled phantom assumes every re-sampled node has the full lattice
  // coordination. Where neighbors are missing (domain boundary, notch
  // faces), this negative quadratic form over RN DOFs cancels the
  // nonexistent half-struts, evaluated on the element-extended field.
  Eigen::SparseMatrix<double> environment_correction;
  int negative_weight_count = 0;

  int sampling_node_count() const;  // |SSN| + |PSN|

  /// Energy scale of one strut: mean endpoint weight, with the explicit
  /// cross-interface half-share rule above.
  double strut_weight(const Strut& s) const {
    double ca = weights[s.a];
    double cb = weights[s.b];
    if (ca == 0.0 && node_is_nirn[s.b]) ca = 1.0;
    if (cb == 0.0 && node_is_nirn[s.a]) cb = 1.0;
    return 0.5 * (ca + cb);
  }
};

/// Deterministic PSN choice: candidates ranked by distance from the element
/// boundary, farthest-point spread seeded nearest the centroid, sets with a
/// Vandermonde condition above 1e8 rejected. Returns nullopt when fewer than
/// six eligible nodes exist or no well-conditioned set is found.
std::optional<PsnSet> select_primary_sampling_nodes(const LatticeModel& model,
                                                    const QuadElement& element,
                                                    const std::vector<int>& eligible,
                                                    PsnSelection mode);

/// Marks SSNs per scheme (every RN is always an SSN); PSNs and weights unset.
SamplingAssignment assign_sampling_scheme(const LatticeModel& model, const CoarseMesh& mesh,
                                          Scheme scheme);

/// Selects PSNs for every non-explicit element and fills the weights:
/// w_i = sum of psi_i over the element's non-SSN members; SSN weight 1,
/// NSN weight 0. Elements with fewer than six eligible nodes fall back to
/// explicit sampling (all members become SSNs).
void compute_sampling_weights(const LatticeModel& model, const CoarseMesh& mesh,
                              SamplingAssignment& assignment,
                              PsnSelection mode = PsnSelection::spread);

/// Convenience: roles + PSNs + weights in one call.
SamplingAssignment build_sampling(const LatticeModel& model, const CoarseMesh& mesh, Scheme scheme,
                                  PsnSelection mode = PsnSelection::spread);

}  // namespace gnqc
