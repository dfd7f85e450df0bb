#pragma once

#include <map>
#include <utility>
#include <vector>

#include <Eigen/SparseCore>

#include "gnqc/coarse_mesh.hpp"
#include "gnqc/sampling.hpp"

namespace gnqc {

/// Linear system over RN DOFs: sampled-energy Hessian, consistent loads and
/// Dirichlet constraints.
struct ReducedSystem {
  Eigen::SparseMatrix<double> stiffness;
  Eigen::VectorXd load;
  std::vector<std::pair<int, double>> constraints;  // (dof, prescribed value)
  DofMap dof_map;
};

struct Solution {
  Eigen::VectorXd u_rn;
  Eigen::VectorXd u_full;
  double total_energy = 0.0;
  std::map<int, double> reactions;  // constrained dof -> force
  double solver_residual = 0.0;
};

/// Weighted full-lattice stiffness: each live strut contributes
/// (EA/l) n n^T scaled by its sampling weight (mean of the endpoint
/// weights, cross-interface half-shares explicit).
Eigen::SparseMatrix<double> build_weighted_stiffness(const LatticeModel& model,
                                                     const SamplingAssignment& assignment);

/// K = P^T K_w P, the Hessian of the sampled energy over RN DOFs.
ReducedSystem assemble_reduced_stiffness(const LatticeModel& model, const CoarseMesh& mesh,
                                         const SamplingAssignment& assignment);

/// Sampled total energy: interpolate, then sum SSN energies plus weighted
/// PSN energies node-wise. Kept independent of the stiffness path.
double sampled_total_energy(const LatticeModel& model, const CoarseMesh& mesh,
                            const SamplingAssignment& assignment, const Eigen::VectorXd& u_rn);
double sampled_total_energy(const LatticeModel& model, const SamplingAssignment& assignment,
                            const Eigen::VectorXd& u_full);

/// Equilibrium residual -dU/du + P^T f_ext at every RN DOF.
Eigen::VectorXd residual_forces(const LatticeModel& model, const CoarseMesh& mesh,
                                const SamplingAssignment& assignment, const Eigen::VectorXd& u_rn,
                                const Eigen::VectorXd& external_loads_full);

/// Registers Dirichlet constraints (validated against the DOF map). The
/// numeric elimination happens inside solve_linear_static.
void apply_boundary_conditions(ReducedSystem& system,
                               const std::vector<std::pair<int, double>>& dirichlet);

/// Loads given on the full lattice partitioned to RN DOFs via the shape
/// functions (loads at RNs pass through unchanged).
Eigen::VectorXd reduce_loads(const LatticeModel& model, const CoarseMesh& mesh,
                             const Eigen::VectorXd& loads_full);

struct SolveOptions {
  double tolerance = 1e-10;  // relative residual on the free block
};

/// Direct sparse solve of the constrained system with the standard
/// free/constrained partition; reactions recovered as (K u) at constrained
/// DOFs. Falls back to an LU factorization when the LDLT rejects the
/// (possibly indefinite) free block.
Solution solve_linear_static(const LatticeModel& model, const CoarseMesh& mesh,
                             const SamplingAssignment& assignment, const ReducedSystem& system,
                             const SolveOptions& options = {});

/// Full-resolution reference: degenerate mesh, full sampling.
Solution solve_full_resolution(const LatticeModel& model,
                               const std::vector<std::pair<int, double>>& dirichlet,
                               const Eigen::VectorXd& external_loads_full,
                               const SolveOptions& options = {});

}  // namespace gnqc
