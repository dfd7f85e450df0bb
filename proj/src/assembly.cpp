#include "gnqc/assembly.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "gnqc/log.hpp"

namespace gnqc {

Eigen::SparseMatrix<double> build_weighted_stiffness(const LatticeModel& model,
                                                     const SamplingAssignment& assignment) {
  const int n = model.node_count();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(model.struts.size() * 16);
  for (const auto& s : model.struts) {
    if (!s.alive) continue;
    const double w = assignment.strut_weight(s);
    if (w == 0.0) continue;
    const double k =
        w * model.material.young_modulus * model.material.cross_section / s.rest_length;
    const Vec2 nh = s.direction;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        const double kij = k * nh[i] * nh[j];
        trips.emplace_back(2 * s.a + i, 2 * s.a + j, kij);
        trips.emplace_back(2 * s.b + i, 2 * s.b + j, kij);
        trips.emplace_back(2 * s.a + i, 2 * s.b + j, -kij);
        trips.emplace_back(2 * s.b + i, 2 * s.a + j, -kij);
      }
    }
  }
  Eigen::SparseMatrix<double> K(2 * n, 2 * n);
  K.setFromTriplets(trips.begin(), trips.end());
  return K;
}

ReducedSystem assemble_reduced_stiffness(const LatticeModel& model, const CoarseMesh& mesh,
                                         const SamplingAssignment& assignment) {
  ReducedSystem sys;
  sys.dof_map = mesh.dof_map;
  const Eigen::SparseMatrix<double> Kw = build_weighted_stiffness(model, assignment);
  const Eigen::SparseMatrix<double> P = build_interpolation_matrix(model, mesh);
  sys.stiffness = P.transpose() * Kw * P;
  if (assignment.environment_correction.nonZeros() > 0) {
    sys.stiffness = sys.stiffness + assignment.environment_correction;
  }
  sys.stiffness.prune(0.0);
  sys.load = Eigen::VectorXd::Zero(sys.stiffness.rows());
  return sys;
}

double sampled_total_energy(const LatticeModel& model, const SamplingAssignment& assignment,
                            const Eigen::VectorXd& u_full) {
  double acc = 0.0;
  for (const auto& s : model.struts) {
    if (!s.alive) continue;
    const double w = assignment.strut_weight(s);
    if (w == 0.0) continue;
    acc += w * strut_energy(model, s, u_full);
  }
  return acc;
}

double sampled_total_energy(const LatticeModel& model, const CoarseMesh& mesh,
                            const SamplingAssignment& assignment, const Eigen::VectorXd& u_rn) {
  double acc = sampled_total_energy(model, assignment, interpolate_full_field(model, mesh, u_rn));
  if (assignment.environment_correction.nonZeros() > 0) {
    acc += 0.5 * u_rn.dot(assignment.environment_correction * u_rn);
  }
  return acc;
}

Eigen::VectorXd residual_forces(const LatticeModel& model, const CoarseMesh& mesh,
                                const SamplingAssignment& assignment, const Eigen::VectorXd& u_rn,
                                const Eigen::VectorXd& external_loads_full) {
  const ReducedSystem sys = assemble_reduced_stiffness(model, mesh, assignment);
  Eigen::VectorXd r = -(sys.stiffness * u_rn);
  if (external_loads_full.size() > 0) r += reduce_loads(model, mesh, external_loads_full);
  return r;
}

Eigen::VectorXd reduce_loads(const LatticeModel& model, const CoarseMesh& mesh,
                             const Eigen::VectorXd& loads_full) {
  if (loads_full.size() != 2 * model.node_count()) {
    throw DomainError("external load vector does not match the lattice");
  }
  const Eigen::SparseMatrix<double> P = build_interpolation_matrix(model, mesh);
  return P.transpose() * loads_full;
}

void apply_boundary_conditions(ReducedSystem& system,
                               const std::vector<std::pair<int, double>>& dirichlet) {
  for (const auto& [dof, value] : dirichlet) {
    if (dof < 0 || dof >= system.stiffness.rows()) {
      throw DomainError("Dirichlet DOF " + std::to_string(dof) + " is not an RN DOF");
    }
    (void)value;
  }
  system.constraints = dirichlet;
}

namespace {

struct Partition {
  std::vector<int> free_of_full;   // full dof -> free index or -1
  std::vector<int> cons_of_full;   // full dof -> constrained index or -1
  std::vector<int> full_of_free;
  std::vector<int> full_of_cons;
  Eigen::VectorXd u_cons;
};

Partition make_partition(const ReducedSystem& sys) {
  const int n = static_cast<int>(sys.stiffness.rows());
  Partition p;
  p.free_of_full.assign(n, -1);
  p.cons_of_full.assign(n, -1);
  std::vector<double> value(n, 0.0);
  std::vector<char> is_cons(n, 0);
  for (const auto& [dof, v] : sys.constraints) {
    if (is_cons[dof] && value[dof] != v) {
      throw DomainError("conflicting prescribed values at DOF " + std::to_string(dof));
    }
    is_cons[dof] = 1;
    value[dof] = v;
  }
  for (int i = 0; i < n; ++i) {
    if (is_cons[i]) {
      p.cons_of_full[i] = static_cast<int>(p.full_of_cons.size());
      p.full_of_cons.push_back(i);
    } else {
      p.free_of_full[i] = static_cast<int>(p.full_of_free.size());
      p.full_of_free.push_back(i);
    }
  }
  p.u_cons.resize(p.full_of_cons.size());
  for (size_t k = 0; k < p.full_of_cons.size(); ++k) p.u_cons[k] = value[p.full_of_cons[k]];
  return p;
}

}  // namespace

Solution solve_linear_static(const LatticeModel& model, const CoarseMesh& mesh,
                             const SamplingAssignment& assignment, const ReducedSystem& system,
                             const SolveOptions& options) {
  const int n = static_cast<int>(system.stiffness.rows());
  const Partition part = make_partition(system);
  const int nf = static_cast<int>(part.full_of_free.size());

  // Extract K_ff and K_fc in one sweep over the nonzeros.
  std::vector<Eigen::Triplet<double>> ff, fc;
  for (int col = 0; col < system.stiffness.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(system.stiffness, col); it; ++it) {
      const int fi = part.free_of_full[it.row()];
      if (fi < 0) continue;
      const int fj = part.free_of_full[it.col()];
      if (fj >= 0) {
        ff.emplace_back(fi, fj, it.value());
      } else {
        fc.emplace_back(fi, part.cons_of_full[it.col()], it.value());
      }
    }
  }
  Eigen::SparseMatrix<double> Kff(nf, nf);
  Kff.setFromTriplets(ff.begin(), ff.end());
  Eigen::SparseMatrix<double> Kfc(nf, part.full_of_cons.size());
  Kfc.setFromTriplets(fc.begin(), fc.end());

  Eigen::VectorXd f_free(nf);
  for (int k = 0; k < nf; ++k) f_free[k] = system.load[part.full_of_free[k]];
  f_free -= Kfc * part.u_cons;

  Eigen::VectorXd u_free = Eigen::VectorXd::Zero(nf);
  double residual = 0.0;
  if (nf > 0) {
    const double fnorm = f_free.norm();
    if (fnorm > 0.0) {
      bool solved = false;
      Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(Kff);
      if (ldlt.info() == Eigen::Success) {
        u_free = ldlt.solve(f_free);
        residual = (Kff * u_free - f_free).norm() / fnorm;
        solved = residual <= options.tolerance;
      }
      if (!solved) {
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(Kff);
        if (lu.info() == Eigen::Success) {
          u_free = lu.solve(f_free);
          residual = (Kff * u_free - f_free).norm() / fnorm;
          solved = residual <= options.tolerance;
        }
      }
      if (!solved) {
        // Positive semidefinite free blocks with a consistent right-hand
        // side (zero-energy mechanisms never excited by the loading) still
        // admit the minimum-norm Krylov solution.
        Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper>
            cg(Kff);
        cg.setTolerance(0.1 * options.tolerance);
        cg.setMaxIterations(20 * Kff.rows());
        u_free = cg.solve(f_free);
        residual = (Kff * u_free - f_free).norm() / fnorm;
        if (residual <= options.tolerance) {
          log::warn("free block is singular; using the minimum-norm Krylov solution");
          solved = true;
        }
      }
      if (!solved) {
        std::string msg = "linear solve failed at relative residual " +
                          std::to_string(residual) + " (structure may be severed)";
        if (assignment.negative_weight_count > 0) {
          msg += "; note: " + std::to_string(assignment.negative_weight_count) +
                 " negative sampling weights present";
        }
        throw SolverError(msg);
      }
    }
  }

  Solution sol;
  sol.u_rn = Eigen::VectorXd::Zero(n);
  for (int k = 0; k < nf; ++k) sol.u_rn[part.full_of_free[k]] = u_free[k];
  for (size_t k = 0; k < part.full_of_cons.size(); ++k)
    sol.u_rn[part.full_of_cons[k]] = part.u_cons[k];
  sol.solver_residual = residual;

  const Eigen::VectorXd Ku = system.stiffness * sol.u_rn;
  for (int full : part.full_of_cons) sol.reactions[full] = Ku[full];

  sol.u_full = interpolate_full_field(model, mesh, sol.u_rn);
  sol.total_energy = sampled_total_energy(model, assignment, sol.u_full);
  if (assignment.environment_correction.nonZeros() > 0) {
    sol.total_energy += 0.5 * sol.u_rn.dot(assignment.environment_correction * sol.u_rn);
  }
  return sol;
}

Solution solve_full_resolution(const LatticeModel& model,
                               const std::vector<std::pair<int, double>>& dirichlet,
                               const Eigen::VectorXd& external_loads_full,
                               const SolveOptions& options) {
  const CoarseMesh mesh = make_full_resolution_mesh(model);
  const SamplingAssignment assignment = build_sampling(model, mesh, Scheme::FS);
  ReducedSystem sys = assemble_reduced_stiffness(model, mesh, assignment);
  if (external_loads_full.size() > 0) sys.load = reduce_loads(model, mesh, external_loads_full);
  apply_boundary_conditions(sys, dirichlet);
  return solve_linear_static(model, mesh, assignment, sys, options);
}

}  // namespace gnqc
