#include "gnqc/fracture.hpp"

#include <algorithm>
#include <cmath>

#include "gnqc/log.hpp"

namespace gnqc {

std::vector<StrutOverstress> evaluate_failure_criterion(const LatticeModel& model,
                                                        const Eigen::VectorXd& u_full) {
  std::vector<StrutOverstress> over;
  const double sigma_y = model.material.yield_stress;
  for (const auto& s : model.struts) {
    if (!s.alive) continue;
    const double sigma = strut_axial_stress(model, s, u_full);
    if (sigma >= sigma_y) over.push_back({s.id, sigma / sigma_y});
  }
  std::sort(over.begin(), over.end(), [](const StrutOverstress& a, const StrutOverstress& b) {
    if (a.ratio != b.ratio) return a.ratio > b.ratio;
    return a.strut_id < b.strut_id;
  });
  return over;
}

LatticeModel remove_strut(LatticeModel model, int strut_id) {
  if (strut_id < 0 || strut_id >= model.strut_count()) throw DomainError("no such strut");
  if (!model.struts[strut_id].alive) throw DomainError("strut already removed");
  model.struts[strut_id].alive = false;
  return model;
}

FractureHistory run_quasistatic_fracture(const LatticeModel& model, const CoarseMesh& mesh,
                                         const SamplingAssignment& assignment,
                                         const std::vector<std::pair<int, double>>& fixed,
                                         const LoadingProgram& loading,
                                         const SolveOptions& options) {
  if (loading.dofs.size() != loading.direction.size() || loading.dofs.empty()) {
    throw DomainError("loading program needs matching dof and direction lists");
  }
  if (loading.n_steps < 1) throw DomainError("loading needs at least one step");

  FractureHistory hist;
  LatticeModel work = model;
  bool warned_coarse = false;

  auto snapshot_alive = [&hist](const LatticeModel& m) {
    hist.final_alive.assign(m.strut_count(), 1);
    for (const auto& s : m.struts)
      if (!s.alive) hist.final_alive[s.id] = 0;
  };

  LoadStep start;
  hist.steps.push_back(start);  // (0, 0): the curve starts unloaded

  for (int k = 1; k <= loading.n_steps; ++k) {
    const double d = loading.total_displacement * k / loading.n_steps;
    std::vector<std::pair<int, double>> dirichlet = fixed;
    for (size_t i = 0; i < loading.dofs.size(); ++i) {
      dirichlet.emplace_back(loading.dofs[i], d * loading.direction[i]);
    }

    LoadStep step;
    step.index = k;
    step.displacement = d;

    Solution sol;
    while (true) {
      ReducedSystem sys = assemble_reduced_stiffness(work, mesh, assignment);
      apply_boundary_conditions(sys, dirichlet);
      try {
        sol = solve_linear_static(work, mesh, assignment, sys, options);
      } catch (const SolverError& e) {
        log::warn(std::string("fracture terminated at step ") + std::to_string(k) + ": " +
                  e.what());
        hist.terminated_early = true;
        snapshot_alive(work);
        if (hist.steps.size() >= 2) hist.external_work = external_work(hist);
        return hist;
      }
      auto over = evaluate_failure_criterion(work, sol.u_full);
      if (over.empty()) break;
      const int n_remove = loading.batch_removal ? static_cast<int>(over.size()) : 1;
      for (int r = 0; r < n_remove; ++r) {
        const int sid = over[r].strut_id;
        work = remove_strut(std::move(work), sid);
        step.newly_failed.push_back(sid);
        hist.failed_struts.push_back(sid);
        if (!warned_coarse) {
          const Strut& s = work.struts[sid];
          if (mesh.roles[s.a] == NodeRole::GN || mesh.roles[s.b] == NodeRole::GN) {
            log::warn("strut failure in the coarse-grained region; consider enlarging the "
                      "full-resolution region");
            warned_coarse = true;
          }
        }
      }
    }

    double reaction = 0.0;
    for (size_t i = 0; i < loading.dofs.size(); ++i) {
      reaction += loading.direction[i] * sol.reactions.at(loading.dofs[i]);
    }
    step.reaction = reaction;
    step.cumulative_failed = static_cast<int>(hist.failed_struts.size());
    hist.steps.push_back(step);
    hist.final_u_full = sol.u_full;
  }
  snapshot_alive(work);
  hist.external_work = external_work(hist);
  return hist;
}

double external_work(const FractureHistory& history) {
  if (history.steps.size() < 2) {
    throw DomainError("external work needs at least two recorded steps");
  }
  double w = 0.0;
  for (size_t k = 0; k + 1 < history.steps.size(); ++k) {
    const auto& a = history.steps[k];
    const auto& b = history.steps[k + 1];
    w += 0.5 * (a.reaction + b.reaction) * (b.displacement - a.displacement);
  }
  return w;
}

}  // namespace gnqc
