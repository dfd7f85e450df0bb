#pragma once

#include <vector>

#include "gnqc/assembly.hpp"

namespace gnqc {

struct StrutOverstress {
  int strut_id = -1;
  double ratio = 0.0;  // sigma / sigma_y, tensile only
};

struct LoadStep {
  int index = 0;
  double displacement = 0.0;  // prescribed magnitude (mm)
  double reaction = 0.0;      // total reaction on the loaded DOF set (N)
  std::vector<int> newly_failed;
  int cumulative_failed = 0;
};

struct FractureHistory {
  std::vector<LoadStep> steps;
  std::vector<int> failed_struts;  // in failure order
  double external_work = 0.0;      // N mm, trapezoidal
  bool terminated_early = false;   // structure severed before the last step
  Eigen::VectorXd final_u_full;    // displacement field at the last solved step
  std::vector<char> final_alive;   // per-strut alive flags at the end
};

/// Displacement-controlled loading program: the listed DOFs move together,
/// each scaled by its signed direction entry, from 0 to total_displacement
/// in n_steps uniform increments.
struct LoadingProgram {
  std::vector<int> dofs;           // reduced-system DOFs
  std::vector<double> direction;   // signed unit scale per dof
  double total_displacement = 0.0; // mm
  int n_steps = 100;
  bool batch_removal = false;      // remove every over-stressed strut at once
};

/// Live struts with tensile axial stress at or above yield, most
/// over-stressed first (ties toward the lower strut id).
std::vector<StrutOverstress> evaluate_failure_criterion(const LatticeModel& model,
                                                        const Eigen::VectorXd& u_full);

/// Marks the strut dead. Energies, stresses and stiffness exclude it from
/// then on. Throws if already dead.
LatticeModel remove_strut(LatticeModel model, int strut_id);

/// Quasi-static fracture: per step, solve / fail the single most
/// over-stressed strut / re-solve until no strut exceeds yield, recording
/// the reaction at the loaded set. Fixed constraints come in via `fixed`;
/// the loaded DOFs are prescribed by the program.
FractureHistory run_quasistatic_fracture(const LatticeModel& model, const CoarseMesh& mesh,
                                         const SamplingAssignment& assignment,
                                         const std::vector<std::pair<int, double>>& fixed,
                                         const LoadingProgram& loading,
                                         const SolveOptions& options = {});

/// Trapezoidal integral of the recorded force-displacement curve.
double external_work(const FractureHistory& history);

}  // namespace gnqc
