#pragma once

#include <vector>

#include "gnqc/lattice.hpp"

namespace gnqc {

/// Relative displacement and energy error norms with the discretization /
/// sampling split, everything normalized by the full-resolution solution.
struct ErrorReport {
  double e_disp = 0.0;
  double e_disp_disc = 0.0;
  double e_disp_sam = 0.0;
  double e_U = 0.0;
  double e_U_disc = 0.0;
  double e_U_sam = 0.0;
  bool triangle_ok_disp = false;
  bool triangle_ok_energy = false;
};

/// ||u_ref - u_test||_2 / ||u_ref||_2 over all lattice nodes.
double displacement_error(const Eigen::VectorXd& u_ref, const Eigen::VectorXd& u_test);

/// H1-style relative norm over interacting neighbor pairs: relative
/// displacements (u_j - u_i) on live struts, reference in the denominator.
double energy_error(const LatticeModel& model, const Eigen::VectorXd& u_ref,
                    const Eigen::VectorXd& u_test);

/// Full decomposition: total (FR vs RR), discretization (FR vs FS),
/// sampling (FS vs RR); triangle-inequality flags set from the values.
ErrorReport split_errors(const LatticeModel& model, const Eigen::VectorXd& u_fr,
                         const Eigen::VectorXd& u_fs, const Eigen::VectorXd& u_rr);

struct ConvergenceFit {
  std::vector<double> sizes;
  std::vector<double> norms;
  double order = 0.0;  // slope of log(norm) vs log(size)
  double r_squared = 0.0;
};

/// Least-squares slope of log(norm) against log(size); needs >= 3 points.
ConvergenceFit fit_convergence_order(const std::vector<double>& sizes,
                                     const std::vector<double>& norms);

}  // namespace gnqc
