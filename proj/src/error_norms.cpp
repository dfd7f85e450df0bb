#include "gnqc/error_norms.hpp"

#include <cmath>

namespace gnqc {

double displacement_error(const Eigen::VectorXd& u_ref, const Eigen::VectorXd& u_test) {
  if (u_ref.size() != u_test.size()) throw DomainError("displacement fields differ in size");
  const double ref = u_ref.norm();
  if (ref == 0.0) throw DomainError("zero reference displacement norm");
  return (u_ref - u_test).norm() / ref;
}

namespace {

// Sum over live struts of ||d(u_b - u_a)||^2; pairs are directed in the
// definition (each counted twice), which cancels in every ratio taken here.
double pair_diff_sq(const LatticeModel& model, const Eigen::VectorXd& ua,
                    const Eigen::VectorXd& ub) {
  double acc = 0.0;
  for (const auto& s : model.struts) {
    if (!s.alive) continue;
    const Vec2 da = node_disp(ua, s.b) - node_disp(ua, s.a);
    const Vec2 db = node_disp(ub, s.b) - node_disp(ub, s.a);
    acc += (da - db).squaredNorm();
  }
  return acc;
}

double pair_sq(const LatticeModel& model, const Eigen::VectorXd& u) {
  double acc = 0.0;
  for (const auto& s : model.struts) {
    if (!s.alive) continue;
    acc += (node_disp(u, s.b) - node_disp(u, s.a)).squaredNorm();
  }
  return acc;
}

}  // namespace

double energy_error(const LatticeModel& model, const Eigen::VectorXd& u_ref,
                    const Eigen::VectorXd& u_test) {
  if (u_ref.size() != u_test.size()) throw DomainError("displacement fields differ in size");
  const double ref = pair_sq(model, u_ref);
  if (ref == 0.0) throw DomainError("zero reference energy norm");
  return std::sqrt(pair_diff_sq(model, u_ref, u_test) / ref);
}

ErrorReport split_errors(const LatticeModel& model, const Eigen::VectorXd& u_fr,
                         const Eigen::VectorXd& u_fs, const Eigen::VectorXd& u_rr) {
  if (u_fr.size() != u_fs.size() || u_fr.size() != u_rr.size()) {
    throw DomainError("error decomposition needs solutions on the same node set");
  }
  ErrorReport r;
  const double disp_ref = u_fr.norm();
  if (disp_ref == 0.0) throw DomainError("zero reference displacement norm");
  r.e_disp = (u_fr - u_rr).norm() / disp_ref;
  r.e_disp_disc = (u_fr - u_fs).norm() / disp_ref;
  r.e_disp_sam = (u_fs - u_rr).norm() / disp_ref;

  const double pair_ref = pair_sq(model, u_fr);
  if (pair_ref == 0.0) throw DomainError("zero reference energy norm");
  r.e_U = std::sqrt(pair_diff_sq(model, u_fr, u_rr) / pair_ref);
  r.e_U_disc = std::sqrt(pair_diff_sq(model, u_fr, u_fs) / pair_ref);
  r.e_U_sam = std::sqrt(pair_diff_sq(model, u_fs, u_rr) / pair_ref);

  r.triangle_ok_disp = r.e_disp <= r.e_disp_disc + r.e_disp_sam + 1e-12;
  r.triangle_ok_energy = r.e_U <= r.e_U_disc + r.e_U_sam + 1e-12;
  return r;
}

ConvergenceFit fit_convergence_order(const std::vector<double>& sizes,
                                     const std::vector<double>& norms) {
  if (sizes.size() != norms.size() || sizes.size() < 3) {
    throw DomainError("convergence fit needs at least three (size, norm) pairs");
  }
  ConvergenceFit fit;
  fit.sizes = sizes;
  fit.norms = norms;
  const int n = static_cast<int>(sizes.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    if (!(sizes[i] > 0.0) || !(norms[i] > 0.0)) {
      throw DomainError("convergence fit needs strictly positive sizes and norms");
    }
    const double x = std::log(sizes[i]);
    const double y = std::log(norms[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  fit.order = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - fit.order * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double mean_y = sy / n;
  for (int i = 0; i < n; ++i) {
    const double x = std::log(sizes[i]);
    const double y = std::log(norms[i]);
    const double fy = fit.order * x + intercept;
    ss_res += (y - fy) * (y - fy);
    ss_tot += (y - mean_y) * (y - mean_y);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

}  // namespace gnqc
