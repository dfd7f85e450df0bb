#include "gnqc/case_runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>

#include "gnqc/log.hpp"

namespace gnqc {

namespace {

LatticeModel build_model(const CaseConfig& cfg) {
  LatticeModel model = cfg.lattice_type == LatticeKind::square
                           ? generate_square_lattice(cfg.nx, cfg.ny, cfg.l0, cfg.bracing)
                           : generate_triangular_lattice(cfg.nx, cfg.ny, cfg.l0);
  model.material = cfg.material;
  model.material.strut_length = cfg.l0;
  if (cfg.notch) model = carve_notch(model, *cfg.notch).model;
  return model;
}

CoarseMesh build_mesh(const CaseConfig& cfg, const LatticeModel& model) {
  if (cfg.element_size_l0 <= 0.0) return make_full_resolution_mesh(model);
  const double size_mm = cfg.element_size_l0 * cfg.l0;
  if (cfg.element_size_l0 < 10.0) {
    log::warn("element size " + std::to_string(cfg.element_size_l0) +
              " l0 is below the recommended minimum of 10 l0");
  }
  if (!cfg.x_bounds_mm.empty() || !cfg.y_rows.empty()) {
    return build_coarse_mesh_explicit(model, size_mm, cfg.fr_rects, cfg.x_bounds_mm, cfg.y_rows);
  }
  return build_coarse_mesh(model, size_mm, cfg.fr_rects);
}

std::vector<int> selector_nodes(const LatticeModel& model, const BcEntry& e) {
  if (e.selector == "point") {
    const int id = model.nearest_node(e.point, 0.4 * model.material.strut_length);
    if (id < 0) {
      throw ConfigError("point selector (" + std::to_string(e.point.x()) + ", " +
                        std::to_string(e.point.y()) + ") does not hit a lattice node");
    }
    return {id};
  }
  auto ids = model.nodes_with_tag(e.selector);
  if (ids.empty()) throw ConfigError("selector '" + e.selector + "' matches no node");
  return ids;
}

void append_entry(const LatticeModel& model, const CoarseMesh& mesh, const BcEntry& e,
                  std::vector<std::pair<int, double>>& out) {
  int hits = 0;
  for (int id : selector_nodes(model, e)) {
    if (mesh.dof_map.node_to_rn[id] < 0) {
      if (e.selector == "point") {
        throw ConfigError("point selector hits node " + std::to_string(id) +
                          ", which is not a representative node in the coarse model");
      }
      continue;  // boundary ghost nodes follow the interpolated edge exactly
    }
    ++hits;
    if (e.axis_x) out.emplace_back(mesh.dof_map.dof(id, 0), e.value);
    if (e.axis_y) out.emplace_back(mesh.dof_map.dof(id, 1), e.value);
  }
  if (hits == 0) {
    throw ConfigError("selector '" + e.selector + "' matches no representative node");
  }
}

LoadingProgram resolve_loading(const LatticeModel& model, const CoarseMesh& mesh,
                               const CaseConfig& cfg) {
  std::vector<std::pair<int, double>> targets;
  for (const auto& e : cfg.prescribes) append_entry(model, mesh, e, targets);
  double total = 0.0;
  for (const auto& [dof, v] : targets) total = std::max(total, std::abs(v));
  if (total == 0.0) throw ConfigError("fracture loading needs a nonzero prescribed displacement");
  LoadingProgram p;
  p.total_displacement = total;
  p.n_steps = cfg.steps;
  p.batch_removal = cfg.batch_removal;
  for (const auto& [dof, v] : targets) {
    p.dofs.push_back(dof);
    p.direction.push_back(v / total);
  }
  return p;
}

}  // namespace

std::vector<std::pair<int, double>> resolve_constraints(const LatticeModel& model,
                                                        const CoarseMesh& mesh,
                                                        const std::vector<BcEntry>& entries) {
  std::vector<std::pair<int, double>> out;
  for (const auto& e : entries) append_entry(model, mesh, e, out);
  return out;
}

CaseResult run_case(const CaseConfig& config, const RunOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();

  CaseResult res;
  res.config = config;
  if (options.scheme_override) res.config.scheme = *options.scheme_override;
  if (options.psn_override) res.config.psn_selection = *options.psn_override;
  const CaseConfig& cfg = res.config;

  res.model = build_model(cfg);
  res.mesh = build_mesh(cfg, res.model);
  tag_regions(res.model, res.mesh);
  res.assignment = build_sampling(res.model, res.mesh, cfg.scheme, cfg.psn_selection);
  res.sampling_nodes = res.assignment.sampling_node_count();
  res.dof_count = res.mesh.dof_map.dof_count();

  const SolveOptions solve_opts{cfg.tolerance};
  const auto fixed = resolve_constraints(res.model, res.mesh, cfg.fixes);

  const bool want_fr = options.reference == "fr";
  const bool want_fs = options.reference == "fr" || options.reference == "fs";

  if (!cfg.fracture) {
    auto dirichlet = fixed;
    for (const auto& e : cfg.prescribes) append_entry(res.model, res.mesh, e, dirichlet);

    ReducedSystem sys = assemble_reduced_stiffness(res.model, res.mesh, res.assignment);
    apply_boundary_conditions(sys, dirichlet);
    res.solution = solve_linear_static(res.model, res.mesh, res.assignment, sys, solve_opts);

    if (want_fs) {
      SamplingAssignment fs = build_sampling(res.model, res.mesh, Scheme::FS);
      ReducedSystem fs_sys = assemble_reduced_stiffness(res.model, res.mesh, fs);
      apply_boundary_conditions(fs_sys, dirichlet);
      res.fs_solution = solve_linear_static(res.model, res.mesh, fs, fs_sys, solve_opts);
    }
    if (want_fr) {
      const CoarseMesh fr_mesh = make_full_resolution_mesh(res.model);
      std::vector<std::pair<int, double>> fr_dirichlet =
          resolve_constraints(res.model, fr_mesh, cfg.fixes);
      for (const auto& e : cfg.prescribes) append_entry(res.model, fr_mesh, e, fr_dirichlet);
      res.fr_solution =
          solve_full_resolution(res.model, fr_dirichlet, Eigen::VectorXd(), solve_opts);
      res.errors = split_errors(res.model, res.fr_solution->u_full, res.fs_solution->u_full,
                                res.solution.u_full);
    } else if (want_fs) {
      // Sampling-only comparison, normalized by the full-sampling solution.
      ErrorReport r;
      r.e_disp_sam = displacement_error(res.fs_solution->u_full, res.solution.u_full);
      r.e_U_sam = energy_error(res.model, res.fs_solution->u_full, res.solution.u_full);
      r.triangle_ok_disp = r.triangle_ok_energy = true;
      res.errors = r;
    }
  } else {
    const LoadingProgram program = resolve_loading(res.model, res.mesh, cfg);
    res.history = run_quasistatic_fracture(res.model, res.mesh, res.assignment, fixed, program,
                                           solve_opts);
    if (want_fr) {
      const CoarseMesh fr_mesh = make_full_resolution_mesh(res.model);
      const SamplingAssignment fr_assign = build_sampling(res.model, fr_mesh, Scheme::FS);
      const auto fr_fixed = resolve_constraints(res.model, fr_mesh, cfg.fixes);
      const LoadingProgram fr_program = resolve_loading(res.model, fr_mesh, cfg);
      res.fr_history = run_quasistatic_fracture(res.model, fr_mesh, fr_assign, fr_fixed,
                                                fr_program, solve_opts);
    }
  }

  res.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (!options.out_dir.empty()) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(options.out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + options.out_dir);
    const std::string base = options.out_dir + "/" + cfg.name;

    LatticeModel final_model = res.model;
    Eigen::VectorXd field;
    if (!cfg.fracture) {
      field = res.solution.u_full;
    } else {
      for (int sid = 0; sid < final_model.strut_count(); ++sid) {
        if (!res.history->final_alive.empty() && !res.history->final_alive[sid])
          final_model.struts[sid].alive = false;
      }
      field = res.history->final_u_full.size() > 0
                  ? res.history->final_u_full
                  : Eigen::VectorXd::Zero(2 * final_model.node_count());
    }
    write_field_csv(base + "_field.csv", final_model, field);
    if (options.vtk) write_vtk(base + "_field.vtk", final_model, field);

    std::vector<std::pair<std::string, std::string>> rows;
    rows.emplace_back("case", cfg.name);
    rows.emplace_back("scheme", to_string(cfg.scheme));
    rows.emplace_back("nodes", std::to_string(res.model.node_count()));
    rows.emplace_back("dofs", std::to_string(res.dof_count));
    rows.emplace_back("elements", std::to_string(res.mesh.elements.size()));
    rows.emplace_back("sampling_nodes", std::to_string(res.sampling_nodes));
    if (res.errors) {
      rows.emplace_back("e_disp", format_double(res.errors->e_disp));
      rows.emplace_back("e_disp_sam", format_double(res.errors->e_disp_sam));
      rows.emplace_back("e_disp_disc", format_double(res.errors->e_disp_disc));
      rows.emplace_back("e_U", format_double(res.errors->e_U));
      rows.emplace_back("e_U_sam", format_double(res.errors->e_U_sam));
      rows.emplace_back("e_U_disc", format_double(res.errors->e_U_disc));
    }
    if (res.history) {
      rows.emplace_back("external_work", format_double(res.history->external_work));
      rows.emplace_back("final_reaction", format_double(res.history->steps.back().reaction));
      rows.emplace_back("failed_struts", std::to_string(res.history->failed_struts.size()));
      write_curve_csv(base + "_curve.csv", *res.history);
    }
    if (res.fr_history) {
      rows.emplace_back("fr_external_work", format_double(res.fr_history->external_work));
      rows.emplace_back("fr_final_reaction",
                        format_double(res.fr_history->steps.back().reaction));
      rows.emplace_back("fr_failed_struts",
                        std::to_string(res.fr_history->failed_struts.size()));
      write_curve_csv(base + "_fr_curve.csv", *res.fr_history);
    }
    if (res.fr_solution) write_field_csv(base + "_fr_field.csv", res.model, res.fr_solution->u_full);
    write_summary_csv(base + "_summary.csv", rows);
  }
  return res;
}

SuiteResult run_convergence_suite(const CaseConfig& base, const std::vector<double>& sizes_l0,
                                  const std::vector<Scheme>& schemes,
                                  const std::string& out_dir) {
  if (sizes_l0.empty()) throw ConfigError("convergence suite needs at least one element size");
  if (base.fracture) throw ConfigError("convergence suites are static-only");

  SuiteResult suite;
  suite.sizes_l0 = sizes_l0;
  suite.schemes = schemes;

  LatticeModel model = build_model(base);
  const SolveOptions solve_opts{base.tolerance};

  // One full-resolution reference serves every size and scheme.
  const CoarseMesh fr_mesh = make_full_resolution_mesh(model);
  auto fr_dirichlet = resolve_constraints(model, fr_mesh, base.fixes);
  for (const auto& e : base.prescribes) append_entry(model, fr_mesh, e, fr_dirichlet);
  const Solution fr = solve_full_resolution(model, fr_dirichlet, Eigen::VectorXd(), solve_opts);

  struct PerSize {
    CoarseMesh mesh;
    Solution fs;
  };
  std::vector<PerSize> per_size;
  for (double size : sizes_l0) {
    CaseConfig cfg = base;
    cfg.element_size_l0 = size;
    PerSize ps;
    ps.mesh = build_mesh(cfg, model);
    auto dirichlet = resolve_constraints(model, ps.mesh, cfg.fixes);
    for (const auto& e : cfg.prescribes) append_entry(model, ps.mesh, e, dirichlet);
    SamplingAssignment fs_assign = build_sampling(model, ps.mesh, Scheme::FS);
    ReducedSystem sys = assemble_reduced_stiffness(model, ps.mesh, fs_assign);
    apply_boundary_conditions(sys, dirichlet);
    ps.fs = solve_linear_static(model, ps.mesh, fs_assign, sys, solve_opts);
    per_size.push_back(std::move(ps));
  }

  for (Scheme scheme : schemes) {
    std::vector<double> e_disp, e_u;
    for (size_t si = 0; si < sizes_l0.size(); ++si) {
      const CoarseMesh& mesh = per_size[si].mesh;
      SamplingAssignment assign = build_sampling(model, mesh, scheme, base.psn_selection);
      auto dirichlet = resolve_constraints(model, mesh, base.fixes);
      for (const auto& e : base.prescribes) append_entry(model, mesh, e, dirichlet);
      ReducedSystem sys = assemble_reduced_stiffness(model, mesh, assign);
      apply_boundary_conditions(sys, dirichlet);
      const Solution rr = solve_linear_static(model, mesh, assign, sys, solve_opts);

      SuiteEntry entry;
      entry.scheme = scheme;
      entry.size_l0 = sizes_l0[si];
      entry.report = split_errors(model, fr.u_full, per_size[si].fs.u_full, rr.u_full);
      entry.sampling_nodes = assign.sampling_node_count();
      entry.dof_count = mesh.dof_map.dof_count();
      suite.entries.push_back(entry);
      e_disp.push_back(entry.report.e_disp);
      e_u.push_back(entry.report.e_U);
    }
    if (sizes_l0.size() >= 3) {
      SuiteFit fit;
      fit.scheme = scheme;
      fit.disp = fit_convergence_order(sizes_l0, e_disp);
      fit.energy = fit_convergence_order(sizes_l0, e_u);
      suite.fits.push_back(fit);
    }
  }

  if (!out_dir.empty()) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir);
    std::vector<std::pair<std::string, std::string>> rows;
    for (const auto& e : suite.entries) {
      const std::string tag = std::string(to_string(e.scheme)) + "_" +
                              format_double(e.size_l0);
      rows.emplace_back(tag + "_e_disp", format_double(e.report.e_disp));
      rows.emplace_back(tag + "_e_disp_sam", format_double(e.report.e_disp_sam));
      rows.emplace_back(tag + "_e_disp_disc", format_double(e.report.e_disp_disc));
      rows.emplace_back(tag + "_e_U", format_double(e.report.e_U));
      rows.emplace_back(tag + "_e_U_sam", format_double(e.report.e_U_sam));
      rows.emplace_back(tag + "_e_U_disc", format_double(e.report.e_U_disc));
      rows.emplace_back(tag + "_sampling_nodes", std::to_string(e.sampling_nodes));
    }
    for (const auto& f : suite.fits) {
      const std::string tag = to_string(f.scheme);
      rows.emplace_back(std::string(tag) + "_order_l2", format_double(f.disp.order));
      rows.emplace_back(std::string(tag) + "_r2_l2", format_double(f.disp.r_squared));
      rows.emplace_back(std::string(tag) + "_order_h1", format_double(f.energy.order));
      rows.emplace_back(std::string(tag) + "_r2_h1", format_double(f.energy.r_squared));
    }
    write_summary_csv(out_dir + "/" + base.name + "_suite.csv", rows);
  }
  return suite;
}

}  // namespace gnqc
