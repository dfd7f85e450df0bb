#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gnqc/case_runner.hpp"
#include "gnqc/log.hpp"
#include "gnqc/presets.hpp"

namespace {

gnqc::CaseConfig load_case(const std::string& name_or_path) {
  if (std::filesystem::exists(name_or_path)) return gnqc::load_config_file(name_or_path);
  if (auto text = gnqc::find_preset(name_or_path)) return gnqc::parse_config(*text);
  throw gnqc::ConfigError("no config file or preset named '" + name_or_path + "'");
}

int error_exit(const gnqc::Error& e) {
  std::fprintf(stderr, "GNQC_ERROR category=%s: %s\n", gnqc::to_string(e.category()), e.what());
  switch (e.category()) {
    case gnqc::ErrorCategory::config: return 2;
    case gnqc::ErrorCategory::io: return 3;
    case gnqc::ErrorCategory::solver: return 4;
    case gnqc::ErrorCategory::domain: return 5;
    case gnqc::ErrorCategory::internal: return 10;
  }
  return 10;
}

void print_case_result(const gnqc::CaseResult& res) {
  std::printf("case %s: %d nodes, %d dofs, %zu elements, %d sampling nodes (%.2fs)\n",
              res.config.name.c_str(), res.model.node_count(), res.dof_count,
              res.mesh.elements.size(), res.sampling_nodes, res.wall_seconds);
  if (res.errors) {
    std::printf("  e_disp      %-12.6g e_U      %-12.6g\n", res.errors->e_disp, res.errors->e_U);
    std::printf("  e_disp_sam  %-12.6g e_U_sam  %-12.6g\n", res.errors->e_disp_sam,
                res.errors->e_U_sam);
    std::printf("  e_disp_disc %-12.6g e_U_disc %-12.6g\n", res.errors->e_disp_disc,
                res.errors->e_U_disc);
  }
  if (res.history) {
    std::printf("  fracture: %zu failed struts, external work %.6g N mm, final reaction %.6g N%s\n",
                res.history->failed_struts.size(), res.history->external_work,
                res.history->steps.back().reaction,
                res.history->terminated_early ? " (terminated early)" : "");
  }
  if (res.fr_history) {
    std::printf("  reference: %zu failed struts, external work %.6g N mm, final reaction %.6g N\n",
                res.fr_history->failed_struts.size(), res.fr_history->external_work,
                res.fr_history->steps.back().reaction);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GNQC truss-lattice coarse-graining solver"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string log_level = "warn";
  app.add_option("--log-level", log_level, "debug, info, warn or error");

  std::string case_name, out_dir, reference = "fr", scheme, psn;
  bool vtk = false;

  auto* run = app.add_subcommand("run", "run one case (config file or preset name)");
  run->fallthrough();
  run->add_option("config", case_name, "config file path or preset name")->required();
  run->add_option("--out", out_dir, "output directory for CSV/VTK exports");
  run->add_option("--reference", reference, "error reference: fr, fs or none")
      ->check(CLI::IsMember({"fr", "fs", "none"}));
  run->add_option("--scheme", scheme, "override sampling scheme (fs/ess/iss/nas/nss)");
  run->add_option("--psn", psn, "override PSN selection (spread/perturbed)");
  run->add_flag("--vtk", vtk, "also write a legacy VTK snapshot");

  std::vector<double> sizes;
  std::string schemes_csv = "fs,ess,nas,nss";
  auto* suite = app.add_subcommand("suite", "convergence suite over element sizes");
  suite->fallthrough();
  suite->add_option("config", case_name, "config file path or preset name")->required();
  suite->add_option("--sizes", sizes, "element sizes in l0 units")->required()->expected(-1);
  suite->add_option("--schemes", schemes_csv, "comma-separated scheme list");
  suite->add_option("--out", out_dir, "output directory");

  auto* presets = app.add_subcommand("presets", "preset utilities");
  auto* presets_list = presets->add_subcommand("list", "list built-in presets");
  std::string show_name;
  auto* presets_show = presets->add_subcommand("show", "print a preset config");
  presets_show->add_option("name", show_name, "preset name")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    gnqc::log::set_level(gnqc::log::level_from_string(log_level));

    if (run->parsed()) {
      gnqc::RunOptions opts;
      opts.reference = reference;
      opts.out_dir = out_dir;
      opts.vtk = vtk;
      if (!scheme.empty()) opts.scheme_override = gnqc::scheme_from_string(scheme);
      if (!psn.empty()) {
        if (psn == "spread") opts.psn_override = gnqc::PsnSelection::spread;
        else if (psn == "perturbed") opts.psn_override = gnqc::PsnSelection::perturbed;
        else throw gnqc::ConfigError("unknown psn selection: " + psn);
      }
      print_case_result(gnqc::run_case(load_case(case_name), opts));
    } else if (suite->parsed()) {
      std::vector<gnqc::Scheme> scheme_list;
      std::string tok;
      for (char c : schemes_csv + ",") {
        if (c == ',') {
          if (!tok.empty()) scheme_list.push_back(gnqc::scheme_from_string(tok));
          tok.clear();
        } else {
          tok += c;
        }
      }
      const auto result =
          gnqc::run_convergence_suite(load_case(case_name), sizes, scheme_list, out_dir);
      std::printf("%-6s %-8s %-12s %-12s %-12s %-12s\n", "scheme", "size_l0", "e_disp",
                  "e_disp_sam", "e_U", "e_U_sam");
      for (const auto& e : result.entries) {
        std::printf("%-6s %-8g %-12.6g %-12.6g %-12.6g %-12.6g\n", gnqc::to_string(e.scheme),
                    e.size_l0, e.report.e_disp, e.report.e_disp_sam, e.report.e_U,
                    e.report.e_U_sam);
      }
      for (const auto& f : result.fits) {
        std::printf("%s: order L2 %.4f (R2 %.4f), order H1 %.4f (R2 %.4f)\n",
                    gnqc::to_string(f.scheme), f.disp.order, f.disp.r_squared, f.energy.order,
                    f.energy.r_squared);
      }
    } else if (presets_list->parsed()) {
      for (const auto& name : gnqc::preset_names()) std::printf("%s\n", name.c_str());
    } else if (presets_show->parsed()) {
      if (auto text = gnqc::find_preset(show_name)) {
        std::fputs(text->c_str(), stdout);
      } else {
        throw gnqc::ConfigError("no preset named '" + show_name + "'");
      }
    }
  } catch (const gnqc::Error& e) {
    return error_exit(e);
  } catch (const std::exception& e) {
    return error_exit(gnqc::Error(gnqc::ErrorCategory::internal, e.what()));
  }
  return 0;
}
