#pragma once

#include <optional>
#include <string>

#include "gnqc/config.hpp"
#include "gnqc/error_norms.hpp"
#include "gnqc/export.hpp"
#include "gnqc/fracture.hpp"

namespace gnqc {

struct RunOptions {
  std::string reference = "fr";  // fr | fs | none
  std::optional<Scheme> scheme_override;
  std::optional<PsnSelection> psn_override;
  std::string out_dir;  // empty: no files written
  bool vtk = false;
};

struct CaseResult {
  CaseConfig config;  // resolved (overrides applied)
  LatticeModel model;
  CoarseMesh mesh;
  SamplingAssignment assignment;

  Solution solution;  // static reduced-resolution solution
  std::optional<Solution> fr_solution;
  std::optional<Solution> fs_solution;
  std::optional<ErrorReport> errors;

  std::optional<FractureHistory> history;     // fracture cases
  std::optional<FractureHistory> fr_history;  // fracture reference

  int sampling_nodes = 0;
  int dof_count = 0;
  double wall_seconds = 0.0;
};

/// Resolves the config's boundary entries against one mesh: selector nodes
/// that carry DOFs become (dof, value) pairs; point selectors must hit an RN.
std::vector<std::pair<int, double>> resolve_constraints(const LatticeModel& model,
                                                        const CoarseMesh& mesh,
                                                        const std::vector<BcEntry>& entries);

/// Builds the full pipeline for one case and (optionally) the FR / FS
/// references, error report, fracture histories and file exports.
CaseResult run_case(const CaseConfig& config, const RunOptions& options = {});

struct SuiteEntry {
  Scheme scheme = Scheme::FS;
  double size_l0 = 0.0;
  ErrorReport report;
  int sampling_nodes = 0;
  int dof_count = 0;
};

struct SuiteFit {
  Scheme scheme = Scheme::FS;
  ConvergenceFit disp;
  ConvergenceFit energy;
};

struct SuiteResult {
  std::vector<double> sizes_l0;
  std::vector<Scheme> schemes;
  std::vector<SuiteEntry> entries;  // scheme-major, then size order
  std::vector<SuiteFit> fits;
};

/// Re-runs the case per element size and scheme against a single FR
/// reference and fits the convergence orders.
SuiteResult run_convergence_suite(const CaseConfig& base, const std::vector<double>& sizes_l0,
                                  const std::vector<Scheme>& schemes,
                                  const std::string& out_dir = {});

}  // namespace gnqc
