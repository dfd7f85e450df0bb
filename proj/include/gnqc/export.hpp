#pragma once

#include <string>
#include <vector>

#include "gnqc/error_norms.hpp"
#include "gnqc/fracture.hpp"

namespace gnqc {

/// Node field table: node_id,x0,y0,ux,uy,energy; one row per node, full
/// double precision, LF line endings. Written atomically.
void write_field_csv(const std::string& path, const LatticeModel& model,
                     const Eigen::VectorXd& u_full);

/// Force-displacement curve: step,u,F,failed_count.
void write_curve_csv(const std::string& path, const FractureHistory& history);

/// Generic key/value summary table: quantity,value.
void write_summary_csv(const std::string& path,
                       const std::vector<std::pair<std::string, std::string>>& rows);

/// Legacy ASCII VTK unstructured grid: points, live struts as line cells,
/// point-data displacement, cell-data alive flag and axial stress.
void write_vtk(const std::string& path, const LatticeModel& model, const Eigen::VectorXd& u_full);

/// Shortest round-trippable decimal representation (%.17g).
std::string format_double(double v);

}  // namespace gnqc
