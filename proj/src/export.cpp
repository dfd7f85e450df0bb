#include "gnqc/export.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace gnqc {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

class AtomicFile {
public:
  explicit AtomicFile(const std::string& path) : path_(path), tmp_(path + ".tmp") {
    out_.open(tmp_, std::ios::binary);
    if (!out_) throw IoError("cannot write " + tmp_);
  }
  std::ofstream& stream() { return out_; }
  void commit() {
    out_.close();
    if (!out_) throw IoError("failed writing " + tmp_);
    std::error_code ec;
    std::filesystem::rename(tmp_, path_, ec);
    if (ec) throw IoError("cannot move " + tmp_ + " to " + path_ + ": " + ec.message());
  }

private:
  std::string path_;
  std::string tmp_;
  std::ofstream out_;
};

}  // namespace

void write_field_csv(const std::string& path, const LatticeModel& model,
                     const Eigen::VectorXd& u_full) {
  AtomicFile file(path);
  auto& out = file.stream();
  out << "node_id,x0,y0,ux,uy,energy\n";
  for (const auto& n : model.nodes) {
    out << n.id << ',' << format_double(n.position.x()) << ',' << format_double(n.position.y())
        << ',' << format_double(u_full[2 * n.id]) << ',' << format_double(u_full[2 * n.id + 1])
        << ',' << format_double(node_energy(model, n.id, u_full)) << '\n';
  }
  file.commit();
}

void write_curve_csv(const std::string& path, const FractureHistory& history) {
  AtomicFile file(path);
  auto& out = file.stream();
  out << "step,u,F,failed_count\n";
  for (const auto& s : history.steps) {
    out << s.index << ',' << format_double(s.displacement) << ',' << format_double(s.reaction)
        << ',' << s.cumulative_failed << '\n';
  }
  file.commit();
}

void write_summary_csv(const std::string& path,
                       const std::vector<std::pair<std::string, std::string>>& rows) {
  AtomicFile file(path);
  auto& out = file.stream();
  out << "quantity,value\n";
  for (const auto& [k, v] : rows) out << k << ',' << v << '\n';
  file.commit();
}

void write_vtk(const std::string& path, const LatticeModel& model, const Eigen::VectorXd& u_full) {
  AtomicFile file(path);
  auto& out = file.stream();
  std::vector<int> live;
  for (const auto& s : model.struts)
    if (s.alive) live.push_back(s.id);

  out << "# vtk DataFile Version 3.0\n";
  out << "gnqc lattice state\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << model.node_count() << " double\n";
  for (const auto& n : model.nodes) {
    out << format_double(n.position.x()) << ' ' << format_double(n.position.y()) << " 0\n";
  }
  out << "CELLS " << live.size() << ' ' << 3 * live.size() << '\n';
  for (int sid : live) out << "2 " << model.struts[sid].a << ' ' << model.struts[sid].b << '\n';
  out << "CELL_TYPES " << live.size() << '\n';
  for (size_t i = 0; i < live.size(); ++i) out << "3\n";
  out << "POINT_DATA " << model.node_count() << '\n';
  out << "VECTORS displacement double\n";
  for (const auto& n : model.nodes) {
    out << format_double(u_full[2 * n.id]) << ' ' << format_double(u_full[2 * n.id + 1])
        << " 0\n";
  }
  out << "CELL_DATA " << live.size() << '\n';
  out << "SCALARS alive int 1\n";
  out << "LOOKUP_TABLE default\n";
  for (size_t i = 0; i < live.size(); ++i) out << "1\n";
  out << "SCALARS stress double 1\n";
  out << "LOOKUP_TABLE default\n";
  for (int sid : live) {
    out << format_double(strut_axial_stress(model, model.struts[sid], u_full)) << '\n';
  }
  file.commit();
}

}  // namespace gnqc
