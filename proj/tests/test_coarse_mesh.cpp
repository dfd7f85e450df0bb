#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "gnqc/coarse_mesh.hpp"

using namespace gnqc;

namespace {

Eigen::VectorXd affine_rn_field(const LatticeModel& m, const CoarseMesh& mesh,
                                const Eigen::Matrix2d& F, const Vec2& c) {
  Eigen::VectorXd u(mesh.dof_map.dof_count());
  for (int k = 0; k < mesh.dof_map.rn_count(); ++k) {
    const Vec2 p = m.nodes[mesh.dof_map.rn_to_node[k]].position;
    const Vec2 v = F * p + c;
    u[2 * k] = v.x();
    u[2 * k + 1] = v.y();
  }
  return u;
}

}  // namespace

TEST_CASE("full-bbox FR region degenerates to full resolution") {
  auto m = generate_square_lattice(6, 6, 10.0);
  Rect all{m.bbox_min - Vec2(1, 1), m.bbox_max + Vec2(1, 1)};
  auto mesh = build_coarse_mesh(m, 20.0, {all});
  CHECK(mesh.elements.empty());
  const auto counts = classify_dof_roles(mesh);
  CHECK(counts.nirn == m.node_count());
  CHECK(counts.irn == 0);
  CHECK(counts.gn == 0);
  CHECK(mesh.dof_map.dof_count() == 2 * m.node_count());
}

TEST_CASE("square stretch mesh: 3x3 grid minus the central FR block") {
  auto m = generate_square_lattice(60, 60, 10.0);
  Rect fr{Vec2(200, 200), Vec2(400, 400)};
  auto mesh = build_coarse_mesh(m, 200.0, {fr});
  CHECK(mesh.elements.size() == 8);
  const auto counts = classify_dof_roles(mesh);
  CHECK(counts.irn == 16);    // all 4x4 grid corners touch kept cells
  CHECK(counts.nirn == 361);  // 19x19 strictly inside the block
  CHECK(counts.gn == m.node_count() - 16 - 361);

  // element corners coincide bit-exactly with lattice nodes
  for (const auto& e : mesh.elements) {
    for (int k = 0; k < 4; ++k) {
      const Vec2 p = m.nodes[e.corner_rn_ids[k]].position;
      CHECK(p.x() == e.corner_positions[k].x());
      CHECK(p.y() == e.corner_positions[k].y());
      CHECK(mesh.roles[e.corner_rn_ids[k]] == NodeRole::IRN);
    }
  }

  // partition: each node exactly one role; members owned once
  std::set<int> owned;
  for (const auto& e : mesh.elements) {
    for (int id : e.member_nodes) {
      CHECK(owned.insert(id).second);
    }
  }
  for (int id = 0; id < m.node_count(); ++id) {
    const bool in_member = owned.count(id) > 0;
    CHECK(in_member == (mesh.roles[id] != NodeRole::NIRN));
    if (mesh.roles[id] == NodeRole::GN) {
      CHECK(mesh.owner[id] >= 0);
      // ownership tie-break: lowest element id containing the node
      for (const auto& e : mesh.elements) {
        if (e.bounds.contains_closed(m.nodes[id].position, 1e-9)) {
          CHECK(mesh.owner[id] <= e.id);
          break;
        }
      }
    }
  }
}

TEST_CASE("triangular tension mesh: four 24 l0 elements") {
  auto m = generate_triangular_lattice(48, 49, 10.0);
  auto mesh = build_coarse_mesh(m, 240.0, {});
  CHECK(mesh.elements.size() == 4);
  const auto counts = classify_dof_roles(mesh);
  CHECK(counts.irn == 9);
  CHECK(counts.nirn == 0);
  CHECK(counts.gn == m.node_count() - 9);
  // corners land on even rows
  for (const auto& e : mesh.elements)
    for (const auto& p : e.corner_positions) {
      const double row = p.y() / (0.5 * std::sqrt(3.0) * 10.0);
      CHECK(std::abs(row - std::lround(row)) < 1e-9);
      CHECK(std::lround(row) % 2 == 0);
    }
}

TEST_CASE("bending meshes snap strip heights to even rows") {
  auto m = generate_triangular_lattice(96, 25, 10.0);
  CHECK(build_coarse_mesh(m, 240.0, {}).elements.size() == 4);
  CHECK(build_coarse_mesh(m, 120.0, {}).elements.size() == 16);
  CHECK(build_coarse_mesh(m, 80.0, {}).elements.size() == 36);
}

TEST_CASE("bilinear shape function identities") {
  auto m = generate_square_lattice(2, 2, 0.5);  // unit element [0,1]^2
  auto mesh = build_coarse_mesh(m, 1.0, {});
  REQUIRE(mesh.elements.size() == 1);
  const auto& e = mesh.elements[0];

  for (int k = 0; k < 4; ++k) {
    const auto phi = bilinear_shape_eval(e, e.corner_positions[k]);
    for (int j = 0; j < 4; ++j) CHECK(phi[j] == Catch::Approx(k == j ? 1.0 : 0.0).margin(1e-14));
  }
  const auto centroid = bilinear_shape_eval(e, Vec2(0.5, 0.5));
  for (int j = 0; j < 4; ++j) CHECK(centroid[j] == Catch::Approx(0.25).epsilon(1e-14));

  const auto phi = bilinear_shape_eval(e, Vec2(0.25, 0.5));
  CHECK(phi[0] == Catch::Approx(0.375).epsilon(1e-14));
  CHECK(phi[1] == Catch::Approx(0.125).epsilon(1e-14));
  CHECK(phi[2] == Catch::Approx(0.125).epsilon(1e-14));
  CHECK(phi[3] == Catch::Approx(0.375).epsilon(1e-14));

  CHECK(phi.sum() == Catch::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(bilinear_shape_eval(e, Vec2(1.5, 0.5)), DomainError);
}

TEST_CASE("interpolation reproduces affine fields exactly") {
  auto m = generate_square_lattice(60, 60, 10.0);
  Rect fr{Vec2(200, 200), Vec2(400, 400)};
  auto mesh = build_coarse_mesh(m, 200.0, {fr});

  Eigen::Matrix2d F;
  F << 1.3e-3, -0.4e-3, 0.2e-3, 0.9e-3;
  const Vec2 c(0.05, -0.02);
  const auto u_rn = affine_rn_field(m, mesh, F, c);
  const auto u = interpolate_full_field(m, mesh, u_rn);
  for (const auto& n : m.nodes) {
    const Vec2 expected = F * n.position + c;
    CHECK(std::abs(u[2 * n.id] - expected.x()) < 1e-12);
    CHECK(std::abs(u[2 * n.id + 1] - expected.y()) < 1e-12);
  }

  // zero RN field -> zero everywhere
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(mesh.dof_map.dof_count());
  CHECK(interpolate_full_field(m, mesh, zero).norm() == 0.0);
}

TEST_CASE("ghost node at an element centroid averages the corners") {
  auto m = generate_square_lattice(2, 2, 10.0);  // single 20mm element, node (10,10) centroid
  auto mesh = build_coarse_mesh(m, 20.0, {});
  REQUIRE(mesh.elements.size() == 1);
  Eigen::VectorXd u_rn = Eigen::VectorXd::Zero(mesh.dof_map.dof_count());
  // set distinct corner displacements
  for (int k = 0; k < mesh.dof_map.rn_count(); ++k) {
    u_rn[2 * k] = 1.0 + k;
    u_rn[2 * k + 1] = -2.0 * k;
  }
  const auto u = interpolate_full_field(m, mesh, u_rn);
  const int center = m.nearest_node(Vec2(10.0, 10.0), 0.1);
  REQUIRE(mesh.roles[center] == NodeRole::GN);
  const auto& e = mesh.elements[0];
  Vec2 mean = Vec2::Zero();
  for (int k = 0; k < 4; ++k) {
    const int rn = mesh.dof_map.node_to_rn[e.corner_rn_ids[k]];
    mean += 0.25 * Vec2(u_rn[2 * rn], u_rn[2 * rn + 1]);
  }
  CHECK(u[2 * center] == Catch::Approx(mean.x()).epsilon(1e-14));
  CHECK(u[2 * center + 1] == Catch::Approx(mean.y()).epsilon(1e-14));
}

TEST_CASE("explicit grid for the three-point bending reconstruction") {
  auto beam = generate_triangular_lattice(76, 29, 10.0);
  Rect notch{Vec2(362.6795, -1.0), Vec2(397.3205, 70.0)};
  auto carved = carve_notch(beam, notch).model;
  CHECK(carved.node_count() == 2188);  // 2219 - 31

  const std::vector<double> xb{0, 100, 200, 310, 450, 560, 660, 760};
  const std::vector<int> yr{0, 14, 28};
  Rect fr{Vec2(311, 1), Vec2(449, 241)};
  auto mesh = build_coarse_mesh_explicit(carved, 120.0, {fr}, xb, yr);
  CHECK(mesh.elements.size() == 12);

  // load point is a full-resolution node; supports are corners
  const double top_y = 28.0 * 0.5 * std::sqrt(3.0) * 10.0;
  const int load = carved.nearest_node(Vec2(380.0, top_y), 1.0);
  REQUIRE(load >= 0);
  CHECK(mesh.roles[load] == NodeRole::NIRN);
  CHECK(mesh.roles[carved.nearest_node(Vec2(0, 0), 0.5)] == NodeRole::IRN);
  CHECK(mesh.roles[carved.nearest_node(Vec2(760, 0), 0.5)] == NodeRole::IRN);
}
