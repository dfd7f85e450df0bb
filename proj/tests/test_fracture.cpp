#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "gnqc/fracture.hpp"

using namespace gnqc;

namespace {

// 1x1 unbraced cell reduced to the single bottom strut (0)-(1).
LatticeModel single_strut_model() {
  auto m = generate_square_lattice(1, 1, 10.0, Bracing::none);
  for (auto& s : m.struts)
    if (!(s.a == 0 && s.b == 1)) s.alive = false;
  return m;
}

}  // namespace

TEST_CASE("failure criterion: tensile threshold, compression excluded") {
  auto m = single_strut_model();
  const double e_fail = m.material.yield_stress * 10.0 / m.material.young_modulus;

  Eigen::VectorXd u = Eigen::VectorXd::Zero(2 * m.node_count());
  CHECK(evaluate_failure_criterion(m, u).empty());

  u[2] = 0.99 * e_fail;  // just below yield
  CHECK(evaluate_failure_criterion(m, u).empty());

  u[2] = e_fail;
  auto over = evaluate_failure_criterion(m, u);
  REQUIRE(over.size() == 1);
  CHECK(over[0].ratio == Catch::Approx(1.0).epsilon(1e-12));

  u[2] = -3.0 * e_fail;  // strong compression: never fails
  CHECK(evaluate_failure_criterion(m, u).empty());
}

TEST_CASE("failure ordering is by overstress ratio") {
  auto m = generate_square_lattice(2, 1, 10.0, Bracing::none);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(2 * m.node_count());
  const double e_fail = m.material.yield_stress * 10.0 / m.material.young_modulus;
  // stretch the two bottom struts differently: (0)-(1) and (1)-(2)
  u[2 * 1] = 1.2 * e_fail;          // strut 0-1 elongation 1.2 ef
  u[2 * 2] = 1.2 * e_fail + 1.5 * e_fail;  // strut 1-2 elongation 1.5 ef
  auto over = evaluate_failure_criterion(m, u);
  REQUIRE(over.size() >= 2);
  CHECK(over[0].ratio >= over[1].ratio);
  CHECK(over[0].ratio == Catch::Approx(1.5).epsilon(1e-9));
}

TEST_CASE("remove_strut bookkeeping and reassembly oracle") {
  auto m = generate_square_lattice(3, 3, 10.0);
  const int victim = 5;
  auto removed = remove_strut(m, victim);
  CHECK_FALSE(removed.struts[victim].alive);
  CHECK(removed.live_strut_count() == m.live_strut_count() - 1);
  CHECK_THROWS_AS(remove_strut(removed, victim), DomainError);
  CHECK_THROWS_AS(remove_strut(m, 10000), DomainError);

  // energies never include the dead strut: compare against a model rebuilt
  // from scratch without it
  Eigen::VectorXd u(2 * m.node_count());
  for (int i = 0; i < u.size(); ++i) u[i] = 0.01 * std::sin(0.7 * i);
  auto rebuilt = m;
  rebuilt.struts[victim].alive = false;
  CHECK(total_lattice_energy(removed, u) ==
        Catch::Approx(total_lattice_energy(rebuilt, u)).epsilon(1e-14));
  CHECK(total_lattice_energy(removed, u) < total_lattice_energy(m, u));

  // stiffness excludes it as well
  const auto mesh = make_full_resolution_mesh(removed);
  const auto a = build_sampling(removed, mesh, Scheme::FS);
  const auto K = assemble_reduced_stiffness(removed, mesh, a);
  const auto mesh2 = make_full_resolution_mesh(rebuilt);
  const auto a2 = build_sampling(rebuilt, mesh2, Scheme::FS);
  const auto K2 = assemble_reduced_stiffness(rebuilt, mesh2, a2);
  CHECK((Eigen::MatrixXd(K.stiffness) - Eigen::MatrixXd(K2.stiffness)).norm() == 0.0);
}

TEST_CASE("quasistatic fracture of a single strut chain") {
  auto m = single_strut_model();
  const auto mesh = make_full_resolution_mesh(m);
  const auto assignment = build_sampling(m, mesh, Scheme::FS);
  const double e_fail = m.material.yield_stress * 10.0 / m.material.young_modulus;

  std::vector<std::pair<int, double>> fixed{{0, 0.0}, {1, 0.0}, {3, 0.0},
                                            {4, 0.0}, {5, 0.0}, {6, 0.0}, {7, 0.0}};
  LoadingProgram load;
  load.dofs = {2};  // node 1, x axis
  load.direction = {1.0};
  load.n_steps = 10;

  SECTION("below threshold: no failures, linear response") {
    load.total_displacement = 0.5 * e_fail;
    const auto hist = run_quasistatic_fracture(m, mesh, assignment, fixed, load);
    REQUIRE(hist.steps.size() == 11);
    CHECK(hist.failed_struts.empty());
    CHECK_FALSE(hist.terminated_early);
    const double k = m.material.young_modulus * m.material.cross_section / 10.0;
    for (const auto& s : hist.steps) {
      CHECK(s.reaction == Catch::Approx(k * s.displacement).margin(1e-10));
    }
    // linear curve F = k u integrates to 1/2 k U^2 exactly under the trapezoid
    CHECK(hist.external_work ==
          Catch::Approx(0.5 * k * load.total_displacement * load.total_displacement)
              .epsilon(1e-12));
  }

  SECTION("past threshold: exactly one failure, force drops to zero") {
    load.total_displacement = 2.0 * e_fail;
    const auto hist = run_quasistatic_fracture(m, mesh, assignment, fixed, load);
    CHECK(hist.failed_struts.size() == 1);
    // failure happens at the first step with e >= e_fail: step 5 of 10
    int first_fail = -1;
    for (const auto& s : hist.steps)
      if (!s.newly_failed.empty()) first_fail = s.index;
    CHECK(first_fail == 5);
    CHECK(hist.steps.back().reaction == Catch::Approx(0.0).margin(1e-12));
    // damage is monotone
    int prev = 0;
    for (const auto& s : hist.steps) {
      CHECK(s.cumulative_failed >= prev);
      prev = s.cumulative_failed;
    }
  }
}

TEST_CASE("external work oracles") {
  FractureHistory h;
  // constant-force plateau: W = F * du
  for (int k = 0; k <= 4; ++k) {
    LoadStep s;
    s.index = k;
    s.displacement = 0.5 * k;
    s.reaction = 3.0;
    h.steps.push_back(s);
  }
  CHECK(external_work(h) == Catch::Approx(3.0 * 2.0).epsilon(1e-14));

  // piecewise-linear refinement oracle: trapezoid on the coarse grid equals
  // the analytic integral of its own interpolant, refined 100x
  FractureHistory coarse;
  auto f = [](double u) { return 2.0 + std::sin(3.0 * u) + 0.5 * u * u; };
  for (int k = 0; k <= 6; ++k) {
    LoadStep s;
    s.index = k;
    s.displacement = 0.3 * k;
    s.reaction = f(s.displacement);
    coarse.steps.push_back(s);
  }
  double refined = 0.0;
  for (size_t seg = 0; seg + 1 < coarse.steps.size(); ++seg) {
    const auto& a = coarse.steps[seg];
    const auto& b = coarse.steps[seg + 1];
    for (int j = 0; j < 100; ++j) {
      const double t0 = j / 100.0, t1 = (j + 1) / 100.0;
      const double fa = a.reaction + t0 * (b.reaction - a.reaction);
      const double fb = a.reaction + t1 * (b.reaction - a.reaction);
      refined += 0.5 * (fa + fb) * (b.displacement - a.displacement) / 100.0;
    }
  }
  CHECK(external_work(coarse) == Catch::Approx(refined).epsilon(1e-12));

  FractureHistory empty;
  CHECK_THROWS_AS(external_work(empty), DomainError);
  empty.steps.push_back({});
  CHECK_THROWS_AS(external_work(empty), DomainError);
}
