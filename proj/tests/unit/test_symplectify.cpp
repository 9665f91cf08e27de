#include <cmath>

#include "doctest.h"
#include "qcosym/fhn.hpp"
#include "qcosym/symplectify.hpp"
#include "sampling.hpp"

using namespace qcosym;

TEST_CASE("omega tilde is antisymmetric and nondegenerate") {
  auto sc = symplectify(canonical_chart({3, 3}));
  CHECK(sc.dim() == 12);
  const auto W = sc.omega_tilde();
  for (std::size_t a = 0; a < 12; ++a)
    for (std::size_t b = 0; b < 12; ++b) CHECK(W(a, b) == -W(b, a));
  CHECK(numerical_rank(W) == 12);

  auto general = canonical_chart({1, 1});
  general.canonical = false;
  CHECK_THROWS_AS(symplectify(general), PreconditionError);
}

TEST_CASE("lift_point and project_point") {
  auto c = canonical_chart({1, 1});
  CHECK(lift_point(c, {1, 2, 3}) == Point{1, 2, 3, 0});
  const std::vector<double> tau{5.0};
  CHECK(lift_point(c, {0, 0, 0}, tau) == Point{0, 0, 0, 5});
  const Point p{0.25, -7.0, 1e-3};
  CHECK(project_point(c, lift_point(c, p)) == p);
  CHECK_THROWS_AS(lift_point(c, {1, 2}), DimensionError);
  const std::vector<double> two{1.0, 2.0};
  CHECK_THROWS_AS(lift_point(c, {1, 2, 3}, two), DimensionError);
  CHECK_THROWS_AS(project_point(c, {1, 2, 3}), DimensionError);
}

TEST_CASE("lifted field examples") {
  auto c = canonical_chart({1, 1});
  HamiltonianSystem osc{c,
                        ScalarField::generic(3, [](auto p) { return 0.5 * (p[0] * p[0] + p[1] * p[1]); }),
                        {constant_field(3, 1.0)}};
  auto lf = lift_hamiltonian_field(osc);
  CHECK(lf.tilde_X(Point{1, 2, 0, 9}) == std::vector<double>{2, -1, 0, 0});

  fhn::FhnParams prm;
  prm.b = fhn::SlowCoefficient::linear(0.0, 1.0);
  const auto sys = fhn::hamiltonian_system(prm);
  auto fl = lift_hamiltonian_field(sys);
  Point p(12, 0.0);
  p[fhn::X] = 1.0;
  p[fhn::PZ] = 2.0;
  const auto X = fl.tilde_X(p);
  CHECK(X[fl.chart.tau_index(2)] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(X[fl.chart.tau_index(0)] == 0.0);
  CHECK(X[fl.chart.tau_index(1)] == 0.0);

  HamiltonianSystem clock{c, coordinate_field(3, 2), {constant_field(3, 1.0)}};
  CHECK(lift_hamiltonian_field(clock).tilde_X(Point{0.3, 0.4, 0.5, 0.0}) ==
        std::vector<double>{0, 0, 0, 1});
}

TEST_CASE("verify_lift") {
  fhn::FhnParams prm;
  prm.b = fhn::SlowCoefficient::sine(0.8, 0.2, 0.5, 0.1);
  prm.c = fhn::SlowCoefficient::exponential(0.7, 0.1, -0.3);
  const auto sys = fhn::hamiltonian_system(prm);
  auto lf = lift_hamiltonian_field(sys);
  const auto pts = testing::random_points(50, 12, -2.0, 2.0, 3);
  auto rep = verify_lift(sys, lf, pts, 1e-10);
  CHECK(rep.pass);
  CHECK(rep.max_symplectic <= 1e-10);
  CHECK(rep.max_projection <= 1e-12);

  auto corrupted = lf;
  corrupted.tilde_X = VectorFieldFn::numeric(12, [lf](std::span<const double> p) {
    auto v = lf.tilde_X.eval<double>(p);
    v[lf.chart.tau_index(1)] += 0.125;
    return v;
  });
  auto bad = verify_lift(sys, corrupted, pts, 1e-10);
  CHECK_FALSE(bad.pass);
  CHECK(bad.max_symplectic == doctest::Approx(0.125).epsilon(1e-9));

  auto c = canonical_chart({1, 1});
  HamiltonianSystem flat{c, constant_field(3, 4.0), {constant_field(3, 1.0)}};
  auto fr = verify_lift(flat, lift_hamiltonian_field(flat), testing::random_points(5, 4, -1, 1, 4), 0.0);
  CHECK(fr.pass);
  CHECK(fr.max_symplectic == 0.0);
  CHECK_THROWS_AS(verify_lift(flat, lift_hamiltonian_field(flat), {}, 1e-10), PreconditionError);
}

TEST_CASE("property: tau components vanish without explicit time dependence") {
  fhn::FhnParams prm;
  const auto sys = fhn::hamiltonian_system(prm);
  auto lf = lift_hamiltonian_field(sys);
  for (const auto& p : testing::random_points(30, 12, -3.0, 3.0, 8)) {
    const auto X = lf.tilde_X(p);
    for (std::size_t i = 0; i < 3; ++i) CHECK(X[lf.chart.tau_index(i)] == 0.0);
  }
}
