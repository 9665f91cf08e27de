#include <cmath>

#include "doctest.h"
#include "qcosym/fhn.hpp"
#include "qcosym/integrability.hpp"
#include "sampling.hpp"

using namespace qcosym;

namespace {

// L_1 = x2 p3 - x3 p2 and cyclic, on (x1, x2, x3, p1, p2, p3, t).
ScalarField angular(int i) {
  const int j = (i + 1) % 3, k = (i + 2) % 3;
  return ScalarField::generic(7, [j, k](auto p) { return p[j] * p[3 + k] - p[k] * p[3 + j]; });
}

FirstIntegralSet heisenberg() {
  return {{coordinate_field(3, 0), coordinate_field(3, 1), constant_field(3, 1.0)}, 3};
}

FirstIntegralSet so3() { return {{angular(0), angular(1), angular(2)}, 3}; }

StructureConstants fitted(const FirstIntegralSet& set, const QCosymplecticChart& chart,
                          std::uint64_t seed) {
  const auto pts = testing::random_points(40, chart.dim(), -2.0, 2.0, seed);
  return fit_structure_constants(bracket_table(set, chart, pts), set, pts).constants;
}

}  // namespace

TEST_CASE("bracket_table examples") {
  auto c = canonical_chart({1, 1});
  const auto pts = testing::random_points(5, 3, -1.0, 1.0, 1);
  FirstIntegralSet xp{{coordinate_field(3, 0), coordinate_field(3, 1)}, 2};
  auto t = bracket_table(xp, c, pts);
  for (double v : t[0][1]) CHECK(v == 1.0);
  for (double v : t[1][0]) CHECK(v == -1.0);

  FirstIntegralSet consts{{constant_field(3, 1.0), constant_field(3, -2.0)}, 2};
  t = bracket_table(consts, c, pts);
  for (const auto& row : t)
    for (const auto& col : row)
      for (double v : col) CHECK(v == 0.0);

  FirstIntegralSet same{{coordinate_field(3, 0), coordinate_field(3, 0)}, 1};
  t = bracket_table(same, c, pts);
  for (double v : t[0][0]) CHECK(v == 0.0);
  for (double v : t[0][1]) CHECK(v == 0.0);

  FirstIntegralSet bad{{coordinate_field(3, 0)}, 2};
  CHECK_THROWS_AS(bracket_table(bad, c, pts), PreconditionError);
}

TEST_CASE("fit_structure_constants examples") {
  auto c2 = canonical_chart({2, 1});
  FirstIntegralSet commuting{{coordinate_field(5, 0), coordinate_field(5, 3)}, 2};
  const auto pts = testing::random_points(30, 5, -2.0, 2.0, 4);
  auto fit = fit_structure_constants(bracket_table(commuting, c2, pts), commuting, pts);
  CHECK(fit.pass);
  CHECK(fit.residual <= 1e-9);
  for (double v : fit.constants.c) CHECK(v == 0.0);

  auto h = fitted(heisenberg(), canonical_chart({1, 1}), 5);
  CHECK(std::abs(h(0, 1, 2) - 1.0) <= 1e-8);
  CHECK(std::abs(h(1, 0, 2) + 1.0) <= 1e-8);
  for (std::size_t k = 0; k < 2; ++k) CHECK(std::abs(h(0, 1, k)) <= 1e-8);

  auto s = fitted(so3(), canonical_chart({3, 1}), 6);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) {
        double eps = 0.0;
        if (i != j && j != k && i != k) eps = ((j + 3 - i) % 3 == 1) ? 1.0 : -1.0;
        CHECK(std::abs(s(i, j, k) - eps) <= 1e-8);
      }

  FirstIntegralSet dependent{{coordinate_field(3, 0), coordinate_field(3, 0)}, 2};
  const auto p3 = testing::random_points(10, 3, -1.0, 1.0, 7);
  CHECK_THROWS_AS(fit_structure_constants(bracket_table(dependent, canonical_chart({1, 1}), p3),
                                          dependent, p3),
                  SingularError);
}

TEST_CASE("point-dependent brackets fail the constant fit") {
  auto c = canonical_chart({1, 1});
  FirstIntegralSet set{{ScalarField::generic(3, [](auto p) { return p[0] * p[0]; }),
                        coordinate_field(3, 1)},
                       2};
  const auto pts = testing::random_points(20, 3, -2.0, 2.0, 8);
  auto fit = fit_structure_constants(bracket_table(set, c, pts), set, pts);
  CHECK_FALSE(fit.pass);
}

TEST_CASE("antisymmetry of fitted constants is exact") {
  auto s = fitted(so3(), canonical_chart({3, 1}), 9);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) CHECK(s(i, j, k) + s(j, i, k) == 0.0);
}

TEST_CASE("solvability_test") {
  StructureConstants ab(4);
  auto r = solvability_test(ab);
  CHECK(r.solvable);
  CHECK(r.derived_dims == std::vector<std::size_t>{4, 0});

  StructureConstants h(3);
  h(0, 1, 2) = 1.0;
  h(1, 0, 2) = -1.0;
  r = solvability_test(h);
  CHECK(r.solvable);
  CHECK(r.derived_dims == std::vector<std::size_t>{3, 1, 0});

  StructureConstants so(3);
  for (std::size_t i = 0; i < 3; ++i) {
    so(i, (i + 1) % 3, (i + 2) % 3) = 1.0;
    so((i + 1) % 3, i, (i + 2) % 3) = -1.0;
  }
  r = solvability_test(so);
  CHECK_FALSE(r.solvable);
  CHECK(r.derived_dims.back() == 3);

  // sl(2): [h, e] = 2e, [h, f] = -2f, [e, f] = h
  StructureConstants sl(3);
  sl(0, 1, 1) = 2.0;
  sl(1, 0, 1) = -2.0;
  sl(0, 2, 2) = -2.0;
  sl(2, 0, 2) = 2.0;
  sl(1, 2, 0) = 1.0;
  sl(2, 1, 0) = -1.0;
  CHECK_FALSE(solvability_test(sl).solvable);

  // Two-dimensional non-abelian: [a, b] = b
  StructureConstants aff(2);
  aff(0, 1, 1) = 1.0;
  aff(1, 0, 1) = -1.0;
  r = solvability_test(aff);
  CHECK(r.solvable);
  CHECK(r.derived_dims == std::vector<std::size_t>{2, 1, 0});
}

TEST_CASE("property: solvability is invariant under basis permutation") {
  StructureConstants h(3);
  h(0, 1, 2) = 1.0;
  h(1, 0, 2) = -1.0;
  const std::size_t perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (const auto& pi : perms) {
    StructureConstants q(3);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t k = 0; k < 3; ++k) q(pi[i], pi[j], pi[k]) = h(i, j, k);
    const auto r = solvability_test(q);
    CHECK(r.solvable);
    CHECK(r.derived_dims == std::vector<std::size_t>{3, 1, 0});
  }
}

TEST_CASE("center condition") {
  StructureConstants ab(3);
  CHECK(check_center_condition(ab, {1.0, -4.0, 2.0}).ok);

  StructureConstants h(3);
  h(0, 1, 2) = 1.0;
  h(1, 0, 2) = -1.0;
  CHECK(check_center_condition(h, {5.0, 7.0, 0.0}).ok);
  const auto bad = check_center_condition(h, {0.0, 0.0, 1.0});
  CHECK_FALSE(bad.ok);
  CHECK(bad.max_violation == 1.0);
  CHECK_THROWS_AS(check_center_condition(h, {0.0}), DimensionError);
}

TEST_CASE("first_integral_drift") {
  fhn::FhnParams prm;
  prm.a = 0.4125;
  prm.b = 0.5;
  prm.c = 0.8;
  const auto sys = fhn::hamiltonian_system(prm);
  const auto eq = fhn::equilibrium(prm, 0.0);
  FirstIntegralSet set{{sys.H, constant_field(9, 2.0), coordinate_field(9, fhn::TS)}, 1};
  const std::vector<double> y0{eq[0] - 0.2, eq[1] + 0.1, eq[2] + 0.1, 0.3, -0.2, 0.1, 0, 0, 0};
  const auto d = first_integral_drift(sys, set, y0, 0.0, 2.0);
  CHECK(d[0] <= 1e-6);
  CHECK(d[1] == 0.0);
  CHECK(d[2] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("independence rank") {
  FirstIntegralSet two{{coordinate_field(3, 0), coordinate_field(3, 1)}, 1};
  CHECK(independence_rank(two, testing::random_points(5, 3, -1, 1, 3)) == 2);
  FirstIntegralSet dup{{coordinate_field(3, 0), ScalarField::generic(3, [](auto p) { return 2.0 * p[0]; })}, 1};
  CHECK(independence_rank(dup, testing::random_points(5, 3, -1, 1, 3)) == 1);
}

TEST_CASE("integrability report") {
  auto c = canonical_chart({3, 1});
  HamiltonianSystem sys{c, ScalarField::generic(7, [](auto p) {
                          using T = typename decltype(p)::value_type;
                          T s(0.0);
                          for (int i = 0; i < 6; ++i) s = s + 0.5 * p[i] * p[i];
                          return s;
                        }),
                        {constant_field(7, 1.0)}};
  IntegrabilityOptions opt;
  opt.y0 = {0.3, -0.2, 0.5, 0.1, 0.4, -0.3, 0.0};
  opt.t1 = 5.0;
  const auto rep = integrability_report(sys, so3(), testing::random_points(30, 7, -2, 2, 11), opt);
  CHECK(rep.fit.pass);
  CHECK_FALSE(rep.solvability.solvable);
  CHECK(rep.drift_ok);
  CHECK(rep.independence == 3);
  CHECK(rep.independent);
  CHECK_FALSE(rep.fibers_checked);
  CHECK(rep.dimension_condition == (2 * 3 + 1 - 1 == 3 + 3));
}
