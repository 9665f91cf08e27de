#include <cmath>

#include "doctest.h"
#include "qcosym/fields.hpp"
#include "sampling.hpp"

using namespace qcosym;

namespace {

const DiffConfig kFd{DiffMode::finite_difference};

}  // namespace

TEST_CASE("gradient of elementary fields") {
  auto sq = ScalarField::generic(1, [](auto p) { return p[0] * p[0]; });
  CHECK(gradient(sq, Point{3.0})[0] == doctest::Approx(6.0).epsilon(1e-15));

  auto c = ScalarField::generic(3, [](auto) { return 7.5; });
  for (double g : gradient(c, Point{1.0, -2.0, 0.3})) CHECK(g == 0.0);

  auto f = ScalarField::generic(2, [](auto p) { return p[0] - p[0] * p[0] * p[0] / 3.0 - p[1]; });
  auto g = gradient(f, Point{1.0, 0.0});
  CHECK(std::abs(g[0]) < 1e-15);
  CHECK(g[1] == -1.0);
}

TEST_CASE("gradient errors") {
  auto f = ScalarField::generic(2, [](auto p) { return p[0] * p[1]; });
  CHECK_THROWS_AS(gradient(f, Point{1.0}), DimensionError);

  auto bad = ScalarField::generic(1, [](auto p) { return 1.0 / (p[0] - p[0]); });
  CHECK_THROWS_AS(gradient(bad, Point{1.0}), NonFiniteError);

  auto numeric = ScalarField::numeric(1, [](std::span<const double> p) { return p[0] * p[0]; });
  CHECK_THROWS_AS(gradient(numeric, Point{2.0}), DepthError);
  CHECK(gradient(numeric, Point{2.0}, kFd)[0] == doctest::Approx(4.0).epsilon(1e-8));

  DiffConfig broken{DiffMode::finite_difference, -1.0};
  CHECK_THROWS_AS(gradient(numeric, Point{2.0}, broken), PreconditionError);
}

TEST_CASE("jacobian examples") {
  auto id = VectorFieldFn::generic(3, [](auto p) {
    using T = typename decltype(p)::value_type;
    return std::vector<T>(p.begin(), p.end());
  });
  auto J = jacobian(id, Point{0.3, -1.0, 2.0});
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(J(i, j) == (i == j ? 1.0 : 0.0));

  auto sq = VectorFieldFn::generic(1, [](auto p) {
    using T = typename decltype(p)::value_type;
    return std::vector<T>{p[0] * p[0]};
  });
  CHECK(jacobian(sq, Point{2.0})(0, 0) == 4.0);
  CHECK_THROWS_AS(jacobian(sq, Point{2.0, 1.0}), DimensionError);
}

TEST_CASE("lie bracket examples") {
  auto xdx = VectorFieldFn::generic(1, [](auto p) {
    using T = typename decltype(p)::value_type;
    return std::vector<T>{p[0]};
  });
  auto dx = VectorFieldFn::constant(1, {1.0});
  CHECK(lie_bracket(xdx, dx, Point{0.7})[0] == -1.0);
  CHECK(lie_bracket(xdx, xdx, Point{0.7})[0] == 0.0);

  auto e1 = VectorFieldFn::constant(2, {1.0, 0.0});
  auto e2 = VectorFieldFn::constant(2, {0.0, 1.0});
  auto br = lie_bracket(e1, e2, Point{0.1, 0.2});
  CHECK(br[0] == 0.0);
  CHECK(br[1] == 0.0);
  CHECK_THROWS_AS(lie_bracket(dx, e1, Point{0.1}), DimensionError);
}

TEST_CASE("property: dual gradient agrees with central differences on random polynomials") {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto poly = testing::random_polynomial(3, 4, 6, 100 + s);
    const auto f = poly.field(3);
    for (const auto& p : testing::random_points(20, 3, -1.5, 1.5, 7 + s)) {
      const auto gd = gradient(f, p);
      const auto gf = gradient(f, p, kFd);
      for (std::size_t j = 0; j < 3; ++j)
        CHECK(std::abs(gd[j] - gf[j]) <= 1e-6 * std::max(1.0, std::abs(gd[j])));
    }
  }
}

TEST_CASE("property: lie bracket is antisymmetric") {
  auto v = VectorFieldFn::generic(2, [](auto p) {
    using T = typename decltype(p)::value_type;
    return std::vector<T>{p[0] * p[1], sin(p[0]) + p[1] * p[1] * p[1]};
  });
  auto w = VectorFieldFn::generic(2, [](auto p) {
    using T = typename decltype(p)::value_type;
    return std::vector<T>{exp(p[1]) - p[0], p[0] * p[0]};
  });
  for (const auto& p : testing::random_points(100, 2, -2.0, 2.0, 11)) {
    auto a = lie_bracket(v, w, p);
    auto b = lie_bracket(w, v, p);
    for (std::size_t i = 0; i < 2; ++i) CHECK(std::abs(a[i] + b[i]) <= 1e-10);
  }
}

TEST_CASE("property: jacobian of a linear field is constant") {
  const double A[3][3] = {{1.0, -2.0, 0.5}, {0.0, 3.0, -1.0}, {4.0, 0.25, 2.0}};
  auto lin = VectorFieldFn::generic(3, [A](auto p) {
    using T = typename decltype(p)::value_type;
    std::vector<T> r(3, T(0.0));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r[i] = r[i] + A[i][j] * p[j];
    return r;
  });
  const auto J0 = jacobian(lin, Point{0.0, 0.0, 0.0});
  for (const auto& p : testing::random_points(50, 3, -10.0, 10.0, 3)) {
    const auto J = jacobian(lin, p);
    for (std::size_t k = 0; k < 9; ++k) CHECK(std::abs(J.data[k] - J0.data[k]) <= 1e-12);
  }
}

TEST_CASE("hessian: dual mode is exact and symmetric, FD mode close") {
  auto f = ScalarField::generic(2, [](auto p) { return p[0] * p[0] * p[1] + sin(p[1]); });
  const Point p{1.5, 0.4};
  const auto H = hessian(f, p);
  CHECK(H(0, 0) == doctest::Approx(2.0 * 0.4).epsilon(1e-14));
  CHECK(H(0, 1) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(H(1, 0) == H(0, 1));
  CHECK(H(1, 1) == doctest::Approx(-std::sin(0.4)).epsilon(1e-14));
  const auto Hf = hessian(f, p, kFd);
  for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(Hf.data[k] - H.data[k]) < 1e-4);
}

TEST_CASE("dual arithmetic carries exact derivatives") {
  D1 x(2.0, 1.0);
  auto y = ipow(x, 3) / (1.0 + x) + log(x) * sqrt(x);
  const double expect = (3.0 * 4.0 * 3.0 - 8.0) / 9.0 + 0.5 * std::sqrt(2.0) +
                        std::log(2.0) / (2.0 * std::sqrt(2.0));
  CHECK(y.d == doctest::Approx(expect).epsilon(1e-14));
  D2 z(D1(0.3, 1.0), D1(1.0, 0.0));
  auto w = cos(z);
  CHECK(w.d.d == doctest::Approx(-std::cos(0.3)).epsilon(1e-14));
}
