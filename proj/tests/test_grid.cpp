#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "core/grid.hpp"

using namespace gfkit;

TEST_CASE("grid construction and invariants") {
  Grid g(20.0, 4000);
  CHECK(g.node(0) == 0.0);
  CHECK(g.node(g.n_nodes() - 1) == doctest::Approx(20.0).epsilon(1e-15));
  CHECK(g.spacing() == doctest::Approx(20.0 / 3999));
  CHECK_THROWS_AS(Grid(0.0, 100), std::invalid_argument);
  CHECK_THROWS_AS(Grid(10.0, 8), std::invalid_argument);
}

TEST_CASE("integrate is exact for constants and linears") {
  Grid g(10.0, 101);
  CHECK(integrate(sample(g, [](double) { return 1.0; })) == doctest::Approx(10.0).epsilon(1e-14));
  Grid g2(2.0, 33);
  CHECK(integrate(sample(g2, [](double x) { return x; })) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("integrate of the explicit equilibrium profile") {
  // analytic integral of 4 x e^{-2x} over (0, inf) is exactly 1; the trapezoid
  // error at this resolution is ~8e-6
  Grid g(20.0, 4000);
  const double v = integrate(sample(g, [](double x) { return 4.0 * x * std::exp(-2.0 * x); }));
  CHECK(v == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("interpolate: nodes, midpoints, truncation, domain") {
  Grid g(4.0, 17);
  GridFunction f = sample(g, [](double x) { return 3.0 * x + 1.0; });
  CHECK(interpolate(f, g.node(5)) == doctest::Approx(3.0 * g.node(5) + 1.0).epsilon(1e-15));
  const double mid = 0.5 * (g.node(3) + g.node(4));
  CHECK(interpolate(f, mid) == doctest::Approx(3.0 * mid + 1.0).epsilon(1e-15));
  CHECK(interpolate(f, 5.0) == 0.0);
  CHECK_THROWS_AS(interpolate(f, -0.1), std::domain_error);
}

TEST_CASE("differentiate: linear, constant, quadratic") {
  Grid g(2.0, 201);
  GridFunction lin = differentiate(sample(g, [](double x) { return 3.0 * x - 1.0; }));
  for (int i = 1; i < g.n_nodes() - 1; ++i) CHECK(lin[i] == doctest::Approx(3.0).epsilon(1e-12));
  GridFunction con = differentiate(sample(g, [](double) { return 5.0; }));
  for (int i = 0; i < g.n_nodes(); ++i) CHECK(con[i] == doctest::Approx(0.0));
  GridFunction quad = differentiate(sample(g, [](double x) { return x * x; }));
  const double h = g.spacing();
  for (int i = 1; i < g.n_nodes() - 1; ++i)
    CHECK(std::abs(quad[i] - 2.0 * g.node(i)) < 10.0 * h * h);
}

TEST_CASE("antiderivative basics") {
  Grid g(5.0, 64);
  GridFunction z = antiderivative(make_grid_function(g, 0.0));
  for (double v : z.values) CHECK(v == 0.0);
  GridFunction one = antiderivative(make_grid_function(g, 1.0));
  for (int i = 0; i < g.n_nodes(); ++i)
    CHECK(one[i] == doctest::Approx(g.node(i)).epsilon(1e-14));
}

TEST_CASE("antiderivative endpoint equals integrate bit-exactly") {
  Grid g(7.0, 313);
  GridFunction f = sample(g, [](double x) { return std::sin(1.7 * x) + 0.2 * x; });
  CHECK(antiderivative(f).values.back() == integrate(f));
}

TEST_CASE("antiderivative of a mean-zero function returns to zero") {
  Grid g(20.0, 2000);
  // n - rho N with equal integrals: M(x_max) is quadrature-exactly int f = 0
  GridFunction a = sample(g, [](double x) { return 4.0 * x * std::exp(-2.0 * x); });
  GridFunction b = sample(g, [](double x) { return 0.5 * x * x * std::exp(-x); });
  const double ia = integrate(a), ib = integrate(b);
  GridFunction f = a;
  for (int i = 0; i < f.size(); ++i) f[i] -= (ia / ib) * b[i];
  CHECK(std::abs(antiderivative(f).values.back()) < 1e-14);
}

TEST_CASE("density validation") {
  Grid g(2.0, 21);
  CHECK_THROWS_AS(make_density(sample(g, [](double x) { return 0.5 - x; })),
                  std::invalid_argument);
  Density d = make_density(sample(g, [](double x) { return x; }));
  CHECK(d.rho == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("grid mismatch detection") {
  Grid a(2.0, 21), b(2.0, 22);
  CHECK_THROWS_AS(check_same_grid(make_grid_function(a), make_grid_function(b)),
                  std::invalid_argument);
}
