#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>

#include "core/kernel.hpp"
#include "test_helpers.hpp"

using namespace gfkit;
using gfkit::test::all_kernels;
using gfkit::test::quad_oracle;
using gfkit::test::random_smooth;

TEST_CASE("fragment count") {
  CHECK(Kernel::uniform().fragment_count() == 2.0);
  CHECK(Kernel::equal_mitosis().fragment_count() == 2.0);
  CHECK(Kernel::general_mitosis(0.3).fragment_count() == 2.0);
  CHECK(Kernel::homogeneous(0.0).fragment_count() == 2.0);
  CHECK(Kernel::homogeneous(1.0).fragment_count() == 1.5);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(Kernel::general_mitosis(0.0), std::invalid_argument);
  CHECK_THROWS_AS(Kernel::general_mitosis(0.7), std::invalid_argument);
  CHECK_THROWS_AS(Kernel::homogeneous(-1.0), std::invalid_argument);
  CHECK(Kernel::general_mitosis(0.01).sigma_near_zero());
  CHECK_FALSE(Kernel::general_mitosis(0.3).sigma_near_zero());
}

TEST_CASE("cumulative examples") {
  CHECK(Kernel::uniform().cumulative(0.5, 1.0) == doctest::Approx(1.0));
  CHECK(Kernel::equal_mitosis().cumulative(0.6, 1.0) == doctest::Approx(2.0));
  CHECK(Kernel::homogeneous(1.0).cumulative(0.5, 1.0) == doctest::Approx(0.375));
  CHECK_THROWS_AS(Kernel::uniform().cumulative(0.5, 0.0), std::domain_error);
  CHECK_THROWS_AS(Kernel::uniform().cumulative(-0.5, 1.0), std::domain_error);
}

TEST_CASE("cumulative is nondecreasing and reaches k at x = y") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> ys(0.2, 6.0);
  for (const Kernel& kern : all_kernels()) {
    for (int trial = 0; trial < 5; ++trial) {
      const double y = ys(rng);
      double prev = 0.0;
      for (int i = 0; i <= 200; ++i) {
        const double x = 1.2 * y * i / 200.0;
        const double K = kern.cumulative(x, y);
        CHECK(K >= prev - 1e-12);
        prev = K;
      }
      CHECK(kern.cumulative(y, y) == doctest::Approx(kern.fragment_count()).epsilon(1e-12));
    }
  }
}

TEST_CASE("apply_gain closed form for equal mitosis") {
  Grid g(10.0, 501);
  GridFunction n = sample(g, [](double x) { return 4.0 * x * std::exp(-2.0 * x); });
  GridFunction out = Kernel::equal_mitosis().apply_gain(n, 1.0);
  for (int i = 0; i < g.n_nodes(); i += 17)
    CHECK(out[i] == doctest::Approx(4.0 * interpolate(n, 2.0 * g.node(i))).epsilon(1e-14));
}

TEST_CASE("apply_gain for uniform fragmentation against the quadrature oracle") {
  // n = indicator of [0,1]; gain(x) = int_x^1 2/y dy for x in (0,1)
  Grid g(2.0, 2001);
  GridFunction n = sample(g, [](double x) { return x <= 1.0 ? 1.0 : 0.0; });
  GridFunction out = Kernel::uniform().apply_gain(n, 1.0);
  const double oracle = quad_oracle([](double y) { return 2.0 / y; }, 0.5, 1.0);
  CHECK(oracle == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-9));
  const int i_half = 500;  // x = 0.5
  REQUIRE(g.node(i_half) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(out[i_half] == doctest::Approx(oracle).epsilon(2e-3));
}

TEST_CASE("apply_gain of zero is zero") {
  Grid g(5.0, 64);
  for (const Kernel& kern : all_kernels()) {
    GridFunction out = kern.apply_gain(make_grid_function(g, 0.0), 2.0);
    for (double v : out.values) CHECK(v == 0.0);
  }
}

TEST_CASE("apply_beta closed form for equal mitosis on constant data") {
  Grid g(8.0, 321);
  GridFunction m = make_grid_function(g, 0.7);
  GridFunction out = Kernel::equal_mitosis().apply_beta(m, 1.5);
  for (int i = 0; i < g.n_nodes(); ++i) {
    if (2.0 * g.node(i) <= g.x_max())
      CHECK(out[i] == doctest::Approx(2.0 * 1.5 * 0.7).epsilon(1e-14));
  }
}

TEST_CASE("apply_beta for uniform fragmentation on constant data") {
  // int_x^{xmax} 2x/y^2 dy = 2 - 2x/xmax
  Grid g(20.0, 4000);
  GridFunction m = make_grid_function(g, 1.0);
  GridFunction out = Kernel::uniform().apply_beta(m, 1.0);
  for (int i : {40, 400, 2000}) {
    const double x = g.node(i);
    const double exact = 2.0 - 2.0 * x / g.x_max();
    CHECK(out[i] == doctest::Approx(exact).epsilon(1e-4));
  }
}

TEST_CASE("apply_beta of zero is zero") {
  Grid g(5.0, 64);
  for (const Kernel& kern : all_kernels()) {
    GridFunction out = kern.apply_beta(make_grid_function(g, 0.0), 2.0);
    for (double v : out.values) CHECK(v == 0.0);
  }
}

TEST_CASE("apply_beta preserves nonnegativity") {
  Grid g(12.0, 600);
  GridFunction m = sample(g, [](double x) { return x * std::exp(-x); });
  for (const Kernel& kern : all_kernels()) {
    GridFunction out = kern.apply_beta(m, 1.0);
    for (double v : out.values) CHECK(v >= -1e-15);
  }
}

TEST_CASE("moment identities") {
  MomentReport u = Kernel::uniform().verify_moments(1.0, 1e-6);
  CHECK(u.zeroth == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(u.first == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(u.pass);
  MomentReport h = Kernel::homogeneous(1.0).verify_moments(2.0, 1e-6);
  CHECK(h.zeroth == doctest::Approx(1.5).epsilon(1e-7));
  CHECK(h.first == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(h.pass);
  MomentReport m = Kernel::general_mitosis(0.3).verify_moments(5.0, 1e-6);
  CHECK(m.zeroth == 2.0);
  CHECK(m.first == 5.0);
  CHECK(m.pass);
  for (const Kernel& kern : all_kernels())
    for (double y : {0.5, 1.0, 3.0}) CHECK(kern.verify_moments(y, 1e-6).pass);
}

TEST_CASE("beta unit mass") {
  CHECK(Kernel::uniform().verify_beta_mass(1.0, 1e-6).mass == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(Kernel::equal_mitosis().verify_beta_mass(17.0, 1e-6).mass == 1.0);
  CHECK(Kernel::homogeneous(1.0).verify_beta_mass(3.0, 1e-6).mass ==
        doctest::Approx(1.0).epsilon(1e-7));
  for (const Kernel& kern : all_kernels())
    for (double y : {0.5, 1.0, 3.0}) CHECK(kern.verify_beta_mass(y, 1e-6).pass);
}

TEST_CASE("beta contraction: int |beta m| <= int |m| up to quadrature slack") {
  Grid g(15.0, 1200);
  std::mt19937 rng(7);
  for (const Kernel& kern : all_kernels()) {
    for (int trial = 0; trial < 8; ++trial) {
      GridFunction m = random_smooth(g, rng);
      GridFunction bm = kern.apply_beta(m, 1.0);
      CHECK(l1_norm(bm) <= l1_norm(m) * (1.0 + 5e-4) + 1e-12);
    }
  }
}

TEST_CASE("kernel reductions are exact at the nodes") {
  Grid g(10.0, 800);
  GridFunction f = sample(g, [](double x) { return x * std::exp(-x) * (1.0 + 0.3 * std::sin(3 * x)); });
  GridFunction a1 = Kernel::general_mitosis(0.5).apply_gain(f, 1.0);
  GridFunction a2 = Kernel::equal_mitosis().apply_gain(f, 1.0);
  GridFunction b1 = Kernel::homogeneous(0.0).apply_gain(f, 1.0);
  GridFunction b2 = Kernel::uniform().apply_gain(f, 1.0);
  for (int i = 0; i < g.n_nodes(); ++i) {
    CHECK(a1[i] == doctest::Approx(a2[i]).epsilon(1e-13));
    CHECK(b1[i] == b2[i]);
  }
}

TEST_CASE("density accessors refuse atomic kernels") {
  CHECK_THROWS_AS(Kernel::equal_mitosis().kappa_density(0.5, 1.0), std::logic_error);
  CHECK_THROWS_AS(Kernel::general_mitosis(0.4).beta_density(0.5, 1.0), std::logic_error);
  CHECK(Kernel::uniform().kappa_density(0.5, 1.0) == doctest::Approx(2.0));
  CHECK(Kernel::uniform().beta_density(0.5, 1.0) == doctest::Approx(1.0));
}
