#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "core/grid.hpp"
#include "core/kernel.hpp"

namespace gfkit::test {

inline std::vector<Kernel> all_kernels() {
  return {Kernel::uniform(), Kernel::equal_mitosis(), Kernel::general_mitosis(0.3),
          Kernel::homogeneous(1.0)};
}

// Smooth random trig polynomial with decaying compactly-ish supported envelope.
inline GridFunction random_smooth(const Grid& grid, std::mt19937& rng, int modes = 5) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::vector<double> c(static_cast<size_t>(modes));
  for (double& v : c) v = coef(rng);
  return sample(grid, [&](double x) {
    double acc = 0.0;
    for (int j = 0; j < modes; ++j)
      acc += c[static_cast<size_t>(j)] *
             std::sin((j + 1) * std::numbers::pi * x / grid.x_max());
    return acc * std::exp(-0.5 * x);
  });
}

// Fine composite-trapezoid quadrature oracle, independent of the Grid code.
template <typename F>
double quad_oracle(F&& f, double a, double b, int n = 200001) {
  const double h = (b - a) / (n - 1);
  double acc = 0.0;
  double prev = f(a);
  for (int i = 1; i < n; ++i) {
    const double cur = f(a + i * h);
    acc += 0.5 * h * (prev + cur);
    prev = cur;
  }
  return acc;
}

}  // namespace gfkit::test
