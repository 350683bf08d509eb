#pragma once

#include <cstddef>
#include <vector>

namespace gfkit {

/// Uniform 1-D mesh on [0, x_max] with nodes x_i = i*h, h = x_max/(n_nodes-1).
class Grid {
public:
  Grid(double x_max, int n_nodes);

  double x_max() const { return x_max_; }
  int n_nodes() const { return n_; }
  double spacing() const { return h_; }
  double node(int i) const { return i * h_; }
  std::vector<double> nodes() const;

  bool operator==(const Grid& other) const = default;

private:
  double x_max_;
  int n_;
  double h_;
};

/// Signed node values on a Grid. Carrier for n, M, N, xi, eta, u.
struct GridFunction {
  Grid grid;
  std::vector<double> values;

  double operator[](int i) const { return values[static_cast<size_t>(i)]; }
  double& operator[](int i) { return values[static_cast<size_t>(i)]; }
  int size() const { return grid.n_nodes(); }
};

GridFunction make_grid_function(const Grid& grid, double fill = 0.0);

template <typename F>
GridFunction sample(const Grid& grid, F&& f) {
  GridFunction out = make_grid_function(grid);
  for (int i = 0; i < grid.n_nodes(); ++i) out[i] = f(grid.node(i));
  return out;
}

/// Nonnegative grid function with its cached zeroth moment rho = integral.
struct Density {
  GridFunction f;
  double rho;
};

/// Validates nonnegativity (up to -1e-14*max noise, clipped) and caches rho.
Density make_density(GridFunction f);

/// Composite trapezoid over [0, x_max]. Accumulated left to right so that
/// antiderivative(f).values.back() == integrate(f) bit-exactly.
double integrate(const GridFunction& f);

double l1_norm(const GridFunction& f);

/// Piecewise-linear evaluation; 0 beyond x_max, domain error for x < 0.
double interpolate(const GridFunction& f, double x);

/// Central differences at interior nodes, one-sided at the two boundaries.
GridFunction differentiate(const GridFunction& f);

/// Cumulative trapezoid, value 0 at x = 0.
GridFunction antiderivative(const GridFunction& f);

void check_same_grid(const GridFunction& a, const GridFunction& b);

}  // namespace gfkit
