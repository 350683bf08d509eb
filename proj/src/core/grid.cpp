#include "grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gfkit {

Grid::Grid(double x_max, int n_nodes) : x_max_(x_max), n_(n_nodes) {
  if (!(x_max > 0.0)) throw std::invalid_argument("grid: x_max must be > 0");
  if (n_nodes < 16) throw std::invalid_argument("grid: n_nodes must be >= 16");
  h_ = x_max_ / (n_ - 1);
}

std::vector<double> Grid::nodes() const {
  std::vector<double> out(static_cast<size_t>(n_));
  for (int i = 0; i < n_; ++i) out[static_cast<size_t>(i)] = node(i);
  return out;
}

GridFunction make_grid_function(const Grid& grid, double fill) {
  return GridFunction{grid, std::vector<double>(static_cast<size_t>(grid.n_nodes()), fill)};
}

Density make_density(GridFunction f) {
  double maxv = 0.0;
  for (double v : f.values) maxv = std::max(maxv, std::abs(v));
  const double tol = 1e-14 * std::max(1.0, maxv);
  for (double& v : f.values) {
    if (v < 0.0) {
      if (v < -tol) throw std::invalid_argument("density: negative node value");
      v = 0.0;
    }
  }
  double rho = integrate(f);
  return Density{std::move(f), rho};
}

double integrate(const GridFunction& f) {
  const double h = f.grid.spacing();
  double acc = 0.0;
  for (int i = 1; i < f.size(); ++i) acc += 0.5 * h * (f[i - 1] + f[i]);
  return acc;
}

double l1_norm(const GridFunction& f) {
  const double h = f.grid.spacing();
  double acc = 0.0;
  for (int i = 1; i < f.size(); ++i)
    acc += 0.5 * h * (std::abs(f[i - 1]) + std::abs(f[i]));
  return acc;
}

double interpolate(const GridFunction& f, double x) {
  if (x < 0.0) throw std::domain_error("interpolate: x must be >= 0");
  if (x > f.grid.x_max()) return 0.0;
  const double h = f.grid.spacing();
  int i = static_cast<int>(x / h);
  i = std::clamp(i, 0, f.size() - 2);
  double t = (x - f.grid.node(i)) / h;
  t = std::clamp(t, 0.0, 1.0);
  return (1.0 - t) * f[i] + t * f[i + 1];
}

GridFunction differentiate(const GridFunction& f) {
  GridFunction out = make_grid_function(f.grid);
  const double h = f.grid.spacing();
  const int n = f.size();
  out[0] = (f[1] - f[0]) / h;
  for (int i = 1; i < n - 1; ++i) out[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
  out[n - 1] = (f[n - 1] - f[n - 2]) / h;
  return out;
}

GridFunction antiderivative(const GridFunction& f) {
  GridFunction out = make_grid_function(f.grid);
  const double h = f.grid.spacing();
  double acc = 0.0;
  out[0] = 0.0;
  for (int i = 1; i < f.size(); ++i) {
    acc += 0.5 * h * (f[i - 1] + f[i]);
    out[i] = acc;
  }
  return out;
}

void check_same_grid(const GridFunction& a, const GridFunction& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("grid mismatch");
}

}  // namespace gfkit
