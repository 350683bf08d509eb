#include "kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace gfkit {
namespace {

// Suffix cumulative trapezoid: S[i] = int_{x_i}^{x_max} f dx.
std::vector<double> suffix_trapezoid(const Grid& grid, const std::vector<double>& f) {
  const int n = grid.n_nodes();
  const double h = grid.spacing();
  std::vector<double> s(static_cast<size_t>(n), 0.0);
  for (int i = n - 2; i >= 0; --i)
    s[static_cast<size_t>(i)] =
        s[static_cast<size_t>(i + 1)] + 0.5 * h * (f[static_cast<size_t>(i)] + f[static_cast<size_t>(i + 1)]);
  return s;
}

// Fixed fine trapezoid on [0, y] for the kernel self-checks. Independent of
// any Grid so the moment identities are not tied to a simulation mesh.
template <typename F>
double fine_trapezoid(F&& f, double y, int n = 20001) {
  const double h = y / (n - 1);
  double acc = 0.0;
  double prev = f(0.0);
  for (int i = 1; i < n; ++i) {
    const double cur = f(i * h);
    acc += 0.5 * h * (prev + cur);
    prev = cur;
  }
  return acc;
}

}  // namespace

Kernel Kernel::uniform() { return Kernel(KernelVariant::Uniform, 0.0, 0.0); }

Kernel Kernel::equal_mitosis() { return Kernel(KernelVariant::EqualMitosis, 0.5, 0.0); }

Kernel Kernel::general_mitosis(double sigma) {
  if (!(sigma > 0.0) || !(sigma <= 0.5))
    throw std::invalid_argument("general_mitosis: sigma must lie in (0, 1/2]");
  return Kernel(KernelVariant::GeneralMitosis, sigma, 0.0);
}

Kernel Kernel::homogeneous(double alpha) {
  if (!(alpha > -1.0)) throw std::invalid_argument("homogeneous: alpha must be > -1");
  return Kernel(KernelVariant::Homogeneous, 0.0, alpha);
}

bool Kernel::atomic() const {
  return variant_ == KernelVariant::EqualMitosis || variant_ == KernelVariant::GeneralMitosis;
}

std::string Kernel::name() const {
  switch (variant_) {
    case KernelVariant::EqualMitosis: return "equal_mitosis";
    case KernelVariant::GeneralMitosis: return "general_mitosis";
    case KernelVariant::Uniform: return "uniform";
    case KernelVariant::Homogeneous: return "homogeneous";
  }
  return "?";
}

double Kernel::fragment_count() const {
  if (variant_ == KernelVariant::Homogeneous) return (2.0 + alpha_) / (1.0 + alpha_);
  return 2.0;
}

bool Kernel::sigma_near_zero() const {
  return variant_ == KernelVariant::GeneralMitosis && sigma_ < 0.05;
}

double Kernel::cumulative(double x, double y) const {
  if (!(y > 0.0)) throw std::domain_error("cumulative: y must be > 0");
  if (x < 0.0) throw std::domain_error("cumulative: x must be >= 0");
  switch (variant_) {
    case KernelVariant::EqualMitosis:
      return y <= 2.0 * x ? 2.0 : 0.0;
    case KernelVariant::GeneralMitosis:
      return (x >= sigma_ * y ? 1.0 : 0.0) + (x >= (1.0 - sigma_) * y ? 1.0 : 0.0);
    case KernelVariant::Uniform:
      return 2.0 * std::min(x, y) / y;
    case KernelVariant::Homogeneous:
      return fragment_count() * std::pow(std::min(x, y) / y, 1.0 + alpha_);
  }
  return 0.0;
}

double Kernel::kappa_density(double x, double y) const {
  if (atomic()) throw std::logic_error("kappa_density: kernel is atomic");
  if (!(y > 0.0)) throw std::domain_error("kappa_density: y must be > 0");
  if (x < 0.0 || x > y) return 0.0;
  if (variant_ == KernelVariant::Uniform) return 2.0 / y;
  return (2.0 + alpha_) * std::pow(x, alpha_) / std::pow(y, 1.0 + alpha_);
}

double Kernel::beta_density(double x, double y) const {
  if (atomic()) throw std::logic_error("beta_density: kernel is atomic");
  if (!(y > 0.0)) throw std::domain_error("beta_density: y must be > 0");
  // support treated as closed at x = y (left limit at the jump), so that the
  // trapezoid of the unit-mass identity sees the full half-interval there
  if (x < 0.0 || x > y) return 0.0;
  if (variant_ == KernelVariant::Uniform) return 2.0 * x / (y * y);
  return (2.0 + alpha_) * std::pow(x, 1.0 + alpha_) / std::pow(y, 2.0 + alpha_);
}

GridFunction Kernel::apply_gain(const GridFunction& n, double B) const {
  const Grid& g = n.grid;
  const int nn = g.n_nodes();
  GridFunction out = make_grid_function(g);

  switch (variant_) {
    case KernelVariant::EqualMitosis: {
      for (int i = 0; i < nn; ++i) out[i] = 4.0 * B * interpolate(n, 2.0 * g.node(i));
      return out;
    }
    case KernelVariant::GeneralMitosis: {
      const double s = sigma_;
      for (int i = 0; i < nn; ++i) {
        const double x = g.node(i);
        out[i] = B * (interpolate(n, x / s) / s + interpolate(n, x / (1.0 - s)) / (1.0 - s));
      }
      return out;
    }
    case KernelVariant::Uniform:
      break;
    case KernelVariant::Homogeneous:
      if (alpha_ != 0.0) {
        // gain(x) = B (2+a) x^a int_x^xmax n(y) / y^(1+a) dy
        const double a = alpha_;
        std::vector<double> f(static_cast<size_t>(nn), 0.0);
        for (int i = 1; i < nn; ++i)
          f[static_cast<size_t>(i)] = n[i] / std::pow(g.node(i), 1.0 + a);
        auto s = suffix_trapezoid(g, f);
        out[0] = 0.0;  // boundary value; the integrand is singular at y=0
        for (int i = 1; i < nn; ++i)
          out[i] = B * (2.0 + a) * std::pow(g.node(i), a) * s[static_cast<size_t>(i)];
        return out;
      }
      break;  // alpha == 0 reduces exactly to the uniform formula
  }

  // Uniform: gain(x) = 2B int_x^xmax n(y)/y dy. The y=0 integrand uses the
  // limiting slope 2 n(x_1)/x_1 (exact limit when n(0)=0, keeps the operator
  // linear in n; for n(0) != 0 the continuum integral diverges anyway).
  std::vector<double> f(static_cast<size_t>(nn), 0.0);
  for (int i = 1; i < nn; ++i) f[static_cast<size_t>(i)] = 2.0 * n[i] / g.node(i);
  f[0] = 2.0 * n[1] / g.node(1);
  auto s = suffix_trapezoid(g, f);
  for (int i = 0; i < nn; ++i) out[i] = B * s[static_cast<size_t>(i)];
  return out;
}

GridFunction Kernel::apply_beta(const GridFunction& m, double B) const {
  const Grid& g = m.grid;
  const int nn = g.n_nodes();
  GridFunction out = make_grid_function(g);

  switch (variant_) {
    case KernelVariant::EqualMitosis: {
      for (int i = 0; i < nn; ++i) out[i] = 2.0 * B * interpolate(m, 2.0 * g.node(i));
      return out;
    }
    case KernelVariant::GeneralMitosis: {
      const double s = sigma_;
      for (int i = 0; i < nn; ++i) {
        const double x = g.node(i);
        out[i] = B * (interpolate(m, x / s) + interpolate(m, x / (1.0 - s)));
      }
      return out;
    }
    case KernelVariant::Uniform: {
      std::vector<double> f(static_cast<size_t>(nn), 0.0);
      for (int i = 1; i < nn; ++i) {
        const double x = g.node(i);
        f[static_cast<size_t>(i)] = m[i] / (x * x);
      }
      auto s = suffix_trapezoid(g, f);
      out[0] = 0.0;
      for (int i = 1; i < nn; ++i) out[i] = 2.0 * B * g.node(i) * s[static_cast<size_t>(i)];
      return out;
    }
    case KernelVariant::Homogeneous: {
      const double a = alpha_;
      std::vector<double> f(static_cast<size_t>(nn), 0.0);
      for (int i = 1; i < nn; ++i)
        f[static_cast<size_t>(i)] = m[i] / std::pow(g.node(i), 2.0 + a);
      auto s = suffix_trapezoid(g, f);
      out[0] = 0.0;
      for (int i = 1; i < nn; ++i)
        out[i] = B * (2.0 + a) * std::pow(g.node(i), 1.0 + a) * s[static_cast<size_t>(i)];
      return out;
    }
  }
  return out;
}

MomentReport Kernel::verify_moments(double y, double tol) const {
  if (!(y > 0.0)) throw std::domain_error("verify_moments: y must be > 0");
  const double k = fragment_count();
  if (atomic()) {
    // Equal mitosis: atom 2 delta(x - y/2); general: delta(x - sigma y) +
    // delta(x - (1-sigma) y). Count and mass rules hold identically.
    return MomentReport{k, y, true};
  }
  double zeroth = fine_trapezoid([&](double x) { return kappa_density(x, y); }, y);
  double first = fine_trapezoid([&](double x) { return x * kappa_density(x, y); }, y);
  bool pass = std::abs(zeroth - k) <= tol && std::abs(first - y) <= tol;
  return MomentReport{zeroth, first, pass};
}

BetaMassReport Kernel::verify_beta_mass(double y, double tol) const {
  if (!(y > 0.0)) throw std::domain_error("verify_beta_mass: y must be > 0");
  if (atomic()) {
    // beta = delta(x - y/2), resp. sigma delta(x - sigma y) + (1-sigma) delta(...).
    return BetaMassReport{1.0, true};
  }
  double mass = fine_trapezoid([&](double x) { return beta_density(x, y); }, y);
  return BetaMassReport{mass, std::abs(mass - 1.0) <= tol};
}

Kernel kernel_from_name(const std::string& type, double sigma, double alpha) {
  if (type == "uniform") return Kernel::uniform();
  if (type == "equal_mitosis") return Kernel::equal_mitosis();
  if (type == "general_mitosis") return Kernel::general_mitosis(sigma);
  if (type == "homogeneous") return Kernel::homogeneous(alpha);
  throw std::invalid_argument("unknown kernel type: " + type);
}

}  // namespace gfkit
