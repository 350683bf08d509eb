#pragma once

#include <string>

#include "grid.hpp"

namespace gfkit {

enum class KernelVariant { EqualMitosis, GeneralMitosis, Uniform, Homogeneous };

struct MomentReport {
  double zeroth;
  double first;
  bool pass;
};

struct BetaMassReport {
  double mass;
  bool pass;
};

/// Fragment distribution kappa(x,y) together with its fragment count k,
/// cumulative form K(x,y) and derived kernel beta(x,y).
///
/// The two mitosis variants are atomic (Dirac parts); their operator action
/// uses the closed composition forms with linear interpolation for off-node
/// arguments, never a discretized near-singular density. Uniform and
/// Homogeneous are density kernels integrated by the grid quadrature rule.
class Kernel {
public:
  static Kernel uniform();
  static Kernel equal_mitosis();
  static Kernel general_mitosis(double sigma);  // sigma in (0, 1/2]
  static Kernel homogeneous(double alpha);      // alpha > -1

  KernelVariant variant() const { return variant_; }
  double sigma() const { return sigma_; }
  double alpha() const { return alpha_; }
  bool atomic() const;
  std::string name() const;

  /// Average number of fragments: 2 except (2+alpha)/(1+alpha) for Homogeneous.
  double fragment_count() const;

  /// sigma below 0.05 approaches the age-structure limit; callers may warn.
  bool sigma_near_zero() const;

  /// K(x,y) = int_0^x kappa(z,y) dz. Nondecreasing in x, K(y,y) = k.
  double cumulative(double x, double y) const;

  /// kappa(x,y) for the density variants (throws for atomic ones).
  double kappa_density(double x, double y) const;

  /// beta(x,y) for the density variants (throws for atomic ones).
  double beta_density(double x, double y) const;

  /// x -> B int kappa(x,y) n(y) dy on the grid of n.
  GridFunction apply_gain(const GridFunction& n, double B) const;

  /// x -> B int beta(x,y) m(y) dy on the grid of m.
  GridFunction apply_beta(const GridFunction& m, double B) const;

  /// Checks int kappa dx = k and int x kappa dx = y (analytic for atoms,
  /// fine fixed quadrature for densities; accurate for alpha >= 0).
  MomentReport verify_moments(double y, double tol) const;

  /// Checks int_0^inf beta(x,y) dx = 1.
  BetaMassReport verify_beta_mass(double y, double tol) const;

private:
  Kernel(KernelVariant v, double sigma, double alpha)
      : variant_(v), sigma_(sigma), alpha_(alpha) {}

  KernelVariant variant_;
  double sigma_;
  double alpha_;
};

Kernel kernel_from_name(const std::string& type, double sigma, double alpha);

}  // namespace gfkit
