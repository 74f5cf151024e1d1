#pragma once

// Phase function g of the out-of-plane shear and the 2x2 limit matrix built
// from quadrant averages of exp(2 pi i g).
//
// g is the Gaussian-mollified half-indicator f = 1/2 * 1_{Q2 u Q4}.  Writing
// u(x) = 1_{x >= 1/2}, one has 1_{Q2 u Q4} = u(x) + u(y) - 2 u(x) u(y), so the
// mollified, band-truncated g factorizes as
//     g(x,y) = 1/2 (U(x) + U(y) - 2 U(x) U(y))
// with U the 1D mollified step.  Its 2D Fourier coefficients are products of
// 1D ones and are exposed through `coefficient`.

#include <array>
#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "dynamo/map_core.hpp"

namespace dynamo {

using cplx = std::complex<double>;

class ShearProfile {
 public:
  enum class Kind { Zero, Quadrant };

  /// g = 0, the planar (anti-dynamo) control.
  static ShearProfile zero();

  /// Mollified quadrant profile with Gaussian multiplier exp(-l^2 |k|^2 / 2),
  /// truncated to |k|_inf <= band.  moll_scale == 0 gives the unmollified
  /// indicator, evaluated exactly (infinite band).
  static ShearProfile quadrant(double moll_scale, int band = 128);

  Kind kind() const noexcept { return kind_; }
  double moll_scale() const noexcept { return moll_scale_; }
  int band() const noexcept { return band_; }
  bool exact() const noexcept { return kind_ == Kind::Quadrant && moll_scale_ == 0.0; }

  /// 1D coefficient of the mollified step U at wavenumber k.
  cplx step_coefficient(int k) const;
  /// 2D coefficient g^(k1,k2); zero outside the band.
  cplx coefficient(int k1, int k2) const;

  double eval(const TorusPoint& p) const;
  Vec2 grad(const TorusPoint& p) const;

  /// Values of U on the uniform nodes (i + offset)/m, i = 0..m-1.
  std::vector<double> step_samples(int m, double offset) const;
  std::vector<double> step_derivative_samples(int m, double offset) const;

  /// Sum of 2 pi |k| |g^(k)| over the band; infinite for the exact profile.
  double c1_bound() const;

  void save(std::ostream& os) const;
  static ShearProfile load(std::istream& is);

 private:
  ShearProfile() = default;
  double step(double x) const;
  double step_derivative(double x) const;

  Kind kind_ = Kind::Zero;
  double moll_scale_ = 0.0;
  int band_ = 0;
  std::vector<double> sine_amp_;  // U(x) = 1/2 + sum_k sine_amp_[k] sin(2 pi k x)
};

double eval_g(const ShearProfile& profile, const TorusPoint& p);
Vec2 eval_grad_g(const ShearProfile& profile, const TorusPoint& p);

struct QuadrantIntegrals {
  std::array<cplx, 4> q{};       // integrals of exp(2 pi i g) over Q1..Q4
  std::array<double, 4> err{};  // Richardson error estimate per quadrant
  double max_error() const;
};

/// Composite midpoint rule on an m x m grid aligned to x = 1/2 and y = 1/2,
/// refined to 2m and Richardson-extrapolated.
QuadrantIntegrals quadrant_integrals(const ShearProfile& profile, int m = 1024);

/// Integrals of g itself over the four quadrants (same rule, no extrapolation).
std::array<double, 4> quadrant_integrals_of_g(const ShearProfile& profile, int m);

struct LimitMatrix {
  std::array<std::array<cplx, 2>, 2> m{};
  cplx mu;
  double quadrature_error = 0.0;

  cplx trace() const { return m[0][0] + m[1][1]; }
  cplx det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
  std::array<cplx, 2> eigenvalues() const;
};

LimitMatrix limit_matrix(const QuadrantIntegrals& q);
LimitMatrix limit_matrix(const ShearProfile& profile, int m = 1024);

}  // namespace dynamo
