#pragma once

// Admissible stable leaves: straight segments W = {base + t dir, 0 <= t <= S}
// with dir in the stable cone, dir.y > 0 and S <= 1.  Points are reduced mod 1
// only when evaluated, so a leaf may wrap around the torus.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "dynamo/fields.hpp"
#include "dynamo/map_core.hpp"

namespace dynamo {

struct Leaf {
  TorusPoint base;
  Vec2 dir{0.0, 1.0};
  double length = 1.0;

  /// Validates the cone and normalization; vertical unit leaves get base.y = 0.
  static Leaf make(TorusPoint base, Vec2 dir, double length, Alpha alpha);

  TorusPoint at(double t) const noexcept { return TorusPoint::wrapped(base.x + t * dir.x, base.y + t * dir.y); }
  /// Unwrapped endpoint base + S dir.
  Vec2 end() const noexcept { return {base.x + length * dir.x, base.y + length * dir.y}; }
};

double torus_distance(const TorusPoint& a, const TorusPoint& b) noexcept;
double d_sigma(const Leaf& a, const Leaf& b) noexcept;

/// Rebuilds the canonical leaf through two unwrapped points.
Leaf leaf_from_endpoints(const Vec2& p, const Vec2& q, Alpha alpha);

struct StripPiece {
  Leaf leaf;
  RegionId region;
  double t0 = 0.0;  // parameter interval in the parent leaf
  double t1 = 0.0;
};

std::vector<StripPiece> subdivide_by_strips(const Leaf& w, Alpha alpha);
/// Safe bound 4 + 2 ceil((alpha + 2 + 2/alpha) |W|) on the piece count: at most
/// 2|W| + 2 runs between y-cuts, each crossed by x -/+ alpha y at rate <= alpha + 2/alpha.
int strip_piece_bound(const Leaf& w, Alpha alpha);

struct PreimagePiece {
  Leaf leaf;         // admissible piece of T^{-1}(W)
  RegionId region;   // backward region of its image
  double jacobian;   // |J T| along the piece
  double t_start;    // parent parameter hit by s = 0
  double t_sign;     // +1 or -1

  /// Parent parameter of T(leaf.at(s)).
  double parent_t(double s) const noexcept { return t_start + t_sign * jacobian * s; }
};

std::vector<PreimagePiece> preimage_decompose(const Leaf& w, Alpha alpha);

/// phi(t) = sum_m a_m exp(2 pi i m t) in the leaf parameter t.
class TestFn {
 public:
  TestFn() = default;
  explicit TestFn(std::vector<cplx> coeffs);
  static TestFn constant(cplx c) { return TestFn({c}); }

  cplx operator()(double t) const noexcept;
  cplx derivative(double t) const noexcept;
  const std::vector<cplx>& coeffs() const noexcept { return coeffs_; }

  /// sup|phi| + sup|phi'| bounded by the coefficient sum.
  double c1_norm() const noexcept;
  /// sup|phi| + Holder-q seminorm, same style of bound.
  double cq_norm(double q) const noexcept;

  TestFn scaled(cplx s) const;
  TestFn operator+(const TestFn& o) const;
  TestFn operator-(const TestFn& o) const;

 private:
  std::vector<cplx> coeffs_;
};

/// Grid values sampled along a leaf on the trapezoid nodes.
struct LeafSamples {
  std::vector<double> t;
  std::vector<double> w;  // trapezoid weights
  std::vector<cplx> v1;
  std::vector<cplx> v2;   // empty for scalar fields
};

cplx bilinear(const ScalarField& f, const TorusPoint& p) noexcept;

/// Trapezoid nodes with step min(1/(8N), |W|/64).
LeafSamples sample_along(const VectorField2& f, const Leaf& w);
LeafSamples sample_along(const ScalarField& f, const Leaf& w);

struct Cplx2 {
  cplx a;
  cplx b;
  double norm() const noexcept { return std::sqrt(std::norm(a) + std::norm(b)); }
};

Cplx2 integrate_samples(const LeafSamples& s, const TestFn& phi);
Cplx2 leaf_integrate(const VectorField2& f, const Leaf& w, const TestFn& phi);
cplx leaf_integrate(const ScalarField& f, const Leaf& w, const TestFn& phi);

/// Trapezoid integral of an arbitrary function of (point, parameter).
cplx integrate_along(const Leaf& w, const std::function<cplx(const TorusPoint&, double)>& fn, int intervals);

/// Counter-based stream for (seed, index) so parallel order never matters.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) noexcept;

Leaf sample_leaf(std::uint64_t seed, Alpha alpha);

struct Normalization {
  enum class Kind { C1, StrongStable } kind = Kind::C1;
  double sigma = 0.4;
  double q = 0.5;

  static Normalization c1() { return {}; }
  static Normalization strong(double sigma, double q) { return {Kind::StrongStable, sigma, q}; }
};

/// Random trigonometric profile of degree <= 4, rescaled so its computed norm is
/// 1 (C^1 class) or |W|^{-sigma} in C^q (strong-stable class).
TestFn sample_testfn(std::uint64_t seed, const Leaf& w, const Normalization& norm);

}  // namespace dynamo
