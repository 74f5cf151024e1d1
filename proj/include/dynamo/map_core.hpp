#pragma once

// Piecewise-linear stretch-fold map on the 2-torus and the time-1 flow of the
// pulsed shear velocity field.  Real-point routines work in double precision;
// lattice routines are exact integer arithmetic mod N.

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace dynamo {

/// Shear strength.  Must be a positive even integer.
class Alpha {
 public:
  explicit Alpha(int value);
  int value() const noexcept { return value_; }
  double as_double() const noexcept { return static_cast<double>(value_); }

 private:
  int value_;
};

/// Reduce a real number into [0,1).
double wrap_unit(double v) noexcept;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

double norm(const Vec2& v) noexcept;

struct TorusPoint {
  double x = 0.0;
  double y = 0.0;

  static TorusPoint wrapped(double x, double y) noexcept { return {wrap_unit(x), wrap_unit(y)}; }
};

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

enum class Side { Forward, Backward };

struct RegionId {
  Side side = Side::Forward;
  int index = 1;  // 1..4

  friend bool operator==(const RegionId&, const RegionId&) = default;
};

/// 2x2 integer matrix in SL(2,Z).
struct IntMatrix2 {
  std::int64_t a = 1, b = 0, c = 0, d = 1;  // [[a,b],[c,d]]

  std::int64_t det() const noexcept { return a * d - b * c; }
  IntMatrix2 inverse() const noexcept { return {d, -b, -c, a}; }
  Vec2 apply(const Vec2& v) const noexcept {
    return {static_cast<double>(a) * v.x + static_cast<double>(b) * v.y,
            static_cast<double>(c) * v.x + static_cast<double>(d) * v.y};
  }
  IntMatrix2 operator*(const IntMatrix2& o) const noexcept {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  friend bool operator==(const IntMatrix2&, const IntMatrix2&) = default;
};

struct BranchMatrix {
  IntMatrix2 entries;
  RegionId region;
};

/// Derivative of the map on forward region `index` (1..4).
BranchMatrix branch_matrix(int index, Alpha alpha);

/// 1 iff x lies in [a, 1).  Half-open convention used by every region test.
int indicator_geq(double x, double a) noexcept;

RegionId forward_region(const TorusPoint& p, Alpha alpha) noexcept;
RegionId backward_region(const TorusPoint& p, Alpha alpha) noexcept;

/// Vertical shear followed by horizontal shear.
TorusPoint apply_map(const TorusPoint& p, Alpha alpha) noexcept;
TorusPoint apply_inverse(const TorusPoint& p, Alpha alpha) noexcept;

/// Matrix form A_l p mod 1 for a caller-chosen branch; equals apply_map when
/// l = forward_region(p).
TorusPoint apply_branch(const TorusPoint& p, int index, Alpha alpha) noexcept;

using ScalarFn2 = std::function<double(const TorusPoint&)>;

/// Exact piecewise-in-time flow of the pulsed velocity field.
/// t in [0,1/4): vertical shear, [1/4,1/2): horizontal shear, [1/2,1]: the
/// out-of-plane shear z' = -2 g(x,y).
Point3 flow_map(double t, const Point3& p, Alpha alpha, const ScalarFn2& g);

bool in_stable_cone(const Vec2& v, Alpha alpha);
bool in_unstable_cone(const Vec2& v, Alpha alpha);

/// Lattice point (i/N, j/N).
struct GridPoint {
  int i = 0;
  int j = 0;
  int n = 0;
};

RegionId forward_region(const GridPoint& p, Alpha alpha);
RegionId backward_region(const GridPoint& p, Alpha alpha);
GridPoint apply_map(const GridPoint& p, Alpha alpha);
GridPoint apply_inverse(const GridPoint& p, Alpha alpha);

/// For every target lattice node p (flat index j*N + i) the source node
/// T^{-1}(p) and the backward region containing p.
class PullbackTable {
 public:
  PullbackTable(int n, Alpha alpha);

  int n() const noexcept { return n_; }
  Alpha alpha() const noexcept { return alpha_; }
  std::size_t size() const noexcept { return source_.size(); }
  std::uint32_t source(std::size_t target) const noexcept { return source_[target]; }
  int region(std::size_t target) const noexcept { return region_[target]; }
  const std::vector<std::uint32_t>& sources() const noexcept { return source_; }
  const std::vector<std::uint8_t>& regions() const noexcept { return region_; }
  const IntMatrix2& matrix(int index) const noexcept { return matrices_[index - 1]; }

 private:
  int n_;
  Alpha alpha_;
  std::vector<std::uint32_t> source_;
  std::vector<std::uint8_t> region_;
  std::array<IntMatrix2, 4> matrices_;
};

PullbackTable grid_pullback_table(int n, Alpha alpha);

/// Constant Jacobian 1/|A_l^{-1} dir| of the map along a preimage of a leaf
/// with tangent `direction` inside backward region `region`.
double leaf_jacobian(const Vec2& direction, RegionId region, Alpha alpha);

}  // namespace dynamo
