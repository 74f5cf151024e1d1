#include "dynamo/map_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dynamo {

Alpha::Alpha(int value) : value_(value) {
  if (value < 2 || value % 2 != 0) {
    throw std::invalid_argument("alpha must be a positive even integer, got " + std::to_string(value));
  }
}

double wrap_unit(double v) noexcept {
  double r = v - std::floor(v);
  // v slightly below an integer can round up to exactly 1
  return r >= 1.0 ? 0.0 : r;
}

double norm(const Vec2& v) noexcept { return std::hypot(v.x, v.y); }

BranchMatrix branch_matrix(int index, Alpha alpha) {
  const std::int64_t a = alpha.value();
  const std::int64_t a2 = a * a;
  BranchMatrix m;
  m.region = {Side::Forward, index};
  switch (index) {
    case 1: m.entries = {1 + a2, a, a, 1}; break;
    case 2: m.entries = {1 - a2, a, -a, 1}; break;
    case 3: m.entries = {1 - a2, -a, a, 1}; break;
    case 4: m.entries = {1 + a2, -a, -a, 1}; break;
    default: throw std::invalid_argument("branch index must be in 1..4");
  }
  return m;
}

int indicator_geq(double x, double a) noexcept { return (x >= a && x < 1.0) ? 1 : 0; }

RegionId forward_region(const TorusPoint& p, Alpha alpha) noexcept {
  const double a = alpha.as_double();
  if (indicator_geq(p.x, 0.5)) {
    return {Side::Forward, indicator_geq(wrap_unit(p.y + a * p.x), 0.5) ? 1 : 3};
  }
  return {Side::Forward, indicator_geq(wrap_unit(p.y - a * p.x), 0.5) ? 2 : 4};
}

RegionId backward_region(const TorusPoint& p, Alpha alpha) noexcept {
  const double a = alpha.as_double();
  if (indicator_geq(p.y, 0.5)) {
    return {Side::Backward, indicator_geq(wrap_unit(p.x - a * p.y), 0.5) ? 1 : 2};
  }
  return {Side::Backward, indicator_geq(wrap_unit(p.x + a * p.y), 0.5) ? 3 : 4};
}

TorusPoint apply_map(const TorusPoint& p, Alpha alpha) noexcept {
  const double a = alpha.as_double();
  const double y1 = indicator_geq(p.x, 0.5) ? wrap_unit(p.y + a * p.x) : wrap_unit(p.y - a * p.x);
  const double x1 = indicator_geq(y1, 0.5) ? wrap_unit(p.x + a * y1) : wrap_unit(p.x - a * y1);
  return {x1, y1};
}

TorusPoint apply_inverse(const TorusPoint& p, Alpha alpha) noexcept {
  const double a = alpha.as_double();
  const double x1 = indicator_geq(p.y, 0.5) ? wrap_unit(p.x - a * p.y) : wrap_unit(p.x + a * p.y);
  const double y1 = indicator_geq(x1, 0.5) ? wrap_unit(p.y - a * x1) : wrap_unit(p.y + a * x1);
  return {x1, y1};
}

TorusPoint apply_branch(const TorusPoint& p, int index, Alpha alpha) noexcept {
  const Vec2 v = branch_matrix(index, alpha).entries.apply({p.x, p.y});
  return TorusPoint::wrapped(v.x, v.y);
}

Point3 flow_map(double t, const Point3& p, Alpha alpha, const ScalarFn2& g) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::invalid_argument("flow_map: t must lie in [0,1]");
  }
  const double a = alpha.as_double();
  double x = wrap_unit(p.x);
  double y = wrap_unit(p.y);
  double z = wrap_unit(p.z);

  const double t1 = std::min(t, 0.25);
  y = wrap_unit(y + 4.0 * a * std::abs(x - 0.5) * t1);

  const double t2 = std::clamp(t - 0.25, 0.0, 0.25);
  if (t2 > 0.0) x = wrap_unit(x + 4.0 * a * std::abs(y - 0.5) * t2);

  const double t3 = std::clamp(t - 0.5, 0.0, 0.5);
  if (t3 > 0.0) z = wrap_unit(z - 2.0 * g({x, y}) * t3);

  return {x, y, z};
}

namespace {

void require_nonzero(const Vec2& v) {
  if (v.x == 0.0 && v.y == 0.0) throw std::invalid_argument("cone test on the zero vector");
}

std::int64_t mod_n(std::int64_t v, std::int64_t n) noexcept {
  std::int64_t r = v % n;
  return r < 0 ? r + n : r;
}

void require_grid(const GridPoint& p) {
  if (p.n <= 0 || p.n % 2 != 0) throw std::invalid_argument("grid size must be a positive even integer");
  if (p.i < 0 || p.i >= p.n || p.j < 0 || p.j >= p.n) throw std::out_of_range("grid point outside lattice");
}

}  // namespace

bool in_stable_cone(const Vec2& v, Alpha alpha) {
  require_nonzero(v);
  return std::abs(v.x) <= 2.0 / alpha.as_double() * std::abs(v.y);
}

bool in_unstable_cone(const Vec2& v, Alpha alpha) {
  require_nonzero(v);
  return std::abs(v.y) <= 2.0 / alpha.as_double() * std::abs(v.x);
}

RegionId forward_region(const GridPoint& p, Alpha alpha) {
  require_grid(p);
  const std::int64_t n = p.n, h = p.n / 2, a = alpha.value();
  if (p.i >= h) return {Side::Forward, mod_n(p.j + a * p.i, n) >= h ? 1 : 3};
  return {Side::Forward, mod_n(p.j - a * p.i, n) >= h ? 2 : 4};
}

RegionId backward_region(const GridPoint& p, Alpha alpha) {
  require_grid(p);
  const std::int64_t n = p.n, h = p.n / 2, a = alpha.value();
  if (p.j >= h) return {Side::Backward, mod_n(p.i - a * p.j, n) >= h ? 1 : 2};
  return {Side::Backward, mod_n(p.i + a * p.j, n) >= h ? 3 : 4};
}

GridPoint apply_map(const GridPoint& p, Alpha alpha) {
  require_grid(p);
  const std::int64_t n = p.n, h = p.n / 2, a = alpha.value();
  const std::int64_t j1 = p.i >= h ? mod_n(p.j + a * p.i, n) : mod_n(p.j - a * p.i, n);
  const std::int64_t i1 = j1 >= h ? mod_n(p.i + a * j1, n) : mod_n(p.i - a * j1, n);
  return {static_cast<int>(i1), static_cast<int>(j1), p.n};
}

GridPoint apply_inverse(const GridPoint& p, Alpha alpha) {
  require_grid(p);
  const std::int64_t n = p.n, h = p.n / 2, a = alpha.value();
  const std::int64_t i1 = p.j >= h ? mod_n(p.i - a * p.j, n) : mod_n(p.i + a * p.j, n);
  const std::int64_t j1 = i1 >= h ? mod_n(p.j - a * i1, n) : mod_n(p.j + a * i1, n);
  return {static_cast<int>(i1), static_cast<int>(j1), p.n};
}

PullbackTable::PullbackTable(int n, Alpha alpha) : n_(n), alpha_(alpha) {
  if (n <= 0 || n % 2 != 0) {
    throw std::invalid_argument("pullback table needs an even grid size, got " + std::to_string(n));
  }
  for (int l = 1; l <= 4; ++l) matrices_[l - 1] = branch_matrix(l, alpha).entries;
  const std::size_t total = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  source_.resize(total);
  region_.resize(total);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const GridPoint p{i, j, n};
      const GridPoint q = apply_inverse(p, alpha);
      const std::size_t k = static_cast<std::size_t>(j) * n + i;
      source_[k] = static_cast<std::uint32_t>(static_cast<std::size_t>(q.j) * n + q.i);
      region_[k] = static_cast<std::uint8_t>(backward_region(p, alpha).index);
    }
  }
}

PullbackTable grid_pullback_table(int n, Alpha alpha) { return PullbackTable(n, alpha); }

double leaf_jacobian(const Vec2& direction, RegionId region, Alpha alpha) {
  if (region.side != Side::Backward) {
    throw std::invalid_argument("leaf_jacobian expects a backward smoothness region");
  }
  if (!in_stable_cone(direction, alpha)) {
    throw std::invalid_argument("leaf_jacobian: direction outside the stable cone");
  }
  const Vec2 pre = branch_matrix(region.index, alpha).entries.inverse().apply(direction);
  return norm(direction) / norm(pre);
}

}  // namespace dynamo
