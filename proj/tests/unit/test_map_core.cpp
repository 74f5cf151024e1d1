#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "dynamo/map_core.hpp"

using namespace dynamo;

namespace {

// shear composition written out directly: vertical then horizontal
TorusPoint shear_oracle(double x, double y, int a) {
  const double y1 = y + a * std::abs(x - 0.5);
  const double x1 = x + a * std::abs(wrap_unit(y1) - 0.5);
  return TorusPoint::wrapped(x1, y1);
}

double gap(const TorusPoint& a, const TorusPoint& b) {
  auto d = [](double u, double v) {
    const double t = std::abs(u - v);
    return std::min(t, 1.0 - t);
  };
  return std::max(d(a.x, b.x), d(a.y, b.y));
}

bool near_boundary(const TorusPoint& p, Alpha a) {
  const RegionId r = forward_region(p, a);
  for (auto [dx, dy] : {std::pair{1e-6, 0.0}, {-1e-6, 0.0}, {0.0, 1e-6}, {0.0, -1e-6}}) {
    if (!(forward_region(TorusPoint::wrapped(p.x + dx, p.y + dy), a) == r)) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("alpha must be positive and even") {
  CHECK_NOTHROW(Alpha(2));
  CHECK_THROWS(Alpha(3));
  CHECK_THROWS(Alpha(0));
  CHECK_THROWS(Alpha(-4));
}

TEST_CASE("half-open indicator") {
  CHECK(indicator_geq(0.5, 0.5) == 1);
  CHECK(indicator_geq(0.0, 0.5) == 0);
  CHECK(indicator_geq(0.499999, 0.5) == 0);
}

TEST_CASE("forward and backward regions") {
  const Alpha a(2);
  CHECK(forward_region(TorusPoint{0.75, 0.25}, a) == RegionId{Side::Forward, 1});
  CHECK(forward_region(TorusPoint{0.25, 0.75}, a) == RegionId{Side::Forward, 4});
  CHECK(forward_region(TorusPoint{0.0, 0.0}, a) == RegionId{Side::Forward, 4});
  CHECK(backward_region(TorusPoint{0.25, 0.75}, a) == RegionId{Side::Backward, 1});
  CHECK(backward_region(TorusPoint{0.0, 0.0}, a) == RegionId{Side::Backward, 4});
  const TorusPoint pre = apply_inverse(TorusPoint{0.25, 0.75}, a);
  CHECK(forward_region(pre, a).index == backward_region(TorusPoint{0.25, 0.75}, a).index);
}

TEST_CASE("branch matrices") {
  const auto m1 = branch_matrix(1, Alpha(2)).entries;
  CHECK(m1 == IntMatrix2{5, 2, 2, 1});
  CHECK(m1.inverse() == IntMatrix2{1, -2, -2, 5});
  for (int av : {2, 4, 8, 16, 32}) {
    const std::int64_t a = av, s = a * a;
    const IntMatrix2 expect[4] = {{1 + s, a, a, 1}, {1 - s, a, -a, 1}, {1 - s, -a, a, 1}, {1 + s, -a, -a, 1}};
    for (int l = 1; l <= 4; ++l) {
      const auto b = branch_matrix(l, Alpha(av));
      CHECK(b.entries == expect[l - 1]);
      CHECK(b.entries.det() == 1);
      CHECK(b.region == RegionId{Side::Forward, l});
    }
  }
}

TEST_CASE("map examples") {
  const Alpha a(2);
  auto t = apply_map(TorusPoint{0.75, 0.25}, a);
  CHECK(t.x == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(t.y == doctest::Approx(0.75).epsilon(1e-14));
  t = apply_map(TorusPoint{0.25, 0.75}, a);
  CHECK(t.x == doctest::Approx(0.75));
  CHECK(t.y == doctest::Approx(0.25));
  t = apply_branch(TorusPoint{0.75, 0.25}, 1, a);
  CHECK(gap(t, {0.25, 0.75}) < 1e-14);

  t = apply_inverse(TorusPoint{0.25, 0.75}, a);
  CHECK(gap(t, {0.75, 0.25}) < 1e-14);
  const TorusPoint p{0.1, 0.3};
  CHECK(gap(apply_inverse(apply_map(p, Alpha(4)), Alpha(4)), p) < 1e-12);
}

TEST_CASE("shear composition equals matrix form off boundaries") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int av : {2, 4, 8, 16, 32}) {
    const Alpha a(av);
    int used = 0;
    for (int k = 0; k < 10000; ++k) {
      const TorusPoint p{u(rng), u(rng)};
      if (near_boundary(p, a)) continue;
      ++used;
      const TorusPoint s = apply_map(p, a);
      REQUIRE(gap(s, shear_oracle(p.x, p.y, av)) < 1e-12);
      REQUIRE(gap(s, apply_branch(p, forward_region(p, a).index, a)) < 1e-12);
      REQUIRE(gap(apply_map(apply_inverse(s, a), a), s) < 1e-12);
      REQUIRE(backward_region(s, a).index == forward_region(p, a).index);
    }
    CHECK(used > 9000);
  }
}

TEST_CASE("grid round trip and bijection") {
  for (int n : {4, 8, 64, 256}) {
    for (int av : {2, 4, 8, 16}) {
      const Alpha a(av);
      const auto table = grid_pullback_table(n, a);
      std::vector<char> seen(table.size(), 0);
      bool perm = true;
      for (std::size_t t = 0; t < table.size(); ++t) {
        if (seen[table.source(t)]++) perm = false;
      }
      CHECK(perm);
      if (n <= 64) {
        for (int j = 0; j < n; ++j) {
          for (int i = 0; i < n; ++i) {
            const GridPoint p{i, j, n};
            const GridPoint q = apply_inverse(p, a);
            const GridPoint r = apply_map(q, a);
            REQUIRE(r.i == i);
            REQUIRE(r.j == j);
            REQUIRE(table.source(std::size_t(j) * n + i) == std::uint32_t(q.j * n + q.i));
            REQUIRE(table.region(std::size_t(j) * n + i) == backward_region(p, a).index);
            // lattice map agrees with the real-point map
            const TorusPoint tp = apply_map(TorusPoint{double(q.i) / n, double(q.j) / n}, a);
            REQUIRE(gap(tp, {double(i) / n, double(j) / n}) < 1e-12);
          }
        }
      }
    }
  }
}

TEST_CASE("grid table example and odd size") {
  const auto table = grid_pullback_table(8, Alpha(2));
  const std::size_t t = 6 * 8 + 2;
  CHECK(table.source(t) == 2 * 8 + 6);
  CHECK(table.region(t) == 1);
  CHECK_THROWS(grid_pullback_table(5, Alpha(2)));
}

TEST_CASE("flow map") {
  const Alpha a(2);
  const ScalarFn2 g0 = [](const TorusPoint&) { return 0.0; };
  Point3 f = flow_map(1.0, {0.75, 0.25, 0.0}, a, g0);
  CHECK(gap(TorusPoint::wrapped(f.x, f.y), {0.25, 0.75}) < 1e-14);
  f = flow_map(0.0, {0.3, 0.6, 0.2}, a, g0);
  CHECK(f.x == doctest::Approx(0.3));
  CHECK(f.y == doctest::Approx(0.6));
  CHECK(f.z == doctest::Approx(0.2));
  const ScalarFn2 g1 = [](const TorusPoint& p) { return 0.1 + p.x * p.y; };
  f = flow_map(0.5, {0.75, 0.25, 0.4}, a, g1);
  CHECK(gap(TorusPoint::wrapped(f.x, f.y), {0.25, 0.75}) < 1e-14);
  CHECK(f.z == doctest::Approx(0.4));
  CHECK_THROWS(flow_map(1.5, {0.1, 0.1, 0.0}, a, g0));
  CHECK_THROWS(flow_map(-0.1, {0.1, 0.1, 0.0}, a, g0));

  // planar part at t = 1 is the map; z part is z - g(T p)
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int av : {2, 8, 16}) {
    for (int k = 0; k < 10000; ++k) {
      const TorusPoint p{u(rng), u(rng)};
      if (near_boundary(p, Alpha(av))) continue;
      const Point3 q = flow_map(1.0, {p.x, p.y, 0.3}, Alpha(av), g1);
      const TorusPoint t = apply_map(p, Alpha(av));
      REQUIRE(gap(TorusPoint::wrapped(q.x, q.y), t) < 1e-12);
      REQUIRE(std::abs(std::remainder(q.z - (0.3 - g1(t)), 1.0)) < 1e-12);
    }
  }
}

TEST_CASE("cones") {
  CHECK(in_stable_cone({0, 1}, Alpha(8)));
  CHECK(in_unstable_cone({1, 0}, Alpha(8)));
  CHECK_FALSE(in_stable_cone({1, 1}, Alpha(8)));
  CHECK_FALSE(in_unstable_cone({1, 1}, Alpha(8)));
  CHECK_THROWS(in_stable_cone({0, 0}, Alpha(8)));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int av : {4, 8, 16, 32}) {
    const Alpha a(av);
    const double w = 2.0 / av, lim = av * av / 2.0;
    for (int k = 0; k < 10000; ++k) {
      const double s = u(rng) * w, sg = u(rng) < 0 ? -1.0 : 1.0;
      const double r = std::hypot(1.0, s);
      const Vec2 vu{sg / r, sg * s / r}, vs{sg * s / r, sg / r};
      for (int l = 1; l <= 4; ++l) {
        const IntMatrix2 m = branch_matrix(l, a).entries;
        const Vec2 fu = m.apply(vu), bs = m.inverse().apply(vs);
        REQUIRE(in_unstable_cone(fu, a));
        REQUIRE(norm(fu) >= lim);
        REQUIRE(in_stable_cone(bs, a));
        REQUIRE(norm(bs) >= lim);
      }
    }
  }
}

TEST_CASE("leaf jacobian") {
  CHECK(leaf_jacobian({0, 1}, {Side::Backward, 1}, Alpha(2)) == doctest::Approx(1.0 / std::sqrt(29.0)));
  CHECK(leaf_jacobian({0, 1}, {Side::Backward, 4}, Alpha(2)) == doctest::Approx(1.0 / std::sqrt(29.0)));
  CHECK_THROWS(leaf_jacobian({1, 0}, {Side::Backward, 1}, Alpha(8)));
  CHECK_THROWS(leaf_jacobian({0, 1}, {Side::Forward, 1}, Alpha(8)));

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int av : {4, 10, 16, 32}) {
    const double w = 2.0 / av;
    for (int k = 0; k < 1000; ++k) {
      const double s = u(rng) * w, r = std::hypot(1.0, s);
      for (int l = 1; l <= 4; ++l) {
        const double j = leaf_jacobian({s / r, 1.0 / r}, {Side::Backward, l}, Alpha(av));
        REQUIRE(j <= 2.0 / (double(av) * av));
      }
    }
  }
}
