#include "dynamo/leaves.hpp"

#include <algorithm>
#include <numbers>
#include <random>
#include <stdexcept>

namespace dynamo {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kConeSlack = 1e-12;

// Parameters in (0, s) where u0 + t du crosses (1/2) Z.
void half_crossings(double u0, double du, double s, std::vector<double>& out) {
  if (du == 0.0) return;
  const double lo = std::min(u0, u0 + s * du), hi = std::max(u0, u0 + s * du);
  for (long m = static_cast<long>(std::floor(2.0 * lo)); m <= static_cast<long>(std::ceil(2.0 * hi)); ++m) {
    const double t = (0.5 * double(m) - u0) / du;
    if (t > 0.0 && t < s) out.push_back(t);
  }
}

}  // namespace

Leaf Leaf::make(TorusPoint base, Vec2 dir, double length, Alpha alpha) {
  if (!(length > 0.0 && length <= 1.0 + 1e-12)) throw std::invalid_argument("leaf length must lie in (0,1]");
  const double r = norm(dir);
  if (r == 0.0) throw std::invalid_argument("leaf direction is zero");
  dir = {dir.x / r, dir.y / r};
  if (!(dir.y > 0.0)) throw std::invalid_argument("leaf direction needs a positive second component");
  if (std::abs(dir.x) > 2.0 / alpha.as_double() * dir.y * (1.0 + kConeSlack)) {
    throw std::invalid_argument("leaf direction outside the stable cone");
  }
  Leaf w;
  w.base = TorusPoint::wrapped(base.x, base.y);
  w.dir = dir;
  w.length = std::min(length, 1.0);
  if (dir.x == 0.0 && w.length == 1.0) w.base.y = 0.0;
  return w;
}

double torus_distance(const TorusPoint& a, const TorusPoint& b) noexcept {
  double dx = std::abs(a.x - b.x), dy = std::abs(a.y - b.y);
  dx = std::min(dx, 1.0 - dx);
  dy = std::min(dy, 1.0 - dy);
  return std::hypot(dx, dy);
}

double d_sigma(const Leaf& a, const Leaf& b) noexcept {
  return torus_distance(a.base, b.base) + std::hypot(a.dir.x - b.dir.x, a.dir.y - b.dir.y) +
         std::abs(a.length - b.length);
}

Leaf leaf_from_endpoints(const Vec2& p, const Vec2& q, Alpha alpha) {
  Vec2 a = p, b = q;
  if (b.y < a.y) std::swap(a, b);
  const Vec2 d{b.x - a.x, b.y - a.y};
  return Leaf::make({a.x, a.y}, d, norm(d), alpha);
}

std::vector<StripPiece> subdivide_by_strips(const Leaf& w, Alpha alpha) {
  const double a = alpha.as_double();
  const double s = w.length;
  std::vector<double> cuts;
  half_crossings(w.base.y, w.dir.y, s, cuts);
  half_crossings(w.base.x - a * w.base.y, w.dir.x - a * w.dir.y, s, cuts);
  half_crossings(w.base.x + a * w.base.y, w.dir.x + a * w.dir.y, s, cuts);
  cuts.push_back(0.0);
  cuts.push_back(s);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(), [](double x, double y) { return y - x < 1e-14; }), cuts.end());
  cuts.back() = s;

  std::vector<StripPiece> pieces;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double t0 = cuts[k], t1 = cuts[k + 1];
    const RegionId r = backward_region(w.at(0.5 * (t0 + t1)), alpha);
    if (!pieces.empty() && pieces.back().region == r) {
      pieces.back().t1 = t1;
      continue;
    }
    pieces.push_back({w, r, t0, t1});
  }
  for (auto& p : pieces) {
    p.leaf.base = w.at(p.t0);
    p.leaf.length = p.t1 - p.t0;
  }
  return pieces;
}

int strip_piece_bound(const Leaf& w, Alpha alpha) {
  const double a = alpha.as_double();
  return 4 + 2 * static_cast<int>(std::ceil((a + 2.0 + 2.0 / a) * w.length));
}

std::vector<PreimagePiece> preimage_decompose(const Leaf& w, Alpha alpha) {
  std::vector<PreimagePiece> out;
  for (const StripPiece& piece : subdivide_by_strips(w, alpha)) {
    const IntMatrix2 inv = branch_matrix(piece.region.index, alpha).entries.inverse();
    const TorusPoint start = w.at(piece.t0);
    const Vec2 q0 = inv.apply({start.x, start.y});
    Vec2 v = inv.apply(w.dir);
    const double stretch = norm(v);
    const double jac = 1.0 / stretch;
    const double total = stretch * (piece.t1 - piece.t0);
    Vec2 u{v.x / stretch, v.y / stretch};
    Vec2 base = q0;
    double t_start = piece.t0, t_sign = 1.0;
    if (u.y < 0.0) {
      base = {q0.x + total * u.x, q0.y + total * u.y};
      u = {-u.x, -u.y};
      t_start = piece.t1;
      t_sign = -1.0;
    }
    const int chunks = std::max(1, static_cast<int>(std::ceil(total - 1e-12)));
    const double len = total / chunks;
    for (int c = 0; c < chunks; ++c) {
      const double off = c * len;
      PreimagePiece pp{Leaf::make({base.x + off * u.x, base.y + off * u.y}, u, len, alpha), piece.region, jac,
                       t_start + t_sign * jac * off, t_sign};
      out.push_back(pp);
    }
  }
  return out;
}

TestFn::TestFn(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_.push_back(0.0);
}

cplx TestFn::operator()(double t) const noexcept {
  cplx s = 0.0;
  for (std::size_t m = 0; m < coeffs_.size(); ++m) s += coeffs_[m] * std::polar(1.0, kTwoPi * double(m) * t);
  return s;
}

cplx TestFn::derivative(double t) const noexcept {
  cplx s = 0.0;
  for (std::size_t m = 1; m < coeffs_.size(); ++m) {
    s += coeffs_[m] * cplx(0.0, kTwoPi * double(m)) * std::polar(1.0, kTwoPi * double(m) * t);
  }
  return s;
}

double TestFn::c1_norm() const noexcept {
  double s = 0.0;
  for (std::size_t m = 0; m < coeffs_.size(); ++m) s += std::abs(coeffs_[m]) * (1.0 + kTwoPi * double(m));
  return s;
}

double TestFn::cq_norm(double q) const noexcept {
  // [e^{i w t}]_q <= 2^{1-q} w^q
  double s = 0.0;
  for (std::size_t m = 0; m < coeffs_.size(); ++m) {
    s += std::abs(coeffs_[m]) * (1.0 + std::pow(2.0, 1.0 - q) * std::pow(kTwoPi * double(m), q));
  }
  return s;
}

TestFn TestFn::scaled(cplx s) const {
  std::vector<cplx> c = coeffs_;
  for (auto& v : c) v *= s;
  return TestFn(std::move(c));
}

TestFn TestFn::operator+(const TestFn& o) const {
  std::vector<cplx> c(std::max(coeffs_.size(), o.coeffs_.size()), 0.0);
  for (std::size_t m = 0; m < coeffs_.size(); ++m) c[m] += coeffs_[m];
  for (std::size_t m = 0; m < o.coeffs_.size(); ++m) c[m] += o.coeffs_[m];
  return TestFn(std::move(c));
}

TestFn TestFn::operator-(const TestFn& o) const { return *this + o.scaled(-1.0); }

cplx bilinear(const ScalarField& f, const TorusPoint& p) noexcept {
  const int n = f.n();
  const double fx = p.x * n, fy = p.y * n;
  const int i0 = static_cast<int>(std::floor(fx)) % n, j0 = static_cast<int>(std::floor(fy)) % n;
  const double ax = fx - std::floor(fx), ay = fy - std::floor(fy);
  const int i1 = (i0 + 1) % n, j1 = (j0 + 1) % n;
  return (1.0 - ay) * ((1.0 - ax) * f(i0, j0) + ax * f(i1, j0)) + ay * ((1.0 - ax) * f(i0, j1) + ax * f(i1, j1));
}

namespace {

LeafSamples trapezoid_nodes(const Leaf& w, int n) {
  const double h = std::min(1.0 / (8.0 * n), w.length / 64.0);
  const int m = std::max(1, static_cast<int>(std::ceil(w.length / h - 1e-9)));
  const double step = w.length / m;
  LeafSamples s;
  s.t.resize(m + 1);
  s.w.assign(m + 1, step);
  for (int k = 0; k <= m; ++k) s.t[k] = k * step;
  s.w.front() *= 0.5;
  s.w.back() *= 0.5;
  return s;
}

}  // namespace

LeafSamples sample_along(const VectorField2& f, const Leaf& w) {
  LeafSamples s = trapezoid_nodes(w, f.n());
  s.v1.resize(s.t.size());
  s.v2.resize(s.t.size());
  for (std::size_t k = 0; k < s.t.size(); ++k) {
    const TorusPoint p = w.at(s.t[k]);
    s.v1[k] = bilinear(f.c1, p);
    s.v2[k] = bilinear(f.c2, p);
  }
  return s;
}

LeafSamples sample_along(const ScalarField& f, const Leaf& w) {
  LeafSamples s = trapezoid_nodes(w, f.n());
  s.v1.resize(s.t.size());
  for (std::size_t k = 0; k < s.t.size(); ++k) s.v1[k] = bilinear(f, w.at(s.t[k]));
  return s;
}

Cplx2 integrate_samples(const LeafSamples& s, const TestFn& phi) {
  Cplx2 out{};
  const bool vec = !s.v2.empty();
  for (std::size_t k = 0; k < s.t.size(); ++k) {
    const cplx wp = s.w[k] * phi(s.t[k]);
    out.a += wp * s.v1[k];
    if (vec) out.b += wp * s.v2[k];
  }
  return out;
}

Cplx2 leaf_integrate(const VectorField2& f, const Leaf& w, const TestFn& phi) {
  return integrate_samples(sample_along(f, w), phi);
}

cplx leaf_integrate(const ScalarField& f, const Leaf& w, const TestFn& phi) {
  return integrate_samples(sample_along(f, w), phi).a;
}

cplx integrate_along(const Leaf& w, const std::function<cplx(const TorusPoint&, double)>& fn, int intervals) {
  if (intervals < 1) throw std::invalid_argument("integrate_along needs at least one interval");
  const double step = w.length / intervals;
  cplx s = 0.0;
  for (int k = 0; k <= intervals; ++k) {
    const double t = k * step;
    const double wt = (k == 0 || k == intervals) ? 0.5 * step : step;
    s += wt * fn(w.at(t), t);
  }
  return s;
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  // splitmix64 finalizer over the pair
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Leaf sample_leaf(std::uint64_t seed, Alpha alpha) {
  std::mt19937_64 rng(stream_seed(seed, 0));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double a = alpha.as_double();
  const TorusPoint base{unit(rng), unit(rng)};
  const double slope = (2.0 * unit(rng) - 1.0) * 2.0 / a;
  const double pick = unit(rng);
  double s;
  if (pick < 1.0 / 3.0) {
    s = std::ldexp(1.0, -static_cast<int>(std::floor(unit(rng) * 9.0)));
  } else if (pick < 2.0 / 3.0) {
    s = (2.0 / a) * (0.8 + 0.4 * unit(rng));
  } else {
    s = 1.0 - unit(rng);
  }
  s = std::clamp(s, 1e-6, 1.0);
  return Leaf::make(base, {slope, 1.0}, s, alpha);
}

TestFn sample_testfn(std::uint64_t seed, const Leaf& w, const Normalization& norm) {
  std::mt19937_64 rng(stream_seed(seed, 1));
  std::normal_distribution<double> normal(0.0, 1.0);
  const int degree = static_cast<int>(rng() % 5);
  std::vector<cplx> c(static_cast<std::size_t>(degree) + 1);
  for (auto& v : c) {
    const double re = normal(rng);
    const double im = normal(rng);
    v = {re, im};
  }
  TestFn raw(std::move(c));
  if (norm.kind == Normalization::Kind::C1) return raw.scaled(1.0 / raw.c1_norm());
  return raw.scaled(std::pow(w.length, -norm.sigma) / raw.cq_norm(norm.q));
}

}  // namespace dynamo
