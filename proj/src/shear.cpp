#include "dynamo/shear.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dynamo {

namespace {
constexpr double kPi = std::numbers::pi;
}

ShearProfile ShearProfile::zero() {
  ShearProfile p;
  p.kind_ = Kind::Zero;
  return p;
}

ShearProfile ShearProfile::quadrant(double moll_scale, int band) {
  if (!(moll_scale >= 0.0)) throw std::invalid_argument("mollifier scale must be >= 0");
  ShearProfile p;
  p.kind_ = Kind::Quadrant;
  p.moll_scale_ = moll_scale;
  if (moll_scale == 0.0) {
    p.band_ = 0;
    return p;
  }
  if (band < 1) throw std::invalid_argument("band must be >= 1");
  p.band_ = band;
  p.sine_amp_.assign(static_cast<std::size_t>(band) + 1, 0.0);
  for (int k = 1; k <= band; k += 2) {
    const double damp = std::exp(-0.5 * moll_scale * moll_scale * double(k) * double(k));
    // u^(k) = i/(pi k) for odd k; the +-k pair contributes -2/(pi k) sin(2 pi k x)
    p.sine_amp_[k] = -2.0 / (kPi * k) * damp;
  }
  return p;
}

cplx ShearProfile::step_coefficient(int k) const {
  if (k == 0) return {0.5, 0.0};
  if (k % 2 == 0) return {0.0, 0.0};
  const int ak = std::abs(k);
  double damp = 1.0;
  if (!exact()) {
    if (ak > band_) return {0.0, 0.0};
    damp = std::exp(-0.5 * moll_scale_ * moll_scale_ * double(k) * double(k));
  }
  return cplx(0.0, 1.0 / (kPi * k)) * damp;
}

cplx ShearProfile::coefficient(int k1, int k2) const {
  if (kind_ == Kind::Zero) return {0.0, 0.0};
  const cplx u1 = step_coefficient(k1);
  const cplx u2 = step_coefficient(k2);
  const cplx d1 = k1 == 0 ? 1.0 : 0.0;
  const cplx d2 = k2 == 0 ? 1.0 : 0.0;
  return 0.5 * (u1 * d2 + d1 * u2 - 2.0 * u1 * u2);
}

double ShearProfile::step(double x) const {
  if (exact()) return indicator_geq(wrap_unit(x), 0.5);
  double s = 0.5;
  for (int k = 1; k <= band_; k += 2) s += sine_amp_[k] * std::sin(2.0 * kPi * k * x);
  return s;
}

double ShearProfile::step_derivative(double x) const {
  if (exact()) return 0.0;
  double s = 0.0;
  for (int k = 1; k <= band_; k += 2) s += sine_amp_[k] * 2.0 * kPi * k * std::cos(2.0 * kPi * k * x);
  return s;
}

double ShearProfile::eval(const TorusPoint& p) const {
  if (kind_ == Kind::Zero) return 0.0;
  const double ux = step(p.x), uy = step(p.y);
  return 0.5 * (ux + uy - 2.0 * ux * uy);
}

Vec2 ShearProfile::grad(const TorusPoint& p) const {
  if (kind_ == Kind::Zero) return {0.0, 0.0};
  const double ux = step(p.x), uy = step(p.y);
  return {0.5 * step_derivative(p.x) * (1.0 - 2.0 * uy), 0.5 * step_derivative(p.y) * (1.0 - 2.0 * ux)};
}

std::vector<double> ShearProfile::step_samples(int m, double offset) const {
  std::vector<double> out(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) out[i] = kind_ == Kind::Zero ? 0.0 : step((i + offset) / m);
  return out;
}

std::vector<double> ShearProfile::step_derivative_samples(int m, double offset) const {
  std::vector<double> out(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) out[i] = kind_ == Kind::Zero ? 0.0 : step_derivative((i + offset) / m);
  return out;
}

double ShearProfile::c1_bound() const {
  if (kind_ == Kind::Zero) return 0.0;
  if (exact()) return std::numeric_limits<double>::infinity();
  double s = 0.0;
  for (int k1 = -band_; k1 <= band_; ++k1) {
    for (int k2 = -band_; k2 <= band_; ++k2) {
      const double a = std::abs(coefficient(k1, k2));
      if (a != 0.0) s += 2.0 * kPi * std::hypot(double(k1), double(k2)) * a;
    }
  }
  return s;
}

void ShearProfile::save(std::ostream& os) const {
  os << std::setprecision(17);
  os << "kind " << (kind_ == Kind::Zero ? "zero" : "quadrant") << '\n';
  os << "moll_scale " << moll_scale_ << '\n';
  os << "band " << band_ << '\n';
  os << "coefficients " << sine_amp_.size() << '\n';
  for (std::size_t k = 0; k < sine_amp_.size(); ++k) os << k << ' ' << sine_amp_[k] << '\n';
}

ShearProfile ShearProfile::load(std::istream& is) {
  ShearProfile p;
  std::string key, kind;
  std::size_t ncoef = 0;
  if (!(is >> key >> kind) || key != "kind") throw std::runtime_error("shear profile: expected 'kind'");
  if (kind == "zero") {
    p.kind_ = Kind::Zero;
  } else if (kind == "quadrant") {
    p.kind_ = Kind::Quadrant;
  } else {
    throw std::runtime_error("shear profile: unknown kind '" + kind + "'");
  }
  if (!(is >> key >> p.moll_scale_) || key != "moll_scale") throw std::runtime_error("shear profile: expected 'moll_scale'");
  if (!(is >> key >> p.band_) || key != "band") throw std::runtime_error("shear profile: expected 'band'");
  if (!(is >> key >> ncoef) || key != "coefficients") throw std::runtime_error("shear profile: expected 'coefficients'");
  p.sine_amp_.assign(ncoef, 0.0);
  for (std::size_t n = 0; n < ncoef; ++n) {
    std::size_t k = 0;
    double v = 0.0;
    if (!(is >> k >> v) || k >= ncoef) throw std::runtime_error("shear profile: malformed coefficient row");
    p.sine_amp_[k] = v;
  }
  if (p.kind_ == Kind::Quadrant && p.moll_scale_ > 0.0 && ncoef != static_cast<std::size_t>(p.band_) + 1) {
    throw std::runtime_error("shear profile: coefficient count does not match band");
  }
  return p;
}

double eval_g(const ShearProfile& profile, const TorusPoint& p) { return profile.eval(p); }
Vec2 eval_grad_g(const ShearProfile& profile, const TorusPoint& p) { return profile.grad(p); }

double QuadrantIntegrals::max_error() const {
  double e = 0.0;
  for (double v : err) e = std::max(e, v);
  return e;
}

namespace {

// Quadrant index (0-based) of the midpoint node (i, j) on an m x m grid.
int quadrant_of(int i, int j, int m) {
  const bool right = 2 * i >= m;
  const bool top = 2 * j >= m;
  if (right && top) return 0;
  if (!right && top) return 1;
  if (!right && !top) return 2;
  return 3;
}

std::array<cplx, 4> midpoint_quadrants(const ShearProfile& profile, int m) {
  const std::vector<double> u = profile.step_samples(m, 0.5);
  std::array<cplx, 4> acc{};
  const double w = 1.0 / (double(m) * double(m));
  for (int j = 0; j < m; ++j) {
    std::array<cplx, 4> row{};
    for (int i = 0; i < m; ++i) {
      const double g = profile.kind() == ShearProfile::Kind::Zero ? 0.0 : 0.5 * (u[i] + u[j] - 2.0 * u[i] * u[j]);
      row[quadrant_of(i, j, m)] += std::polar(1.0, 2.0 * kPi * g);
    }
    for (int q = 0; q < 4; ++q) acc[q] += row[q];
  }
  for (auto& v : acc) v *= w;
  return acc;
}

}  // namespace

QuadrantIntegrals quadrant_integrals(const ShearProfile& profile, int m) {
  if (m < 64 || m % 2 != 0) throw std::invalid_argument("quadrant_integrals: m must be even and >= 64");
  const auto coarse = midpoint_quadrants(profile, m);
  const auto fine = midpoint_quadrants(profile, 2 * m);
  QuadrantIntegrals out;
  for (int q = 0; q < 4; ++q) {
    out.q[q] = (4.0 * fine[q] - coarse[q]) / 3.0;
    out.err[q] = std::abs(fine[q] - coarse[q]) / 3.0;
  }
  return out;
}

std::array<double, 4> quadrant_integrals_of_g(const ShearProfile& profile, int m) {
  if (m < 2 || m % 2 != 0) throw std::invalid_argument("quadrant_integrals_of_g: m must be even");
  const std::vector<double> u = profile.step_samples(m, 0.5);
  std::array<double, 4> acc{};
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      const double g = profile.kind() == ShearProfile::Kind::Zero ? 0.0 : 0.5 * (u[i] + u[j] - 2.0 * u[i] * u[j]);
      acc[quadrant_of(i, j, m)] += g;
    }
  }
  for (auto& v : acc) v /= double(m) * double(m);
  return acc;
}

std::array<cplx, 2> LimitMatrix::eigenvalues() const {
  const cplx tr = trace();
  const cplx disc = std::sqrt(tr * tr - 4.0 * det());
  return {(tr + disc) / 2.0, (tr - disc) / 2.0};
}

LimitMatrix limit_matrix(const QuadrantIntegrals& q) {
  const cplx q1 = q.q[0], q2 = q.q[1], q3 = q.q[2], q4 = q.q[3];
  LimitMatrix lm;
  lm.m = {{{q1 - q4, q4 - q1}, {q2 - q3, q3 - q2}}};
  lm.mu = q1 + q3 - q2 - q4;
  lm.quadrature_error = q.err[0] + q.err[1] + q.err[2] + q.err[3];
  return lm;
}

LimitMatrix limit_matrix(const ShearProfile& profile, int m) { return limit_matrix(quadrant_integrals(profile, m)); }

}  // namespace dynamo
