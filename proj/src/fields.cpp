#include "dynamo/fields.hpp"

#include <fftw3.h>

#include <cmath>
#include <istream>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>
#include <utility>

namespace dynamo {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_same(int a, int b) {
  if (a != b) throw std::invalid_argument("grid size mismatch");
}

// FFTW planning is not thread-safe; execution with the new-array interface is.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(int n, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<cplx> scratch(static_cast<std::size_t>(n) * n);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft_2d(n, n, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw std::runtime_error("FFTW planning failed");
    plans_.emplace(key, plan);
    return plan;
  }

  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;

 private:
  PlanCache() = default;
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  std::mutex mutex_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

void execute(ScalarField& f, int sign) {
  fftw_plan plan = PlanCache::instance().get(f.n(), sign);
  auto* buf = reinterpret_cast<fftw_complex*>(f.values().data());
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace

ScalarField::ScalarField(int n, cplx fill) : n_(n) {
  if (n <= 0 || n % 2 != 0) throw std::invalid_argument("grid size must be a positive even integer");
  values_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), fill);
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_same(n_, o.n_);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require_same(n_, o.n_);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= o.values_[k];
  return *this;
}

ScalarField& ScalarField::operator*=(cplx s) noexcept {
  for (auto& v : values_) v *= s;
  return *this;
}

ScalarField& ScalarField::multiply(const ScalarField& o) {
  require_same(n_, o.n_);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] *= o.values_[k];
  return *this;
}

VectorField2::VectorField2(ScalarField a, ScalarField b) : c1(std::move(a)), c2(std::move(b)) {
  require_same(c1.n(), c2.n());
}

VectorField2& VectorField2::operator+=(const VectorField2& o) {
  c1 += o.c1;
  c2 += o.c2;
  return *this;
}

VectorField2& VectorField2::operator-=(const VectorField2& o) {
  c1 -= o.c1;
  c2 -= o.c2;
  return *this;
}

VectorField2& VectorField2::operator*=(cplx s) noexcept {
  c1 *= s;
  c2 *= s;
  return *this;
}

Field3::Field3(VectorField2 planar, ScalarField vertical) : h(std::move(planar)), h3(std::move(vertical)) {
  require_same(h.n(), h3.n());
}

Field3& Field3::operator+=(const Field3& o) {
  h += o.h;
  h3 += o.h3;
  return *this;
}

Field3& Field3::operator-=(const Field3& o) {
  h -= o.h;
  h3 -= o.h3;
  return *this;
}

Field3& Field3::operator*=(cplx s) noexcept {
  h *= s;
  h3 *= s;
  return *this;
}

int wavenumber(int k, int n) noexcept { return k < n / 2 ? k : k - n; }

ScalarField fft_forward(const ScalarField& f) {
  ScalarField out = f;
  execute(out, FFTW_FORWARD);
  out *= 1.0 / (double(f.n()) * double(f.n()));
  return out;
}

ScalarField fft_inverse(const ScalarField& coeffs) {
  ScalarField out = coeffs;
  execute(out, FFTW_BACKWARD);
  return out;
}

double l2_norm(const ScalarField& f) {
  double s = 0.0;
  for (const cplx& v : f.values()) s += std::norm(v);
  return std::sqrt(s / double(f.size()));
}

double l2_norm(const VectorField2& f) { return std::hypot(l2_norm(f.c1), l2_norm(f.c2)); }

double l2_norm(const Field3& f) { return std::hypot(l2_norm(f.h), l2_norm(f.h3)); }

cplx inner(const ScalarField& f, const ScalarField& g) {
  require_same(f.n(), g.n());
  cplx s = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) s += f[k] * std::conj(g[k]);
  return s / double(f.size());
}

cplx inner(const VectorField2& f, const VectorField2& g) { return inner(f.c1, g.c1) + inner(f.c2, g.c2); }

cplx inner(const Field3& f, const Field3& g) { return inner(f.h, g.h) + inner(f.h3, g.h3); }

cplx pairing(const VectorField2& f, const VectorField2& g) {
  require_same(f.n(), g.n());
  cplx s = 0.0;
  for (std::size_t k = 0; k < f.c1.size(); ++k) s += f.c1[k] * g.c1[k] + f.c2[k] * g.c2[k];
  return s / double(f.c1.size());
}

ScalarField spectral_derivative(const ScalarField& f, Axis axis) {
  const int n = f.n();
  ScalarField c = fft_forward(f);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int k = axis == Axis::X ? i : j;
      // Nyquist mode has no real derivative partner
      const double kk = k == n / 2 ? 0.0 : double(wavenumber(k, n));
      c(i, j) *= cplx(0.0, kTwoPi * kk);
    }
  }
  return fft_inverse(c);
}

ScalarField divergence3(const Field3& b) {
  ScalarField d = spectral_derivative(b.h.c1, Axis::X);
  d += spectral_derivative(b.h.c2, Axis::Y);
  ScalarField z = b.h3;
  z *= cplx(0.0, kTwoPi);
  d += z;
  return d;
}

Field3 make_div_free(const VectorField2& h) {
  ScalarField d = spectral_derivative(h.c1, Axis::X);
  d += spectral_derivative(h.c2, Axis::Y);
  d *= cplx(0.0, 1.0 / kTwoPi);
  return Field3(h, std::move(d));
}

namespace {

ScalarField random_component(std::mt19937_64& rng, double decay, int band, int n) {
  if (band < 0 || band >= n / 2) throw std::invalid_argument("random field band must lie in [0, N/2)");
  std::normal_distribution<double> normal(0.0, 1.0);
  ScalarField c(n);
  for (int k2 = -band; k2 <= band; ++k2) {
    for (int k1 = -band; k1 <= band; ++k1) {
      const double amp = std::pow(1.0 + std::hypot(double(k1), double(k2)), -decay);
      const double re = normal(rng);
      const double im = normal(rng);
      c((k1 + n) % n, (k2 + n) % n) = amp * cplx(re, im);
    }
  }
  return fft_inverse(c);
}

}  // namespace

VectorField2 random_field(std::uint64_t seed, double decay, int band, int n) {
  std::mt19937_64 rng(seed);
  ScalarField a = random_component(rng, decay, band, n);
  ScalarField b = random_component(rng, decay, band, n);
  return VectorField2(std::move(a), std::move(b));
}

ScalarField random_scalar_field(std::uint64_t seed, double decay, int band, int n) {
  std::mt19937_64 rng(seed);
  return random_component(rng, decay, band, n);
}

double c1_norm_proxy(const ScalarField& f) {
  const int n = f.n();
  const ScalarField c = fft_forward(f);
  double s = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double kn = std::hypot(double(wavenumber(i, n)), double(wavenumber(j, n)));
      s += (1.0 + kTwoPi * kn) * std::abs(c(i, j));
    }
  }
  return s;
}

double c1_norm_proxy(const VectorField2& f) { return c1_norm_proxy(f.c1) + c1_norm_proxy(f.c2); }

namespace {

void write_header(std::ostream& os, std::int64_t n, std::int64_t components) {
  os.write(reinterpret_cast<const char*>(&n), sizeof n);
  os.write(reinterpret_cast<const char*>(&components), sizeof components);
}

void write_values(std::ostream& os, const ScalarField& f) {
  os.write(reinterpret_cast<const char*>(f.values().data()),
           static_cast<std::streamsize>(f.size() * sizeof(cplx)));
}

std::pair<int, int> read_header(std::istream& is) {
  std::int64_t n = 0, components = 0;
  is.read(reinterpret_cast<char*>(&n), sizeof n);
  is.read(reinterpret_cast<char*>(&components), sizeof components);
  if (!is || n <= 0 || n % 2 != 0 || n > (1 << 15)) throw std::runtime_error("field file: bad header");
  return {static_cast<int>(n), static_cast<int>(components)};
}

ScalarField read_values(std::istream& is, int n) {
  ScalarField f(n);
  is.read(reinterpret_cast<char*>(f.values().data()), static_cast<std::streamsize>(f.size() * sizeof(cplx)));
  if (!is) throw std::runtime_error("field file: truncated data");
  return f;
}

}  // namespace

void write_binary(std::ostream& os, const ScalarField& f) {
  write_header(os, f.n(), 1);
  write_values(os, f);
}

void write_binary(std::ostream& os, const VectorField2& f) {
  write_header(os, f.n(), 2);
  write_values(os, f.c1);
  write_values(os, f.c2);
}

void write_binary(std::ostream& os, const Field3& f) {
  write_header(os, f.n(), 3);
  write_values(os, f.h.c1);
  write_values(os, f.h.c2);
  write_values(os, f.h3);
}

ScalarField read_scalar_binary(std::istream& is) {
  auto [n, comps] = read_header(is);
  if (comps != 1) throw std::runtime_error("field file: expected 1 component");
  return read_values(is, n);
}

VectorField2 read_vector_binary(std::istream& is) {
  auto [n, comps] = read_header(is);
  if (comps != 2) throw std::runtime_error("field file: expected 2 components");
  ScalarField a = read_values(is, n);
  ScalarField b = read_values(is, n);
  return VectorField2(std::move(a), std::move(b));
}

Field3 read_field3_binary(std::istream& is) {
  auto [n, comps] = read_header(is);
  if (comps != 3) throw std::runtime_error("field file: expected 3 components");
  ScalarField a = read_values(is, n);
  ScalarField b = read_values(is, n);
  ScalarField c = read_values(is, n);
  return Field3(VectorField2(std::move(a), std::move(b)), std::move(c));
}

}  // namespace dynamo
