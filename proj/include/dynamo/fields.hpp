#pragma once

// Complex grid fields on the 2-torus.  A grid field denotes its trigonometric
// interpolant; norms and derivatives are exact for that interpolant.
//
// Storage is row-major with x fastest: value(i, j) sits at j*N + i and lives at
// the node (i/N, j/N).

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace dynamo {

using cplx = std::complex<double>;

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(int n, cplx fill = {0.0, 0.0});

  int n() const noexcept { return n_; }
  std::size_t size() const noexcept { return values_.size(); }

  cplx& operator()(int i, int j) noexcept { return values_[static_cast<std::size_t>(j) * n_ + i]; }
  const cplx& operator()(int i, int j) const noexcept { return values_[static_cast<std::size_t>(j) * n_ + i]; }
  cplx& operator[](std::size_t k) noexcept { return values_[k]; }
  const cplx& operator[](std::size_t k) const noexcept { return values_[k]; }

  std::span<cplx> values() noexcept { return values_; }
  std::span<const cplx> values() const noexcept { return values_; }

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(cplx s) noexcept;
  /// Pointwise product.
  ScalarField& multiply(const ScalarField& o);

  friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
  friend ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
  friend ScalarField operator*(ScalarField a, cplx s) { return a *= s; }
  friend ScalarField operator*(cplx s, ScalarField a) { return a *= s; }

 private:
  int n_ = 0;
  std::vector<cplx> values_;
};

struct VectorField2 {
  ScalarField c1;
  ScalarField c2;

  VectorField2() = default;
  explicit VectorField2(int n) : c1(n), c2(n) {}
  VectorField2(ScalarField a, ScalarField b);

  int n() const noexcept { return c1.n(); }

  VectorField2& operator+=(const VectorField2& o);
  VectorField2& operator-=(const VectorField2& o);
  VectorField2& operator*=(cplx s) noexcept;
  friend VectorField2 operator+(VectorField2 a, const VectorField2& b) { return a += b; }
  friend VectorField2 operator-(VectorField2 a, const VectorField2& b) { return a -= b; }
  friend VectorField2 operator*(VectorField2 a, cplx s) { return a *= s; }
  friend VectorField2 operator*(cplx s, VectorField2 a) { return a *= s; }
};

/// B(x,y,z) = exp(2 pi i z) (h, h3).
struct Field3 {
  VectorField2 h;
  ScalarField h3;

  Field3() = default;
  explicit Field3(int n) : h(n), h3(n) {}
  Field3(VectorField2 planar, ScalarField vertical);

  int n() const noexcept { return h3.n(); }

  Field3& operator+=(const Field3& o);
  Field3& operator-=(const Field3& o);
  Field3& operator*=(cplx s) noexcept;
  friend Field3 operator+(Field3 a, const Field3& b) { return a += b; }
  friend Field3 operator-(Field3 a, const Field3& b) { return a -= b; }
  friend Field3 operator*(Field3 a, cplx s) { return a *= s; }
  friend Field3 operator*(cplx s, Field3 a) { return a *= s; }
};

/// Signed wavenumber of FFT index k on an N grid; index N/2 maps to -N/2.
int wavenumber(int k, int n) noexcept;

/// Normalized coefficients c(k) = N^{-2} sum f(p) e^{-2 pi i k.p}.
ScalarField fft_forward(const ScalarField& f);
/// Synthesis f(p) = sum c(k) e^{2 pi i k.p}.
ScalarField fft_inverse(const ScalarField& coeffs);

double l2_norm(const ScalarField& f);
double l2_norm(const VectorField2& f);
double l2_norm(const Field3& f);
cplx inner(const ScalarField& f, const ScalarField& g);
cplx inner(const VectorField2& f, const VectorField2& g);
cplx inner(const Field3& f, const Field3& g);
/// Bilinear grid pairing N^{-2} sum f . g (no conjugation).
cplx pairing(const VectorField2& f, const VectorField2& g);

enum class Axis { X, Y };

ScalarField spectral_derivative(const ScalarField& f, Axis axis);

/// d_x h1 + d_y h2 + 2 pi i h3.
ScalarField divergence3(const Field3& b);
/// Sets h3 = (i / 2 pi)(d_x h1 + d_y h2).
Field3 make_div_free(const VectorField2& h);

/// Seeded random field with |c(k)| ~ (1 + |k|)^{-decay} for |k|_inf <= band.
VectorField2 random_field(std::uint64_t seed, double decay, int band, int n);
ScalarField random_scalar_field(std::uint64_t seed, double decay, int band, int n);

/// Sum over the band of (1 + 2 pi |k|) |c(k)|, an upper bound for the C^1 norm.
double c1_norm_proxy(const ScalarField& f);
double c1_norm_proxy(const VectorField2& f);

/// Flat binary layout: int64 N, int64 component count, then row-major
/// (re, im) double pairs for each component in turn.
void write_binary(std::ostream& os, const ScalarField& f);
void write_binary(std::ostream& os, const VectorField2& f);
void write_binary(std::ostream& os, const Field3& f);
ScalarField read_scalar_binary(std::istream& is);
VectorField2 read_vector_binary(std::istream& is);
Field3 read_field3_binary(std::istream& is);

}  // namespace dynamo
