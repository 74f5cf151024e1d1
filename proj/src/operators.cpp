#include "dynamo/operators.hpp"

#include <numbers>
#include <utility>

namespace dynamo {

namespace {

constexpr double kPi = std::numbers::pi;

void require_size(int a, int b) {
  if (a != b) throw std::invalid_argument("field size does not match operator grid");
}

std::vector<double> heat_factors(int n, double eps) {
  std::vector<double> f(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double kk = wavenumber(k, n);
    f[k] = std::exp(-4.0 * kPi * kPi * eps * kk * kk);
  }
  return f;
}

}  // namespace

OperatorContext::OperatorContext(Alpha alpha, int n, ShearProfile profile, double eps)
    : table_(n, alpha), profile_(std::move(profile)), eps_(eps), phase_(n) {
  if (!(eps >= 0.0)) throw std::invalid_argument("diffusivity must be >= 0");
  const std::vector<double> u = profile_.step_samples(n, 0.0);
  const std::vector<double> du = profile_.step_derivative_samples(n, 0.0);
  const bool zero = profile_.kind() == ShearProfile::Kind::Zero;
  grad_.resize(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const std::size_t k = static_cast<std::size_t>(j) * n + i;
      const double g = zero ? 0.0 : 0.5 * (u[i] + u[j] - 2.0 * u[i] * u[j]);
      phase_[k] = std::polar(1.0, 2.0 * kPi * g);
      grad_[k] = zero ? Vec2{} : Vec2{0.5 * du[i] * (1.0 - 2.0 * u[j]), 0.5 * du[j] * (1.0 - 2.0 * u[i])};
    }
  }
}

double OperatorContext::z_decay() const noexcept { return std::exp(-4.0 * kPi * kPi * eps_); }

VectorField2 pushforward_ideal(const VectorField2& h, const OperatorContext& ctx) {
  require_size(h.n(), ctx.n());
  const PullbackTable& t = ctx.table();
  VectorField2 out(ctx.n());
  for (std::size_t p = 0; p < t.size(); ++p) {
    const std::uint32_t q = t.source(p);
    const IntMatrix2& a = t.matrix(t.region(p));
    const cplx v1 = h.c1[q], v2 = h.c2[q];
    out.c1[p] = double(a.a) * v1 + double(a.b) * v2;
    out.c2[p] = double(a.c) * v1 + double(a.d) * v2;
  }
  return out;
}

VectorField2 apply_L_alpha(const VectorField2& h, const OperatorContext& ctx) {
  const double a = ctx.alpha().as_double();
  return pushforward_ideal(h, ctx) * cplx(1.0 / (a * a));
}

ScalarField compose_inverse(const ScalarField& f, const PullbackTable& table) {
  require_size(f.n(), table.n());
  ScalarField out(f.n());
  for (std::size_t p = 0; p < table.size(); ++p) out[p] = f[table.source(p)];
  return out;
}

VectorField2 compose_inverse(const VectorField2& f, const PullbackTable& table) {
  return VectorField2(compose_inverse(f.c1, table), compose_inverse(f.c2, table));
}

VectorField2 apply_L_infty(const VectorField2& h) {
  const int n = h.n();
  cplx right = 0.0, left = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) (2 * i >= n ? right : left) += h.c1(i, j);
  }
  const cplx c = (right - left) / (double(n) * double(n));
  VectorField2 out(n);
  for (int j = 0; j < n; ++j) {
    const cplx s = 2 * j >= n ? c : -c;
    for (int i = 0; i < n; ++i) out.c1(i, j) = s;
  }
  return out;
}

ScalarField apply_K_alpha(const VectorField2& h, const OperatorContext& ctx) {
  const VectorField2 push = pushforward_ideal(h, ctx);
  ScalarField out(ctx.n());
  const auto& grad = ctx.grad_g();
  for (std::size_t p = 0; p < out.size(); ++p) out[p] = -(grad[p].x * push.c1[p] + grad[p].y * push.c2[p]);
  return out;
}

ScalarField multiply_phase(ScalarField f, const OperatorContext& ctx) {
  require_size(f.n(), ctx.n());
  f.multiply(ctx.phase());
  return f;
}

VectorField2 multiply_phase(VectorField2 f, const OperatorContext& ctx) {
  f.c1 = multiply_phase(std::move(f.c1), ctx);
  f.c2 = multiply_phase(std::move(f.c2), ctx);
  return f;
}

ScalarField apply_heat(const ScalarField& f, double eps) {
  if (!(eps >= 0.0)) throw std::invalid_argument("heat: eps must be >= 0");
  if (eps == 0.0) return f;
  const int n = f.n();
  const std::vector<double> m = heat_factors(n, eps);
  ScalarField c = fft_forward(f);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) c(i, j) *= m[i] * m[j];
  }
  return fft_inverse(c);
}

VectorField2 apply_heat(const VectorField2& f, double eps) {
  return VectorField2(apply_heat(f.c1, eps), apply_heat(f.c2, eps));
}

VectorField2 apply_P_eps(const VectorField2& h, const OperatorContext& ctx) {
  return apply_heat(multiply_phase(pushforward_ideal(h, ctx), ctx), ctx.eps());
}

VectorField2 apply_P_eps_normalized(const VectorField2& h, const OperatorContext& ctx) {
  const double a = ctx.alpha().as_double();
  return apply_P_eps(h, ctx) * cplx(1.0 / (a * a));
}

Field3 apply_P3d(const Field3& b, const OperatorContext& ctx) {
  require_size(b.n(), ctx.n());
  VectorField2 h = apply_P_eps(b.h, ctx);
  ScalarField v = apply_K_alpha(b.h, ctx);
  v += compose_inverse(b.h3, ctx.table());
  ScalarField h3 = apply_heat(multiply_phase(std::move(v), ctx), ctx.eps());
  Field3 out(std::move(h), std::move(h3));
  out *= ctx.z_decay();
  return out;
}

ScalarField apply_J_eps(const ScalarField& h3, const OperatorContext& ctx) {
  if (!(ctx.eps() > 0.0)) throw std::invalid_argument("J_eps needs eps > 0");
  ScalarField out = apply_heat(multiply_phase(compose_inverse(h3, ctx.table()), ctx), ctx.eps());
  out *= ctx.z_decay();
  return out;
}

FixedPointResult solve_H3(const VectorField2& h_eig, cplx lambda, const OperatorContext& ctx, double tol,
                          int max_iter) {
  if (!(ctx.eps() > 0.0)) throw std::invalid_argument("solve_H3 needs eps > 0");
  ScalarField rhs = apply_heat(multiply_phase(apply_K_alpha(h_eig, ctx), ctx), ctx.eps());
  rhs *= ctx.z_decay();
  return fixed_point_solve([&](const ScalarField& h) { return apply_J_eps(h, ctx); }, rhs, lambda, ctx.z_decay(),
                           tol, max_iter);
}

}  // namespace dynamo
