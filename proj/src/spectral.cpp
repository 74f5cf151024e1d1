#include "dynamo/spectral.hpp"

#include <stdexcept>

namespace dynamo {

SpectralReport<VectorField2> leading_eigenpair(const OperatorContext& ctx, std::uint64_t seed, double tol,
                                               int max_iter) {
  const VectorField2 v0 = random_field(seed, 2.0, std::min(8, ctx.n() / 2 - 1), ctx.n());
  auto rep = power_iteration([&](const VectorField2& v) { return apply_P_eps_normalized(v, ctx); }, v0, tol, max_iter);
  const double a2 = ctx.alpha().as_double() * ctx.alpha().as_double();
  rep.lambda *= a2;
  for (auto& h : rep.history) h *= a2;
  return rep;
}

double tail_slope(const std::vector<double>& y) {
  const std::size_t n = y.size();
  if (n < 2) throw std::invalid_argument("tail slope needs at least two values");
  const std::size_t start = n / 2 == n - 1 ? 0 : n / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = double(n - start);
  for (std::size_t k = start; k < n; ++k) {
    sx += double(k);
    sy += y[k];
    sxx += double(k) * double(k);
    sxy += double(k) * y[k];
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

GrowthTrace evolve_and_trace(const Field3& b0, const OperatorContext& ctx, int n_periods, double div_tol) {
  if (n_periods < 2) throw std::invalid_argument("evolve_and_trace needs at least two periods");
  const double n0 = l2_norm(b0);
  if (!(n0 > 0.0)) throw std::invalid_argument("initial field is zero");
  GrowthTrace tr;
  tr.initial_divergence = l2_norm(divergence3(b0)) / n0;
  if (tr.initial_divergence > div_tol) throw std::invalid_argument("initial field is not divergence-free");
  tr.periods = n_periods;
  tr.eps = ctx.eps();
  tr.alpha = ctx.alpha().value();
  double log_scale = std::log(n0);
  tr.log_norms.push_back(log_scale);
  Field3 b = b0 * cplx(1.0 / n0);
  for (int k = 1; k <= n_periods; ++k) {
    b = apply_P3d(b, ctx);
    const double nb = l2_norm(b);
    if (!(nb > 0.0)) throw std::runtime_error("field vanished during evolution");
    log_scale += std::log(nb);
    tr.log_norms.push_back(log_scale);
    b *= cplx(1.0 / nb);
  }
  // each period spans two time units
  tr.gamma = tail_slope(tr.log_norms) / 2.0;
  return tr;
}

std::vector<ConvergenceRow> limit_convergence_experiment(const std::vector<int>& alphas, const VectorField2& h,
                                                         const VectorField2& phi, const ShearProfile& g) {
  std::vector<ConvergenceRow> rows;
  const VectorField2 lim = apply_L_infty(h);
  for (int a : alphas) {
    const OperatorContext ctx(Alpha(a), h.n(), g, 0.0);
    VectorField2 d = apply_L_alpha(h, ctx) - lim;
    rows.push_back({a, std::abs(inner(multiply_phase(std::move(d), ctx), phi))});
  }
  return rows;
}

FluxSeries flux_experiment(const VectorField2& b0, const VectorField2& psi, const OperatorContext& ctx, int n) {
  if (ctx.eps() != 0.0) throw std::invalid_argument("flux experiment runs the ideal operator (eps = 0)");
  if (!(l2_norm(psi) > 0.0)) throw std::invalid_argument("flux experiment needs a nonzero psi");
  if (n < 2) throw std::invalid_argument("flux experiment needs at least two steps");
  FluxSeries out;
  VectorField2 b = b0;
  double log_scale = 0.0;
  for (int k = 1; k <= n; ++k) {
    b = multiply_phase(pushforward_ideal(b, ctx), ctx);
    const double nb = l2_norm(b);
    log_scale += std::log(nb);
    b *= cplx(1.0 / nb);
    const double p = std::abs(inner(b, psi));
    if (p < 1e-30) {
      out.underflow = true;
      break;
    }
    out.log_pairing.push_back(std::log(p) + log_scale);
    out.a.push_back(out.log_pairing.back() / k);
  }
  if (out.log_pairing.size() >= 2) out.tail_slope = tail_slope(out.log_pairing);
  return out;
}

std::vector<EigenRow> eigen_vs_alpha(const std::vector<int>& alphas, double eps, const ShearProfile& g, int n,
                                     std::uint64_t seed, double tol, int max_iter) {
  const double mu = std::abs(limit_matrix(g, 256).mu);
  std::vector<EigenRow> rows;
  for (int a : alphas) {
    const OperatorContext ctx(Alpha(a), n, g, eps);
    const auto rep = leading_eigenpair(ctx, seed, tol, max_iter);
    EigenRow r;
    r.alpha = a;
    r.eps = eps;
    r.lambda = rep.lambda;
    r.ratio = std::abs(rep.lambda) / (double(a) * a);
    r.mu_abs = mu;
    r.gap = std::abs(r.ratio - mu);
    r.residual = rep.residual;
    r.iters = rep.iters;
    r.converged = rep.converged;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace dynamo
