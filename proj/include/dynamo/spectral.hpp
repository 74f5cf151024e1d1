#pragma once

// Leading-eigenvalue estimation, growth traces of the pulsed evolution, the
// strong-chaos convergence table and the ideal flux experiment.

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "dynamo/fields.hpp"
#include "dynamo/operators.hpp"
#include "dynamo/shear.hpp"

namespace dynamo {

template <class V>
struct SpectralReport {
  cplx lambda;
  double residual = 0.0;  // |Av - lambda v| / |v|
  int iters = 0;
  bool converged = false;
  std::vector<cplx> history;
  V vector;
};

/// v <- Av/|Av| with Rayleigh quotient lambda = <Av, v>.  Stops once the
/// residual of the current unit vector is below tol; exhausting max_iter is
/// reported through `converged`, not thrown.
template <class V, class Apply>
SpectralReport<V> power_iteration(Apply&& apply, V v0, double tol, int max_iter) {
  const double n0 = l2_norm(v0);
  if (!(n0 > 0.0)) throw std::invalid_argument("power iteration needs a nonzero start vector");
  SpectralReport<V> rep;
  V v = v0 * cplx(1.0 / n0);
  for (int it = 1; it <= max_iter; ++it) {
    V w = apply(v);
    const cplx lam = inner(w, v);
    V r = w - v * lam;
    rep.lambda = lam;
    rep.residual = l2_norm(r);
    rep.iters = it;
    rep.history.push_back(lam);
    if (rep.residual < tol) {
      rep.converged = true;
      rep.vector = std::move(v);
      return rep;
    }
    const double nw = l2_norm(w);
    if (!(nw > 0.0)) {
      rep.vector = std::move(v);
      return rep;
    }
    v = w * cplx(1.0 / nw);
  }
  rep.vector = std::move(v);
  return rep;
}

/// Power iteration on alpha^{-2} P_eps; lambda is rescaled to P_eps on return.
SpectralReport<VectorField2> leading_eigenpair(const OperatorContext& ctx, std::uint64_t seed, double tol = 1e-10,
                                               int max_iter = 5000);

struct GrowthTrace {
  std::vector<double> log_norms;  // log |B_n|, n = 0..periods
  int periods = 0;
  double eps = 0.0;
  int alpha = 0;
  double gamma = 0.0;
  double initial_divergence = 0.0;
};

/// Least-squares slope of y against its index over the final half.
double tail_slope(const std::vector<double>& y);

GrowthTrace evolve_and_trace(const Field3& b0, const OperatorContext& ctx, int n_periods = 40,
                             double div_tol = 1e-8);

struct ConvergenceRow {
  int alpha = 0;
  double error = 0.0;
};

/// |<e^{2 pi i g}(L_alpha h - L_infty h), phi>| per alpha on an n-grid.
std::vector<ConvergenceRow> limit_convergence_experiment(const std::vector<int>& alphas, const VectorField2& h,
                                                         const VectorField2& phi, const ShearProfile& g);

struct FluxSeries {
  std::vector<double> a;          // a_k = (1/k) log |<B_k, psi>|
  std::vector<double> log_pairing;  // k a_k
  double tail_slope = 0.0;
  bool underflow = false;
};

/// Ideal (eps = 0) iterates of alpha^2 e^{2 pi i g} L_alpha paired against psi.
FluxSeries flux_experiment(const VectorField2& b0, const VectorField2& psi, const OperatorContext& ctx, int n);

struct EigenRow {
  int alpha = 0;
  double eps = 0.0;
  cplx lambda;  // eigenvalue of P_eps
  double ratio = 0.0;  // |lambda| / alpha^2
  double mu_abs = 0.0;
  double gap = 0.0;
  double residual = 0.0;
  int iters = 0;
  bool converged = false;
};

std::vector<EigenRow> eigen_vs_alpha(const std::vector<int>& alphas, double eps, const ShearProfile& g, int n,
                                     std::uint64_t seed, double tol = 1e-10, int max_iter = 5000);

}  // namespace dynamo
