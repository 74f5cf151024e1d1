#pragma once

// Transfer operators on grid fields.  The lattice pushforward is exact: every
// target node reads a single source node, so no interpolation enters.
//
//   pushforward_ideal     alpha^2 L_alpha h = (DT h) o T^{-1}
//   apply_L_infty         rank-1 strong-chaos limit
//   apply_K_alpha         -grad g . (alpha^2 L_alpha h), third row of the 3D pushforward
//   apply_P_eps           heat o e^{2 pi i g} o pushforward
//   apply_P3d             one advect-then-diffuse period on the e^{2 pi i z} mode
//   apply_J_eps           e^{-4 pi^2 eps} heat(e^{2 pi i g} H o T^{-1})

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "dynamo/fields.hpp"
#include "dynamo/map_core.hpp"
#include "dynamo/shear.hpp"

namespace dynamo {

class OperatorContext {
 public:
  OperatorContext(Alpha alpha, int n, ShearProfile profile, double eps);

  Alpha alpha() const noexcept { return table_.alpha(); }
  int n() const noexcept { return table_.n(); }
  double eps() const noexcept { return eps_; }
  const ShearProfile& profile() const noexcept { return profile_; }
  const PullbackTable& table() const noexcept { return table_; }

  /// e^{2 pi i g} and grad g at the lattice nodes.
  const ScalarField& phase() const noexcept { return phase_; }
  const std::vector<Vec2>& grad_g() const noexcept { return grad_; }

  /// z-mode heat factor e^{-4 pi^2 eps}.
  double z_decay() const noexcept;

 private:
  PullbackTable table_;
  ShearProfile profile_;
  double eps_;
  ScalarField phase_;
  std::vector<Vec2> grad_;
};

VectorField2 pushforward_ideal(const VectorField2& h, const OperatorContext& ctx);
/// alpha^{-2} pushforward_ideal.
VectorField2 apply_L_alpha(const VectorField2& h, const OperatorContext& ctx);
/// f o T^{-1} on the lattice.
ScalarField compose_inverse(const ScalarField& f, const PullbackTable& table);
VectorField2 compose_inverse(const VectorField2& f, const PullbackTable& table);

VectorField2 apply_L_infty(const VectorField2& h);

ScalarField apply_K_alpha(const VectorField2& h, const OperatorContext& ctx);

ScalarField multiply_phase(ScalarField f, const OperatorContext& ctx);
VectorField2 multiply_phase(VectorField2 f, const OperatorContext& ctx);

ScalarField apply_heat(const ScalarField& f, double eps);
VectorField2 apply_heat(const VectorField2& f, double eps);

VectorField2 apply_P_eps(const VectorField2& h, const OperatorContext& ctx);
/// alpha^{-2} P_eps; eigenvalues of this operator times alpha^2 are those of P_eps.
VectorField2 apply_P_eps_normalized(const VectorField2& h, const OperatorContext& ctx);

Field3 apply_P3d(const Field3& b, const OperatorContext& ctx);

ScalarField apply_J_eps(const ScalarField& h3, const OperatorContext& ctx);

struct FixedPointResult {
  ScalarField solution;
  double residual = 0.0;  // |lambda H - J H - R| / |R|, 0 when R = 0
  int iterations = 0;
};

/// Solves lambda H = J(H) + R by H <- (R + J H) / lambda.  `contraction` is a
/// bound on |J| and must be smaller than |lambda|.
template <class ApplyJ>
FixedPointResult fixed_point_solve(ApplyJ&& apply_j, const ScalarField& rhs, cplx lambda, double contraction,
                                   double tol = 1e-10, int max_iter = 500) {
  if (!(std::abs(lambda) > contraction)) throw std::invalid_argument("fixed point: |lambda| must exceed |J|");
  const double rnorm = l2_norm(rhs);
  FixedPointResult out;
  out.solution = ScalarField(rhs.n());
  if (rnorm == 0.0) return out;
  const cplx inv = 1.0 / lambda;
  for (int it = 1; it <= max_iter; ++it) {
    ScalarField next = apply_j(out.solution);
    next += rhs;
    next *= inv;
    out.solution = std::move(next);
    out.iterations = it;
    ScalarField res = out.solution * lambda;
    res -= apply_j(out.solution);
    res -= rhs;
    out.residual = l2_norm(res) / rnorm;
    if (out.residual < tol) return out;
  }
  throw std::runtime_error("fixed point iteration did not converge, residual " + std::to_string(out.residual));
}

/// Vertical component of the eigenvector: solves (lambda - J_eps) H = R with
/// R = e^{-4 pi^2 eps} heat(e^{2 pi i g} K_alpha h).  `lambda` is the eigenvalue
/// of apply_P3d, i.e. e^{-4 pi^2 eps} times the eigenvalue of P_eps.
FixedPointResult solve_H3(const VectorField2& h_eig, cplx lambda, const OperatorContext& ctx, double tol = 1e-10,
                          int max_iter = 500);

}  // namespace dynamo
