#include "dynamo/norms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace dynamo {

namespace {

constexpr int kMaxDegree = 4;
using Moments = std::array<Cplx2, kMaxDegree + 1>;

// m-th Fourier moments sum_k w_k e^{2 pi i m t_k} f(W(t_k)); any test profile
// of degree <= 4 integrates as a dot product against these.
Moments leaf_moments(const VectorField2& f, const Leaf& w) {
  const LeafSamples s = sample_along(f, w);
  Moments mom{};
  for (std::size_t k = 0; k < s.t.size(); ++k) {
    const cplx step = std::polar(1.0, 2.0 * std::numbers::pi * s.t[k]);
    cplx e = s.w[k];
    for (int m = 0; m <= kMaxDegree; ++m) {
      mom[m].a += e * s.v1[k];
      mom[m].b += e * s.v2[k];
      e *= step;
    }
  }
  return mom;
}

Cplx2 apply_profile(const Moments& mom, const TestFn& phi) {
  const auto& c = phi.coeffs();
  if (c.size() > mom.size()) throw std::invalid_argument("test profile degree exceeds estimator support");
  Cplx2 out{};
  for (std::size_t m = 0; m < c.size(); ++m) {
    out.a += c[m] * mom[m].a;
    out.b += c[m] * mom[m].b;
  }
  return out;
}

double diff_norm(const Cplx2& x, const Cplx2& y) { return Cplx2{x.a - y.a, x.b - y.b}.norm(); }

std::string describe(const Leaf& w, std::size_t leaf, std::size_t profile) {
  std::ostringstream os;
  os << std::setprecision(6) << "leaf=" << leaf << " base=(" << w.base.x << ';' << w.base.y << ") dir=(" << w.dir.x
     << ';' << w.dir.y << ") S=" << w.length << " phi=" << profile;
  return os.str();
}

void update(Estimate& e, double v, const Leaf& w, std::size_t leaf, std::size_t profile) {
  if (v > e.value) {
    e.value = v;
    e.witness = describe(w, leaf, profile);
  }
}

Leaf perturb_leaf(const Leaf& w, double delta, Alpha alpha, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double a = alpha.as_double();
  const double ang = std::numbers::pi * unit(rng);
  const double rb = 0.25 * delta * std::abs(unit(rng));
  const TorusPoint base{w.base.x + rb * std::cos(ang), w.base.y + rb * std::sin(ang)};
  const double slope = std::clamp(w.dir.x / w.dir.y + 0.125 * delta * unit(rng), -2.0 / a, 2.0 / a);
  const double len = std::clamp(w.length + 0.24 * delta * unit(rng), 1e-6, 1.0);
  return Leaf::make(base, {slope, 1.0}, len, alpha);
}

}  // namespace

void NormParams::validate(Alpha alpha) const {
  if (!(sigma > 0.0 && sigma < 1.0 && beta > 0.0 && beta < 1.0 && q > 0.0 && q < 1.0)) {
    throw std::invalid_argument("norm parameters must lie in (0,1)");
  }
  if (!(sigma > beta)) throw std::invalid_argument("norm parameters need sigma > beta");
  if (!(1.0 - q > beta)) throw std::invalid_argument("norm parameters need 1 - q > beta");
  if (n_leaves < 0 || n_testfns < 0) throw std::invalid_argument("sample counts must be >= 0");
  for (double d : delta_grid) {
    if (!(d > 0.0 && d <= 2.0 / alpha.as_double() + 1e-15)) throw std::invalid_argument("delta must lie in (0, 2/alpha]");
  }
}

std::vector<double> NormParams::deltas(Alpha alpha) const {
  if (!delta_grid.empty()) return delta_grid;
  const double a = alpha.as_double();
  return {2.0 / a, 1.0 / a, 0.5 / a};
}

SampleSet::SampleSet(std::uint64_t seed, Alpha alpha, const NormParams& params) : seed_(seed), alpha_(alpha) {
  params.validate(alpha);
  for (int k = 0; k < 8; ++k) leaves_.push_back(Leaf::make({(k + 0.5) / 8.0, 0.0}, {0.0, 1.0}, 1.0, alpha));
  for (int i = 0; i < params.n_leaves; ++i) leaves_.push_back(sample_leaf(stream_seed(seed, 1000 + i), alpha));
  build_profiles(params);
}

SampleSet::SampleSet(std::vector<Leaf> leaves, Alpha alpha, const NormParams& params, std::uint64_t seed)
    : seed_(seed), alpha_(alpha), leaves_(std::move(leaves)) {
  params.validate(alpha);
  build_profiles(params);
}

void SampleSet::build_profiles(const NormParams& params) {
  profiles_.resize(leaves_.size());
  for (std::size_t k = 0; k < leaves_.size(); ++k) {
    auto& ps = profiles_[k];
    ps.push_back(TestFn::constant(1.0));
    const std::uint64_t leaf_seed = stream_seed(seed_, 500000 + k);
    for (int j = 0; j < params.n_testfns; ++j) {
      ps.push_back(sample_testfn(stream_seed(leaf_seed, j), leaves_[k], Normalization::c1()));
    }
  }
}

SampleSet SampleSet::translated(Vec2 shift) const {
  SampleSet out = *this;
  for (auto& w : out.leaves_) w.base = TorusPoint::wrapped(w.base.x + shift.x, w.base.y + shift.y);
  return out;
}

Estimate weak_norm_est(const VectorField2& f, const SampleSet& s) {
  Estimate e;
  for (std::size_t k = 0; k < s.leaves().size(); ++k) {
    const Moments mom = leaf_moments(f, s.leaves()[k]);
    const auto& ps = s.profiles(k);
    for (std::size_t p = 0; p < ps.size(); ++p) {
      update(e, apply_profile(mom, ps[p]).norm() / ps[p].c1_norm(), s.leaves()[k], k, p);
    }
  }
  return e;
}

Estimate strong_stable_est(const VectorField2& f, const SampleSet& s, const NormParams& params) {
  Estimate e;
  for (std::size_t k = 0; k < s.leaves().size(); ++k) {
    const Leaf& w = s.leaves()[k];
    const Moments mom = leaf_moments(f, w);
    const double scale = std::pow(w.length, -params.sigma);
    const auto& ps = s.profiles(k);
    for (std::size_t p = 0; p < ps.size(); ++p) {
      update(e, apply_profile(mom, ps[p]).norm() * scale / ps[p].cq_norm(params.q), w, k, p);
    }
  }
  return e;
}

Estimate strong_unstable_est(const VectorField2& f, const SampleSet& s, const NormParams& params) {
  Estimate e;
  const std::vector<double> deltas = params.deltas(s.alpha());
  for (std::size_t di = 0; di < deltas.size(); ++di) {
    const double delta = deltas[di];
    const double inv = std::pow(delta, -params.beta);
    for (std::size_t k = 0; k < s.leaves().size(); ++k) {
      const Leaf& w1 = s.leaves()[k];
      std::mt19937_64 rng(stream_seed(stream_seed(s.seed(), 900000 + k), di));
      const Leaf w2 = perturb_leaf(w1, delta, s.alpha(), rng);
      const Moments m1 = leaf_moments(f, w1);
      const Moments m2 = leaf_moments(f, w2);
      const auto& ps = s.profiles(k);
      for (std::size_t p = 0; p < ps.size(); ++p) {
        const TestFn phi1 = ps[p].scaled(1.0 / ps[p].c1_norm());
        const Cplx2 i1 = apply_profile(m1, phi1);
        double v = diff_norm(i1, apply_profile(m2, phi1)) * inv;
        // profile-perturbed partner with d_q <= delta / 2 and C^1 norm <= 1
        const TestFn& other = ps[(p + 1) % ps.size()];
        const TestFn psi = other.scaled(1.0 / other.c1_norm());
        const double eta = std::min(1.0, 0.5 * delta / (phi1.cq_norm(params.q) + psi.cq_norm(params.q)));
        const TestFn phi2 = phi1.scaled(1.0 - eta) + psi.scaled(eta);
        v = std::max(v, diff_norm(i1, apply_profile(m2, phi2)) * inv);
        if (v > e.value) {
          e.value = v;
          std::ostringstream os;
          os << describe(w1, k, p) << " delta=" << delta << " d_sigma=" << d_sigma(w1, w2);
          e.witness = os.str();
        }
      }
    }
  }
  return e;
}

NormReport norm_report(const VectorField2& f, const SampleSet& s, const NormParams& params) {
  return {weak_norm_est(f, s), strong_stable_est(f, s, params), strong_unstable_est(f, s, params)};
}

Estimate weak_norm_est(const VectorField2& f, Alpha alpha, const NormParams& params, std::uint64_t seed) {
  return weak_norm_est(f, SampleSet(seed, alpha, params));
}

Estimate strong_stable_est(const VectorField2& f, Alpha alpha, const NormParams& params, std::uint64_t seed) {
  return strong_stable_est(f, SampleSet(seed, alpha, params), params);
}

Estimate strong_unstable_est(const VectorField2& f, Alpha alpha, const NormParams& params, std::uint64_t seed) {
  return strong_unstable_est(f, SampleSet(seed, alpha, params), params);
}

bool CheckReport::ok() const noexcept {
  return std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.ok(); });
}

double CheckReport::min_margin() const noexcept {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& r : rows) m = std::min(m, r.margin());
  return m;
}

namespace {

Estimate larger(const Estimate& a, const Estimate& b) { return b.value > a.value ? b : a; }

}  // namespace

CheckReport ly_check(const VectorField2& h, const OperatorContext& ctx, const NormParams& params, double c_cal,
                     std::uint64_t seed) {
  const Alpha alpha = ctx.alpha();
  const double a = alpha.as_double();
  const SampleSet s(seed, alpha, params);
  const SampleSet extra(seed + 1, alpha, params);
  const VectorField2 lh = multiply_phase(apply_L_alpha(h, ctx), ctx);

  const NormReport nh = norm_report(h, s, params);
  const NormReport n1 = norm_report(lh, s, params);
  const NormReport n2 = norm_report(lh, extra, params);
  const Estimate lw = larger(n1.weak, n2.weak);
  const Estimate ls = larger(n1.strong_stable, n2.strong_stable);
  const Estimate lu = larger(n1.strong_unstable, n2.strong_unstable);

  const double hw = nh.weak.value, hs = nh.strong_stable.value, hu = nh.strong_unstable.value;
  const double sg = params.sigma, b = params.beta, q = params.q;
  CheckReport r;
  r.rows.push_back({"ly_weak", lw.value, c_cal * hw, lw.witness});
  r.rows.push_back(
      {"ly_strong_stable", ls.value, c_cal * (std::pow(a, -2 * q) + std::pow(a, 2 * sg - 2)) * hs + c_cal * hw,
       ls.witness});
  const double cs = std::pow(a, -2 + sg + b) + std::pow(a, -1 + b) + std::pow(a, -2 * q + b - sg);
  r.rows.push_back({"ly_strong_unstable", lu.value,
                    c_cal * (cs * hs + std::pow(a, -2 * b) * hu + std::pow(a, b - sg) * hw), lu.witness});
  return r;
}

CheckReport heat_weak_check(const VectorField2& f, double eps, Alpha alpha, const NormParams& params,
                            std::uint64_t seed, double tol) {
  if (!(eps > 0.0)) throw std::invalid_argument("heat_weak_check needs eps > 0");
  const SampleSet s(seed, alpha, params);
  const VectorField2 hf = apply_heat(f, eps);
  CheckReport r;

  // probabilists' Gauss-Hermite nodes; heat at time eps is a shift by sqrt(2 eps) Z
  static constexpr std::array<double, 5> nodes{-2.856970013872806, -1.355626179974266, 0.0, 1.355626179974266,
                                               2.856970013872806};
  const double spread = std::sqrt(2.0 * eps);
  Estimate base = weak_norm_est(f, s);
  for (double zx : nodes) {
    for (double zy : nodes) {
      if (zx == 0.0 && zy == 0.0) continue;
      base = larger(base, weak_norm_est(f, s.translated({spread * zx, spread * zy})));
    }
  }
  const Estimate lhs1 = weak_norm_est(hf, s);
  r.rows.push_back({"heat_weak_translates", lhs1.value, base.value * (1.0 + tol), lhs1.witness});

  const NormReport nf = norm_report(f, s, params);
  const Estimate lhs2 = weak_norm_est(hf - f, s);
  r.rows.push_back({"heat_weak_continuity", lhs2.value, 2.0 * std::pow(eps, params.beta / 4.0) * nf.strong(),
                    lhs2.witness});
  return r;
}

void write_check_csv(std::ostream& os, const CheckReport& r) {
  os << "check,lhs,rhs,margin,witness\n" << std::setprecision(17);
  for (const auto& row : r.rows) {
    os << row.name << ',' << row.lhs << ',' << row.rhs << ',' << row.margin() << ",\"" << row.witness << "\"\n";
  }
}

}  // namespace dynamo
