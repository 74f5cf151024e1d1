#pragma once

// Sampled estimators of the weak, strong-stable and strong-unstable norms, and
// empirical checks of the Lasota-Yorke and heat-continuity inequalities.
//
// Every estimator is a max over a finite sample of (leaf, test function) data
// and so bounds the true sup from below.  A negative margin in a check is a
// genuine violation; a positive one is evidence only.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dynamo/fields.hpp"
#include "dynamo/leaves.hpp"
#include "dynamo/operators.hpp"

namespace dynamo {

struct NormParams {
  double sigma = 0.4;
  double beta = 0.2;
  double q = 0.5;
  int n_leaves = 512;
  int n_testfns = 16;
  std::vector<double> delta_grid;  // empty: {2/alpha, 1/alpha, 1/(2 alpha)}

  void validate(Alpha alpha) const;
  std::vector<double> deltas(Alpha alpha) const;
};

struct Estimate {
  double value = 0.0;
  std::string witness;
};

struct NormReport {
  Estimate weak;
  Estimate strong_stable;
  Estimate strong_unstable;

  double strong() const noexcept { return strong_stable.value + strong_unstable.value; }
};

/// Leaves (index-keyed sampled family plus eight vertical unit leaves) and raw
/// test profiles shared by all estimators for one seed.
class SampleSet {
 public:
  SampleSet(std::uint64_t seed, Alpha alpha, const NormParams& params);
  SampleSet(std::vector<Leaf> leaves, Alpha alpha, const NormParams& params, std::uint64_t seed);

  const std::vector<Leaf>& leaves() const noexcept { return leaves_; }
  /// Raw (unnormalized) profiles for leaf k; index 0 is the constant 1.
  const std::vector<TestFn>& profiles(std::size_t k) const noexcept { return profiles_[k]; }
  std::uint64_t seed() const noexcept { return seed_; }
  Alpha alpha() const noexcept { return alpha_; }

  /// Same profiles, every leaf translated by `shift`.
  SampleSet translated(Vec2 shift) const;

 private:
  void build_profiles(const NormParams& params);

  std::uint64_t seed_;
  Alpha alpha_;
  std::vector<Leaf> leaves_;
  std::vector<std::vector<TestFn>> profiles_;
};

Estimate weak_norm_est(const VectorField2& f, const SampleSet& s);
Estimate strong_stable_est(const VectorField2& f, const SampleSet& s, const NormParams& params);
Estimate strong_unstable_est(const VectorField2& f, const SampleSet& s, const NormParams& params);
NormReport norm_report(const VectorField2& f, const SampleSet& s, const NormParams& params);

Estimate weak_norm_est(const VectorField2& f, Alpha alpha, const NormParams& params, std::uint64_t seed);
Estimate strong_stable_est(const VectorField2& f, Alpha alpha, const NormParams& params, std::uint64_t seed);
Estimate strong_unstable_est(const VectorField2& f, Alpha alpha, const NormParams& params, std::uint64_t seed);

struct CheckRow {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  std::string witness;

  double margin() const noexcept { return rhs - lhs; }
  bool ok() const noexcept { return margin() >= 0.0; }
};

struct CheckReport {
  std::vector<CheckRow> rows;
  bool ok() const noexcept;
  double min_margin() const noexcept;
};

/// Sampled sides of the three Lasota-Yorke inequalities for e^{2 pi i g} L_alpha h.
/// Norms of h use the seed's sample set; norms of the image use that set plus
/// an independent one drawn from seed + 1.
CheckReport ly_check(const VectorField2& h, const OperatorContext& ctx, const NormParams& params, double c_cal,
                     std::uint64_t seed);

/// (i) weak(heat f) on S against weak(f) on S and its Gauss-Hermite translates;
/// (ii) weak(heat f - f) against 2 eps^{beta/4} (|f|_s + |f|_u).
CheckReport heat_weak_check(const VectorField2& f, double eps, Alpha alpha, const NormParams& params,
                            std::uint64_t seed, double tol = 1e-3);

/// CSV with columns check,lhs,rhs,margin,witness.
void write_check_csv(std::ostream& os, const CheckReport& r);

}  // namespace dynamo
