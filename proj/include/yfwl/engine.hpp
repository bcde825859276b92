#pragma once

#include "yfwl/covariance.hpp"
#include "yfwl/estimators.hpp"
#include "yfwl/model.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace yfwl {

/// Estimator choice as exposed on the command line.
struct EstimatorSpec {
  enum class Tag { Ols, Iv, Tsls, KClass, Liml, Fuller, Igmm, TwoStepGmm };
  Tag tag = Tag::Tsls;
  double K = 1.0;             // KClass only
  double fuller_alpha = 1.0;  // Fuller only

  static EstimatorSpec parse(const std::string& name);
  std::string name() const;
  /// Full and partial fits are identical in exact arithmetic.
  bool has_exact_theorem() const;
};

FitResult fit_full(const ValidatedDesign& design, const EstimatorSpec& estimator);
FitResult fit_partial(const ValidatedDesign& design, const EstimatorSpec& estimator);

/// Design with the instruments dropped (W2 treated as exogenous).
ValidatedDesign exogenous_view(const ValidatedDesign& design);

struct VcovCheck {
  CovKind kind;
  std::string variant;  // "standard", "partial-leverage", "full-leverage"
  double df_factor;     // Var_partial = df_factor * Var_full when the ledger holds
  double max_rel_delta;
  bool pass;
  bool expected_failure;
  VcovResult full;
  VcovResult partial;
};

struct ComparisonReport {
  EstimatorSpec estimator;
  std::vector<std::string> labels;  // W2 names
  FitResult full;
  FitResult partial;
  Vec coef_full_b2;
  Vec coef_partial;
  double max_abs_coef_delta = 0.0;
  double rel_coef_delta = 0.0;
  double max_abs_resid_delta = 0.0;
  double rel_resid_delta = 0.0;
  bool coef_pass = false;
  bool resid_pass = false;
  bool expected_failure = false;
  // Two-step GMM equates b2 but not the residuals: its first-order
  // conditions do not force W1'u = 0 when the model is overidentified.
  bool resid_expected_failure = false;
  std::vector<VcovCheck> vcov;
  PartitionCase partition_case;
  double tolerance = kTheoremTolerance;

  /// Every check not flagged as an expected failure passed.
  bool passed() const;
};

/// Runs the full and partial fits and checks coefficients, residuals and
/// each requested covariance against the degrees-of-freedom ledger:
/// HC0 and HAC exact, homoskedastic / HC1 / CV1 up to (N - k) / (N - k2),
/// HC2..HC5 exact only with full-design leverages.
ComparisonReport compare(const ValidatedDesign& design, const EstimatorSpec& estimator,
                         const std::vector<CovSpec>& cov_specs,
                         double tolerance = kTheoremTolerance);

/// IV design where the conditioning block W1 is endogenous (instrumented by
/// Z1) and the block of interest W2 is exogenous.
struct LimitationDesign {
  Vec Y;
  Mat W1;
  Mat W2;
  Mat Z1;
  std::vector<std::string> w2_names;
};

LimitationDesign make_limitation_design(Vec Y, Mat W1, Mat W2, Mat Z1);

struct LimitationDemo {
  Vec b2_full;         // IV on [W1 : W2] with Z = [Z1 : W2]
  Vec b2_partial_ols;  // (W~2'W~2)^-1 W~2'Y~
  // IV of Y~ on W~2 with instruments M_{W1} Z1. Unset when M_{W1} Z1 does
  // not identify W~2 (for instance Z1 orthogonal to W2 with W1'W2 = 0).
  std::optional<Vec> b2_partial_iv;
  std::string partial_iv_note;
  double delta_full_vs_ols = 0.0;
  std::optional<double> delta_full_vs_iv;
  std::vector<std::string> labels;
};

LimitationDemo limitation_demo(const LimitationDesign& design);

struct SweepRow {
  Eigen::Index N;
  double coef_delta;  // max |b2_full - b2_partial|
  double kappa;
  double K_full;
  double K_partial;
  double b2_full;
};

/// Full-vs-partial deltas over nested samples of the built-in DGP. The
/// estimator must be LIML, Fuller or a fixed-K K-class fit.
std::vector<SweepRow> convergence_sweep(std::uint64_t seed, const std::vector<Eigen::Index>& sizes,
                                        const EstimatorSpec& estimator);

}  // namespace yfwl
