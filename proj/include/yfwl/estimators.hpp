#pragma once

#include "yfwl/model.hpp"

#include <concepts>
#include <optional>
#include <string>
#include <vector>

namespace yfwl {

enum class EstimatorKind { Ols, Iv, Tsls, KClass, Liml, Fuller, Gmm, TwoStepGmm };

const char* to_string(EstimatorKind kind);

enum class ModelForm { Full, Partial };

const char* to_string(ModelForm form);

struct EstimatorInfo {
  EstimatorKind kind = EstimatorKind::Ols;
  std::optional<double> K;       // K-class family
  std::optional<double> kappa;   // LIML eigenvalue behind K
  std::optional<double> alpha;   // Fuller
  std::string weighting;         // GMM weighting-matrix id
};

struct DesignDims {
  Eigen::Index N = 0, k1 = 0, k2 = 0, k3 = 0;
};

struct FitResult {
  std::vector<std::string> labels;
  Vec coefficients;
  Vec residuals;
  EstimatorInfo estimator;
  DesignDims dims;
  ModelForm form = ModelForm::Full;
  // Two-step GMM keeps its first step.
  std::optional<Vec> first_step_residuals;

  /// Coefficients on the block of interest (the trailing k2 entries).
  Vec b2() const { return coefficients.tail(dims.k2); }
};

enum class WeightingKind { Identity, TwoStepOptimal, Custom };

class WeightingMatrix {
 public:
  /// Throws NotPositiveDefinite unless `matrix` is symmetric and has a
  /// Cholesky factor.
  WeightingMatrix(WeightingKind kind, Mat matrix);

  static WeightingMatrix identity(Eigen::Index size);

  WeightingKind kind() const { return kind_; }
  const Mat& matrix() const { return matrix_; }
  /// Upper Cholesky factor U with matrix = U'U.
  const Mat& factor() const { return factor_; }
  std::string id() const;

 private:
  WeightingKind kind_;
  Mat matrix_;
  Mat factor_;
};

FitResult ols(const Vec& Y, const Mat& W);

/// OLS on the design regressors [W1 : W2], ignoring instruments.
FitResult ols(const ValidatedDesign& design);

/// Exactly identified IV, (Z'W)^-1 Z'Y. NotExactlyIdentified unless k3 = k2.
FitResult iv(const ValidatedDesign& design);

FitResult tsls_full(const ValidatedDesign& design);
FitResult tsls_partial(const ValidatedDesign& design);

FitResult kclass(const ValidatedDesign& design, double K);

/// Smallest root of det(U'M_{W1}U - k U'M_Z U) = 0 with U = [Y : W2].
double liml_kappa(const ValidatedDesign& design);

FitResult liml(const ValidatedDesign& design);

/// K = kappa - alpha / (N - L), L counting every instrument column
/// (including an intercept absorbed by partialling).
FitResult fuller(const ValidatedDesign& design, double alpha = 1.0);

/// Instrument count L used by Fuller's correction.
Eigen::Index fuller_instrument_count(const ValidatedDesign& design);

FitResult gmm(const ValidatedDesign& design, const WeightingMatrix& weights);

FitResult two_step_gmm(const ValidatedDesign& design);

/// Two-step GMM written as a 2SLS fit on reweighted data with the
/// projector onto D^{1/2} Z. ZeroResidual when a first-step residual is 0.
FitResult two_step_gmm_projection_form(const ValidatedDesign& design);

/// Any estimator on the residualized system, tagged as a partial fit.
template <std::invocable<const ValidatedDesign&> Fn>
FitResult fit_partial(const ValidatedDesign& design, Fn&& fit) {
  FitResult out = fit(partialled(design));
  out.form = ModelForm::Partial;
  out.dims.k1 = 0;
  return out;
}

}  // namespace yfwl
