#pragma once

#include "yfwl/estimators.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace yfwl {

enum class CovKind { Homoskedastic, HC0, HC1, HC2, HC3, HC4, HC5, HAC, ClusterCV1 };

const char* to_string(CovKind kind);

/// True for HC2..HC5, whose Omega depends on leverages.
bool needs_leverages(CovKind kind);

using LagWeights = std::function<double(std::size_t lag)>;

/// Bartlett weights 1 - j / (lags + 1), zero beyond `lags`.
LagWeights bartlett(std::size_t lags);

struct CovSpec {
  CovKind kind = CovKind::HC0;
  std::size_t hac_lags = 0;
  LagWeights hac_weights;       // defaults to bartlett(hac_lags)
  std::vector<int> cluster_ids;  // ClusterCV1; falls back to the design's ids

  static CovSpec of(CovKind kind) { return CovSpec{kind, 0, {}, {}}; }
  static CovSpec hac(std::size_t lags, LagWeights weights = {});
  static CovSpec cluster(std::vector<int> ids = {});
};

/// Implicit error covariance. Only quadratic forms X' Omega X are exposed;
/// dense() exists for small N.
class OmegaHat {
 public:
  OmegaHat(const Vec& residuals, const CovSpec& spec, Eigen::Index k_used,
           const std::optional<Vec>& leverages = std::nullopt);

  CovKind kind() const { return kind_; }
  Eigen::Index N() const { return u_.size(); }
  /// Scalar finite-sample factor folded into Omega (1 when none).
  double df_factor() const { return df_factor_; }

  /// X' Omega X.
  Mat meat(const Mat& X) const;
  /// v' Omega w.
  double quad(const Vec& v, const Vec& w) const;
  /// Dense N x N Omega; InvalidConfig above kDenseCap.
  Mat dense(std::size_t cap = kDenseCap) const;

 private:
  CovKind kind_;
  Vec u_;
  Vec diag_;                   // diagonal kinds
  double scale_ = 1.0;         // homoskedastic sigma^2, cluster factor
  double df_factor_ = 1.0;
  std::vector<double> lag_weights_;  // HAC, index = lag
  std::vector<int> clusters_;
  int cluster_count_ = 0;
};

OmegaHat omega_hat(const Vec& residuals, const CovSpec& spec, Eigen::Index k_used,
                   const std::optional<Vec>& leverages = std::nullopt);

struct VcovResult {
  Mat matrix;
  double df_factor_applied = 1.0;
  CovKind kind = CovKind::HC0;
  ModelForm form = ModelForm::Full;
  Eigen::Index k2 = 0;

  /// Block for the variables of interest (the trailing k2 x k2 corner).
  Mat block22() const { return matrix.bottomRightCorner(k2, k2); }
  Vec standard_errors() const { return matrix.diagonal().cwiseMax(0.0).cwiseSqrt(); }
};

/// A^-1 X' Omega X A^-1 with A = X'X.
Mat sandwich(const Mat& X, const OmegaHat& omega);

/// Effective regressors of the full model: [W1 : P_Z W2] (W itself for OLS).
Mat effective_regressors(const ValidatedDesign& design);

/// Full-design leverages h_i = x_i'(X'X)^-1 x_i on [W1 : P_Z W2], computed
/// from the partitioned-inverse blocks.
Vec leverages_via_partition(const ValidatedDesign& design);

/// Covariance of the full-model 2SLS / OLS fit. HC2..HC5 use full-design
/// leverages.
VcovResult sandwich_full(const ValidatedDesign& design, const FitResult& fit, const CovSpec& spec);

/// Covariance of the partial-model fit with k_used = k2. HC2..HC5 use the
/// leverages of the partial regressors.
VcovResult sandwich_partial(const ValidatedDesign& design, const FitResult& fit,
                            const CovSpec& spec);

/// Full-model HC2..HC5 covariance of b2 computed from the partial
/// regression: residualize, fit the partial model, take full-design
/// leverages from the partitioned inverse, then evaluate the sandwich on
/// the partialled regressors with the partial residuals.
VcovResult partial_inference_hc2_family(const ValidatedDesign& design, const CovSpec& spec);

}  // namespace yfwl
