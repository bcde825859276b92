#include "yfwl/covariance.hpp"

#include "yfwl/error.hpp"

#include <algorithm>
#include <cmath>

namespace yfwl {

const char* to_string(CovKind kind) {
  switch (kind) {
    case CovKind::Homoskedastic: return "homo";
    case CovKind::HC0: return "hc0";
    case CovKind::HC1: return "hc1";
    case CovKind::HC2: return "hc2";
    case CovKind::HC3: return "hc3";
    case CovKind::HC4: return "hc4";
    case CovKind::HC5: return "hc5";
    case CovKind::HAC: return "hac";
    case CovKind::ClusterCV1: return "cluster-cv1";
  }
  return "?";
}

bool needs_leverages(CovKind kind) {
  return kind == CovKind::HC2 || kind == CovKind::HC3 || kind == CovKind::HC4 ||
         kind == CovKind::HC5;
}

LagWeights bartlett(std::size_t lags) {
  return [lags](std::size_t lag) {
    if (lag > lags) return 0.0;
    return 1.0 - static_cast<double>(lag) / static_cast<double>(lags + 1);
  };
}

CovSpec CovSpec::hac(std::size_t lags, LagWeights weights) {
  CovSpec spec;
  spec.kind = CovKind::HAC;
  spec.hac_lags = lags;
  spec.hac_weights = std::move(weights);
  return spec;
}

CovSpec CovSpec::cluster(std::vector<int> ids) {
  CovSpec spec;
  spec.kind = CovKind::ClusterCV1;
  spec.cluster_ids = std::move(ids);
  return spec;
}

OmegaHat::OmegaHat(const Vec& residuals, const CovSpec& spec, Eigen::Index k_used,
                   const std::optional<Vec>& leverages)
    : kind_(spec.kind), u_(residuals) {
  const Eigen::Index n = u_.size();
  const double N = static_cast<double>(n);
  const double k = static_cast<double>(k_used);
  if (n <= k_used && (kind_ == CovKind::Homoskedastic || kind_ == CovKind::HC1 ||
                      kind_ == CovKind::ClusterCV1)) {
    throw Error(ErrorKind::InvalidConfig, "degrees of freedom N - k must be positive");
  }

  if (needs_leverages(kind_)) {
    if (!leverages) {
      throw Error(ErrorKind::MissingLeverages, std::string(to_string(kind_)) + " needs leverages");
    }
    if (leverages->size() != n) {
      throw Error(ErrorKind::InvalidConfig, "leverage vector length differs from residuals");
    }
  }
  auto leverage_at = [&](Eigen::Index i) {
    const double h = (*leverages)(i);
    if (h >= 1.0 - 1e-12) {
      throw Error(ErrorKind::LeverageAtOne, "observation " + std::to_string(i) + " has h_ii = 1")
          .with_index(i);
    }
    return h;
  };

  const Vec u2 = u_.cwiseAbs2();
  switch (kind_) {
    case CovKind::Homoskedastic:
      df_factor_ = N / (N - k);
      scale_ = u_.squaredNorm() / (N - k);
      break;
    case CovKind::HC0:
      diag_ = u2;
      break;
    case CovKind::HC1:
      df_factor_ = N / (N - k);
      diag_ = df_factor_ * u2;
      break;
    case CovKind::HC2:
    case CovKind::HC3:
    case CovKind::HC4:
    case CovKind::HC5: {
      diag_.resize(n);
      const double h_max = leverages->maxCoeff();
      for (Eigen::Index i = 0; i < n; ++i) {
        const double h = leverage_at(i);
        double exponent = 1.0;
        if (kind_ == CovKind::HC3) {
          exponent = 2.0;
        } else if (kind_ == CovKind::HC4) {
          exponent = std::min(4.0, N * h / k);
        } else if (kind_ == CovKind::HC5) {
          exponent = 0.5 * std::min(N * h / k, std::max(4.0, 0.7 * N * h_max / k));
        }
        diag_(i) = u2(i) / std::pow(1.0 - h, exponent);
      }
      break;
    }
    case CovKind::HAC: {
      const LagWeights weights = spec.hac_weights ? spec.hac_weights : bartlett(spec.hac_lags);
      const std::size_t last = std::min<std::size_t>(spec.hac_lags, n > 0 ? n - 1 : 0);
      for (std::size_t j = 0; j <= last; ++j) {
        const double w = weights(j);
        if (!std::isfinite(w) || std::abs(w) > 1.0) {
          throw Error(ErrorKind::InvalidConfig, "HAC weight at lag " + std::to_string(j) +
                                                    " is outside [-1, 1]");
        }
        lag_weights_.push_back(w);
      }
      if (lag_weights_.front() != 1.0) {
        throw Error(ErrorKind::InvalidConfig, "HAC weight at lag 0 must be 1");
      }
      break;
    }
    case CovKind::ClusterCV1: {
      clusters_ = spec.cluster_ids;
      if (static_cast<Eigen::Index>(clusters_.size()) != n) {
        throw Error(ErrorKind::InvalidConfig, "cluster ids must have one entry per observation");
      }
      cluster_count_ = clusters_.empty() ? 0 : *std::max_element(clusters_.begin(), clusters_.end()) + 1;
      if (cluster_count_ < 2) {
        throw Error(ErrorKind::SingleCluster, "cluster-robust covariance needs at least two clusters");
      }
      const double G = cluster_count_;
      df_factor_ = G * (N - 1.0) / ((G - 1.0) * (N - k));
      scale_ = df_factor_;
      break;
    }
  }
}

Mat OmegaHat::meat(const Mat& X) const {
  switch (kind_) {
    case CovKind::Homoskedastic:
      return scale_ * (X.transpose() * X);
    case CovKind::HAC: {
      const Mat G = u_.asDiagonal() * X;
      Mat S = lag_weights_[0] * (G.transpose() * G);
      const Eigen::Index n = G.rows();
      for (std::size_t j = 1; j < lag_weights_.size(); ++j) {
        const auto lag = static_cast<Eigen::Index>(j);
        const Mat cross = G.bottomRows(n - lag).transpose() * G.topRows(n - lag);
        S += lag_weights_[j] * (cross + cross.transpose());
      }
      return S;
    }
    case CovKind::ClusterCV1: {
      Mat sums = Mat::Zero(cluster_count_, X.cols());
      for (Eigen::Index i = 0; i < X.rows(); ++i) {
        sums.row(clusters_[static_cast<std::size_t>(i)]) += u_(i) * X.row(i);
      }
      return scale_ * (sums.transpose() * sums);
    }
    default:
      return X.transpose() * diag_.asDiagonal() * X;
  }
}

double OmegaHat::quad(const Vec& v, const Vec& w) const {
  Mat pair(v.size(), 2);
  pair << v, w;
  return meat(pair)(0, 1);
}

Mat OmegaHat::dense(std::size_t cap) const {
  const Eigen::Index n = N();
  if (static_cast<std::size_t>(n) > cap) {
    throw Error(ErrorKind::InvalidConfig, "refusing to materialize an N x N error covariance");
  }
  return meat(Mat::Identity(n, n));
}

OmegaHat omega_hat(const Vec& residuals, const CovSpec& spec, Eigen::Index k_used,
                   const std::optional<Vec>& leverages) {
  return OmegaHat(residuals, spec, k_used, leverages);
}

Mat sandwich(const Mat& X, const OmegaHat& omega) {
  const Mat bread = Projector(X, "sandwich regressors").gram_inverse();
  Mat V = bread * omega.meat(X) * bread;
  return 0.5 * (V + V.transpose());
}

Mat effective_regressors(const ValidatedDesign& design) {
  if (!design.instrumented) return design.W();
  const Mat fitted2 = Projector(design.Z(), "Z = [W1 : Z2]").project(design.W2);
  return hcat(design.W1, fitted2);
}

Vec leverages_via_partition(const ValidatedDesign& design) {
  const Mat X = effective_regressors(design);
  const Mat& X1 = design.W1;
  const Mat X2 = X.rightCols(design.k2());
  const PartitionedInverse inv = partitioned_inverse(X1, X2);
  Vec h = (X2 * inv.W22).cwiseProduct(X2).rowwise().sum();
  if (design.k1() > 0) {
    h += (X1 * inv.W11).cwiseProduct(X1).rowwise().sum();
    h += 2.0 * (X1 * inv.W12).cwiseProduct(X2).rowwise().sum();
  }
  return h;
}

namespace {

CovSpec with_design_clusters(const CovSpec& spec, const ValidatedDesign& design) {
  CovSpec out = spec;
  if (out.kind == CovKind::ClusterCV1 && out.cluster_ids.empty()) {
    if (design.cluster_ids.empty()) {
      throw Error(ErrorKind::InvalidConfig, "cluster covariance requested without cluster ids");
    }
    out.cluster_ids = design.cluster_ids;
  }
  return out;
}

void check_fit(const ValidatedDesign& design, const FitResult& fit, ModelForm form) {
  if (fit.form != form) {
    throw Error(ErrorKind::InvalidConfig,
                std::string("expected a ") + to_string(form) + " fit, got " + to_string(fit.form));
  }
  if (fit.residuals.size() != design.N()) {
    throw Error(ErrorKind::InvalidConfig, "fit residuals do not match the design");
  }
}

}  // namespace

VcovResult sandwich_full(const ValidatedDesign& design, const FitResult& fit, const CovSpec& spec) {
  check_fit(design, fit, ModelForm::Full);
  const CovSpec resolved = with_design_clusters(spec, design);
  std::optional<Vec> h;
  if (needs_leverages(spec.kind)) h = leverages_via_partition(design);
  const OmegaHat omega(fit.residuals, resolved, design.k(), h);
  return {sandwich(effective_regressors(design), omega), omega.df_factor(), spec.kind,
          ModelForm::Full, design.k2()};
}

VcovResult sandwich_partial(const ValidatedDesign& design, const FitResult& fit,
                            const CovSpec& spec) {
  check_fit(design, fit, ModelForm::Partial);
  const CovSpec resolved = with_design_clusters(spec, design);
  const Mat X = effective_regressors(partialled(design));
  std::optional<Vec> h;
  if (needs_leverages(spec.kind)) h = Projector(X, "partial regressors").leverages();
  const OmegaHat omega(fit.residuals, resolved, design.k2(), h);
  return {sandwich(X, omega), omega.df_factor(), spec.kind, ModelForm::Partial, design.k2()};
}

VcovResult partial_inference_hc2_family(const ValidatedDesign& design, const CovSpec& spec) {
  if (!needs_leverages(spec.kind)) {
    throw Error(ErrorKind::InvalidConfig, "the four-step procedure covers HC2..HC5 only");
  }
  const ValidatedDesign partial = partialled(design);
  const FitResult fit = tsls_full(partial);
  const Vec h = leverages_via_partition(design);
  const OmegaHat omega(fit.residuals, spec, design.k(), h);
  return {sandwich(effective_regressors(partial), omega), omega.df_factor(), spec.kind,
          ModelForm::Partial, design.k2()};
}

}  // namespace yfwl
