#include "yfwl/estimators.hpp"

#include "yfwl/error.hpp"

#include <cmath>

namespace yfwl {

const char* to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::Ols: return "ols";
    case EstimatorKind::Iv: return "iv";
    case EstimatorKind::Tsls: return "2sls";
    case EstimatorKind::KClass: return "kclass";
    case EstimatorKind::Liml: return "liml";
    case EstimatorKind::Fuller: return "fuller";
    case EstimatorKind::Gmm: return "gmm";
    case EstimatorKind::TwoStepGmm: return "2sgmm";
  }
  return "?";
}

const char* to_string(ModelForm form) {
  return form == ModelForm::Full ? "full" : "partial";
}

WeightingMatrix::WeightingMatrix(WeightingKind kind, Mat matrix)
    : kind_(kind), matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0) {
    throw Error(ErrorKind::NotPositiveDefinite, "weighting matrix must be square and non-empty");
  }
  const double scale = matrix_.cwiseAbs().maxCoeff();
  if ((matrix_ - matrix_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw Error(ErrorKind::NotPositiveDefinite, "weighting matrix is not symmetric");
  }
  Eigen::LLT<Mat> llt(matrix_);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::NotPositiveDefinite, "weighting matrix has no Cholesky factor");
  }
  factor_ = llt.matrixU();
}

WeightingMatrix WeightingMatrix::identity(Eigen::Index size) {
  return WeightingMatrix(WeightingKind::Identity, Mat::Identity(size, size));
}

std::string WeightingMatrix::id() const {
  switch (kind_) {
    case WeightingKind::Identity: return "identity";
    case WeightingKind::TwoStepOptimal: return "two-step-optimal";
    case WeightingKind::Custom: return "custom";
  }
  return "?";
}

namespace {

DesignDims dims_of(const ValidatedDesign& d) {
  return {d.N(), d.k1(), d.k2(), d.instrumented ? d.k3() : 0};
}

FitResult make_fit(const ValidatedDesign& d, Vec b, EstimatorInfo info) {
  FitResult fit;
  fit.labels = d.w_names();
  fit.residuals = d.Y - d.W() * b;
  fit.coefficients = std::move(b);
  fit.estimator = std::move(info);
  fit.dims = dims_of(d);
  return fit;
}

// Least squares of y on X where a rank failure means the estimator's normal
// matrix is singular.
Vec solve_system(const Mat& X, const Vec& y, const std::string& label) {
  try {
    return Projector(X, label).coefficients(y);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::RankDeficient) throw;
    throw Error(ErrorKind::SingularSystem, label + " is numerically singular");
  }
}

}  // namespace

FitResult ols(const Vec& Y, const Mat& W) {
  FitResult fit;
  fit.coefficients = Projector(W, "W").coefficients(Y);
  fit.residuals = Y - W * fit.coefficients;
  for (Eigen::Index j = 0; j < W.cols(); ++j) fit.labels.push_back("w" + std::to_string(j + 1));
  fit.estimator.kind = EstimatorKind::Ols;
  fit.estimator.K = 0.0;
  fit.dims = {W.rows(), 0, W.cols(), 0};
  return fit;
}

FitResult ols(const ValidatedDesign& design) {
  const Mat W = design.W();
  Vec b = Projector(W, "W = [W1 : W2]").coefficients(design.Y);
  FitResult fit = make_fit(design, std::move(b), {EstimatorKind::Ols, 0.0, {}, {}, {}});
  fit.dims.k3 = 0;
  return fit;
}

FitResult iv(const ValidatedDesign& design) {
  if (design.instrumented && design.k3() != design.k2()) {
    throw Error(ErrorKind::NotExactlyIdentified,
                "iv needs as many excluded instruments as endogenous regressors (use 2sls)");
  }
  const Mat Z = design.Z();
  const Mat W = design.W();
  Vec b = solve_square(Z.transpose() * W, Z.transpose() * design.Y, "Z'W");
  return make_fit(design, std::move(b), {EstimatorKind::Iv, 1.0, {}, {}, {}});
}

FitResult tsls_full(const ValidatedDesign& design) {
  const Projector pz(design.Z(), "Z = [W1 : Z2]");
  const Mat fitted = pz.project(design.W());
  // (P_Z W)'W = (P_Z W)'(P_Z W), so 2SLS is least squares on P_Z W.
  Vec b = solve_system(fitted, design.Y, "(P_Z W)'W");
  return make_fit(design, std::move(b), {EstimatorKind::Tsls, 1.0, {}, {}, {}});
}

FitResult tsls_partial(const ValidatedDesign& design) {
  return fit_partial(design, [](const ValidatedDesign& d) { return tsls_full(d); });
}

FitResult kclass(const ValidatedDesign& design, double K) {
  const Projector pz(design.Z(), "Z = [W1 : Z2]");
  const Mat W = design.W();
  const Mat PzW = pz.project(W);
  const Mat MzW = W - PzW;
  // I - K M_Z = P_Z + (1 - K) M_Z
  const Mat A = PzW.transpose() * PzW + (1.0 - K) * (MzW.transpose() * MzW);
  const Vec rhs = PzW.transpose() * design.Y + (1.0 - K) * (MzW.transpose() * design.Y);
  Vec b = solve_square(A, rhs, "W'(I - K M_Z)W");
  return make_fit(design, std::move(b), {EstimatorKind::KClass, K, {}, {}, {}});
}

double liml_kappa(const ValidatedDesign& design) {
  if (design.N() <= design.k1() + design.k3()) {
    throw Error(ErrorKind::NotPositiveDefinite, "LIML needs N > k1 + k3");
  }
  const Mat U = hcat(design.Y, design.W2);
  const Mat A_half = Projector(design.W1, "W1").residualize(U);
  const Mat B_half = Projector(design.Z(), "Z = [W1 : Z2]").residualize(U);
  return smallest_gen_eigenvalue(A_half.transpose() * A_half, B_half.transpose() * B_half);
}

FitResult liml(const ValidatedDesign& design) {
  const double kappa = liml_kappa(design);
  FitResult fit = kclass(design, kappa);
  fit.estimator = {EstimatorKind::Liml, kappa, kappa, {}, {}};
  return fit;
}

Eigen::Index fuller_instrument_count(const ValidatedDesign& design) {
  return design.k1() + design.k3() + (design.absorbed_intercept ? 1 : 0);
}

FitResult fuller(const ValidatedDesign& design, double alpha) {
  const Eigen::Index L = fuller_instrument_count(design);
  if (design.N() <= L) {
    throw Error(ErrorKind::SingularSystem, "Fuller needs N greater than the instrument count");
  }
  const double kappa = liml_kappa(design);
  const double K = kappa - alpha / static_cast<double>(design.N() - L);
  FitResult fit = kclass(design, K);
  fit.estimator = {EstimatorKind::Fuller, K, kappa, alpha, {}};
  return fit;
}

FitResult gmm(const ValidatedDesign& design, const WeightingMatrix& weights) {
  const Mat Z = design.Z();
  if (weights.matrix().rows() != Z.cols()) {
    throw Error(ErrorKind::InvalidConfig,
                "weighting matrix is " + std::to_string(weights.matrix().rows()) +
                    " square but there are " + std::to_string(Z.cols()) + " instruments");
  }
  // Wn = U'U turns W'Z Wn Z'W into a Gram matrix of U Z'W.
  const Mat& U = weights.factor();
  const Mat lhs = U * (Z.transpose() * design.W());
  const Vec rhs = U * (Z.transpose() * design.Y);
  Vec b = solve_system(lhs, rhs, "W'Z Wn Z'W");
  return make_fit(design, std::move(b), {EstimatorKind::Gmm, {}, {}, {}, weights.id()});
}

FitResult two_step_gmm(const ValidatedDesign& design) {
  const FitResult first = tsls_full(design);
  const Mat Z = design.Z();
  const Mat scaled = first.residuals.cwiseAbs().asDiagonal() * Z;  // D^{1/2} Z
  Mat gram_inverse;
  try {
    gram_inverse = Projector(scaled, "D^{1/2} Z").gram_inverse();
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::RankDeficient) throw;
    throw Error(ErrorKind::NotPositiveDefinite, "Z'DZ is singular");
  }
  gram_inverse = 0.5 * (gram_inverse + gram_inverse.transpose());
  FitResult fit = gmm(design, WeightingMatrix(WeightingKind::TwoStepOptimal, gram_inverse));
  fit.estimator.kind = EstimatorKind::TwoStepGmm;
  fit.first_step_residuals = first.residuals;
  return fit;
}

FitResult two_step_gmm_projection_form(const ValidatedDesign& design) {
  const FitResult first = tsls_full(design);
  const Vec& u = first.residuals;
  // Residuals this small relative to the largest are exact fits in floating
  // point; D^{-1/2} does not exist for them.
  const double floor = 1e-12 * u.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (!(std::abs(u(i)) > floor)) {
      throw Error(ErrorKind::ZeroResidual,
                  "first-step residual " + std::to_string(i) + " is zero")
          .with_index(i);
    }
  }
  const Vec inv = u.cwiseInverse();
  const Mat z_hat = u.asDiagonal() * design.Z();
  const Mat w_hat = inv.asDiagonal() * design.W();
  const Vec y_hat = inv.asDiagonal() * design.Y;
  const Mat projected = Projector(z_hat, "D^{1/2} Z").project(w_hat);
  Vec b = solve_system(projected, y_hat, "(P W^)'W^");
  FitResult fit = make_fit(design, std::move(b),
                           {EstimatorKind::TwoStepGmm, {}, {}, {}, "two-step-optimal"});
  fit.first_step_residuals = u;
  return fit;
}

}  // namespace yfwl
