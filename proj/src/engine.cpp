#include "yfwl/engine.hpp"

#include "yfwl/error.hpp"
#include "yfwl/simulate.hpp"

#include <set>

namespace yfwl {

EstimatorSpec EstimatorSpec::parse(const std::string& name) {
  static const std::pair<const char*, Tag> table[] = {
      {"ols", Tag::Ols},       {"iv", Tag::Iv},         {"2sls", Tag::Tsls},
      {"kclass", Tag::KClass}, {"liml", Tag::Liml},     {"fuller", Tag::Fuller},
      {"igmm", Tag::Igmm},     {"2sgmm", Tag::TwoStepGmm},
  };
  for (const auto& [key, tag] : table) {
    if (name == key) return EstimatorSpec{tag};
  }
  throw Error(ErrorKind::InvalidConfig, "unknown estimator '" + name + "'");
}

std::string EstimatorSpec::name() const {
  switch (tag) {
    case Tag::Ols: return "ols";
    case Tag::Iv: return "iv";
    case Tag::Tsls: return "2sls";
    case Tag::KClass: return "kclass";
    case Tag::Liml: return "liml";
    case Tag::Fuller: return "fuller";
    case Tag::Igmm: return "igmm";
    case Tag::TwoStepGmm: return "2sgmm";
  }
  return "?";
}

bool EstimatorSpec::has_exact_theorem() const {
  switch (tag) {
    case Tag::Ols:
    case Tag::Iv:
    case Tag::Tsls:
    case Tag::TwoStepGmm:
      return true;
    case Tag::KClass:
      return K == 0.0 || K == 1.0;
    default:
      return false;
  }
}

namespace {

FitResult fit_with(const ValidatedDesign& d, const EstimatorSpec& e) {
  using Tag = EstimatorSpec::Tag;
  switch (e.tag) {
    case Tag::Ols: return ols(d);
    case Tag::Iv: return iv(d);
    case Tag::Tsls: return tsls_full(d);
    case Tag::KClass: return kclass(d, e.K);
    case Tag::Liml: return liml(d);
    case Tag::Fuller: return fuller(d, e.fuller_alpha);
    case Tag::Igmm: return gmm(d, WeightingMatrix::identity(d.Z().cols()));
    case Tag::TwoStepGmm: return two_step_gmm(d);
  }
  throw Error(ErrorKind::InvalidConfig, "unsupported estimator");
}

bool is_instrumental(const EstimatorSpec& e) {
  return e.tag != EstimatorSpec::Tag::Ols;
}

void require_instruments(const ValidatedDesign& d, const EstimatorSpec& e) {
  if (is_instrumental(e) && !d.instrumented && e.tag != EstimatorSpec::Tag::Iv &&
      e.tag != EstimatorSpec::Tag::Tsls) {
    throw Error(ErrorKind::InvalidConfig, e.name() + " needs excluded instruments");
  }
}

}  // namespace

FitResult fit_full(const ValidatedDesign& design, const EstimatorSpec& estimator) {
  require_instruments(design, estimator);
  return fit_with(design, estimator);
}

FitResult fit_partial(const ValidatedDesign& design, const EstimatorSpec& estimator) {
  require_instruments(design, estimator);
  return fit_partial(design, [&](const ValidatedDesign& d) { return fit_with(d, estimator); });
}

ValidatedDesign exogenous_view(const ValidatedDesign& design) {
  ValidatedDesign out = design;
  out.Z2 = out.W2;
  out.z2_names = out.w2_names;
  out.instrumented = false;
  return out;
}

bool ComparisonReport::passed() const {
  if (expected_failure) return true;
  if (!coef_pass) return false;
  if (!resid_pass && !resid_expected_failure) return false;
  for (const auto& check : vcov) {
    if (!check.expected_failure && !check.pass) return false;
  }
  return true;
}

ComparisonReport compare(const ValidatedDesign& design, const EstimatorSpec& estimator,
                         const std::vector<CovSpec>& cov_specs, double tolerance) {
  ComparisonReport report;
  report.estimator = estimator;
  report.tolerance = tolerance;
  report.labels = design.w2_names;
  report.expected_failure = !estimator.has_exact_theorem();
  report.resid_expected_failure = estimator.tag == EstimatorSpec::Tag::TwoStepGmm;

  auto annotate = [](const Error& e, ModelForm form) {
    return Error(e.kind(), std::string(to_string(form)) + " model: " + e.what());
  };
  try {
    report.full = fit_full(design, estimator);
  } catch (const Error& e) {
    throw annotate(e, ModelForm::Full);
  }
  try {
    report.partial = fit_partial(design, estimator);
  } catch (const Error& e) {
    throw annotate(e, ModelForm::Partial);
  }

  report.coef_full_b2 = report.full.b2();
  report.coef_partial = report.partial.coefficients;
  report.max_abs_coef_delta = (report.coef_full_b2 - report.coef_partial).cwiseAbs().maxCoeff();
  report.rel_coef_delta = relative_delta(report.coef_full_b2, report.coef_partial);
  report.max_abs_resid_delta = (report.full.residuals - report.partial.residuals).cwiseAbs().maxCoeff();
  report.rel_resid_delta = relative_delta(report.full.residuals, report.partial.residuals);
  report.coef_pass = report.rel_coef_delta <= tolerance;
  report.resid_pass = report.rel_resid_delta <= tolerance;

  std::set<std::string> endogenous, interest, all;
  for (const auto& name : design.w1_names) all.insert(name);
  for (const auto& name : design.w2_names) {
    all.insert(name);
    interest.insert(name);
    if (design.instrumented && is_instrumental(estimator)) endogenous.insert(name);
  }
  report.partition_case = classify_partition(endogenous, interest, all);

  using Tag = EstimatorSpec::Tag;
  const bool sandwich_applies =
      estimator.tag == Tag::Ols || estimator.tag == Tag::Iv || estimator.tag == Tag::Tsls;
  if (!sandwich_applies) return report;

  const ValidatedDesign view = estimator.tag == Tag::Ols ? exogenous_view(design) : design;
  const double N = static_cast<double>(design.N());
  const double dof_ratio = (N - static_cast<double>(design.k())) / (N - static_cast<double>(design.k2()));

  for (const auto& spec : cov_specs) {
    const VcovResult full = sandwich_full(view, report.full, spec);
    const Mat full22 = full.block22();
    auto add = [&](std::string variant, double factor, const VcovResult& partial, bool expected_failure) {
      const double delta = relative_delta(partial.matrix, factor * full22);
      report.vcov.push_back({spec.kind, std::move(variant), factor, delta, delta <= tolerance,
                             expected_failure, full, partial});
    };
    switch (spec.kind) {
      case CovKind::HC0:
      case CovKind::HAC:
        add("standard", 1.0, sandwich_partial(view, report.partial, spec), false);
        break;
      case CovKind::Homoskedastic:
      case CovKind::HC1:
      case CovKind::ClusterCV1:
        add("standard", dof_ratio, sandwich_partial(view, report.partial, spec), false);
        break;
      case CovKind::HC2:
      case CovKind::HC3:
      case CovKind::HC4:
      case CovKind::HC5:
        add("partial-leverage", 1.0, sandwich_partial(view, report.partial, spec), true);
        add("full-leverage", 1.0, partial_inference_hc2_family(view, spec), false);
        break;
    }
  }
  return report;
}

LimitationDesign make_limitation_design(Vec Y, Mat W1, Mat W2, Mat Z1) {
  LimitationDesign d{std::move(Y), std::move(W1), std::move(W2), std::move(Z1), {}};
  if (d.W1.rows() != d.Y.size() || d.W2.rows() != d.Y.size() || d.Z1.rows() != d.Y.size()) {
    throw Error(ErrorKind::InvalidConfig, "design blocks have mismatched row counts");
  }
  if (d.W1.cols() < 1 || d.W2.cols() < 1) {
    throw Error(ErrorKind::InvalidConfig, "both W1 and W2 need at least one column");
  }
  if (d.Z1.cols() < d.W1.cols()) {
    throw Error(ErrorKind::OrderConditionViolated, "fewer instruments than endogenous conditioning variables");
  }
  require_full_column_rank(hcat(d.W1, d.W2), "W = [W1 : W2]");
  require_full_column_rank(hcat(d.Z1, d.W2), "Z = [Z1 : W2]");
  for (Eigen::Index j = 0; j < d.W2.cols(); ++j) d.w2_names.push_back("w2_" + std::to_string(j + 1));
  return d;
}

LimitationDemo limitation_demo(const LimitationDesign& d) {
  LimitationDemo out;
  out.labels = d.w2_names;
  const Eigen::Index k2 = d.W2.cols();

  // Full IV with instruments [Z1 : W2]; for k3 = k1 this is the closed form
  // [W2'(I - W1(Z1'W1)^-1 Z1')W2]^-1 W2'(I - W1(Z1'W1)^-1 Z1')Y.
  const Mat W = hcat(d.W1, d.W2);
  const Mat fitted = Projector(hcat(d.Z1, d.W2), "Z = [Z1 : W2]").project(W);
  const Vec b = Projector(fitted, "(P_Z W)'W").coefficients(d.Y);
  out.b2_full = b.tail(k2);

  const Projector p1(d.W1, "W1");
  const Vec y_t = p1.residualize(d.Y);
  const Mat w2_t = p1.residualize(d.W2);
  out.b2_partial_ols = Projector(w2_t, "M_{W1} W2").coefficients(y_t);
  out.delta_full_vs_ols = (out.b2_full - out.b2_partial_ols).cwiseAbs().maxCoeff();

  if (d.Z1.cols() < k2) {
    out.partial_iv_note = "partial IV fit is underidentified: Z1 has fewer columns than W2";
    return out;
  }
  const Mat z1_t = p1.residualize(d.Z1);
  // Columns scaled to unit length make Z~1'W~2 a matrix of cosines, so an
  // absolute singular-value floor detects a lost rank condition even when
  // the product is pure rounding noise.
  const Mat cosines = z1_t.colwise().normalized().transpose() * w2_t.colwise().normalized();
  const Eigen::JacobiSVD<Mat> svd(cosines);
  if (svd.singularValues().minCoeff() <= kRankTolerance) {
    out.partial_iv_note = "partial IV fit is singular: M_{W1} Z1 does not identify M_{W1} W2";
    return out;
  }
  try {
    const Mat projected = Projector(z1_t, "M_{W1} Z1").project(w2_t);
    out.b2_partial_iv = Projector(projected, "P_{Z~1} W~2").coefficients(y_t);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::RankDeficient) throw;
    out.partial_iv_note = std::string("partial IV fit is singular: ") + e.what();
  }

  if (out.b2_partial_iv) {
    out.delta_full_vs_iv = (out.b2_full - *out.b2_partial_iv).cwiseAbs().maxCoeff();
  }
  return out;
}

std::vector<SweepRow> convergence_sweep(std::uint64_t seed, const std::vector<Eigen::Index>& sizes,
                                        const EstimatorSpec& estimator) {
  using Tag = EstimatorSpec::Tag;
  if (estimator.tag != Tag::Liml && estimator.tag != Tag::Fuller && estimator.tag != Tag::KClass) {
    throw Error(ErrorKind::InvalidConfig, "sweep supports liml, fuller and kclass");
  }
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] <= sizes[i - 1]) {
      throw Error(ErrorKind::InvalidConfig, "sweep sample sizes must be strictly increasing");
    }
  }
  std::vector<SweepRow> rows;
  for (const Eigen::Index N : sizes) {
    const ValidatedDesign design = sweep_design(seed, N);
    const FitResult full = fit_full(design, estimator);
    const FitResult partial = fit_partial(design, estimator);
    SweepRow row{};
    row.N = N;
    row.coef_delta = (full.b2() - partial.coefficients).cwiseAbs().maxCoeff();
    row.kappa = liml_kappa(design);
    row.K_full = full.estimator.K.value_or(estimator.K);
    row.K_partial = partial.estimator.K.value_or(estimator.K);
    row.b2_full = full.b2()(0);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace yfwl
