#include "yfwl/cli.hpp"

#include "yfwl/csv.hpp"
#include "yfwl/error.hpp"

#include <algorithm>
#include <CLI11.hpp>

#include <ostream>

namespace yfwl::cli {

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::Full: return "full";
    case Mode::Partial: return "partial";
    case Mode::Compare: return "compare";
    case Mode::LimitationDemo: return "limitation-demo";
    case Mode::Sweep: return "sweep";
  }
  return "?";
}

namespace {

constexpr std::uint64_t kDefaultSeed = 20240611;

const std::map<std::string, Mode> kModes = {{"full", Mode::Full},
                                            {"partial", Mode::Partial},
                                            {"compare", Mode::Compare},
                                            {"limitation-demo", Mode::LimitationDemo},
                                            {"sweep", Mode::Sweep}};

const std::map<std::string, CovKind> kCovKinds = {
    {"homo", CovKind::Homoskedastic}, {"hc0", CovKind::HC0}, {"hc1", CovKind::HC1},
    {"hc2", CovKind::HC2},            {"hc3", CovKind::HC3}, {"hc4", CovKind::HC4},
    {"hc5", CovKind::HC5},            {"hac", CovKind::HAC}, {"cluster-cv1", CovKind::ClusterCV1}};

Error config_error(const std::string& message) {
  return Error(ErrorKind::InvalidConfig, message);
}

EstimatorSpec estimator_of(const RunConfig& c) {
  EstimatorSpec e = EstimatorSpec::parse(c.estimator);
  if (c.kappa) e.K = *c.kappa;
  if (c.fuller_alpha) e.fuller_alpha = *c.fuller_alpha;
  return e;
}

std::optional<CovSpec> cov_spec_of(const RunConfig& c) {
  if (!c.vcov) return std::nullopt;
  const CovKind kind = kCovKinds.at(*c.vcov);
  if (kind == CovKind::HAC) return CovSpec::hac(static_cast<std::size_t>(c.hac_lags.value_or(0)));
  if (kind == CovKind::ClusterCV1) return CovSpec::cluster();
  return CovSpec::of(kind);
}

Json config_json(const RunConfig& c) {
  auto list = [](const std::vector<std::string>& v) {
    Json out = Json::array();
    for (const auto& s : v) out.push_back(s);
    return out;
  };
  Json out;
  out["data"] = c.data_path;
  out["outcome"] = c.outcome;
  out["endogenous"] = list(c.endogenous);
  out["exogenous"] = list(c.exogenous);
  out["instruments"] = list(c.instruments);
  out["cluster"] = c.cluster ? Json(*c.cluster) : Json(nullptr);
  out["estimator"] = c.estimator;
  out["kappa"] = c.kappa ? Json(*c.kappa) : Json(nullptr);
  out["fuller_alpha"] = c.fuller_alpha ? Json(*c.fuller_alpha) : Json(nullptr);
  out["vcov"] = c.vcov ? Json(*c.vcov) : Json(nullptr);
  out["hac_lags"] = c.hac_lags ? Json(*c.hac_lags) : Json(nullptr);
  out["mode"] = to_string(c.mode);
  out["tolerance"] = c.tolerance;
  out["intercept"] = c.intercept;
  out["drop_missing"] = c.drop_missing;
  out["format"] = c.format;
  out["seed"] = c.seed ? Json(*c.seed) : Json(nullptr);
  return out;
}

bool sandwich_supported(const EstimatorSpec& e) {
  using Tag = EstimatorSpec::Tag;
  return e.tag == Tag::Ols || e.tag == Tag::Iv || e.tag == Tag::Tsls;
}

}  // namespace

std::optional<int> parse_args(int argc, const char* const* argv, RunConfig& config,
                              std::ostream& out, std::ostream& err) {
  CLI::App app{"Full vs partial (partialled-out) linear IV estimation"};
  app.name("yfwl");
  std::string mode = "full";
  std::uint64_t seed = 0;
  bool no_intercept = false;

  app.add_option("--data", config.data_path, "CSV file with a header row");
  app.add_option("--outcome", config.outcome, "Outcome column");
  app.add_option("--endogenous", config.endogenous, "Regressors of interest (comma separated)")
      ->delimiter(',');
  app.add_option("--exogenous", config.exogenous, "Exogenous conditioning regressors")->delimiter(',');
  app.add_option("--instruments", config.instruments, "Excluded instruments")->delimiter(',');
  app.add_option("--cluster", config.cluster, "Cluster label column");
  app.add_option("--estimator", config.estimator, "Estimator")
      ->check(CLI::IsMember({"ols", "iv", "2sls", "kclass", "liml", "fuller", "igmm", "2sgmm"}));
  app.add_option("--kappa", config.kappa, "K for --estimator kclass");
  app.add_option("--fuller-alpha", config.fuller_alpha, "Fuller constant (default 1)");
  app.add_option("--vcov", config.vcov, "Covariance estimator")
      ->check(CLI::IsMember({"homo", "hc0", "hc1", "hc2", "hc3", "hc4", "hc5", "hac", "cluster-cv1"}));
  app.add_option("--hac-lags", config.hac_lags, "Bartlett lags for --vcov hac")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--mode", mode, "Run mode")
      ->check(CLI::IsMember({"full", "partial", "compare", "limitation-demo", "sweep"}));
  app.add_option("--tolerance", config.tolerance, "Relative tolerance for equality checks")
      ->check(CLI::PositiveNumber);
  app.add_flag("--no-intercept", no_intercept, "Do not add a constant to the exogenous block");
  app.add_flag("--drop-missing", config.drop_missing, "Drop rows with missing cells");
  app.add_option("--format", config.format, "Output format")->check(CLI::IsMember({"json", "table"}));
  auto* seed_opt = app.add_option("--seed", seed, "Seed for --mode sweep");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }
  config.mode = kModes.at(mode);
  config.intercept = !no_intercept;
  if (seed_opt->count() > 0) config.seed = seed;
  return std::nullopt;
}

void check_config(const RunConfig& c) {
  const EstimatorSpec e = EstimatorSpec::parse(c.estimator);
  using Tag = EstimatorSpec::Tag;
  if (c.kappa && e.tag != Tag::KClass) throw config_error("--kappa only applies to --estimator kclass");
  if (!c.kappa && e.tag == Tag::KClass) throw config_error("--estimator kclass needs --kappa");
  if (c.fuller_alpha && e.tag != Tag::Fuller) {
    throw config_error("--fuller-alpha only applies to --estimator fuller");
  }
  if (c.hac_lags && c.vcov != "hac") throw config_error("--hac-lags only applies to --vcov hac");
  if (c.vcov == "cluster-cv1" && !c.cluster) throw config_error("--vcov cluster-cv1 needs --cluster");
  if (c.seed && c.mode != Mode::Sweep) throw config_error("--seed only applies to --mode sweep");
  if (!(c.tolerance > 0.0)) throw config_error("--tolerance must be positive");

  if (c.mode == Mode::Sweep) {
    if (e.tag != Tag::Liml && e.tag != Tag::Fuller && e.tag != Tag::KClass) {
      throw config_error("--mode sweep supports liml, fuller and kclass");
    }
    if (c.vcov) throw config_error("--vcov is not used by --mode sweep");
    return;
  }
  if (c.data_path.empty()) throw config_error("--data is required");
  if (c.outcome.empty()) throw config_error("--outcome is required");
  if (c.endogenous.empty()) throw config_error("--endogenous needs at least one column");
  if (c.mode == Mode::LimitationDemo) {
    if (c.instruments.empty()) throw config_error("--mode limitation-demo needs --instruments");
    if (c.vcov) throw config_error("--vcov is not used by --mode limitation-demo");
    return;
  }
  if (e.tag != Tag::Ols && c.instruments.empty()) {
    throw config_error("--estimator " + c.estimator + " needs --instruments");
  }
  if (c.vcov && !sandwich_supported(e)) {
    throw config_error("--vcov is available for ols, iv and 2sls");
  }
}

Json build_report(const RunConfig& c) {
  check_config(c);
  const EstimatorSpec estimator = estimator_of(c);
  Json report;
  report["schema"] = kReportSchema;
  report["config"] = config_json(c);

  if (c.mode == Mode::Sweep) {
    const auto rows = convergence_sweep(c.seed.value_or(kDefaultSeed), kSweepSizes, estimator);
    report["sweep"] = sweep_to_json(rows);
    report["diagnostics"] = {{"seed", c.seed.value_or(kDefaultSeed)}};
    return report;
  }

  CsvOptions csv;
  csv.drop_missing = c.drop_missing;
  csv.cluster_column = c.cluster;
  std::vector<std::string> used = {c.outcome};
  for (const auto* block : {&c.endogenous, &c.exogenous, &c.instruments}) {
    for (const auto& name : *block) {
      if (std::find(used.begin(), used.end(), name) == used.end() && name != c.cluster) used.push_back(name);
    }
  }
  csv.columns = used;
  const Dataset data = ingest_csv(c.data_path, csv);

  if (c.mode == Mode::LimitationDemo) {
    std::vector<std::string> exo = c.exogenous;
    Mat W2(data.rows(), 0);
    std::vector<std::string> names;
    if (c.intercept) {
      W2 = Mat::Ones(data.rows(), 1);
      names.push_back(kInterceptName);
    }
    for (const auto& name : exo) {
      W2 = hcat(W2, data.column(name));
      names.push_back(name);
    }
    Mat W1(data.rows(), 0), Z1(data.rows(), 0);
    for (const auto& name : c.endogenous) W1 = hcat(W1, data.column(name));
    for (const auto& name : c.instruments) Z1 = hcat(Z1, data.column(name));
    LimitationDesign design = make_limitation_design(data.column(c.outcome), W1, W2, Z1);
    design.w2_names = names;
    report["limitation"] = limitation_to_json(limitation_demo(design));
    report["diagnostics"] = {{"N", data.rows()}, {"dropped_rows", data.dropped_rows}};
    return report;
  }

  ModelSpec spec;
  spec.outcome = c.outcome;
  spec.conditioning = c.exogenous;
  spec.of_interest = c.endogenous;
  if (estimator.tag != EstimatorSpec::Tag::Ols) spec.instruments = c.instruments;
  spec.cluster = c.cluster;
  spec.intercept = c.intercept;
  ValidatedDesign design = validate(spec, data);
  if (estimator.tag == EstimatorSpec::Tag::Ols) design = exogenous_view(design);
  const std::optional<CovSpec> cov = cov_spec_of(c);

  Json diagnostics;
  diagnostics["N"] = design.N();
  diagnostics["k1"] = design.k1();
  diagnostics["k2"] = design.k2();
  diagnostics["k3"] = design.instrumented ? design.k3() : 0;
  diagnostics["dropped_rows"] = data.dropped_rows;

  Json fits = Json::array();
  std::optional<double> kappa;
  if (c.mode == Mode::Full) {
    const FitResult fit = fit_full(design, estimator);
    std::optional<VcovResult> vcov;
    if (cov) vcov = sandwich_full(design, fit, *cov);
    fits.push_back(fit_to_json(fit, vcov));
    kappa = fit.estimator.kappa;
  } else if (c.mode == Mode::Partial) {
    const FitResult fit = fit_partial(design, estimator);
    std::optional<VcovResult> vcov;
    std::string method;
    if (cov && needs_leverages(cov->kind)) {
      vcov = partial_inference_hc2_family(design, *cov);
      method = "full-design-leverages";
    } else if (cov) {
      vcov = sandwich_partial(design, fit, *cov);
    }
    fits.push_back(fit_to_json(fit, vcov, method));
    kappa = fit.estimator.kappa;
  } else {
    std::vector<CovSpec> specs;
    if (cov) specs.push_back(*cov);
    const ComparisonReport cmp = compare(design, estimator, specs, c.tolerance);
    std::optional<VcovResult> full_vcov, partial_vcov;
    for (const auto& check : cmp.vcov) {
      if (check.variant == "partial-leverage") continue;
      full_vcov = check.full;
      partial_vcov = check.partial;
    }
    fits.push_back(fit_to_json(cmp.full, full_vcov));
    fits.push_back(fit_to_json(cmp.partial, partial_vcov));
    report["comparison"] = comparison_to_json(cmp);
    kappa = cmp.full.estimator.kappa;
  }
  report["fits"] = std::move(fits);
  if (kappa) diagnostics["kappa"] = *kappa;
  report["diagnostics"] = std::move(diagnostics);
  return report;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const Json report = build_report(config);
    if (config.format == "table") {
      out << render_table(report);
    } else {
      out << report.dump(2) << "\n";
    }
    if (report.contains("comparison") &&
        report["comparison"]["verdicts"]["overall"].get<std::string>() != "pass") {
      err << "yfwl: full and partial fits disagree beyond tolerance\n";
      return kExitNumerical;
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "yfwl: " << (is_validation_error(e.kind()) ? "validation" : "numerical") << " error: "
        << e.what() << "\n";
    return is_validation_error(e.kind()) ? kExitValidation : kExitNumerical;
  }
}

}  // namespace yfwl::cli
