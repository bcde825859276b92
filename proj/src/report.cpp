#include "yfwl/report.hpp"

#include <cstdio>
#include <sstream>

namespace yfwl {

namespace {

Json vector_json(const Vec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

std::string format(const char* fmt, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, value);
  return buf;
}

std::string number(const Json& value) {
  if (value.is_null()) return "-";
  if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
  if (value.is_number_integer()) return std::to_string(value.get<long long>());
  return format("%.10g", value.get<double>());
}

std::string pad(const std::string& s, std::size_t width) {
  if (s.size() >= width) return s + " ";
  return s + std::string(width - s.size(), ' ');
}

std::string lpad(const std::string& s, std::size_t width) {
  if (s.size() >= width) return " " + s;
  return std::string(width - s.size(), ' ') + s;
}

}  // namespace

Json fit_to_json(const FitResult& fit, const std::optional<VcovResult>& vcov,
                 const std::string& vcov_method) {
  Json out;
  out["form"] = to_string(fit.form);
  out["estimator"] = to_string(fit.estimator.kind);
  if (fit.estimator.K) out["K"] = *fit.estimator.K;
  if (fit.estimator.kappa) out["kappa"] = *fit.estimator.kappa;
  if (fit.estimator.alpha) out["fuller_alpha"] = *fit.estimator.alpha;
  if (!fit.estimator.weighting.empty()) out["weighting"] = fit.estimator.weighting;
  if (vcov) {
    out["vcov"] = to_string(vcov->kind);
    if (!vcov_method.empty()) out["vcov_method"] = vcov_method;
    out["vcov_df_factor"] = vcov->df_factor_applied;
  }
  Json coefs = Json::array();
  const Vec se = vcov ? vcov->standard_errors() : Vec();
  for (Eigen::Index j = 0; j < fit.coefficients.size(); ++j) {
    Json c;
    c["name"] = fit.labels[static_cast<std::size_t>(j)];
    c["estimate"] = fit.coefficients(j);
    if (vcov) c["se"] = se(j);
    coefs.push_back(std::move(c));
  }
  out["coefficients"] = std::move(coefs);
  out["residual_summary"] = {{"n", fit.residuals.size()},
                             {"ssr", fit.residuals.squaredNorm()},
                             {"min", fit.residuals.minCoeff()},
                             {"max", fit.residuals.maxCoeff()}};
  return out;
}

Json comparison_to_json(const ComparisonReport& r) {
  Json out;
  out["estimator"] = r.estimator.name();
  Json labels = Json::array();
  for (const auto& l : r.labels) labels.push_back(l);
  out["labels"] = std::move(labels);
  out["coef_full_b2"] = vector_json(r.coef_full_b2);
  out["coef_partial"] = vector_json(r.coef_partial);
  out["deltas"] = {{"max_abs_coef", r.max_abs_coef_delta},
                   {"rel_coef", r.rel_coef_delta},
                   {"max_abs_resid", r.max_abs_resid_delta},
                   {"rel_resid", r.rel_resid_delta}};
  Json factors = Json::array();
  Json vcov = Json::array();
  for (const auto& c : r.vcov) {
    factors.push_back({{"kind", to_string(c.kind)}, {"variant", c.variant}, {"factor", c.df_factor}});
    vcov.push_back({{"kind", to_string(c.kind)},
                    {"variant", c.variant},
                    {"df_factor", c.df_factor},
                    {"max_rel_delta", c.max_rel_delta},
                    {"verdict", c.pass ? "pass" : "fail"},
                    {"expected_failure", c.expected_failure},
                    {"se_full_b2", vector_json(c.full.block22().diagonal().cwiseMax(0.0).cwiseSqrt())},
                    {"se_partial", vector_json(c.partial.standard_errors())}});
  }
  out["df_factors"] = std::move(factors);
  out["verdicts"] = {{"coefficients", r.coef_pass ? "pass" : "fail"},
                     {"residuals", r.resid_pass ? "pass" : "fail"},
                     {"vcov", std::move(vcov)},
                     {"overall", r.passed() ? "pass" : "fail"}};
  out["expected_failure"] = r.expected_failure;
  out["resid_expected_failure"] = r.resid_expected_failure;
  out["partition_case"] = {{"tag", to_string(r.partition_case.tag)},
                           {"explanation", r.partition_case.explanation}};
  out["tolerance"] = r.tolerance;
  return out;
}

Json limitation_to_json(const LimitationDemo& demo) {
  Json labels = Json::array();
  for (const auto& l : demo.labels) labels.push_back(l);
  return {{"labels", std::move(labels)},
          {"b2_full", vector_json(demo.b2_full)},
          {"b2_partial_ols", vector_json(demo.b2_partial_ols)},
          {"b2_partial_iv", demo.b2_partial_iv ? vector_json(*demo.b2_partial_iv) : Json(nullptr)},
          {"delta_full_vs_ols", demo.delta_full_vs_ols},
          {"delta_full_vs_iv", demo.delta_full_vs_iv ? Json(*demo.delta_full_vs_iv) : Json(nullptr)},
          {"partial_iv_note", demo.partial_iv_note}};
}

Json sweep_to_json(const std::vector<SweepRow>& rows) {
  Json out = Json::array();
  for (const auto& row : rows) {
    out.push_back({{"N", row.N},
                   {"coef_delta", row.coef_delta},
                   {"kappa", row.kappa},
                   {"K_full", row.K_full},
                   {"K_partial", row.K_partial},
                   {"b2_full", row.b2_full}});
  }
  return out;
}

std::string render_table(const Json& report) {
  std::ostringstream os;
  if (report.contains("fits")) {
    for (const auto& fit : report["fits"]) {
      os << fit["form"].get<std::string>() << " model (" << fit["estimator"].get<std::string>();
      if (fit.contains("K")) os << ", K = " << number(fit["K"]);
      if (fit.contains("vcov")) os << ", vcov = " << fit["vcov"].get<std::string>();
      os << ")\n";
      os << pad("term", 24) << lpad("estimate", 18);
      if (fit.contains("vcov")) os << lpad("std.error", 18);
      os << "\n";
      for (const auto& c : fit["coefficients"]) {
        os << pad(c["name"].get<std::string>(), 24) << lpad(number(c["estimate"]), 18);
        if (c.contains("se")) os << lpad(number(c["se"]), 18);
        os << "\n";
      }
      os << "\n";
    }
  }
  if (report.contains("comparison")) {
    const auto& c = report["comparison"];
    os << "full vs partial (" << c["estimator"].get<std::string>() << ")\n";
    for (std::size_t j = 0; j < c["labels"].size(); ++j) {
      os << pad(c["labels"][j].get<std::string>(), 24) << lpad(number(c["coef_full_b2"][j]), 18)
         << lpad(number(c["coef_partial"][j]), 18) << "\n";
    }
    const auto& d = c["deltas"];
    os << pad("max |coef delta|", 24) << lpad(number(d["max_abs_coef"]), 18) << "  "
       << c["verdicts"]["coefficients"].get<std::string>() << "\n";
    os << pad("max |resid delta|", 24) << lpad(number(d["max_abs_resid"]), 18) << "  "
       << c["verdicts"]["residuals"].get<std::string>()
       << (c["resid_expected_failure"].get<bool>() ? "  expected failure" : "") << "\n";
    for (const auto& v : c["verdicts"]["vcov"]) {
      os << pad(v["kind"].get<std::string>() + " " + v["variant"].get<std::string>(), 24)
         << lpad(number(v["max_rel_delta"]), 18) << "  " << v["verdict"].get<std::string>()
         << "  (df factor " << number(v["df_factor"]) << ")"
         << (v["expected_failure"].get<bool>() ? "  expected failure" : "") << "\n";
    }
    os << pad("partition case", 24) << c["partition_case"]["tag"].get<std::string>() << "\n";
    os << pad("expected failure", 24) << number(c["expected_failure"]) << "\n";
    os << pad("overall", 24) << c["verdicts"]["overall"].get<std::string>() << "\n";
  }
  if (report.contains("limitation")) {
    const auto& l = report["limitation"];
    os << pad("term", 24) << lpad("full (IV)", 18) << lpad("partial OLS", 18) << lpad("partial IV", 18)
       << "\n";
    for (std::size_t j = 0; j < l["labels"].size(); ++j) {
      os << pad(l["labels"][j].get<std::string>(), 24) << lpad(number(l["b2_full"][j]), 18)
         << lpad(number(l["b2_partial_ols"][j]), 18)
         << lpad(l["b2_partial_iv"].is_null() ? "-" : number(l["b2_partial_iv"][j]), 18) << "\n";
    }
    os << pad("delta full vs OLS", 24) << lpad(number(l["delta_full_vs_ols"]), 18) << "\n";
    os << pad("delta full vs IV", 24) << lpad(number(l["delta_full_vs_iv"]), 18) << "\n";
    if (!l["partial_iv_note"].get<std::string>().empty()) {
      os << l["partial_iv_note"].get<std::string>() << "\n";
    }
  }
  if (report.contains("sweep")) {
    os << lpad("N", 8) << lpad("|coef delta|", 18) << lpad("kappa", 18) << lpad("K full", 18)
       << lpad("K partial", 18) << "\n";
    for (const auto& row : report["sweep"]) {
      os << lpad(number(row["N"]), 8) << lpad(number(row["coef_delta"]), 18)
         << lpad(number(row["kappa"]), 18) << lpad(number(row["K_full"]), 18)
         << lpad(number(row["K_partial"]), 18) << "\n";
    }
  }
  if (report.contains("diagnostics")) {
    const auto& d = report["diagnostics"];
    for (const auto& [key, value] : d.items()) {
      os << pad(key, 24) << number(value) << "\n";
    }
  }
  return os.str();
}

}  // namespace yfwl
