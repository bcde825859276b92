#pragma once

#include "yfwl/covariance.hpp"
#include "yfwl/engine.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace yfwl {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "yfwl-report/1";

Json fit_to_json(const FitResult& fit, const std::optional<VcovResult>& vcov = std::nullopt,
                 const std::string& vcov_method = "");
Json comparison_to_json(const ComparisonReport& report);
Json limitation_to_json(const LimitationDemo& demo);
Json sweep_to_json(const std::vector<SweepRow>& rows);

/// Fixed-width rendering of a report. Works from the JSON so a re-parsed
/// report prints identically.
std::string render_table(const Json& report);

}  // namespace yfwl
