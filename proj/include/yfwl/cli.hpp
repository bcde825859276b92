#pragma once

#include "yfwl/report.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace yfwl::cli {

enum class Mode { Full, Partial, Compare, LimitationDemo, Sweep };

const char* to_string(Mode mode);

struct RunConfig {
  std::string data_path;
  std::string outcome;
  std::vector<std::string> endogenous;
  std::vector<std::string> exogenous;
  std::vector<std::string> instruments;
  std::optional<std::string> cluster;
  std::string estimator = "2sls";
  std::optional<double> kappa;
  std::optional<double> fuller_alpha;
  std::optional<std::string> vcov;
  std::optional<int> hac_lags;
  Mode mode = Mode::Full;
  double tolerance = kTheoremTolerance;
  bool intercept = true;
  bool drop_missing = false;
  std::string format = "json";
  std::optional<std::uint64_t> seed;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

/// Parses the command line. Returns the exit code to stop with (help,
/// usage errors) or nullopt to continue with `config`.
std::optional<int> parse_args(int argc, const char* const* argv, RunConfig& config,
                              std::ostream& out, std::ostream& err);

/// Throws InvalidConfig for inconsistent flag combinations.
void check_config(const RunConfig& config);

/// Builds the JSON report. Throws yfwl::Error.
Json build_report(const RunConfig& config);

/// End-to-end driver: report on `out`, diagnostics on `err`, exit code.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Sample sizes used by --mode sweep.
inline const std::vector<Eigen::Index> kSweepSizes = {50, 200, 1000, 5000};

}  // namespace yfwl::cli
