#pragma once

#include "yfwl/linalg.hpp"

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace yfwl {

/// Column-labelled numeric data. The cluster column, when present, is kept
/// as raw string labels and is not part of `values`.
struct Dataset {
  std::vector<std::string> column_names;
  Mat values;  // N x C
  std::optional<std::string> cluster_column;
  std::vector<std::string> cluster_labels;  // length N when cluster_column set
  std::size_t dropped_rows = 0;

  Eigen::Index rows() const { return values.rows(); }
  bool has_column(const std::string& name) const;
  /// Throws UnknownColumn.
  Vec column(const std::string& name) const;
};

/// Role assignment for the regression
///   Y = W1 b1 + W2 b2 + e,  instruments Z = [W1 : Z2].
/// With no instruments the model is OLS and W2 instruments itself.
struct ModelSpec {
  std::string outcome;
  std::vector<std::string> conditioning;  // W1, exogenous
  std::vector<std::string> of_interest;   // W2, endogenous when instrumented
  std::vector<std::string> instruments;   // Z2, excluded instruments
  std::optional<std::string> cluster;
  bool intercept = true;  // prepends a ones column to W1
};

inline constexpr const char* kInterceptName = "(Intercept)";

struct ValidatedDesign {
  Vec Y;
  Mat W1;
  Mat W2;
  Mat Z2;  // equals W2 when the model has no excluded instruments
  std::vector<std::string> w1_names;
  std::vector<std::string> w2_names;
  std::vector<std::string> z2_names;
  bool intercept = false;
  bool instrumented = false;
  // Set on a partialled design built from one that carried an intercept;
  // the constant is still counted as an instrument by Fuller's correction.
  bool absorbed_intercept = false;
  std::vector<int> cluster_ids;  // dense 0..G-1, empty when no cluster

  Eigen::Index N() const { return Y.size(); }
  Eigen::Index k1() const { return W1.cols(); }
  Eigen::Index k2() const { return W2.cols(); }
  Eigen::Index k3() const { return Z2.cols(); }
  Eigen::Index k() const { return k1() + k2(); }

  Mat W() const { return hcat(W1, W2); }
  Mat Z() const { return hcat(W1, Z2); }
  std::vector<std::string> w_names() const;
};

/// Checks roles, the order condition and the rank conditions, then
/// materializes the blocks.
ValidatedDesign validate(const ModelSpec& spec, const Dataset& data);

/// Direct construction from matrices with the same checks as validate().
/// Pass Z2 with zero columns for an OLS design.
ValidatedDesign make_design(Vec Y, Mat W1, Mat W2, Mat Z2,
                            std::vector<int> cluster_ids = {});

/// The residualized system (M_{W1}Y, M_{W1}W2, M_{W1}Z2) with an empty
/// conditioning block.
ValidatedDesign partialled(const ValidatedDesign& design);

enum class PartitionTag {
  ApplicableEqual,
  ApplicableSuperset,
  ApplicableSubsetExtract,
  NotApplicable,
};

const char* to_string(PartitionTag tag);

struct PartitionCase {
  PartitionTag tag;
  std::string explanation;
};

/// Decides whether partialling out the variables *not* of interest is
/// licensed for IV estimation, given which regressors are endogenous.
PartitionCase classify_partition(const std::set<std::string>& endogenous,
                                 const std::set<std::string>& of_interest,
                                 const std::set<std::string>& all_regressors);

}  // namespace yfwl
