#include "yfwl/model.hpp"

#include "yfwl/error.hpp"

#include <algorithm>
#include <iterator>
#include <unordered_map>

namespace yfwl {

bool Dataset::has_column(const std::string& name) const {
  return std::find(column_names.begin(), column_names.end(), name) != column_names.end();
}

Vec Dataset::column(const std::string& name) const {
  const auto it = std::find(column_names.begin(), column_names.end(), name);
  if (it == column_names.end()) {
    throw Error(ErrorKind::UnknownColumn, "no column named '" + name + "'");
  }
  return values.col(std::distance(column_names.begin(), it));
}

std::vector<std::string> ValidatedDesign::w_names() const {
  std::vector<std::string> out = w1_names;
  out.insert(out.end(), w2_names.begin(), w2_names.end());
  return out;
}

namespace {

void check_roles(const ModelSpec& spec) {
  std::set<std::string> seen{spec.outcome};
  auto claim = [&](const std::vector<std::string>& names, const char* role) {
    for (const auto& name : names) {
      if (!seen.insert(name).second) {
        throw Error(ErrorKind::OverlappingRoles,
                    "column '" + name + "' appears more than once (in " + role + ")");
      }
    }
  };
  claim(spec.conditioning, "conditioning");
  claim(spec.of_interest, "of_interest");
  claim(spec.instruments, "instruments");
  if (spec.cluster && seen.count(*spec.cluster)) {
    throw Error(ErrorKind::OverlappingRoles,
                "cluster column '" + *spec.cluster + "' is also a model variable");
  }
  if (spec.of_interest.empty()) {
    throw Error(ErrorKind::EmptyInterestSet, "no variables of interest");
  }
}

Mat gather(const Dataset& data, const std::vector<std::string>& names) {
  Mat out(data.rows(), static_cast<Eigen::Index>(names.size()));
  for (std::size_t j = 0; j < names.size(); ++j) {
    out.col(static_cast<Eigen::Index>(j)) = data.column(names[j]);
  }
  return out;
}

std::vector<std::string> default_names(const char* prefix, Eigen::Index count) {
  std::vector<std::string> out;
  for (Eigen::Index j = 0; j < count; ++j) out.push_back(prefix + std::to_string(j + 1));
  return out;
}

template <typename Label>
std::vector<int> dense_ids(const std::vector<Label>& labels) {
  std::unordered_map<Label, int> ids;
  std::vector<int> out;
  out.reserve(labels.size());
  for (const auto& label : labels) {
    const auto [it, inserted] = ids.emplace(label, static_cast<int>(ids.size()));
    out.push_back(it->second);
  }
  return out;
}

// Rank and identification checks shared by both constructors.
void check_design(const ValidatedDesign& d) {
  if (d.N() < 2) throw Error(ErrorKind::InvalidConfig, "need at least two observations");
  if (d.W1.rows() != d.N() || d.W2.rows() != d.N() || d.Z2.rows() != d.N()) {
    throw Error(ErrorKind::InvalidConfig, "design blocks have mismatched row counts");
  }
  if (d.k2() < 1) throw Error(ErrorKind::EmptyInterestSet, "no variables of interest");
  if (d.instrumented && d.k3() < d.k2()) {
    throw Error(ErrorKind::OrderConditionViolated,
                std::to_string(d.k3()) + " excluded instruments for " +
                    std::to_string(d.k2()) + " endogenous regressors");
  }
  if (!d.Y.allFinite()) throw Error(ErrorKind::MissingValue, "outcome has non-finite values");
  require_full_column_rank(d.W1, "W1");
  require_full_column_rank(d.W2, "W2");
  require_full_column_rank(d.W(), "W = [W1 : W2]");
  if (d.instrumented) {
    const Mat Z = d.Z();
    require_full_column_rank(Z, "Z = [W1 : Z2]");
    require_full_column_rank(Z.transpose() * d.W2, "Z'W2");
    const Projector p1(d.W1, "W1");
    const Mat z2t = p1.residualize(d.Z2);
    const Mat w2t = p1.residualize(d.W2);
    require_full_column_rank(z2t.transpose() * w2t, "Z~2'W~2");
  }
}

}  // namespace

ValidatedDesign validate(const ModelSpec& spec, const Dataset& data) {
  check_roles(spec);
  if (!spec.instruments.empty() && spec.instruments.size() < spec.of_interest.size()) {
    throw Error(ErrorKind::OrderConditionViolated,
                std::to_string(spec.instruments.size()) + " excluded instruments for " +
                    std::to_string(spec.of_interest.size()) + " endogenous regressors");
  }

  ValidatedDesign d;
  d.Y = data.column(spec.outcome);
  const Mat conditioning = gather(data, spec.conditioning);
  d.w1_names = spec.conditioning;
  if (spec.intercept) {
    d.W1 = hcat(Mat::Ones(data.rows(), 1), conditioning);
    d.w1_names.insert(d.w1_names.begin(), kInterceptName);
  } else {
    d.W1 = conditioning;
  }
  d.intercept = spec.intercept;
  d.W2 = gather(data, spec.of_interest);
  d.w2_names = spec.of_interest;
  d.instrumented = !spec.instruments.empty();
  if (d.instrumented) {
    d.Z2 = gather(data, spec.instruments);
    d.z2_names = spec.instruments;
  } else {
    d.Z2 = d.W2;
    d.z2_names = d.w2_names;
  }

  if (spec.cluster) {
    if (data.cluster_column && *data.cluster_column == *spec.cluster) {
      d.cluster_ids = dense_ids(data.cluster_labels);
    } else {
      const Vec raw = data.column(*spec.cluster);
      d.cluster_ids = dense_ids(std::vector<double>(raw.data(), raw.data() + raw.size()));
    }
  }

  check_design(d);
  return d;
}

ValidatedDesign make_design(Vec Y, Mat W1, Mat W2, Mat Z2, std::vector<int> cluster_ids) {
  ValidatedDesign d;
  d.Y = std::move(Y);
  d.W1 = std::move(W1);
  d.W2 = std::move(W2);
  d.instrumented = Z2.cols() > 0;
  d.Z2 = d.instrumented ? std::move(Z2) : d.W2;
  d.w1_names = default_names("w1_", d.k1());
  d.w2_names = default_names("w2_", d.k2());
  d.z2_names = d.instrumented ? default_names("z2_", d.k3()) : d.w2_names;
  if (!cluster_ids.empty()) {
    if (static_cast<Eigen::Index>(cluster_ids.size()) != d.N()) {
      throw Error(ErrorKind::InvalidConfig, "cluster ids must have one entry per observation");
    }
    d.cluster_ids = dense_ids(cluster_ids);
  }
  check_design(d);
  return d;
}

ValidatedDesign partialled(const ValidatedDesign& design) {
  const Projector p1(design.W1, "W1");
  ValidatedDesign out;
  out.Y = p1.residualize(design.Y);
  out.W1 = Mat(design.N(), 0);
  out.W2 = p1.residualize(design.W2);
  out.Z2 = design.instrumented ? p1.residualize(design.Z2) : out.W2;
  out.w2_names = design.w2_names;
  out.z2_names = design.z2_names;
  out.intercept = false;
  out.instrumented = design.instrumented;
  out.absorbed_intercept = design.intercept || design.absorbed_intercept;
  out.cluster_ids = design.cluster_ids;
  require_full_column_rank(out.W2, "M_{W1} W2");
  if (out.instrumented) require_full_column_rank(out.Z2, "M_{W1} Z2");
  return out;
}

const char* to_string(PartitionTag tag) {
  switch (tag) {
    case PartitionTag::ApplicableEqual: return "Applicable_Equal";
    case PartitionTag::ApplicableSuperset: return "Applicable_Superset";
    case PartitionTag::ApplicableSubsetExtract: return "Applicable_Subset_Extract";
    case PartitionTag::NotApplicable: return "NotApplicable";
  }
  return "?";
}

PartitionCase classify_partition(const std::set<std::string>& endogenous,
                                 const std::set<std::string>& of_interest,
                                 const std::set<std::string>& all_regressors) {
  if (of_interest.empty()) {
    throw Error(ErrorKind::EmptyInterestSet, "no variables of interest");
  }
  auto subset = [](const std::set<std::string>& a, const std::set<std::string>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
  };
  if (!subset(endogenous, all_regressors) || !subset(of_interest, all_regressors)) {
    throw Error(ErrorKind::UnknownColumn, "partition sets must be drawn from the regressors");
  }

  std::set<std::string> exogenous;
  std::set_difference(all_regressors.begin(), all_regressors.end(), endogenous.begin(),
                      endogenous.end(), std::inserter(exogenous, exogenous.end()));

  if (endogenous.empty()) {
    return {PartitionTag::ApplicableSuperset,
            "no endogenous regressors; every partition is a least-squares partition"};
  }
  if (!exogenous.empty() && subset(exogenous, of_interest)) {
    return {PartitionTag::NotApplicable,
            "every exogenous regressor is of interest, so the conditioning set would "
            "contain endogenous regressors"};
  }
  if (of_interest == endogenous) {
    return {PartitionTag::ApplicableEqual,
            "variables of interest are exactly the endogenous regressors"};
  }
  if (subset(endogenous, of_interest)) {
    return {PartitionTag::ApplicableSuperset,
            "interest set contains all endogenous regressors; exogenous regressors of "
            "interest instrument themselves"};
  }
  if (subset(of_interest, endogenous)) {
    return {PartitionTag::ApplicableSubsetExtract,
            "estimate with the endogenous set as the interest block, then extract"};
  }
  return {PartitionTag::ApplicableSubsetExtract,
          "estimate with interest block = interest u endogenous, then extract"};
}

}  // namespace yfwl
