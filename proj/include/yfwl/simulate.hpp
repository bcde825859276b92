#pragma once

#include "yfwl/model.hpp"

#include <cstdint>
#include <random>

namespace yfwl {

struct RandomDesignOptions {
  Eigen::Index N = 100;
  Eigen::Index k1 = 2;
  Eigen::Index k2 = 1;
  Eigen::Index k3 = 2;  // 0 builds an OLS design
  bool intercept = true;
  bool heteroskedastic = true;
  double endogeneity = 0.5;  // corr(first-stage error, structural error)
  Eigen::Index clusters = 0;  // > 1 attaches cluster ids
};

/// Random well-conditioned design. The exogenous block [W1 : Z2] (or
/// [W1 : W2] for OLS) has singular values within [0.1, 10] * sqrt(N);
/// W2 loads on Z2 through an identity-dominated first stage.
ValidatedDesign random_design(std::mt19937_64& rng, const RandomDesignOptions& options);

/// Matrix with the given singular-value range and Haar-like singular vectors.
Mat random_conditioned(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols,
                       double smin, double smax);

Mat standard_normal(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols);

/// Sweep DGP: intercept and one exogenous control, one endogenous regressor,
/// two instruments, Gaussian errors with corr(v, e) = rho. Samples of
/// different sizes from the same seed are nested prefixes.
ValidatedDesign sweep_design(std::uint64_t seed, Eigen::Index N, double rho = 0.5);

}  // namespace yfwl
