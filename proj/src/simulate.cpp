#include "yfwl/simulate.hpp"

#include <cmath>

namespace yfwl {

Mat standard_normal(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Mat out(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = normal(rng);
  }
  return out;
}

Mat random_conditioned(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols,
                       double smin, double smax) {
  if (cols == 0) return Mat(rows, 0);
  Eigen::HouseholderQR<Mat> left(standard_normal(rng, rows, cols));
  Eigen::HouseholderQR<Mat> right(standard_normal(rng, cols, cols));
  const Mat U = left.householderQ() * Mat::Identity(rows, cols);
  const Mat V = right.householderQ() * Mat::Identity(cols, cols);
  std::uniform_real_distribution<double> spread(std::log(smin), std::log(smax));
  Vec s(cols);
  for (Eigen::Index j = 0; j < cols; ++j) s(j) = std::exp(spread(rng));
  s(0) = smax;
  if (cols > 1) s(cols - 1) = smin;
  return U * s.asDiagonal() * V.transpose();
}

ValidatedDesign random_design(std::mt19937_64& rng, const RandomDesignOptions& o) {
  const Eigen::Index N = o.N;
  const bool instrumented = o.k3 > 0;
  const Eigen::Index exo_cols = o.k1 + (instrumented ? o.k3 : o.k2);
  const double root_n = std::sqrt(static_cast<double>(N));
  Mat exo = random_conditioned(rng, N, exo_cols, 0.1 * root_n, 10.0 * root_n);
  // Unit-scale columns: the conditioning bound applies before rescaling.
  exo /= root_n;
  exo *= std::sqrt(static_cast<double>(exo_cols));
  if (o.intercept && o.k1 > 0) exo.col(0).setOnes();

  Mat W1 = exo.leftCols(o.k1);
  Mat W2, Z2;
  const Vec v = standard_normal(rng, N, 1);
  if (instrumented) {
    Z2 = exo.rightCols(o.k3);
    Mat Pi = 0.5 * standard_normal(rng, o.k3, o.k2);
    Pi.topRows(o.k2) += Mat::Identity(o.k2, o.k2);
    const Mat Gamma = 0.3 * standard_normal(rng, o.k1, o.k2);
    W2 = Z2 * Pi + W1 * Gamma + 0.7 * standard_normal(rng, N, o.k2);
    W2.col(0) += v;
  } else {
    W2 = exo.rightCols(o.k2);
    Z2 = Mat(N, 0);
  }

  const double rho = instrumented ? o.endogeneity : 0.0;
  Vec e = rho * v + std::sqrt(1.0 - rho * rho) * standard_normal(rng, N, 1);
  if (o.heteroskedastic) {
    const Vec driver = instrumented ? Vec(Z2.col(0)) : Vec(W2.col(0));
    e = e.cwiseProduct((driver.array().abs() + 0.5).matrix());
  }
  const Vec beta1 = standard_normal(rng, o.k1, 1);
  const Vec beta2 = standard_normal(rng, o.k2, 1);
  Vec Y = W1 * beta1 + W2 * beta2 + e;

  std::vector<int> clusters;
  if (o.clusters > 1) {
    std::uniform_int_distribution<int> pick(0, static_cast<int>(o.clusters) - 1);
    for (Eigen::Index i = 0; i < N; ++i) {
      clusters.push_back(i < o.clusters ? static_cast<int>(i) : pick(rng));
    }
  }
  ValidatedDesign d = make_design(std::move(Y), std::move(W1), std::move(W2), std::move(Z2),
                                  std::move(clusters));
  d.intercept = o.intercept && o.k1 > 0;
  return d;
}

ValidatedDesign sweep_design(std::uint64_t seed, Eigen::Index N, double rho) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec Y(N), w(N), x(N), z1(N), z2(N);
  for (Eigen::Index i = 0; i < N; ++i) {
    // Fixed draw order per observation keeps smaller samples as prefixes.
    w(i) = normal(rng);
    z1(i) = normal(rng);
    z2(i) = normal(rng);
    const double v = normal(rng);
    const double eps = normal(rng);
    const double e = rho * v + std::sqrt(1.0 - rho * rho) * eps;
    x(i) = 0.4 * z1(i) + 0.3 * z2(i) + 0.5 * w(i) + v;
    Y(i) = 1.0 + 0.1 * x(i) + 0.5 * w(i) + e;
  }
  Mat W1(N, 2);
  W1 << Vec::Ones(N), w;
  Mat Z2(N, 2);
  Z2 << z1, z2;
  ValidatedDesign d = make_design(std::move(Y), std::move(W1), x, std::move(Z2));
  d.intercept = true;
  d.w1_names = {kInterceptName, "w"};
  d.w2_names = {"x"};
  d.z2_names = {"z1", "z2"};
  return d;
}

}  // namespace yfwl
