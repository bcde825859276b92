#pragma once

// Dense least-squares kernel. Every (X'X)^-1 X' v in the estimators goes
// through a column-pivoted Householder QR; nothing inverts a normal matrix.

#include <Eigen/Dense>

#include <cstddef>
#include <string>

namespace yfwl {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Relative threshold on |R_jj| / |R_00| below which a column is declared
/// linearly dependent.
inline constexpr double kRankTolerance = 1e-10;

/// Default relative tolerance for the exact-arithmetic equalities.
inline constexpr double kTheoremTolerance = 1e-8;

/// Projectors above this many rows are only ever applied, never formed.
inline constexpr std::size_t kDenseCap = 2000;

/// Throws RankDeficient naming `label` unless X has full column rank.
void require_full_column_rank(const Mat& X, const std::string& label = "X");

/// Column-space operator for a full-column-rank basis. Applies the hat
/// matrix P_X and residual maker M_X = I - P_X without forming N x N
/// matrices. A basis with zero columns is allowed: P = 0, M = I.
class Projector {
 public:
  explicit Projector(Mat basis, std::string label = "X");

  Eigen::Index rows() const { return basis_.rows(); }
  Eigen::Index rank() const { return basis_.cols(); }
  const Mat& basis() const { return basis_; }

  Mat project(const Mat& V) const;
  Mat residualize(const Mat& V) const;

  /// Least-squares coefficients of V on the basis (rank x V.cols()).
  Mat coefficients(const Mat& V) const;

  /// (X'X)^-1 from the triangular factor.
  Mat gram_inverse() const;

  /// Diagonal of P_X: h_i = ||row i of thin Q||^2.
  Vec leverages() const;

  /// Dense P_X; throws InvalidConfig when rows() exceeds `cap`.
  Mat dense_hat(std::size_t cap = kDenseCap) const;

 private:
  Mat basis_;
  Eigen::ColPivHouseholderQR<Mat> qr_;
  std::string label_;
};

/// argmin_b ||y - X b||^2, column by column.
Mat solve_ls(const Mat& X, const Mat& y);

/// M_X V.
Mat residualize(const Mat& X, const Mat& V);

/// P_X V.
Mat project(const Mat& X, const Mat& V);

/// [A : B] with matching row counts; either side may have zero columns.
Mat hcat(const Mat& A, const Mat& B);

/// Blocks of (W'W)^-1 for W = [W1 : W2], assembled from k1 x k1 and k2 x k2
/// solves only.
struct PartitionedInverse {
  Mat W11;  // k1 x k1
  Mat W12;  // k1 x k2
  Mat W22;  // k2 x k2

  Mat assemble() const;
};

PartitionedInverse partitioned_inverse(const Mat& W1, const Mat& W2);

/// Smallest lambda with det(A - lambda B) = 0 for symmetric A and symmetric
/// positive definite B.
double smallest_gen_eigenvalue(const Mat& A, const Mat& B);

/// Solves the square system A x = b; SingularSystem when A is numerically
/// singular.
Mat solve_square(const Mat& A, const Mat& b, const std::string& label);

/// max |a - b| / max(max |a|, max |b|); zero when both are zero.
double relative_delta(const Mat& a, const Mat& b);

}  // namespace yfwl
