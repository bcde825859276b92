#include "yfwl/linalg.hpp"

#include "yfwl/error.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace yfwl {

namespace {

// First pivot position whose |R_jj| drops below the relative threshold, or
// -1 when the factor is well conditioned.
Eigen::Index first_deficient_pivot(const Eigen::ColPivHouseholderQR<Mat>& qr,
                                   Eigen::Index cols) {
  const auto& R = qr.matrixQR();
  const Eigen::Index diag = std::min(R.rows(), R.cols());
  if (diag < cols) return diag;
  const double lead = std::abs(R(0, 0));
  if (!(lead > 0.0) || !std::isfinite(lead)) return 0;
  for (Eigen::Index j = 1; j < cols; ++j) {
    if (std::abs(R(j, j)) <= kRankTolerance * lead) return j;
  }
  return -1;
}

}  // namespace

Projector::Projector(Mat basis, std::string label)
    : basis_(std::move(basis)), label_(std::move(label)) {
  if (basis_.cols() == 0) return;
  if (!basis_.allFinite()) {
    throw Error(ErrorKind::RankDeficient, label_ + " contains non-finite entries");
  }
  qr_.compute(basis_);
  const Eigen::Index bad = first_deficient_pivot(qr_, basis_.cols());
  if (bad >= 0) {
    const long col = bad < qr_.colsPermutation().size()
                         ? qr_.colsPermutation().indices()(bad)
                         : static_cast<long>(bad);
    throw Error(ErrorKind::RankDeficient,
                label_ + " is not of full column rank (column " +
                    std::to_string(col) + ")")
        .with_column(col);
  }
}

Mat Projector::project(const Mat& V) const {
  const Eigen::Index p = rank();
  if (p == 0) return Mat::Zero(V.rows(), V.cols());
  Mat qtv = qr_.householderQ().adjoint() * V;
  qtv.bottomRows(qtv.rows() - p).setZero();
  return qr_.householderQ() * qtv;
}

Mat Projector::residualize(const Mat& V) const {
  if (rank() == 0) return V;
  return V - project(V);
}

Mat Projector::coefficients(const Mat& V) const {
  if (rank() == 0) return Mat::Zero(0, V.cols());
  return qr_.solve(V);
}

Mat Projector::gram_inverse() const {
  const Eigen::Index p = rank();
  if (p == 0) return Mat(0, 0);
  const auto R = qr_.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
  const Mat Rinv = R.solve(Mat::Identity(p, p));
  const Mat inner = Rinv * Rinv.transpose();
  const auto& perm = qr_.colsPermutation();
  return perm * inner * perm.transpose();
}

Vec Projector::leverages() const {
  const Eigen::Index p = rank();
  if (p == 0) return Vec::Zero(rows());
  const Mat thinQ = qr_.householderQ() * Mat::Identity(rows(), p);
  return thinQ.rowwise().squaredNorm();
}

Mat Projector::dense_hat(std::size_t cap) const {
  if (static_cast<std::size_t>(rows()) > cap) {
    throw Error(ErrorKind::InvalidConfig,
                "refusing to materialize a " + std::to_string(rows()) + " x " +
                    std::to_string(rows()) + " projector for " + label_);
  }
  const Eigen::Index p = rank();
  if (p == 0) return Mat::Zero(rows(), rows());
  const Mat thinQ = qr_.householderQ() * Mat::Identity(rows(), p);
  return thinQ * thinQ.transpose();
}

void require_full_column_rank(const Mat& X, const std::string& label) {
  Projector check(X, label);
}

Mat solve_ls(const Mat& X, const Mat& y) {
  return Projector(X).coefficients(y);
}

Mat residualize(const Mat& X, const Mat& V) {
  return Projector(X).residualize(V);
}

Mat project(const Mat& X, const Mat& V) {
  return Projector(X).project(V);
}

Mat hcat(const Mat& A, const Mat& B) {
  Mat out(A.rows(), A.cols() + B.cols());
  out << A, B;
  return out;
}

Mat PartitionedInverse::assemble() const {
  const Eigen::Index k1 = W11.rows();
  const Eigen::Index k2 = W22.rows();
  Mat out(k1 + k2, k1 + k2);
  out.topLeftCorner(k1, k1) = W11;
  out.topRightCorner(k1, k2) = W12;
  out.bottomLeftCorner(k2, k1) = W12.transpose();
  out.bottomRightCorner(k2, k2) = W22;
  return out;
}

PartitionedInverse partitioned_inverse(const Mat& W1, const Mat& W2) {
  PartitionedInverse out;
  if (W1.cols() == 0) {
    out.W22 = Projector(W2, "W2").gram_inverse();
    out.W11 = Mat(0, 0);
    out.W12 = Mat(0, W2.cols());
    return out;
  }
  const Projector p1(W1, "W1");
  // F = (W1'W1)^-1 W1'W2
  const Mat F = p1.coefficients(W2);
  const Projector p2(p1.residualize(W2), "M_{W1} W2");
  out.W22 = p2.gram_inverse();
  out.W12 = -F * out.W22;
  out.W11 = p1.gram_inverse() + F * out.W22 * F.transpose();
  return out;
}

double smallest_gen_eigenvalue(const Mat& A, const Mat& B) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows()) {
    throw Error(ErrorKind::InvalidConfig, "generalized eigenproblem needs equal square matrices");
  }
  Eigen::LLT<Mat> llt(B);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::NotPositiveDefinite, "B has no Cholesky factor");
  }
  const auto L = llt.matrixL();
  const Mat half = L.solve(A);
  Mat C = L.solve(Mat(half.transpose()));
  C = 0.5 * (C + C.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> eig(C, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

Mat solve_square(const Mat& A, const Mat& b, const std::string& label) {
  Eigen::ColPivHouseholderQR<Mat> qr(A);
  if (first_deficient_pivot(qr, A.cols()) >= 0) {
    throw Error(ErrorKind::SingularSystem, label + " is numerically singular");
  }
  return qr.solve(b);
}

double relative_delta(const Mat& a, const Mat& b) {
  if (a.size() == 0) return 0.0;
  const double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  const double diff = (a - b).cwiseAbs().maxCoeff();
  if (scale == 0.0) return diff;
  return diff / scale;
}

}  // namespace yfwl
