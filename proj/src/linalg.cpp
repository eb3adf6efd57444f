#include "rumin/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace rumin::la {

double max_abs(const Mat& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

bool is_hermitian(const Mat& a, double tol) {
  return a.rows() == a.cols() && max_abs(a - a.adjoint()) <= tol;
}

Mat kron_identity(const Mat& a, Eigen::Index dim) {
  Mat out = Mat::Zero(a.rows() * dim, a.cols() * dim);
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      if (a(r, c) != std::complex<double>{})
        out.block(r * dim, c * dim, dim, dim).diagonal().setConstant(a(r, c));
  return out;
}

HermitianEigen hermitian_eigen(const Mat& a, double herm_tol) {
  if (a.rows() != a.cols()) throw ConsistencyError("eigensolve of a non-square matrix");
  if (a.rows() == 0) return {RVec(0), Mat(0, 0)};
  const double skew = max_abs(a - a.adjoint());
  if (skew > herm_tol * std::max(1.0, max_abs(a))) {
    throw ConsistencyError("operator is not Hermitian: ||A - A*|| = " + std::to_string(skew));
  }
  const Mat sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(sym);
  if (es.info() != Eigen::Success) throw ConsistencyError("Hermitian eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

double kernel_threshold(const RVec& eigenvalues) {
  const double top = eigenvalues.size() ? eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  return kKernelRel * std::max(top, 1.0);
}

Mat psd_kernel(const Mat& a) {
  if (a.rows() == 0) return Mat(0, 0);
  const auto eig = hermitian_eigen(a);
  const double thr = kernel_threshold(eig.values);
  Eigen::Index count = 0;
  while (count < eig.values.size() && eig.values(count) <= thr) ++count;
  return eig.vectors.leftCols(count);
}

namespace {

struct Svd {
  RVec s;
  Mat u;
  Mat v;
};

Svd full_svd(const Mat& a) {
  Eigen::BDCSVD<Mat> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {svd.singularValues(), svd.matrixU(), svd.matrixV()};
}

Eigen::Index count_above(const RVec& s, double rel_tol) {
  if (s.size() == 0) return 0;
  const double thr = rel_tol * std::max(1.0, s(0));
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > thr) ++r;
  return r;
}

}  // namespace

Mat null_space(const Mat& a, double rel_tol) {
  if (a.cols() == 0) return Mat(0, 0);
  if (a.rows() == 0) return Mat::Identity(a.cols(), a.cols());
  const auto svd = full_svd(a);
  const Eigen::Index r = count_above(svd.s, rel_tol);
  return svd.v.rightCols(a.cols() - r);
}

Mat range_basis(const Mat& a, double rel_tol) {
  if (a.rows() == 0 || a.cols() == 0) return Mat(a.rows(), 0);
  const auto svd = full_svd(a);
  return svd.u.leftCols(count_above(svd.s, rel_tol));
}

Eigen::Index numerical_rank(const Mat& a, double rel_tol) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  Eigen::BDCSVD<Mat> svd(a);
  return count_above(svd.singularValues(), rel_tol);
}

Mat orthonormalize(const Mat& a, double rel_tol) { return range_basis(a, rel_tol); }

Mat intersect(const Mat& q1, const Mat& q2, double tol) {
  const Eigen::Index n = q1.rows();
  if (q1.cols() == 0 || q2.cols() == 0) return Mat(n, 0);
  // v ∈ span(Q1) ∩ span(Q2)  ⇔  v = Q1 x with (I − Q2 Q2†) Q1 x = 0.
  const Mat resid = q1 - q2 * (q2.adjoint() * q1);
  Eigen::BDCSVD<Mat> svd(resid, Eigen::ComputeFullV);
  const RVec s = svd.singularValues();
  std::vector<Eigen::Index> keep;
  const Mat& v = svd.matrixV();
  for (Eigen::Index c = 0; c < q1.cols(); ++c) {
    const double sigma = c < s.size() ? s(c) : 0.0;
    if (sigma <= tol) keep.push_back(c);
  }
  Mat out(n, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = q1 * v.col(keep[i]);
  return orthonormalize(out);
}

Mat orthogonal_complement(const Mat& q, Eigen::Index ambient) {
  if (q.cols() == 0) return Mat::Identity(ambient, ambient);
  return null_space(q.adjoint());
}

Mat complement_within(const Mat& q, const Mat& r, double tol) {
  if (r.cols() == 0 || q.cols() == 0) return q;
  const Mat proj = q - r * (r.adjoint() * q);
  Eigen::BDCSVD<Mat> svd(proj, Eigen::ComputeFullU);
  const RVec s = svd.singularValues();
  Eigen::Index k = 0;
  while (k < s.size() && s(k) > 1.0 - tol) ++k;
  // Columns of Q with unit residual norm form the complement; anything
  // in between signals that span(R) is not a subspace of span(Q)'s frame.
  return svd.matrixU().leftCols(k);
}

double max_principal_angle(const Mat& q1, const Mat& q2) {
  if (q1.cols() != q2.cols()) {
    throw std::invalid_argument("principal angles need subspaces of equal dimension");
  }
  if (q1.cols() == 0) return 0.0;
  const Mat resid = q2 - q1 * (q1.adjoint() * q2);
  Eigen::BDCSVD<Mat> svd(resid);
  const double sine = std::min(1.0, svd.singularValues()(0));
  return std::asin(sine);
}

Mat hermitian_sqrt(const Mat& a) {
  if (a.rows() == 0) return a;
  const auto eig = hermitian_eigen(a);
  RVec root = eig.values.cwiseMax(0.0).cwiseSqrt();
  return eig.vectors * root.asDiagonal() * eig.vectors.adjoint();
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> cluster_sorted(const RVec& values,
                                                                  double rel_tol,
                                                                  double abs_tol) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
  Eigen::Index i = 0;
  while (i < values.size()) {
    Eigen::Index j = i + 1;
    while (j < values.size() &&
           std::abs(values(j) - values(j - 1)) <= abs_tol + rel_tol * std::abs(values(j)))
      ++j;
    out.emplace_back(i, j);
    i = j;
  }
  return out;
}

}  // namespace la
