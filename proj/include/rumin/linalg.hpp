#pragma once

// Dense complex linear algebra used across the block computations: Hermitian
// eigensolves, kernels and ranges, subspace intersections and principal angles.

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace rumin {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

/// Raised when an assembled operator violates an internal consistency check.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace la {

/// Relative kernel threshold: λ ≤ kKernelRel · max(λ_max, 1).
inline constexpr double kKernelRel = 1e-9;

double max_abs(const Mat& a);
bool is_hermitian(const Mat& a, double tol);
Mat kron_identity(const Mat& a, Eigen::Index dim);

struct HermitianEigen {
  RVec values;  // ascending
  Mat vectors;  // columns orthonormal
};
/// Throws ConsistencyError when ‖A − A†‖ exceeds herm_tol.
HermitianEigen hermitian_eigen(const Mat& a, double herm_tol = 1e-10);

double kernel_threshold(const RVec& eigenvalues);

/// Orthonormal basis of ker A for Hermitian positive semidefinite A.
Mat psd_kernel(const Mat& a);
/// Orthonormal basis of ker A for an arbitrary matrix, via singular values.
Mat null_space(const Mat& a, double rel_tol = 1e-10);
/// Orthonormal basis of Im A.
Mat range_basis(const Mat& a, double rel_tol = 1e-10);
Eigen::Index numerical_rank(const Mat& a, double rel_tol = 1e-10);
/// Orthonormal basis of the span of the columns.
Mat orthonormalize(const Mat& a, double rel_tol = 1e-10);
/// Orthonormal basis of span(Q1) ∩ span(Q2) for orthonormal Q1, Q2.
Mat intersect(const Mat& q1, const Mat& q2, double tol = 1e-8);
/// Orthonormal basis of span(Q)^⊥ inside the ambient space.
Mat orthogonal_complement(const Mat& q, Eigen::Index ambient);
/// Orthonormal basis of span(Q) ∩ span(Q_within)^⊥... i.e. the part of Q
/// orthogonal to R, for orthonormal Q and R.
Mat complement_within(const Mat& q, const Mat& r, double tol = 1e-8);

/// Largest principal angle between span(Q1) and span(Q2); both orthonormal
/// and of equal dimension. Computed from sines so that tiny angles keep
/// full relative accuracy.
double max_principal_angle(const Mat& q1, const Mat& q2);

/// Spectral square root of a Hermitian PSD matrix (negative rounding clamped).
Mat hermitian_sqrt(const Mat& a);

/// Restriction Q† A Q.
inline Mat restrict_to(const Mat& a, const Mat& q) { return q.adjoint() * a * q; }

/// Clusters sorted values: members within abs_tol + rel_tol·|v| of the
/// cluster's first element share a cluster. Returns [begin, end) pairs.
std::vector<std::pair<Eigen::Index, Eigen::Index>> cluster_sorted(const RVec& values,
                                                                  double rel_tol,
                                                                  double abs_tol);

}  // namespace la
}  // namespace rumin
