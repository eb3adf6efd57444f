#pragma once

// Pointwise exterior and Lefschetz algebra over the adapted complex coframe
// {θ, ε^1..ε^n, ε̄^1..ε̄^n} of a contact metric structure of dimension 2n+1.
//
// Conventions: ε^i = e^i + i f^i where {θ, e^i, f^i} is an orthonormal real
// coframe, dθ = Σ e^i∧f^i = (i/2) Σ ε^i∧ε̄^i, and θ∧e^1∧f^1∧…∧e^n∧f^n is the
// positive volume form. With these, |ε^i|² = 2 and distinct monomials are
// orthogonal.

#include <compare>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace rumin {

using cplx = std::complex<double>;
inline constexpr cplx kI{0.0, 1.0};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace ext {

/// Largest supported n; generator masks are 32 bit.
inline constexpr int kMaxN = 15;

/// A wedge monomial of coframe generators. Generator 0 is θ, generators
/// 1..n are ε^1..ε^n and n+1..2n are ε̄^1..ε̄^n; a monomial is always stored
/// in increasing generator order.
class CoframeIndex {
 public:
  CoframeIndex() = default;

  /// holo/anti are 1-based, strictly increasing, duplicate free.
  static CoframeIndex from_sets(int n, bool theta, const std::vector<int>& holo,
                                const std::vector<int>& anti);
  static CoframeIndex from_mask(int n, std::uint32_t mask);

  int n() const { return n_; }
  std::uint32_t mask() const { return mask_; }
  bool theta() const { return (mask_ & 1u) != 0; }
  std::vector<int> holo() const;
  std::vector<int> anti() const;
  int degree() const;
  int holo_degree() const;
  int anti_degree() const;
  /// Swap ε^i <-> ε̄^i (θ untouched); the result is again stored sorted.
  CoframeIndex conjugate_set() const;

  auto operator<=>(const CoframeIndex&) const = default;

 private:
  CoframeIndex(int n, std::uint32_t mask) : n_(n), mask_(mask) {}
  int n_ = 0;
  std::uint32_t mask_ = 0;
};

struct Bidegree {
  int i = 0;
  int j = 0;
  bool vertical = false;
  auto operator<=>(const Bidegree&) const = default;
};

class PointwiseForm {
 public:
  explicit PointwiseForm(int n);

  static PointwiseForm zero(int n) { return PointwiseForm(n); }
  static PointwiseForm one(int n);
  static PointwiseForm monomial(const CoframeIndex& idx, cplx c = 1.0);
  static PointwiseForm theta(int n);
  static PointwiseForm eps(int n, int i);
  static PointwiseForm epsbar(int n, int i);

  int n() const { return n_; }
  const std::map<CoframeIndex, cplx>& terms() const { return terms_; }
  cplx coeff(const CoframeIndex& idx) const;
  /// Adds c to the coefficient of idx; exact zeros are pruned.
  void add(const CoframeIndex& idx, cplx c);
  bool is_zero() const { return terms_.empty(); }
  /// -1 when the form is zero or of mixed degree.
  int homogeneous_degree() const;
  double max_abs() const;

  PointwiseForm& operator+=(const PointwiseForm& o);
  PointwiseForm& operator-=(const PointwiseForm& o);
  PointwiseForm& operator*=(cplx s);
  friend PointwiseForm operator+(PointwiseForm a, const PointwiseForm& b) { return a += b; }
  friend PointwiseForm operator-(PointwiseForm a, const PointwiseForm& b) { return a -= b; }
  friend PointwiseForm operator*(cplx s, PointwiseForm a) { return a *= s; }
  friend PointwiseForm operator*(PointwiseForm a, cplx s) { return a *= s; }
  bool operator==(const PointwiseForm& o) const = default;

 private:
  int n_;
  std::map<CoframeIndex, cplx> terms_;
};

/// Sign and result of ω^a ∧ ω^b for monomials; sign 0 when they share a factor.
struct WedgeResult {
  int sign = 0;
  CoframeIndex index;
};
WedgeResult wedge_monomials(const CoframeIndex& a, const CoframeIndex& b);

PointwiseForm wedge(const PointwiseForm& a, const PointwiseForm& b);
PointwiseForm interior_T(const PointwiseForm& a);

/// dθ = (i/2) Σ ε^i∧ε̄^i.
PointwiseForm dtheta(int n);
/// θ∧e^1∧f^1∧…∧e^n∧f^n expressed in the complex coframe.
PointwiseForm volume_form(int n);

PointwiseForm lefschetz_L(const PointwiseForm& a);
/// Pointwise adjoint of L.
PointwiseForm lefschetz_Lambda(const PointwiseForm& a);
/// Orthogonal projection of the horizontal part onto ker Λ. Components of
/// horizontal degree > n are sent to zero (there are no primitive forms there).
PointwiseForm primitive_projection(const PointwiseForm& a);
PointwiseForm vertical_part(const PointwiseForm& a);
PointwiseForm horizontal_part(const PointwiseForm& a);
PointwiseForm hodge_star(const PointwiseForm& a);
PointwiseForm j_action(const PointwiseForm& a);
std::map<Bidegree, PointwiseForm> bidegree_split(const PointwiseForm& a);

/// |ω^I|² for the pointwise metric: 2^(#ε + #ε̄).
double monomial_norm_sq(const CoframeIndex& idx);
/// Hermitian pairing, linear in the first slot.
cplx inner_product(const PointwiseForm& a, const PointwiseForm& b);
/// Complex-bilinear extension of the real metric.
cplx bilinear_pairing(const PointwiseForm& a, const PointwiseForm& b);

/// All 2^(2n+1) monomials ordered by degree, then by mask.
std::vector<CoframeIndex> monomial_basis(int n);
std::vector<CoframeIndex> monomials_of_degree(int n, int k, bool horizontal_only = false);

using PointwiseOp = std::function<PointwiseForm(const PointwiseForm&)>;

/// Matrix of a linear pointwise operator in the orthonormal basis
/// ω^I / |ω^I| (columns indexed by src, rows by dst).
Eigen::MatrixXcd operator_matrix(int n, const PointwiseOp& op,
                                 const std::vector<CoframeIndex>& src,
                                 const std::vector<CoframeIndex>& dst);
Eigen::MatrixXcd operator_matrix(int n, const PointwiseOp& op);

}  // namespace ext
}  // namespace rumin
