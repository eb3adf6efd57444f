#pragma once

// Differential operators of the contact complex on one function block,
// realized as dense matrices on coframe ⊗ function space.
//
// A vector in the full space Ω^•(block) has coordinates indexed by
// (monomial I, function basis index f) in coframe-major order I·dim + f,
// with monomials normalized to unit length. Every graded subspace is the
// tensor product of an orthonormal coframe-level basis with the function
// block, so adjoints are conjugate transposes throughout.

#include <string>
#include <utility>
#include <vector>

#include "rumin/exterior.hpp"
#include "rumin/kernels.hpp"
#include "rumin/linalg.hpp"
#include "rumin/model.hpp"

namespace rumin::ops {

class StructureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Flavor { Full, Rumin, Horizontal, Bidegree, Custom };

std::string flavor_name(Flavor f);

struct GradedSpace {
  Flavor flavor = Flavor::Full;
  int degree = 0;
  int block_weight = 0;
  int fn_dim = 0;
  Mat coframe_basis;  // 2^(2n+1) × r, orthonormal columns in the normalized monomial basis
  std::string label;

  Eigen::Index coframe_rank() const { return coframe_basis.cols(); }
  Eigen::Index dim() const { return coframe_basis.cols() * fn_dim; }
};

struct BlockOperator {
  GradedSpace source;
  GradedSpace target;
  Mat matrix;

  BlockOperator adjoint() const { return {target, source, matrix.adjoint()}; }
};

/// a_k = 1/√|n − k| for k ≠ n and a_n = 1.
double rescaling(int n, int k);

class BlockComplex {
 public:
  BlockComplex(const model::FrameStructure& frame, const model::FunctionBlock& block,
               kernels::Exec exec = kernels::Exec::Parallel);

  int n() const { return n_; }
  int fn_dim() const { return dim_; }
  int block_weight() const { return weight_; }
  Eigen::Index coframe_size() const { return static_cast<Eigen::Index>(monomials_.size()); }
  Eigen::Index full_size() const { return coframe_size() * dim_; }
  const std::vector<ext::CoframeIndex>& monomials() const { return monomials_; }
  kernels::Exec exec() const { return exec_; }

  // Graded subspaces.
  GradedSpace full_space(int k) const;
  GradedSpace horizontal_space(int k) const;
  GradedSpace rumin_space(int k) const;
  GradedSpace bidegree_space(int i, int j, bool vertical) const;
  /// Whole Ω^• of the block.
  GradedSpace total_space() const;

  // Full-space operators on Ω^•.
  const Mat& d() const { return d_; }
  const Mat& d_b() const { return db_; }
  const Mat& d_0() const { return d0_; }
  const Mat& d_T() const { return dT_; }
  const Mat& del_b() const { return del_; }
  const Mat& delbar_b() const { return delbar_; }
  const Mat& lie_T() const { return lie_T_; }
  Mat d_t(double t) const { return d0_ + t * db_ + (t * t) * dT_; }
  /// P ⊗ I for a pointwise coframe matrix P.
  Mat lift(const Mat& coframe_matrix) const;
  Mat lift(const ext::PointwiseOp& op) const;
  /// I ⊗ A for a function-block matrix A.
  Mat lift_function(const Mat& a) const;
  const Mat& coframe_matrix(const std::string& name) const;

  /// Matrix of a full-space operator between two graded subspaces.
  Mat restrict(const Mat& full, const GradedSpace& target, const GradedSpace& source) const;
  /// Matrix of a pointwise operator (coframe matrix P) between two graded subspaces.
  Mat restrict_pointwise(const Mat& coframe_matrix, const GradedSpace& target,
                         const GradedSpace& source) const;
  BlockOperator op(const Mat& full, const GradedSpace& target, const GradedSpace& source) const;
  /// Inclusion of a graded subspace into Ω^• (full_size × space.dim()).
  Mat embedding(const GradedSpace& s) const;
  /// Largest component of A·(space) outside the target subspace.
  double leakage(const Mat& full, const GradedSpace& target, const GradedSpace& source) const;

 private:
  Mat leibniz_derivation(bool degree_one) const;

  int n_;
  int dim_;
  int weight_;
  kernels::Exec exec_;
  std::vector<ext::CoframeIndex> monomials_;
  std::vector<Mat> complex_actions_;
  std::vector<ext::PointwiseForm> generator_d_;
  std::vector<std::pair<std::string, Mat>> coframe_;
  Mat d_, db_, d0_, dT_, del_, delbar_, lie_T_;
};

// Operators between degree-graded spaces (degree k → k+1 unless noted).
BlockOperator assemble_d(const BlockComplex& c, int k);
BlockOperator assemble_db(const BlockComplex& c, int k);
BlockOperator assemble_d0(const BlockComplex& c, int k);
BlockOperator assemble_dT(const BlockComplex& c, int k);
BlockOperator assemble_dt(const BlockComplex& c, int k, double t);
/// On horizontal k-forms.
BlockOperator assemble_del(const BlockComplex& c, int k);
BlockOperator assemble_delbar(const BlockComplex& c, int k);

/// Middle-degree operator from L_T and L⁻¹ on horizontal (n+1)-forms.
BlockOperator assemble_D(const BlockComplex& c);
/// Middle-degree operator from the ∂_b / ∂̄_b adjoint form.
BlockOperator assemble_D_adjoint_form(const BlockComplex& c);

BlockOperator assemble_dR(const BlockComplex& c, int k);
BlockOperator assemble_dN(const BlockComplex& c, int k);
/// ∂_N, ∂̄_N on E^k: into E^{k+1} for k ≤ n−1, into Ω_H^{n+1} for k = n.
BlockOperator assemble_del_N(const BlockComplex& c, int k);
BlockOperator assemble_delbar_N(const BlockComplex& c, int k);
/// L_T restricted to a graded space it preserves.
BlockOperator lie_T_on(const BlockComplex& c, const GradedSpace& s);

BlockOperator laplacian_RN(const BlockComplex& c, int k);
BlockOperator laplacian_deRham(const BlockComplex& c, int k);
/// Δ_dR from the horizontal/vertical block form with d_b, L, Λ and L_T.
BlockOperator laplacian_deRham_block_form(const BlockComplex& c, int k);
/// The same with the Sasakian off-diagonal entries ±i(∂_b − ∂̄_b).
BlockOperator laplacian_deRham_sasakian_form(const BlockComplex& c, int k);
BlockOperator laplacian_b(const BlockComplex& c, int k);
BlockOperator laplacian_t(const BlockComplex& c, int k, double t);
/// Δ_{∂_N}, Δ_{∂̄_N} on E^k for k ≤ n.
BlockOperator laplacian_del_N(const BlockComplex& c, int k);
BlockOperator laplacian_delbar_N(const BlockComplex& c, int k);
/// √Δ_RN by Hermitian spectral calculus.
BlockOperator sqrt_laplacian_RN(const BlockComplex& c, int k);
/// (□_RN, □̄_RN) = ½(√Δ_RN ± i L_T).
std::pair<BlockOperator, BlockOperator> box_operators(const BlockComplex& c, int k);

/// Row-major [[re, im], …] dump.
nlohmann::json to_json(const BlockOperator& op);

}  // namespace rumin::ops
