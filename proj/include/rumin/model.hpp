#pragma once

// Homogeneous Sasakian models: SU(2) ≅ S³ with its left-invariant structure
// and the lens quotients L(p;1), together with Peter–Weyl function blocks
// carrying exact matrix actions of the frame fields.

#include <string>
#include <vector>

#include "json.hpp"
#include "rumin/exterior.hpp"
#include "rumin/linalg.hpp"

namespace rumin::model {

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Real frame {T, X_1, Y_1, …, X_n, Y_n} (index 0 is T, X_i = 2i−1,
/// Y_i = 2i) with constant structure functions [V_a, V_b] = Σ_c c[a][b][c] V_c.
/// The complex frame used for forms is {T, W_1..W_n, W̄_1..W̄_n} with
/// W_i = (X_i − iY_i)/2, dual to the coframe {θ, ε^i, ε̄^i} of exterior_core.
class FrameStructure {
 public:
  FrameStructure(int n, std::vector<double> brackets, Eigen::MatrixXd j_matrix);

  int n() const { return n_; }
  int size() const { return 2 * n_ + 1; }
  double bracket(int a, int b, int c) const { return c_[idx(a, b, c)]; }
  /// J on the horizontal frame, columns are images of X_1, Y_1, ….
  const Eigen::MatrixXd& j_matrix() const { return j_; }

  /// dθ(V_a, V_b) = −θ([V_a, V_b]).
  double dtheta(int a, int b) const { return -bracket(a, b, 0); }
  /// Structure constants of the complex frame.
  cplx complex_bracket(int a, int b, int c) const { return cc_[idx(a, b, c)]; }
  /// dω^c for each complex coframe generator (0 = θ, then ε^i, then ε̄^i).
  const ext::PointwiseForm& coframe_differential(int c) const { return dcoframe_.at(c); }
  /// dθ as a pointwise 2-form in the complex coframe.
  ext::PointwiseForm dtheta_form() const { return coframe_differential(0); }

  struct Check {
    std::string name;
    double residual;
    bool pass;
  };
  /// Antisymmetry, Jacobi, contact, Reeb, metric, Sasakian and
  /// complex-structure checks.
  std::vector<Check> validate(double tol = 1e-13) const;
  bool is_valid(double tol = 1e-13) const;

  nlohmann::json to_json() const;

 private:
  std::size_t idx(int a, int b, int c) const {
    return (static_cast<std::size_t>(a) * size() + b) * size() + c;
  }
  int n_;
  std::vector<double> c_;
  Eigen::MatrixXd j_;
  std::vector<cplx> cc_;
  std::vector<ext::PointwiseForm> dcoframe_;
};

/// The standard structure on SU(2): [X,Y] = −T, [T,X] = −2Y, [T,Y] = 2X,
/// JX = Y, JY = −X.
FrameStructure su2_frame();

struct FlatBundle {
  int character = 0;  // l in ℤ/p
};

/// Matrices of the spin-m/2 representation (weights μ = m/2 .. −m/2).
struct SpinMatrices {
  Mat jz, jplus, jminus, jx, jy;
};
SpinMatrices spin_matrices(int m);

/// One Peter–Weyl block V_m* ⊗ V_m, possibly cut down to the equivariant
/// rows of the left factor. Basis index is u·(m+1) + v over selected u.
struct FunctionBlock {
  int weight = 0;
  std::vector<int> left_indices;  // selected u in 0..m
  int character = 0;
  int dim = 0;
  /// Field actions in real frame order (T, X_1, Y_1).
  std::vector<Mat> real_actions;
  /// Field actions in complex frame order (T, W, W̄).
  std::vector<Mat> complex_actions;

  std::string label() const { return "m=" + std::to_string(weight); }
};

class ModelManifold {
 public:
  static ModelManifold su2();
  /// Throws ParameterError on p < 1 or a character outside 0..p−1.
  static ModelManifold lens(int p, FlatBundle bundle);

  const FrameStructure& frame() const { return frame_; }
  int order() const { return p_; }
  int character() const { return character_; }
  bool is_lens() const { return lens_; }
  double volume() const;
  /// Nonempty blocks for weights 0..max_weight (throws on max_weight < 0).
  std::vector<FunctionBlock> blocks(int max_weight) const;
  /// Block of weight m, possibly with dim 0.
  FunctionBlock block(int m) const;
  /// Selected left-factor rows of V_m* ⊗ V_m for this quotient and character.
  std::vector<int> equivariant_rows(int m) const;
  /// Action of the generator of ℤ/p on the full (m+1)² block.
  Mat generator_action(int m) const;

  nlohmann::json descriptor(int max_weight) const;

 private:
  ModelManifold(FrameStructure f, int p, int character, bool lens)
      : frame_(std::move(f)), p_(p), character_(character), lens_(lens) {}
  FrameStructure frame_;
  int p_;
  int character_;
  bool lens_;
};

/// Volume of S³ for the frame-orthonormal metric, from the Gram matrix of
/// the frame in the bi-invariant metric of the unit sphere.
double su2_volume(const FrameStructure& frame);

}  // namespace rumin::model
