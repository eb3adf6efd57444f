#pragma once

// Per-block eigenanalysis of the Laplacians and the executable checks of the
// kernel, primitivity and eigenvalue statements on the model manifolds.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "rumin/operators.hpp"

namespace rumin::spectral {

struct Tolerances {
  double kernel_rel = la::kKernelRel;  // eigenvalue ≤ kernel_rel·max(λ_max, 1) is a kernel vector
  double identity = 1e-11;             // matrix identities, scaled by max(1, ‖A‖)
  double residual = 1e-10;             // ‖Av‖ for unit kernel vectors
  double angle = 1e-8;                 // principal angles between kernels
  double eigen_rel = 1e-9;             // eigenvalue matching, relative with floor 1
};

enum class Operator { RuminNormalized, DeRham, Forman, Contact };

/// delta-rn, delta-dr, delta-t, delta-b. Throws std::invalid_argument otherwise.
Operator parse_operator(const std::string& name);
std::string operator_name(Operator op);
ops::BlockOperator laplacian(const ops::BlockComplex& c, Operator op, int k, double t = 1.0);
/// Domain of the operator in degree k (Rumin space for Δ_RN, full Ω^k otherwise).
ops::GradedSpace domain(const ops::BlockComplex& c, Operator op, int k);

// ---------------------------------------------------------------------------

struct SpectrumEntry {
  int degree = 0;
  int block = 0;
  double eigenvalue = 0.0;
  int multiplicity = 0;
  std::optional<double> nu;  // L_T = √−1·ν on the eigenspace
  std::optional<double> lambda10;
  std::optional<double> lambda01;
};

struct SpectrumTable {
  std::string op;
  std::vector<SpectrumEntry> entries;

  void append(const SpectrumTable& other);
  nlohmann::json to_json() const;
  /// Columns: degree, block, eigenvalue, multiplicity, nu, lambda10, lambda01.
  std::string to_csv() const;
};

struct KernelBasis {
  int degree = 0;
  int block = 0;
  Mat vectors;  // orthonormal columns in the coordinates of the operator's space
  double tolerance = 0.0;
};

struct JointEigenspace {
  std::vector<double> values;  // one eigenvalue per input operator
  Mat basis;                   // orthonormal columns
};

/// Simultaneous eigenspaces of commuting Hermitian matrices. Diagonalizes a
/// generic combination first and falls back to successive restriction when
/// two joint eigenvalues collide in the combination.
std::vector<JointEigenspace> joint_eigenspaces(const std::vector<Mat>& ops, double rel_tol = 1e-8);

/// Eigenvalue clusters of a Hermitian operator. Throws ConsistencyError if
/// op is not Hermitian to 1e-12·max(1, ‖op‖). When lie_T is given (skew,
/// commuting with op) each cluster is split by the eigenvalue ν of −√−1 L_T.
SpectrumTable block_spectrum(const ops::BlockOperator& op, int degree, int block,
                             const Mat* lie_T = nullptr);
KernelBasis kernel(const ops::BlockOperator& op, int degree, int block,
                   double rel_tol = la::kKernelRel);

struct QSpace {
  double lambda10 = 0.0;
  double lambda01 = 0.0;
  Mat basis;  // orthonormal, coordinates of E^k
};

/// Joint eigenspaces of (Δ_{∂_N}, Δ_{∂̄_N}) on E^k, k ≤ n. Throws
/// ConsistencyError if the two operators fail to commute.
std::vector<QSpace> q_decomposition(const ops::BlockComplex& c, int k, double tol = 1e-9);
/// Q^n(λ10, λ01) = ∂_N Q + ∂̄_N Q for a Q^{n−1} space.
Mat q_image(const ops::BlockComplex& c, const QSpace& q);

/// Eigenvalue rounded to 12 significant digits for multiset bookkeeping.
double tag(double x);

/// Largest pairing error between two eigenvalue multisets after sorting,
/// relative to max(1, |λ|); +inf if the sizes differ.
double multiset_mismatch(std::vector<double> a, std::vector<double> b);
/// Eigenvalues of a table expanded by multiplicity (optionally positive only).
std::vector<double> expand(const SpectrumTable& table, int degree, bool positive_only);
/// Fixed 17-significant-digit rendering used by every text export.
std::string format_number(double x);

/// dim E^k − rank d_N^k − rank d_N^{k−1}, the cohomology dimension of the
/// Rumin complex on one block, from matrix ranks alone.
int rumin_cohomology_dim(const ops::BlockComplex& c, int k);
/// Same for the de Rham complex.
int de_rham_cohomology_dim(const ops::BlockComplex& c, int k);

/// Positive lower bound for Δ_RN on every block of weight > max_weight:
/// eigenvalues on block m are at least m².
double truncation_cutoff(int max_weight);

// ---------------------------------------------------------------------------

struct Check {
  std::string name;
  std::string identity;
  bool pass = false;
  double residual = 0.0;
  double tolerance = 0.0;
  nlohmann::json params;
};

struct VerificationReport {
  std::string suite;
  std::vector<Check> checks;
  nlohmann::json parameters = nlohmann::json::object();

  /// Records a check; it passes iff residual ≤ tolerance (NaN fails).
  void record(std::string name, std::string identity, double residual, double tolerance,
              nlohmann::json params = nlohmann::json::object());
  void merge(const VerificationReport& other);
  bool pass() const;
  std::size_t failures() const;
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

/// Shared per-block assembly for one model and truncation.
class BlockSet {
 public:
  BlockSet(const model::ModelManifold& model, int max_weight,
           kernels::Exec exec = kernels::Exec::Parallel);

  const model::ModelManifold& model() const { return model_; }
  int max_weight() const { return max_weight_; }
  kernels::Exec exec() const { return exec_; }
  std::size_t size() const { return blocks_.size(); }
  const ops::BlockComplex& operator[](std::size_t i) const { return *blocks_[i]; }
  int weight(std::size_t i) const { return blocks_[i]->block_weight(); }
  int n() const { return model_.frame().n(); }

 private:
  model::ModelManifold model_;
  int max_weight_;
  kernels::Exec exec_;
  std::vector<std::shared_ptr<const ops::BlockComplex>> blocks_;
};

/// Spectrum of one operator over every block, with ν tags and, for Δ_RN in
/// degrees k ≤ n−1, (λ10, λ01) tags.
SpectrumTable spectrum(const BlockSet& blocks, Operator op, const std::vector<int>& degrees,
                       double t = 1.0);

/// d² = 0, d_t² = 0, d_N² = 0 on every block and degree.
VerificationReport verify_complex_property(const BlockSet& blocks, const std::vector<double>& t_samples,
                                           double tol = 1e-12);
/// Kähler identities, [∂_b, ∂̄_b†] = 0, the holomorphic Rumin identities, and
/// agreement of the two middle-degree formulas.
VerificationReport verify_sasakian_identities(const BlockSet& blocks, double tol = 1e-11);
VerificationReport verify_kernel_coincidence(const BlockSet& blocks, const Tolerances& tol = {});
VerificationReport verify_primitivity(const BlockSet& blocks, const Tolerances& tol = {});
VerificationReport verify_forman_family(const BlockSet& blocks, const std::vector<double>& t_samples,
                                        const Tolerances& tol = {});
VerificationReport verify_eigenvalue_identity(const BlockSet& blocks, const Tolerances& tol = {});
VerificationReport verify_middle_degree(const BlockSet& blocks, const Tolerances& tol = {});

/// Kernel dimensions of Δ_RN per degree summed over blocks.
std::vector<int> kernel_dims(const BlockSet& blocks, Operator op, double t = 1.0);

}  // namespace rumin::spectral
