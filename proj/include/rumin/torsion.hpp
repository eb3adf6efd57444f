#pragma once

// Spectral zeta partial sums, the contact torsion function κ, and the
// decomposition of the Rumin spectrum by the Reeb field on E^k, k ≤ n.

#include <string>
#include <vector>

#include "json.hpp"

#include "rumin/spectral.hpp"

namespace rumin::torsion {

struct ZetaSeries {
  std::string label;
  std::vector<std::pair<double, int>> values;  // (λ > 0, multiplicity), ascending
  double cutoff = 0.0;                         // multiset is exact below this bound

  /// Groups eigenvalues by their 12-digit tags. Throws std::invalid_argument on λ ≤ 0.
  static ZetaSeries from_eigenvalues(std::string label, std::vector<double> eigenvalues, double cutoff);
  std::size_t count() const;
};

/// Σ mult·λ^(−s). Throws std::invalid_argument for s ≤ 0.
double zeta_partial(const ZetaSeries& z, double s);
/// (−1)^(k+1) (n+1−k).
int kappa_coefficient(int n, int k);
/// Σ_k (−1)^(k+1)(n+1−k) ζ_k(s) over k = 0..n. Throws for s < 2.
double kappa_partial(const std::vector<ZetaSeries>& per_degree, int n, double s);

/// Where a joint eigenspace of (Δ_RN, L_T) sits relative to the two boxes.
enum class Piece { Harmonic, KerBoxImBoxbar, ImBoxKerBoxbar, ImBoxImBoxbar };
std::string piece_name(Piece p);

struct JointRow {
  int degree = 0;
  int block = 0;
  double eigenvalue = 0.0;  // Δ_RN
  double nu = 0.0;          // L_T = √−1 ν
  double reeb_square = 0.0; // −L_T² on the space
  int multiplicity = 0;
  Piece piece = Piece::Harmonic;
};

struct DegreeSummary {
  int degree = 0;
  int harmonic = 0;
  int cohomology = 0;  // rank oracle
  int positive = 0;
  int ker_box = 0;
  int ker_boxbar = 0;
  int im_im = 0;
  double literal_mismatch = 0.0;  // worst per-block pairing error; inf when counts differ
};

struct TorsionReport {
  nlohmann::json parameters = nlohmann::json::object();
  double cutoff = 0.0;
  std::vector<double> s_grid;
  std::vector<JointRow> rows;
  std::vector<DegreeSummary> degrees;
  std::vector<ZetaSeries> lhs;  // spec⁺ Δ_RN^k
  std::vector<ZetaSeries> rhs;  // −L_T² on the two one-sided pieces
  std::vector<double> kappa_lhs;
  std::vector<double> kappa_rhs;
  bool literal_pass = false;   // per-degree multiset equality
  bool estimate_only = false;  // set by torsion_estimate
  spectral::VerificationReport checks;

  nlohmann::json to_json() const;
  /// Columns: degree, block, lhs, piece, nu, rhs, multiplicity.
  std::string pairs_csv() const;
};

/// Joint eigenspaces of (Δ_RN, L_T) on E^k, k ≤ n, classified by the boxes.
std::vector<JointRow> joint_rows(const ops::BlockComplex& c, int k);

/// Per block and degree k ≤ n: spec⁺(Δ_RN^k) against −L_T² on
/// Ker □ ∩ Im □̄ and Im □ ∩ Ker □̄, the harmonic count against the rank
/// oracle, and the κ-weighted signed multiset identity.
TorsionReport reeb_decomposition(const spectral::BlockSet& blocks, const std::vector<double>& s_grid = {2, 3, 4},
                                 double tol = 1e-9);
/// κ partial sums on s_grid ⊂ [2, 6]; κ′(0) would need analytic continuation
/// and is not computed.
TorsionReport torsion_estimate(const spectral::BlockSet& blocks, const std::vector<double>& s_grid);

/// Throws std::invalid_argument unless every s ≥ 2 (and ≤ 6 when bounded).
void validate_s_grid(const std::vector<double>& s_grid, bool bounded);

}  // namespace rumin::torsion
