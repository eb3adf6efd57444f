#include "rumin/operators.hpp"

#include <cmath>
#include <map>

namespace rumin::ops {

using ext::CoframeIndex;
using ext::PointwiseForm;
using kernels::Exec;

std::string flavor_name(Flavor f) {
  switch (f) {
    case Flavor::Full: return "full";
    case Flavor::Rumin: return "rumin";
    case Flavor::Horizontal: return "horizontal";
    case Flavor::Bidegree: return "bidegree";
    case Flavor::Custom: return "custom";
  }
  return "unknown";
}

double rescaling(int n, int k) {
  if (k == n) return 1.0;
  return 1.0 / std::sqrt(static_cast<double>(std::abs(n - k)));
}

namespace {

double norm_of(const CoframeIndex& i) { return std::sqrt(ext::monomial_norm_sq(i)); }

PointwiseForm generator(int n, int g) {
  return PointwiseForm::monomial(CoframeIndex::from_mask(n, 1u << g));
}

}  // namespace

BlockComplex::BlockComplex(const model::FrameStructure& frame, const model::FunctionBlock& block,
                           Exec exec)
    : n_(frame.n()),
      dim_(block.dim),
      weight_(block.weight),
      exec_(exec),
      monomials_(ext::monomial_basis(frame.n())),
      complex_actions_(block.complex_actions) {
  if (static_cast<int>(complex_actions_.size()) != frame.size())
    throw DimensionError("block actions do not match the frame size");
  for (int g = 0; g < frame.size(); ++g) generator_d_.push_back(frame.coframe_differential(g));

  const int n = n_;
  coframe_.emplace_back("theta", ext::operator_matrix(n, [n](const PointwiseForm& a) {
                          return ext::wedge(PointwiseForm::theta(n), a);
                        }));
  coframe_.emplace_back("iota", ext::operator_matrix(n, ext::interior_T));
  const PointwiseForm dth = frame.dtheta_form();
  coframe_.emplace_back("L", ext::operator_matrix(n, [dth](const PointwiseForm& a) {
                          return ext::wedge(dth, a);
                        }));
  const Mat lambda = coframe_matrix("L").adjoint();
  coframe_.emplace_back("Lambda", lambda);
  coframe_.emplace_back("star", ext::operator_matrix(n, ext::hodge_star));
  coframe_.emplace_back("J", ext::operator_matrix(n, ext::j_action));
  coframe_.emplace_back("pi_h", ext::operator_matrix(n, ext::horizontal_part));
  coframe_.emplace_back("pi_v", ext::operator_matrix(n, ext::vertical_part));
  coframe_.emplace_back("lie_T_coframe", leibniz_derivation(false));
  coframe_.emplace_back("d_coframe", leibniz_derivation(true));

  // L⁻¹ : Ω_H^{n+1} → Ω_H^{n−1}, zero elsewhere.
  {
    const auto low = ext::monomials_of_degree(n, n - 1, true);
    const auto high = ext::monomials_of_degree(n, n + 1, true);
    const Mat lm = ext::operator_matrix(n, [dth](const PointwiseForm& a) { return ext::wedge(dth, a); },
                                        low, high);
    Eigen::FullPivLU<Mat> lu(lm);
    if (!lu.isInvertible()) throw ConsistencyError("L is not invertible from degree n-1 to n+1");
    const Mat inv = lu.inverse();
    std::map<CoframeIndex, Eigen::Index> pos;
    for (std::size_t i = 0; i < monomials_.size(); ++i) pos[monomials_[i]] = static_cast<Eigen::Index>(i);
    Mat full = Mat::Zero(coframe_size(), coframe_size());
    for (std::size_t r = 0; r < low.size(); ++r)
      for (std::size_t c = 0; c < high.size(); ++c)
        full(pos[low[r]], pos[high[c]]) = inv(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    coframe_.emplace_back("L_inv", full);
  }

  // d(f ω^I) = Σ_a (Z_a f) ω^a∧ω^I + f dω^I, in normalized coordinates.
  const Eigen::Index N = coframe_size();
  std::map<CoframeIndex, Eigen::Index> pos;
  for (Eigen::Index i = 0; i < N; ++i) pos[monomials_[static_cast<std::size_t>(i)]] = i;
  d_ = Mat::Zero(full_size(), full_size());
  const Mat& dcof = coframe_matrix("d_coframe");
  for (Eigen::Index c = 0; c < N; ++c) {
    const auto& src = monomials_[static_cast<std::size_t>(c)];
    for (int a = 0; a < frame.size(); ++a) {
      const auto w = ext::wedge_monomials(CoframeIndex::from_mask(n, 1u << a), src);
      if (w.sign == 0) continue;
      const double scale = w.sign * norm_of(w.index) / norm_of(src);
      d_.block(pos[w.index] * dim_, c * dim_, dim_, dim_) += scale * complex_actions_[a];
    }
    for (Eigen::Index r = 0; r < N; ++r)
      if (dcof(r, c) != cplx{}) d_.block(r * dim_, c * dim_, dim_, dim_).diagonal().array() += dcof(r, c);
  }

  // Split by vertical degree and bidegree.
  db_ = Mat::Zero(full_size(), full_size());
  d0_ = db_;
  dT_ = db_;
  del_ = db_;
  delbar_ = db_;
  for (Eigen::Index r = 0; r < N; ++r)
    for (Eigen::Index c = 0; c < N; ++c) {
      const auto blk = d_.block(r * dim_, c * dim_, dim_, dim_);
      if (la::max_abs(blk) == 0.0) continue;
      const auto& tgt = monomials_[static_cast<std::size_t>(r)];
      const auto& src = monomials_[static_cast<std::size_t>(c)];
      if (src.theta() && !tgt.theta()) {
        d0_.block(r * dim_, c * dim_, dim_, dim_) = blk;
        continue;
      }
      if (!src.theta() && tgt.theta()) {
        dT_.block(r * dim_, c * dim_, dim_, dim_) = blk;
        continue;
      }
      db_.block(r * dim_, c * dim_, dim_, dim_) = blk;
      const int dh = tgt.holo_degree() - src.holo_degree();
      const int da = tgt.anti_degree() - src.anti_degree();
      if (dh == 1 && da == 0) {
        del_.block(r * dim_, c * dim_, dim_, dim_) = blk;
      } else if (dh == 0 && da == 1) {
        delbar_.block(r * dim_, c * dim_, dim_, dim_) = blk;
      } else {
        throw StructureError("d_b has a component of bidegree (" + std::to_string(dh) + "," +
                             std::to_string(da) + "); the CR structure is not compatible");
      }
    }

  lie_T_ = lift_function(complex_actions_[0]) + lift(coframe_matrix("lie_T_coframe"));
}

Mat BlockComplex::leibniz_derivation(bool degree_one) const {
  // degree_one: d on constant-coefficient monomials from dω^g.
  // otherwise:  L_T on monomials from L_T ω^g = ι_T dω^g.
  const int n = n_;
  return ext::operator_matrix(n, [&](const PointwiseForm& a) {
    PointwiseForm out(n);
    for (const auto& [idx, coeff] : a.terms()) {
      std::vector<int> gens;
      for (int g = 0; g <= 2 * n; ++g)
        if (idx.mask() & (1u << g)) gens.push_back(g);
      for (std::size_t r = 0; r < gens.size(); ++r) {
        PointwiseForm term = PointwiseForm::one(n);
        for (std::size_t s = 0; s < gens.size(); ++s) {
          if (s == r) {
            const auto& dg = generator_d_[static_cast<std::size_t>(gens[s])];
            term = ext::wedge(term, degree_one ? dg : ext::interior_T(dg));
          } else {
            term = ext::wedge(term, generator(n, gens[s]));
          }
        }
        const double sign = (degree_one && r % 2 == 1) ? -1.0 : 1.0;
        out += (sign * coeff) * term;
      }
    }
    return out;
  });
}

const Mat& BlockComplex::coframe_matrix(const std::string& name) const {
  for (const auto& [k, m] : coframe_)
    if (k == name) return m;
  throw std::out_of_range("unknown coframe operator: " + name);
}

Mat BlockComplex::lift(const Mat& p) const { return kernels::kron_lift(p, dim_, exec_); }

Mat BlockComplex::lift(const ext::PointwiseOp& op) const { return lift(ext::operator_matrix(n_, op)); }

Mat BlockComplex::lift_function(const Mat& a) const {
  Mat out = Mat::Zero(full_size(), full_size());
  for (Eigen::Index i = 0; i < coframe_size(); ++i) out.block(i * dim_, i * dim_, dim_, dim_) = a;
  return out;
}

namespace {

Mat selection(const std::vector<CoframeIndex>& all, const std::vector<CoframeIndex>& pick) {
  Mat b = Mat::Zero(static_cast<Eigen::Index>(all.size()), static_cast<Eigen::Index>(pick.size()));
  for (std::size_t c = 0; c < pick.size(); ++c)
    for (std::size_t r = 0; r < all.size(); ++r)
      if (all[r] == pick[c]) b(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = 1.0;
  return b;
}

}  // namespace

GradedSpace BlockComplex::full_space(int k) const {
  std::vector<CoframeIndex> pick;
  for (const auto& m : monomials_)
    if (m.degree() == k) pick.push_back(m);
  return {Flavor::Full, k, weight_, dim_, selection(monomials_, pick), "Omega^" + std::to_string(k)};
}

GradedSpace BlockComplex::horizontal_space(int k) const {
  std::vector<CoframeIndex> pick;
  for (const auto& m : monomials_)
    if (m.degree() == k && !m.theta()) pick.push_back(m);
  return {Flavor::Horizontal, k, weight_, dim_, selection(monomials_, pick),
          "Omega_H^" + std::to_string(k)};
}

GradedSpace BlockComplex::bidegree_space(int i, int j, bool vertical) const {
  std::vector<CoframeIndex> pick;
  for (const auto& m : monomials_)
    if (m.holo_degree() == i && m.anti_degree() == j && m.theta() == vertical) pick.push_back(m);
  return {Flavor::Bidegree, i + j + (vertical ? 1 : 0), weight_, dim_, selection(monomials_, pick),
          std::string(vertical ? "theta^" : "") + "Omega_H^{" + std::to_string(i) + "," +
              std::to_string(j) + "}"};
}

GradedSpace BlockComplex::total_space() const {
  return {Flavor::Full, -1, weight_, dim_, Mat::Identity(coframe_size(), coframe_size()), "Omega"};
}

GradedSpace BlockComplex::rumin_space(int k) const {
  const int n = n_;
  const Eigen::Index N = coframe_size();
  GradedSpace s{Flavor::Rumin, k, weight_, dim_, Mat(N, 0), "E^" + std::to_string(k)};
  if (k < 0 || k > 2 * n + 1) return s;
  const bool lower = k <= n;
  const int hdeg = lower ? k : k - 1;
  const Mat& shift = coframe_matrix("theta");
  std::vector<Mat> parts;
  for (int i = 0; i <= std::min(hdeg, n); ++i) {
    const int j = hdeg - i;
    if (j < 0 || j > n) continue;
    const Mat bd = bidegree_space(i, j, false).coframe_basis;
    if (bd.cols() == 0) continue;
    // Λ lowers bidegree by (1,1), L raises it by (1,1).
    const Mat& op = coframe_matrix(lower ? "Lambda" : "L");
    const Mat image = op * bd;
    Mat ker = la::max_abs(image) == 0.0 ? Mat::Identity(bd.cols(), bd.cols()) : la::null_space(image);
    Mat cols = bd * ker;
    if (!lower) cols = shift * cols;
    parts.push_back(cols);
  }
  Eigen::Index total = 0;
  for (const auto& p : parts) total += p.cols();
  Mat b(N, total);
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    b.middleCols(at, p.cols()) = p;
    at += p.cols();
  }
  s.coframe_basis = b;
  return s;
}

Mat BlockComplex::restrict(const Mat& full, const GradedSpace& t, const GradedSpace& s) const {
  return kernels::kron_sandwich(full, t.coframe_basis, s.coframe_basis, dim_, exec_);
}

Mat BlockComplex::restrict_pointwise(const Mat& p, const GradedSpace& t, const GradedSpace& s) const {
  const Mat small = t.coframe_basis.adjoint() * p * s.coframe_basis;
  return kernels::kron_lift(small, dim_, exec_);
}

BlockOperator BlockComplex::op(const Mat& full, const GradedSpace& t, const GradedSpace& s) const {
  return {s, t, restrict(full, t, s)};
}

Mat BlockComplex::embedding(const GradedSpace& s) const {
  return kernels::kron_lift(s.coframe_basis, dim_, exec_);
}

double BlockComplex::leakage(const Mat& full, const GradedSpace& t, const GradedSpace& s) const {
  const Mat es = embedding(s);
  const Mat et = embedding(t);
  const Mat image = full * es;
  return la::max_abs(image - et * (et.adjoint() * image));
}

// ---------------------------------------------------------------------------

namespace {

void check_degree(const BlockComplex& c, int k, int lo, int hi) {
  if (k < lo || k > hi)
    throw std::out_of_range("degree " + std::to_string(k) + " outside " + std::to_string(lo) + ".." +
                            std::to_string(hi) + " for n = " + std::to_string(c.n()));
}

// Restriction between horizontal spaces of the given degrees.
Mat hop(const BlockComplex& c, const Mat& full, int kt, int ks) {
  return c.restrict(full, c.horizontal_space(kt), c.horizontal_space(ks));
}

Mat hop_pointwise(const BlockComplex& c, const std::string& name, int kt, int ks) {
  return c.restrict_pointwise(c.coframe_matrix(name), c.horizontal_space(kt), c.horizontal_space(ks));
}

Mat square(const Mat& a) { return a * a; }

}  // namespace

BlockOperator assemble_d(const BlockComplex& c, int k) {
  return c.op(c.d(), c.full_space(k + 1), c.full_space(k));
}
BlockOperator assemble_db(const BlockComplex& c, int k) {
  return c.op(c.d_b(), c.full_space(k + 1), c.full_space(k));
}
BlockOperator assemble_d0(const BlockComplex& c, int k) {
  return c.op(c.d_0(), c.full_space(k + 1), c.full_space(k));
}
BlockOperator assemble_dT(const BlockComplex& c, int k) {
  return c.op(c.d_T(), c.full_space(k + 1), c.full_space(k));
}
BlockOperator assemble_dt(const BlockComplex& c, int k, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("d_t needs t >= 0");
  auto out = assemble_d0(c, k);
  out.matrix += t * assemble_db(c, k).matrix + (t * t) * assemble_dT(c, k).matrix;
  return out;
}
BlockOperator assemble_del(const BlockComplex& c, int k) {
  return c.op(c.del_b(), c.horizontal_space(k + 1), c.horizontal_space(k));
}
BlockOperator assemble_delbar(const BlockComplex& c, int k) {
  return c.op(c.delbar_b(), c.horizontal_space(k + 1), c.horizontal_space(k));
}

BlockOperator assemble_D(const BlockComplex& c) {
  const int n = c.n();
  const auto src = c.rumin_space(n);
  const auto tgt = c.rumin_space(n + 1);
  const auto hn = c.horizontal_space(n);
  const Mat db_up = c.restrict(c.d_b(), c.horizontal_space(n + 1), src);
  const Mat linv = hop_pointwise(c, "L_inv", n - 1, n + 1);
  const Mat db_mid = hop(c, c.d_b(), n, n - 1);
  const Mat inner = c.restrict(c.lie_T(), hn, src) + db_mid * linv * db_up;
  const Mat theta = c.restrict_pointwise(c.coframe_matrix("theta"), tgt, hn);
  return {src, tgt, theta * inner};
}

BlockOperator assemble_D_adjoint_form(const BlockComplex& c) {
  const int n = c.n();
  const auto src = c.rumin_space(n);
  const auto tgt = c.rumin_space(n + 1);
  const auto hn = c.horizontal_space(n);
  const auto hm = c.horizontal_space(n - 1);
  const Mat del_adj = c.restrict(c.del_b(), hn, hm).adjoint() * c.restrict_pointwise(
                          Mat::Identity(c.coframe_size(), c.coframe_size()), hn, src);
  const Mat delbar_adj = c.restrict(c.delbar_b(), hn, hm).adjoint() *
                         c.restrict_pointwise(Mat::Identity(c.coframe_size(), c.coframe_size()), hn, src);
  const Mat db_mid = hop(c, c.d_b(), n, n - 1);
  const Mat inner = c.restrict(c.lie_T(), hn, src) - kI * db_mid * (del_adj - delbar_adj);
  const Mat theta = c.restrict_pointwise(c.coframe_matrix("theta"), tgt, hn);
  return {src, tgt, theta * inner};
}

BlockOperator assemble_dR(const BlockComplex& c, int k) {
  const int n = c.n();
  check_degree(c, k, 0, 2 * n);
  if (k == n) return assemble_D(c);
  return c.op(c.d(), c.rumin_space(k + 1), c.rumin_space(k));
}

BlockOperator assemble_dN(const BlockComplex& c, int k) {
  auto out = assemble_dR(c, k);
  out.matrix *= rescaling(c.n(), k);
  return out;
}

namespace {

BlockOperator holomorphic_N(const BlockComplex& c, const Mat& full, int k) {
  const int n = c.n();
  check_degree(c, k, 0, n);
  const auto src = c.rumin_space(k);
  const auto tgt = k < n ? c.rumin_space(k + 1) : c.horizontal_space(n + 1);
  auto out = c.op(full, tgt, src);
  out.matrix *= rescaling(n, k);
  return out;
}

}  // namespace

BlockOperator assemble_del_N(const BlockComplex& c, int k) { return holomorphic_N(c, c.del_b(), k); }
BlockOperator assemble_delbar_N(const BlockComplex& c, int k) {
  return holomorphic_N(c, c.delbar_b(), k);
}

BlockOperator lie_T_on(const BlockComplex& c, const GradedSpace& s) { return c.op(c.lie_T(), s, s); }

BlockOperator laplacian_RN(const BlockComplex& c, int k) {
  const int n = c.n();
  check_degree(c, k, 0, 2 * n + 1);
  const auto space = c.rumin_space(k);
  Mat out = Mat::Zero(space.dim(), space.dim());
  if (k >= 1) {
    const Mat lower = assemble_dN(c, k - 1).matrix;
    const Mat up = lower * lower.adjoint();
    out += (k == n + 1) ? up : square(up);
  }
  if (k <= 2 * n) {
    const Mat upper = assemble_dN(c, k).matrix;
    const Mat down = upper.adjoint() * upper;
    out += (k == n) ? down : square(down);
  }
  return {space, space, out};
}

BlockOperator laplacian_t(const BlockComplex& c, int k, double t) {
  const int n = c.n();
  check_degree(c, k, 0, 2 * n + 1);
  const auto space = c.full_space(k);
  Mat out = Mat::Zero(space.dim(), space.dim());
  if (k >= 1) {
    const Mat lower = assemble_dt(c, k - 1, t).matrix;
    out += lower * lower.adjoint();
  }
  if (k <= 2 * n) {
    const Mat upper = assemble_dt(c, k, t).matrix;
    out += upper.adjoint() * upper;
  }
  return {space, space, out};
}

BlockOperator laplacian_deRham(const BlockComplex& c, int k) { return laplacian_t(c, k, 1.0); }

BlockOperator laplacian_b(const BlockComplex& c, int k) {
  const int n = c.n();
  check_degree(c, k, 0, 2 * n + 1);
  const auto space = c.full_space(k);
  Mat out = Mat::Zero(space.dim(), space.dim());
  if (k >= 1) {
    const Mat lower = assemble_db(c, k - 1).matrix;
    out += lower * lower.adjoint();
  }
  if (k <= 2 * n) {
    const Mat upper = assemble_db(c, k).matrix;
    out += upper.adjoint() * upper;
  }
  return {space, space, out};
}

namespace {

struct HorizontalBlocks {
  Mat hh, ht, th, tt;
};

Mat horizontal_laplacian_b(const BlockComplex& c, int k) {
  const Mat up = hop(c, c.d_b(), k + 1, k);
  const Mat down = hop(c, c.d_b(), k, k - 1);
  return up.adjoint() * up + down * down.adjoint();
}

HorizontalBlocks diagonal_blocks(const BlockComplex& c, int k) {
  HorizontalBlocks b;
  const Mat lt_k = hop(c, c.lie_T(), k, k);
  const Mat lt_km = hop(c, c.lie_T(), k - 1, k - 1);
  const Mat l_low = hop_pointwise(c, "L", k, k - 2);
  const Mat l_high = hop_pointwise(c, "L", k + 1, k - 1);
  b.hh = horizontal_laplacian_b(c, k) + lt_k.adjoint() * lt_k + l_low * l_low.adjoint();
  b.tt = horizontal_laplacian_b(c, k - 1) + lt_km * lt_km.adjoint() + l_high.adjoint() * l_high;
  return b;
}

BlockOperator assemble_two_by_two(const BlockComplex& c, int k, const HorizontalBlocks& b) {
  const auto space = c.full_space(k);
  const Mat eh = c.restrict_pointwise(Mat::Identity(c.coframe_size(), c.coframe_size()), space,
                                      c.horizontal_space(k));
  const Mat et = c.restrict_pointwise(c.coframe_matrix("theta"), space, c.horizontal_space(k - 1));
  Mat out = eh * b.hh * eh.adjoint() + eh * b.ht * et.adjoint() + et * b.th * eh.adjoint() +
            et * b.tt * et.adjoint();
  return {space, space, out};
}

}  // namespace

BlockOperator laplacian_deRham_block_form(const BlockComplex& c, int k) {
  check_degree(c, k, 0, 2 * c.n() + 1);
  auto b = diagonal_blocks(c, k);
  const Mat lt_k = hop(c, c.lie_T(), k, k);
  const Mat lt_km = hop(c, c.lie_T(), k - 1, k - 1);
  const Mat db_k = hop(c, c.d_b(), k, k - 1);       // Ω_H^{k−1} → Ω_H^k
  const Mat db_up = hop(c, c.d_b(), k + 1, k);      // Ω_H^k → Ω_H^{k+1}
  const Mat db_low = hop(c, c.d_b(), k - 1, k - 2); // Ω_H^{k−2} → Ω_H^{k−1}
  const Mat l_low = hop_pointwise(c, "L", k, k - 2);
  const Mat l_high = hop_pointwise(c, "L", k + 1, k - 1);
  // [d_b†, L] + [d_b, L_T†] : Ω_H^{k−1} → Ω_H^k
  b.ht = db_up.adjoint() * l_high - l_low * db_low.adjoint() + db_k * lt_km.adjoint() -
         lt_k.adjoint() * db_k;
  // [Λ, d_b] + [L_T, d_b†] : Ω_H^k → Ω_H^{k−1}
  b.th = l_high.adjoint() * db_up - db_low * l_low.adjoint() + lt_km * db_k.adjoint() -
         db_k.adjoint() * lt_k;
  return assemble_two_by_two(c, k, b);
}

BlockOperator laplacian_deRham_sasakian_form(const BlockComplex& c, int k) {
  check_degree(c, k, 0, 2 * c.n() + 1);
  auto b = diagonal_blocks(c, k);
  const Mat del = hop(c, c.del_b(), k, k - 1);
  const Mat delbar = hop(c, c.delbar_b(), k, k - 1);
  b.ht = kI * del - kI * delbar;
  b.th = -kI * del.adjoint() + kI * delbar.adjoint();
  return assemble_two_by_two(c, k, b);
}

namespace {

BlockOperator holomorphic_laplacian(const BlockComplex& c, int k, bool holo) {
  const int n = c.n();
  check_degree(c, k, 0, n);
  const auto space = c.rumin_space(k);
  auto part = [&](int j) { return holo ? assemble_del_N(c, j) : assemble_delbar_N(c, j); };
  const Mat up = part(k).matrix;
  Mat out = up.adjoint() * up;
  if (k >= 1) {
    const Mat down = part(k - 1).matrix;
    out += down * down.adjoint();
  }
  return {space, space, out};
}

}  // namespace

BlockOperator laplacian_del_N(const BlockComplex& c, int k) { return holomorphic_laplacian(c, k, true); }
BlockOperator laplacian_delbar_N(const BlockComplex& c, int k) {
  return holomorphic_laplacian(c, k, false);
}

BlockOperator sqrt_laplacian_RN(const BlockComplex& c, int k) {
  auto d = laplacian_RN(c, k);
  d.matrix = la::hermitian_sqrt(d.matrix);
  return d;
}

std::pair<BlockOperator, BlockOperator> box_operators(const BlockComplex& c, int k) {
  const auto root = sqrt_laplacian_RN(c, k);
  const Mat ilt = kI * lie_T_on(c, root.source).matrix;
  BlockOperator box{root.source, root.target, 0.5 * (root.matrix + ilt)};
  BlockOperator boxbar{root.source, root.target, 0.5 * (root.matrix - ilt)};
  return {box, boxbar};
}

nlohmann::json to_json(const BlockOperator& op) {
  nlohmann::json data = nlohmann::json::array();
  for (Eigen::Index r = 0; r < op.matrix.rows(); ++r)
    for (Eigen::Index c = 0; c < op.matrix.cols(); ++c)
      data.push_back({op.matrix(r, c).real(), op.matrix(r, c).imag()});
  return {{"source", op.source.label},
          {"target", op.target.label},
          {"block_weight", op.source.block_weight},
          {"rows", op.matrix.rows()},
          {"cols", op.matrix.cols()},
          {"data", data}};
}

}  // namespace rumin::ops
