#include "rumin/exterior.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace rumin::ext {

namespace {

std::uint32_t full_mask(int n) { return (1u << (2 * n + 1)) - 1u; }

void require_same_n(const PointwiseForm& a, const PointwiseForm& b) {
  if (a.n() != b.n()) {
    throw DimensionError("pointwise forms over different n: " + std::to_string(a.n()) +
                         " vs " + std::to_string(b.n()));
  }
}

// Generator partner under the complex bilinear metric.
int partner(int n, int g) {
  if (g == 0) return 0;
  return g <= n ? g + n : g - n;
}

double generator_weight(int g) { return g == 0 ? 1.0 : 2.0; }

// g(ω^A, ω^B) for sorted monomials.
double bilinear_monomial(const CoframeIndex& a, const CoframeIndex& b) {
  if (a.conjugate_set() != b) return 0.0;
  const int n = a.n();
  std::vector<int> ga, gb;
  for (int g = 0; g <= 2 * n; ++g) {
    if (a.mask() & (1u << g)) ga.push_back(g);
    if (b.mask() & (1u << g)) gb.push_back(g);
  }
  std::vector<int> perm(ga.size());
  double weight = 1.0;
  for (std::size_t r = 0; r < ga.size(); ++r) {
    const int target = partner(n, ga[r]);
    perm[r] = static_cast<int>(std::find(gb.begin(), gb.end(), target) - gb.begin());
    weight *= generator_weight(ga[r]);
  }
  int inversions = 0;
  for (std::size_t r = 0; r < perm.size(); ++r)
    for (std::size_t s = r + 1; s < perm.size(); ++s)
      if (perm[r] > perm[s]) ++inversions;
  return (inversions % 2 ? -1.0 : 1.0) * weight;
}

}  // namespace

CoframeIndex CoframeIndex::from_sets(int n, bool theta, const std::vector<int>& holo,
                                     const std::vector<int>& anti) {
  if (n < 1 || n > kMaxN) throw DimensionError("n out of range: " + std::to_string(n));
  std::uint32_t mask = theta ? 1u : 0u;
  auto put = [&](const std::vector<int>& idx, int offset) {
    int prev = 0;
    for (int i : idx) {
      if (i <= prev || i > n) {
        throw std::invalid_argument("coframe index set must be strictly increasing within 1..n");
      }
      prev = i;
      mask |= 1u << (offset + i);
    }
  };
  put(holo, 0);
  put(anti, n);
  return CoframeIndex(n, mask);
}

CoframeIndex CoframeIndex::from_mask(int n, std::uint32_t mask) {
  if (n < 1 || n > kMaxN) throw DimensionError("n out of range: " + std::to_string(n));
  if ((mask & ~full_mask(n)) != 0) throw std::invalid_argument("mask has bits beyond 2n+1");
  return CoframeIndex(n, mask);
}

std::vector<int> CoframeIndex::holo() const {
  std::vector<int> out;
  for (int i = 1; i <= n_; ++i)
    if (mask_ & (1u << i)) out.push_back(i);
  return out;
}

std::vector<int> CoframeIndex::anti() const {
  std::vector<int> out;
  for (int i = 1; i <= n_; ++i)
    if (mask_ & (1u << (n_ + i))) out.push_back(i);
  return out;
}

int CoframeIndex::degree() const { return std::popcount(mask_); }

int CoframeIndex::holo_degree() const {
  const std::uint32_t holo_bits = ((1u << n_) - 1u) << 1;
  return std::popcount(mask_ & holo_bits);
}

int CoframeIndex::anti_degree() const {
  const std::uint32_t anti_bits = ((1u << n_) - 1u) << (n_ + 1);
  return std::popcount(mask_ & anti_bits);
}

CoframeIndex CoframeIndex::conjugate_set() const {
  const std::uint32_t low = ((1u << n_) - 1u) << 1;
  const std::uint32_t high = low << n_;
  const std::uint32_t swapped = (mask_ & 1u) | ((mask_ & low) << n_) | ((mask_ & high) >> n_);
  return CoframeIndex(n_, swapped);
}

PointwiseForm::PointwiseForm(int n) : n_(n) {
  if (n < 1 || n > kMaxN) throw DimensionError("n out of range: " + std::to_string(n));
}

PointwiseForm PointwiseForm::one(int n) { return monomial(CoframeIndex::from_mask(n, 0), 1.0); }

PointwiseForm PointwiseForm::monomial(const CoframeIndex& idx, cplx c) {
  PointwiseForm f(idx.n());
  f.add(idx, c);
  return f;
}

PointwiseForm PointwiseForm::theta(int n) { return monomial(CoframeIndex::from_mask(n, 1u)); }

PointwiseForm PointwiseForm::eps(int n, int i) {
  return monomial(CoframeIndex::from_sets(n, false, {i}, {}));
}

PointwiseForm PointwiseForm::epsbar(int n, int i) {
  return monomial(CoframeIndex::from_sets(n, false, {}, {i}));
}

cplx PointwiseForm::coeff(const CoframeIndex& idx) const {
  auto it = terms_.find(idx);
  return it == terms_.end() ? cplx{} : it->second;
}

void PointwiseForm::add(const CoframeIndex& idx, cplx c) {
  if (idx.n() != n_) throw DimensionError("coframe index over a different n");
  if (c == cplx{}) return;
  auto [it, inserted] = terms_.try_emplace(idx, c);
  if (!inserted) {
    it->second += c;
    if (it->second == cplx{}) terms_.erase(it);
  }
}

int PointwiseForm::homogeneous_degree() const {
  int deg = -1;
  for (const auto& [idx, c] : terms_) {
    if (deg == -1) deg = idx.degree();
    else if (deg != idx.degree()) return -1;
  }
  return deg;
}

double PointwiseForm::max_abs() const {
  double m = 0.0;
  for (const auto& [idx, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

PointwiseForm& PointwiseForm::operator+=(const PointwiseForm& o) {
  require_same_n(*this, o);
  for (const auto& [idx, c] : o.terms_) add(idx, c);
  return *this;
}

PointwiseForm& PointwiseForm::operator-=(const PointwiseForm& o) {
  require_same_n(*this, o);
  for (const auto& [idx, c] : o.terms_) add(idx, -c);
  return *this;
}

PointwiseForm& PointwiseForm::operator*=(cplx s) {
  if (s == cplx{}) {
    terms_.clear();
    return *this;
  }
  for (auto& [idx, c] : terms_) c *= s;
  std::erase_if(terms_, [](const auto& kv) { return kv.second == cplx{}; });
  return *this;
}

WedgeResult wedge_monomials(const CoframeIndex& a, const CoframeIndex& b) {
  if (a.n() != b.n()) throw DimensionError("wedge of monomials over different n");
  if (a.mask() & b.mask()) return {};
  int inversions = 0;
  for (std::uint32_t rest = b.mask(); rest != 0; rest &= rest - 1) {
    const int y = std::countr_zero(rest);
    const std::uint32_t above = a.mask() & ~((2u << y) - 1u);
    inversions += std::popcount(above);
  }
  return {inversions % 2 ? -1 : 1, CoframeIndex::from_mask(a.n(), a.mask() | b.mask())};
}

PointwiseForm wedge(const PointwiseForm& a, const PointwiseForm& b) {
  require_same_n(a, b);
  PointwiseForm out(a.n());
  for (const auto& [ia, ca] : a.terms())
    for (const auto& [ib, cb] : b.terms()) {
      const auto w = wedge_monomials(ia, ib);
      if (w.sign != 0) out.add(w.index, static_cast<double>(w.sign) * ca * cb);
    }
  return out;
}

PointwiseForm interior_T(const PointwiseForm& a) {
  PointwiseForm out(a.n());
  for (const auto& [idx, c] : a.terms())
    if (idx.theta()) out.add(CoframeIndex::from_mask(a.n(), idx.mask() & ~1u), c);
  return out;
}

PointwiseForm dtheta(int n) {
  PointwiseForm out(n);
  for (int i = 1; i <= n; ++i)
    out += (0.5 * kI) * wedge(PointwiseForm::eps(n, i), PointwiseForm::epsbar(n, i));
  return out;
}

PointwiseForm volume_form(int n) {
  PointwiseForm out = PointwiseForm::theta(n);
  for (int i = 1; i <= n; ++i)
    out = wedge(out, (0.5 * kI) * wedge(PointwiseForm::eps(n, i), PointwiseForm::epsbar(n, i)));
  return out;
}

PointwiseForm lefschetz_L(const PointwiseForm& a) { return wedge(dtheta(a.n()), a); }

PointwiseForm lefschetz_Lambda(const PointwiseForm& a) {
  // Λ = L† for the Hermitian metric: for each ε^i∧ε̄^i factor present in ω^J,
  // Λ(ω^J) picks up conj(i/2 · s) · |ω^J|²/|ω^{J∖pair}|² = -2i s.
  const int n = a.n();
  PointwiseForm out(n);
  for (const auto& [idx, c] : a.terms()) {
    for (int i = 1; i <= n; ++i) {
      const std::uint32_t pair = (1u << i) | (1u << (n + i));
      if ((idx.mask() & pair) != pair) continue;
      const auto rest = CoframeIndex::from_mask(n, idx.mask() & ~pair);
      const auto pair_idx = CoframeIndex::from_mask(n, pair);
      const int s = wedge_monomials(pair_idx, rest).sign;
      out.add(rest, cplx(0.0, -2.0 * s) * c);
    }
  }
  return out;
}

PointwiseForm vertical_part(const PointwiseForm& a) {
  PointwiseForm out(a.n());
  for (const auto& [idx, c] : a.terms())
    if (idx.theta()) out.add(idx, c);
  return out;
}

PointwiseForm horizontal_part(const PointwiseForm& a) {
  PointwiseForm out(a.n());
  for (const auto& [idx, c] : a.terms())
    if (!idx.theta()) out.add(idx, c);
  return out;
}

PointwiseForm primitive_projection(const PointwiseForm& a) {
  const int n = a.n();
  PointwiseForm out(n);
  std::map<int, PointwiseForm> by_degree;
  for (const auto& [idx, c] : a.terms()) {
    if (idx.theta()) continue;
    by_degree.try_emplace(idx.degree(), n).first->second.add(idx, c);
  }
  for (auto& [k, part] : by_degree) {
    if (k > n) continue;
    if (k < 2) {
      out += part;
      continue;
    }
    // a = a_0 + L b with a_0 primitive: solve the normal equations
    // (L†L) b = L† a on Λ^{k-2}H*, which is injective for k ≤ n.
    const auto top = monomials_of_degree(n, k, true);
    const auto low = monomials_of_degree(n, k - 2, true);
    const Eigen::MatrixXcd Lm = operator_matrix(n, lefschetz_L, low, top);
    Eigen::VectorXcd x(static_cast<Eigen::Index>(top.size()));
    for (std::size_t r = 0; r < top.size(); ++r)
      x(static_cast<Eigen::Index>(r)) = part.coeff(top[r]) * std::sqrt(monomial_norm_sq(top[r]));
    const Eigen::MatrixXcd normal = Lm.adjoint() * Lm;
    const Eigen::VectorXcd b = normal.ldlt().solve(Lm.adjoint() * x);
    const Eigen::VectorXcd prim = x - Lm * b;
    for (std::size_t r = 0; r < top.size(); ++r) {
      out.add(top[r], prim(static_cast<Eigen::Index>(r)) / std::sqrt(monomial_norm_sq(top[r])));
    }
  }
  return out;
}

PointwiseForm hodge_star(const PointwiseForm& a) {
  const int n = a.n();
  const auto full = CoframeIndex::from_mask(n, full_mask(n));
  const cplx vol = volume_form(n).coeff(full);
  PointwiseForm out(n);
  for (const auto& [idx, c] : a.terms()) {
    const auto conj = idx.conjugate_set();
    const auto comp = CoframeIndex::from_mask(n, full_mask(n) & ~conj.mask());
    const int s = wedge_monomials(conj, comp).sign;
    const double g = bilinear_monomial(conj, idx);
    out.add(comp, c * g * vol / static_cast<double>(s));
  }
  return out;
}

PointwiseForm j_action(const PointwiseForm& a) {
  PointwiseForm out(a.n());
  for (const auto& [idx, c] : a.terms()) {
    const int e = ((idx.holo_degree() - idx.anti_degree()) % 4 + 4) % 4;
    static constexpr cplx powers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    out.add(idx, powers[e] * c);
  }
  return out;
}

std::map<Bidegree, PointwiseForm> bidegree_split(const PointwiseForm& a) {
  std::map<Bidegree, PointwiseForm> out;
  for (const auto& [idx, c] : a.terms()) {
    const Bidegree b{idx.holo_degree(), idx.anti_degree(), idx.theta()};
    out.try_emplace(b, a.n()).first->second.add(idx, c);
  }
  return out;
}

double monomial_norm_sq(const CoframeIndex& idx) {
  return std::ldexp(1.0, idx.holo_degree() + idx.anti_degree());
}

cplx inner_product(const PointwiseForm& a, const PointwiseForm& b) {
  require_same_n(a, b);
  cplx s{};
  for (const auto& [idx, c] : a.terms()) s += c * std::conj(b.coeff(idx)) * monomial_norm_sq(idx);
  return s;
}

cplx bilinear_pairing(const PointwiseForm& a, const PointwiseForm& b) {
  require_same_n(a, b);
  cplx s{};
  for (const auto& [ia, ca] : a.terms())
    for (const auto& [ib, cb] : b.terms()) s += ca * cb * bilinear_monomial(ia, ib);
  return s;
}

std::vector<CoframeIndex> monomial_basis(int n) {
  std::vector<CoframeIndex> out;
  for (std::uint32_t m = 0; m <= full_mask(n); ++m) out.push_back(CoframeIndex::from_mask(n, m));
  std::stable_sort(out.begin(), out.end(), [](const CoframeIndex& x, const CoframeIndex& y) {
    return x.degree() < y.degree() || (x.degree() == y.degree() && x.mask() < y.mask());
  });
  return out;
}

std::vector<CoframeIndex> monomials_of_degree(int n, int k, bool horizontal_only) {
  std::vector<CoframeIndex> out;
  for (const auto& idx : monomial_basis(n))
    if (idx.degree() == k && !(horizontal_only && idx.theta())) out.push_back(idx);
  return out;
}

Eigen::MatrixXcd operator_matrix(int n, const PointwiseOp& op, const std::vector<CoframeIndex>& src,
                                 const std::vector<CoframeIndex>& dst) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dst.size()),
                                              static_cast<Eigen::Index>(src.size()));
  std::map<CoframeIndex, Eigen::Index> row_of;
  for (std::size_t r = 0; r < dst.size(); ++r) row_of[dst[r]] = static_cast<Eigen::Index>(r);
  for (std::size_t c = 0; c < src.size(); ++c) {
    const PointwiseForm image = op(PointwiseForm::monomial(src[c]));
    if (image.n() != n) throw DimensionError("operator changed n");
    const double src_norm = std::sqrt(monomial_norm_sq(src[c]));
    for (const auto& [idx, v] : image.terms()) {
      auto it = row_of.find(idx);
      if (it == row_of.end()) continue;
      m(it->second, static_cast<Eigen::Index>(c)) = v * std::sqrt(monomial_norm_sq(idx)) / src_norm;
    }
  }
  return m;
}

Eigen::MatrixXcd operator_matrix(int n, const PointwiseOp& op) {
  const auto basis = monomial_basis(n);
  return operator_matrix(n, op, basis, basis);
}

}  // namespace rumin::ext
