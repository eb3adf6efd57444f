#include <cmath>
#include <random>

#include "doctest.h"
#include "rumin/exterior.hpp"
#include "rumin/linalg.hpp"

using namespace rumin;
using namespace rumin::ext;

namespace {

PointwiseForm random_form(int n, std::mt19937& rng, int degree = -1, bool horizontal = false) {
  std::normal_distribution<double> g;
  PointwiseForm out(n);
  for (const auto& idx : monomial_basis(n)) {
    if (degree >= 0 && idx.degree() != degree) continue;
    if (horizontal && idx.theta()) continue;
    out.add(idx, cplx(g(rng), g(rng)));
  }
  return out;
}

double dist(const PointwiseForm& a, const PointwiseForm& b) { return (a - b).max_abs(); }

CoframeIndex idx(int n, bool theta, std::vector<int> h, std::vector<int> a) {
  return CoframeIndex::from_sets(n, theta, h, a);
}

}  // namespace

TEST_CASE("coframe index validation") {
  CHECK_THROWS_AS(CoframeIndex::from_sets(1, false, {2}, {}), std::invalid_argument);
  CHECK_THROWS_AS(CoframeIndex::from_sets(2, false, {2, 1}, {}), std::invalid_argument);
  CHECK_THROWS_AS(CoframeIndex::from_sets(2, false, {1, 1}, {}), std::invalid_argument);
  CHECK_THROWS_AS(CoframeIndex::from_sets(0, false, {}, {}), DimensionError);
  const auto i = idx(3, true, {1, 3}, {2});
  CHECK(i.degree() == 4);
  CHECK(i.holo() == std::vector<int>{1, 3});
  CHECK(i.anti() == std::vector<int>{2});
  CHECK(i.conjugate_set() == idx(3, true, {2}, {1, 3}));
}

TEST_CASE("wedge basics") {
  const auto e = PointwiseForm::eps(1, 1);
  const auto eb = PointwiseForm::epsbar(1, 1);
  const auto th = PointwiseForm::theta(1);
  CHECK(wedge(e, e).is_zero());
  const auto te = wedge(th, e);
  CHECK(te == PointwiseForm::monomial(idx(1, true, {1}, {})));
  CHECK(wedge(e + eb, eb) == wedge(e, eb));
  CHECK(wedge(eb, e) == -1.0 * wedge(e, eb));
  CHECK_THROWS_AS(wedge(e, PointwiseForm::eps(2, 1)), DimensionError);
}

TEST_CASE("wedge is graded commutative and associative") {
  std::mt19937 rng(7);
  for (int n = 1; n <= 3; ++n)
    for (int p = 0; p <= 2 * n + 1; ++p)
      for (int q = 0; p + q <= 2 * n + 1; ++q) {
        const auto a = random_form(n, rng, p);
        const auto b = random_form(n, rng, q);
        const double s = (p * q) % 2 ? -1.0 : 1.0;
        CHECK(dist(wedge(a, b), s * wedge(b, a)) < 1e-12);
        const auto c = random_form(n, rng, 1);
        CHECK(dist(wedge(wedge(a, b), c), wedge(a, wedge(b, c))) < 1e-11);
      }
}

TEST_CASE("interior product with the Reeb field") {
  const auto e = PointwiseForm::eps(1, 1);
  const auto eb = PointwiseForm::epsbar(1, 1);
  const auto th = PointwiseForm::theta(1);
  CHECK(interior_T(wedge(th, e)) == e);
  CHECK(interior_T(wedge(e, eb)).is_zero());
  CHECK(interior_T(th) == PointwiseForm::one(1));
  std::mt19937 rng(3);
  for (int n = 1; n <= 3; ++n) {
    const auto a = random_form(n, rng);
    CHECK(interior_T(interior_T(a)).is_zero());
    const auto h = horizontal_part(a);
    CHECK(interior_T(wedge(PointwiseForm::theta(n), h)) == h);
  }
}

TEST_CASE("Lefschetz operators for n = 1") {
  const auto one = PointwiseForm::one(1);
  const auto e = PointwiseForm::eps(1, 1);
  const auto eeb = wedge(e, PointwiseForm::epsbar(1, 1));
  // dθ = e∧f and ε∧ε̄ = (e + i f)∧(e − i f) = −2i e∧f.
  CHECK(dist(lefschetz_L(one), (0.5 * kI) * eeb) < 1e-15);
  CHECK(lefschetz_L(e).is_zero());
  CHECK(lefschetz_L(lefschetz_L(one)).is_zero());
  // Adjoint oracle: ⟨L 1, ε∧ε̄⟩ = (i/2)·|ε∧ε̄|² = 2i, so Λ(ε∧ε̄) = conj(2i) = −2i.
  const cplx oracle = std::conj(inner_product(lefschetz_L(one), eeb));
  CHECK(dist(lefschetz_Lambda(eeb), oracle * one) < 1e-15);
  CHECK(dist(lefschetz_Lambda(eeb), cplx(0, -2) * one) < 1e-15);
  CHECK(lefschetz_Lambda(e).is_zero());
  const auto th = PointwiseForm::theta(1);
  CHECK(dist(lefschetz_Lambda(wedge(th, eeb)), cplx(0, -2) * th) < 1e-15);
}

TEST_CASE("dθ agrees with the real coframe") {
  // e = (ε + ε̄)/2, f = (ε − ε̄)/(2i)
  for (int n = 1; n <= 3; ++n) {
    PointwiseForm expect(n);
    for (int i = 1; i <= n; ++i) {
      const auto e = 0.5 * (PointwiseForm::eps(n, i) + PointwiseForm::epsbar(n, i));
      const auto f = cplx(0, -0.5) * (PointwiseForm::eps(n, i) - PointwiseForm::epsbar(n, i));
      expect += wedge(e, f);
    }
    CHECK(dist(dtheta(n), expect) < 1e-15);
  }
}

TEST_CASE("Λ is the pointwise adjoint of L") {
  std::mt19937 rng(11);
  for (int n = 1; n <= 3; ++n)
    for (int trial = 0; trial < 5; ++trial) {
      const auto a = random_form(n, rng);
      const auto b = random_form(n, rng);
      CHECK(std::abs(inner_product(lefschetz_L(a), b) - inner_product(a, lefschetz_Lambda(b))) <
            1e-11);
    }
}

TEST_CASE("sl2 commutator on horizontal monomials") {
  for (int n = 1; n <= 3; ++n)
    for (int k = 0; k <= 2 * n; ++k)
      for (const auto& i : monomials_of_degree(n, k, true)) {
        const auto a = PointwiseForm::monomial(i);
        const auto comm = lefschetz_L(lefschetz_Lambda(a)) - lefschetz_Lambda(lefschetz_L(a));
        CHECK(dist(comm, static_cast<double>(k - n) * a) < 1e-13);
      }
}

TEST_CASE("L is an isomorphism from degree n-1 to n+1") {
  for (int n = 1; n <= 3; ++n) {
    const auto src = monomials_of_degree(n, n - 1, true);
    const auto dst = monomials_of_degree(n, n + 1, true);
    REQUIRE(src.size() == dst.size());
    const auto m = operator_matrix(n, lefschetz_L, src, dst);
    CHECK(la::numerical_rank(m) == static_cast<Eigen::Index>(src.size()));
  }
}

TEST_CASE("primitive projection") {
  const auto e = PointwiseForm::eps(1, 1);
  CHECK(primitive_projection(e) == e);
  const auto eeb = wedge(e, PointwiseForm::epsbar(1, 1));
  CHECK(primitive_projection(eeb).is_zero());
  CHECK(primitive_projection(cplx(2, 1) * dtheta(1)).is_zero());
  // the θ component is dropped
  CHECK(primitive_projection(PointwiseForm::theta(1)).is_zero());

  std::mt19937 rng(5);
  for (int n = 1; n <= 3; ++n)
    for (int k = 0; k <= n; ++k) {
      const auto a = random_form(n, rng, k, true);
      const auto pa = primitive_projection(a);
      CHECK(lefschetz_Lambda(pa).max_abs() < 1e-12);
      CHECK(dist(primitive_projection(pa), pa) < 1e-12);
      const auto b = random_form(n, rng, k, true);
      CHECK(std::abs(inner_product(pa, b) - inner_product(a, primitive_projection(b))) < 1e-11);
      if (k >= 2) {
        const auto c = random_form(n, rng, k - 2, true);
        CHECK(dist(primitive_projection(a + lefschetz_L(c)), pa) < 1e-11);
      }
      if (k <= 1) CHECK(pa == a);
    }
}

TEST_CASE("Hodge star") {
  const auto one = PointwiseForm::one(1);
  CHECK(dist(hodge_star(one), volume_form(1)) < 1e-15);
  const auto e = PointwiseForm::eps(1, 1);
  CHECK(dist(hodge_star(hodge_star(e)), e) < 1e-15);
  // n = 1: ⋆θ = e∧f = dθ
  CHECK(dist(hodge_star(PointwiseForm::theta(1)), dtheta(1)) < 1e-15);

  std::mt19937 rng(13);
  for (int n = 1; n <= 3; ++n) {
    const auto vol = volume_form(n);
    for (int k = 0; k <= 2 * n + 1; ++k) {
      const auto a = random_form(n, rng, k);
      const auto b = random_form(n, rng, k);
      // ⟨a, b⟩ vol = a ∧ ⋆conj(b), with conj(b) built from the bilinear pairing:
      // a ∧ ⋆c = g(a, c) vol for the complex-bilinear g.
      const auto lhs = wedge(a, hodge_star(b));
      CHECK(dist(lhs, bilinear_pairing(a, b) * vol) < 1e-10);
      CHECK(std::abs(inner_product(hodge_star(a), hodge_star(b)) - inner_product(a, b)) < 1e-10);
      const double sign = (k * (2 * n + 1 - k)) % 2 ? -1.0 : 1.0;
      CHECK(dist(hodge_star(hodge_star(a)), sign * a) < 1e-11);
    }
    // Λ = ⋆⁻¹ L ⋆ on every degree
    for (int k = 0; k <= 2 * n + 1; ++k) {
      const auto a = random_form(n, rng, k);
      const int kk = 2 * n + 1 - k;
      const double inv_sign = (kk * (2 * n + 1 - kk)) % 2 ? -1.0 : 1.0;
      const auto rhs = inv_sign * hodge_star(lefschetz_L(hodge_star(a)));
      CHECK(dist(lefschetz_Lambda(a), rhs) < 1e-10);
    }
    // primitive k-forms go to θ∧ker L
    for (int k = 0; k <= n; ++k) {
      const auto p = primitive_projection(random_form(n, rng, k, true));
      const auto s = hodge_star(p);
      CHECK(dist(s, vertical_part(s)) < 1e-15);
      CHECK(lefschetz_L(interior_T(s)).max_abs() < 1e-10);
    }
  }
}

TEST_CASE("J action") {
  const auto e = PointwiseForm::eps(1, 1);
  const auto eb = PointwiseForm::epsbar(1, 1);
  CHECK(j_action(e) == kI * e);
  CHECK(j_action(eb) == -kI * eb);
  CHECK(j_action(wedge(e, eb)) == wedge(e, eb));

  std::mt19937 rng(17);
  for (int n = 1; n <= 3; ++n) {
    for (int k = 0; k <= 2 * n + 1; ++k) {
      const auto a = random_form(n, rng, k);
      const auto b = random_form(n, rng, k, true);
      CHECK(dist(j_action(lefschetz_L(a)), lefschetz_L(j_action(a))) < 1e-12);
      CHECK(dist(j_action(lefschetz_Lambda(a)), lefschetz_Lambda(j_action(a))) < 1e-12);
      CHECK(dist(j_action(hodge_star(a)), hodge_star(j_action(a))) < 1e-11);
      if (k <= n)
        CHECK(dist(j_action(primitive_projection(b)), primitive_projection(j_action(b))) < 1e-11);
    }
    for (const auto& [bd, part] : bidegree_split(random_form(n, rng))) {
      const double s = (bd.i + bd.j) % 2 ? -1.0 : 1.0;
      CHECK(dist(j_action(j_action(part)), s * part) < 1e-12);
    }
  }
}

TEST_CASE("bidegree split") {
  const auto e = PointwiseForm::eps(1, 1);
  const auto eb = PointwiseForm::epsbar(1, 1);
  const auto s = bidegree_split(e + eb);
  REQUIRE(s.size() == 2);
  CHECK(s.at(Bidegree{1, 0, false}) == e);
  CHECK(s.at(Bidegree{0, 1, false}) == eb);
  const auto te = wedge(PointwiseForm::theta(1), e);
  const auto v = bidegree_split(te);
  REQUIRE(v.size() == 1);
  CHECK(v.at(Bidegree{1, 0, true}) == te);
  CHECK(bidegree_split(PointwiseForm::zero(1)).empty());

  std::mt19937 rng(19);
  const auto a = random_form(2, rng);
  PointwiseForm sum(2);
  for (const auto& [bd, part] : bidegree_split(a)) {
    CHECK(part.homogeneous_degree() == bd.i + bd.j + (bd.vertical ? 1 : 0));
    sum += part;
  }
  CHECK(dist(sum, a) < 1e-15);
}

TEST_CASE("operator matrices are unitary for the star") {
  for (int n = 1; n <= 2; ++n) {
    const Eigen::MatrixXcd s = operator_matrix(n, hodge_star);
    CHECK(la::max_abs(s.adjoint() * s - Eigen::MatrixXcd::Identity(s.rows(), s.cols())) < 1e-13);
  }
}
