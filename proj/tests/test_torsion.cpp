#include <cmath>
#include <random>

#include "doctest.h"
#include "rumin/torsion.hpp"

using namespace rumin;
using namespace rumin::torsion;

TEST_CASE("zeta partial sums of small multisets") {
  const auto one = ZetaSeries::from_eigenvalues("a", {4.0}, 10.0);
  CHECK(zeta_partial(one, 1.0) == doctest::Approx(0.25).epsilon(1e-15));
  const auto two = ZetaSeries::from_eigenvalues("b", {1.0, 4.0, 1.0}, 10.0);
  CHECK(two.count() == 3);
  REQUIRE(two.values.size() == 2);
  CHECK(two.values[0].second == 2);
  CHECK(zeta_partial(two, 2.0) == doctest::Approx(2.0625).epsilon(1e-15));
  CHECK_THROWS_AS(zeta_partial(two, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ZetaSeries::from_eigenvalues("c", {0.0}, 1.0), std::invalid_argument);
}

TEST_CASE("kappa coefficients and s-grid validation") {
  CHECK(kappa_coefficient(1, 0) == -2);
  CHECK(kappa_coefficient(1, 1) == 1);
  CHECK(kappa_coefficient(2, 0) == -3);
  CHECK(kappa_coefficient(2, 1) == 2);
  CHECK(kappa_coefficient(2, 2) == -1);
  CHECK_THROWS_AS(validate_s_grid({0.5}, false), std::invalid_argument);
  CHECK_THROWS_AS(validate_s_grid({}, false), std::invalid_argument);
  CHECK_THROWS_AS(validate_s_grid({2.0, 7.0}, true), std::invalid_argument);
  CHECK_NOTHROW(validate_s_grid({2.0, 7.0}, false));
  CHECK_THROWS_AS(validate_s_grid({std::nan("")}, false), std::invalid_argument);
}

TEST_CASE("kappa partial sum is linear in the per-degree series") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.5, 30.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> a(5), b(7);
    // Series store values at 12-digit tags.
    for (auto& x : a) x = spectral::tag(u(rng));
    for (auto& x : b) x = spectral::tag(u(rng));
    const std::vector<ZetaSeries> z = {ZetaSeries::from_eigenvalues("0", a, 100), ZetaSeries::from_eigenvalues("1", b, 100)};
    const double s = 2.0 + trial * 0.1;
    double expect = 0.0;
    for (double x : a) expect -= 2.0 * std::pow(x, -s);
    for (double x : b) expect += std::pow(x, -s);
    CHECK(kappa_partial(z, 1, s) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("weight-one functions split evenly between the two boxes") {
  const spectral::BlockSet blocks(model::ModelManifold::su2(), 1);
  const auto rep = reeb_decomposition(blocks);
  const auto& d0 = rep.degrees[0];
  CHECK(d0.harmonic == 1);
  CHECK(d0.ker_box == 2);
  CHECK(d0.ker_boxbar == 2);
  CHECK(d0.im_im == 0);
  CHECK(rep.checks.pass());
  CHECK(rep.literal_pass);
}

TEST_CASE("per-degree identity breaks at weight two while the weighted one holds") {
  const spectral::BlockSet blocks(model::ModelManifold::su2(), 2);
  const auto rep = reeb_decomposition(blocks);
  // μ = 0 in the spin-1 block has both ∂- and ∂̄-energy.
  CHECK(rep.degrees[0].im_im == 3);
  CHECK_FALSE(rep.literal_pass);
  for (const auto& c : rep.checks.checks) {
    INFO(c.name << " residual " << c.residual);
    CHECK(c.pass);
  }
  REQUIRE(rep.kappa_lhs.size() == 3);
  for (std::size_t i = 0; i < rep.kappa_lhs.size(); ++i)
    CHECK(rep.kappa_lhs[i] == doctest::Approx(rep.kappa_rhs[i]).epsilon(1e-12));
}

TEST_CASE("twisted lens space has no harmonic term") {
  const spectral::BlockSet blocks(model::ModelManifold::lens(2, {1}), 4);
  const auto rep = reeb_decomposition(blocks);
  for (const auto& d : rep.degrees) {
    CHECK(d.harmonic == 0);
    CHECK(d.cohomology == 0);
  }
  CHECK(rep.checks.pass());
}

TEST_CASE("torsion estimate and exports") {
  const spectral::BlockSet blocks(model::ModelManifold::lens(3, {0}), 3);
  CHECK_THROWS_AS(torsion_estimate(blocks, {2.0, 6.5}), std::invalid_argument);
  const auto rep = torsion_estimate(blocks, {2.0, 4.0});
  CHECK(rep.estimate_only);
  CHECK(rep.cutoff == spectral::truncation_cutoff(3));
  const auto j = rep.to_json();
  CHECK(j.contains("note"));
  CHECK(j["kappa_lhs"].size() == 2);
  CHECK(j["verification"]["suite"] == "thm5");
  const auto csv = rep.pairs_csv();
  CHECK(csv.rfind("degree,block,lhs,piece,nu,rhs,multiplicity\n", 0) == 0);
  CHECK(csv.find(",harmonic,") != std::string::npos);
}
