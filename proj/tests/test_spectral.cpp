#include "trees/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"

using namespace trees;

namespace {

const FreeTree kK1 = parse_tree("").tree;
const FreeTree kK2 = parse_tree("0").tree;
const FreeTree kP3 = parse_tree("0 1").tree;
const FreeTree kP4 = parse_tree("0 1 2").tree;
const FreeTree kStar3 = parse_tree("0 0 0").tree;

double power_sum(const std::vector<double>& lam, int k) {
  double acc = 0.0;
  for (double l : lam) acc += std::pow(l, k);
  return acc;
}

}  // namespace

TEST_CASE("eigenvalues of the named small trees") {
  const std::vector<double> k2 = eigenvalues(kK2);
  REQUIRE(k2.size() == 2);
  CHECK(k2[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(k2[1] == doctest::Approx(-1.0).epsilon(1e-10));

  const std::vector<double> p3 = eigenvalues(kP3);
  REQUIRE(p3.size() == 3);
  CHECK(p3[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
  CHECK(p3[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
  CHECK(p3[2] == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-10));

  const std::vector<double> star = eigenvalues(kStar3);
  REQUIRE(star.size() == 4);
  CHECK(star[0] == doctest::Approx(std::sqrt(3.0)).epsilon(1e-10));
  CHECK(star[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
  CHECK(star[2] == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
  CHECK(star[3] == doctest::Approx(-std::sqrt(3.0)).epsilon(1e-10));

  // Path of four: plus/minus golden-ratio pairs.
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  const std::vector<double> p4 = eigenvalues(kP4);
  REQUIRE(p4.size() == 4);
  CHECK(p4[0] == doctest::Approx(phi).epsilon(1e-10));
  CHECK(p4[1] == doctest::Approx(phi - 1.0).epsilon(1e-10));
  CHECK(p4[2] == doctest::Approx(1.0 - phi).epsilon(1e-10));
  CHECK(p4[3] == doctest::Approx(-phi).epsilon(1e-10));

  CHECK(eigenvalues(kK1) == std::vector<double>{0.0});
}

TEST_CASE("spectra satisfy the trace identities on every small tree") {
  for (int n = 1; n <= 10; ++n) {
    for (const RootedTree& t : enumerate_trees(TreeKind::free_trees, n, std::max(2, n - 1))) {
      const std::vector<double> lam = eigenvalues(t.tree);
      CHECK(power_sum(lam, 1) == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
      CHECK(power_sum(lam, 2) == doctest::Approx(2.0 * (n - 1)).scale(1.0).epsilon(1e-9));
      for (size_t i = 0; i + 1 < lam.size(); ++i) CHECK(lam[i] >= lam[i + 1]);
    }
  }
}

TEST_CASE("walk moments match their closed forms") {
  for (int n = 2; n <= 8; ++n) {
    for (const RootedTree& t : enumerate_trees(TreeKind::free_trees, n, std::max(2, n - 1))) {
      const std::vector<Int> M = walk_moments(t.tree, 5);
      CHECK(M[0] == n);
      CHECK(M[1] == 0);
      CHECK(M[2] == 2 * (n - 1));
      CHECK(M[3] == 0);
      CHECK(M[5] == 0);
    }
  }
  CHECK(walk_moments(kStar3, 4)[4] == 18);
  CHECK(walk_moments(kK1, 3) == std::vector<Int>{1, 0, 0, 0});
}

TEST_CASE("walk moments agree with eigenvalue power sums") {
  for (int n = 1; n <= 10; ++n) {
    for (const RootedTree& t : enumerate_trees(TreeKind::free_trees, n, std::max(2, n - 1))) {
      const std::vector<double> lam = eigenvalues(t.tree);
      const std::vector<Int> M = walk_moments(t.tree, 12);
      for (int k = 1; k <= 6; ++k) {
        const double exact = to_double(M[2 * k]);
        CHECK(power_sum(lam, 2 * k) == doctest::Approx(exact).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("zagreb index") {
  CHECK(zagreb(kP4) == 10);
  CHECK(zagreb(kStar3) == 12);
  CHECK(zagreb(kK1) == 0);
  CHECK(zagreb(kK2) == 2);
}

TEST_CASE("estrada index matches the known closed forms") {
  CHECK(estrada(kK1, EstradaMode::eigen).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(estrada(kK2, EstradaMode::eigen).value ==
        doctest::Approx(std::exp(1.0) + std::exp(-1.0)).epsilon(1e-10));
  CHECK(estrada(kP3, EstradaMode::eigen).value ==
        doctest::Approx(1.0 + 2.0 * std::cosh(std::sqrt(2.0))).epsilon(1e-10));
  CHECK(estrada(kP3, EstradaMode::eigen).value == doctest::Approx(5.35637).epsilon(2e-5));
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  CHECK(estrada(kP4, EstradaMode::eigen).value ==
        doctest::Approx(2.0 * std::cosh(phi) + 2.0 * std::cosh(phi - 1.0)).epsilon(1e-10));
  CHECK(estrada(kStar3, EstradaMode::eigen).value ==
        doctest::Approx(2.0 + 2.0 * std::cosh(std::sqrt(3.0))).epsilon(1e-10));
}

TEST_CASE("the two estrada routes agree within the reported tail bound") {
  for (int n = 1; n <= 10; ++n) {
    for (const RootedTree& t : enumerate_trees(TreeKind::free_trees, n, 4)) {
      const double eig = estrada(t.tree, EstradaMode::eigen).value;
      const EstradaResult mom = estrada(t.tree, EstradaMode::moments, 30, 4);
      CHECK(std::fabs(eig - mom.value) <= mom.tail_bound + 1e-9);
      // A starved truncation must surface through a large bound, not silence.
      const EstradaResult crude = estrada(t.tree, EstradaMode::moments, 1, 4);
      CHECK(crude.tail_bound > 1.0);
      CHECK(std::fabs(eig - crude.value) <= crude.tail_bound);
    }
  }
}

TEST_CASE("default truncation order honours its tolerance") {
  for (int delta = 1; delta <= 6; ++delta) {
    const int K = default_estrada_terms(delta);
    CHECK(estrada_tail(delta, K) < 1e-9);
    CHECK((K == 1 || estrada_tail(delta, K - 1) >= 1e-9));
  }
  const EstradaResult auto_k = estrada(kP3, EstradaMode::moments, 0, 4);
  CHECK(auto_k.terms == default_estrada_terms(4));
  CHECK(auto_k.value == doctest::Approx(1.0 + 2.0 * std::cosh(std::sqrt(2.0))).epsilon(1e-8));
}

TEST_CASE("moment-degree inequality holds exhaustively") {
  CHECK(moment_degree_check(kP4, 1).ok);
  {
    const MomentDegreeWitness w = moment_degree_check(kStar3, 2);
    CHECK(w.ok);
    CHECK(w.violating_k == -1);
    CHECK(w.moment == 18);
    CHECK(w.degree_sum == 84);  // 3^4 + 3
  }
  for (int n = 2; n <= 12; ++n) {
    for (const RootedTree& t : enumerate_trees(TreeKind::free_trees, n, 4)) {
      CHECK(moment_degree_check(t.tree, 8).ok);
    }
  }
}

TEST_CASE("estrada upper bound and extremality over full enumerations") {
  for (int n = 2; n <= 10; ++n) {
    // Bounded-degree bound e^delta * n.
    for (const RootedTree& t : enumerate_trees(TreeKind::free_trees, n, 4)) {
      CHECK(estrada(t.tree, EstradaMode::eigen).value < std::exp(4.0) * n);
    }
    // Unrestricted trees: the path minimizes EE, the star maximizes it.
    double path_ee = 0.0, star_ee = 0.0;
    double min_ee = 1e300, max_ee = -1e300;
    for (const RootedTree& t : enumerate_trees(TreeKind::free_trees, n, std::max(2, n - 1))) {
      const double ee = estrada(t.tree, EstradaMode::eigen).value;
      min_ee = std::min(min_ee, ee);
      max_ee = std::max(max_ee, ee);
      const int md = max_degree(t.tree);
      if (md <= 2) path_ee = ee;
      if (md == n - 1) star_ee = ee;
    }
    CHECK(path_ee == doctest::Approx(min_ee).epsilon(1e-12));
    CHECK(star_ee == doctest::Approx(max_ee).epsilon(1e-12));
  }
}

TEST_CASE("spectral summary bundles the pieces consistently") {
  const SpectralSummary s = summarize_spectrum(kStar3, 6);
  CHECK(s.n == 4);
  CHECK(s.zagreb == 12);
  REQUIRE(s.moments.size() == 7);
  CHECK(s.moments[2] == 6);
  CHECK(s.moments[4] == 18);
  CHECK(s.moments[6] == 54);
  CHECK(s.ee == doctest::Approx(estrada(kStar3, EstradaMode::eigen).value).epsilon(1e-12));
  CHECK(s.eigenvalues == eigenvalues(kStar3));
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(walk_moments(kP3, -1), std::invalid_argument);
  CHECK_THROWS_AS(estrada(kP3, EstradaMode::moments, 5, 0), std::invalid_argument);
  CHECK_THROWS_AS(estrada(kP3, EstradaMode::moments, 5, 1), std::invalid_argument);
  CHECK_THROWS_AS(estrada(kP3, EstradaMode::moments, -2, 4), std::invalid_argument);
  CHECK_THROWS_AS(moment_degree_check(kP3, 0), std::invalid_argument);
  FreeTree broken;
  broken.n = 2;
  CHECK_THROWS_AS(eigenvalues(broken), std::invalid_argument);
}
