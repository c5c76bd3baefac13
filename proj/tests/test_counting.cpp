#include "trees/counting.hpp"

#include <cmath>

#include "trees/tree.hpp"

#include "doctest.h"

using namespace trees;

namespace {

bool nonneg_integer(const Rat& q) { return q >= 0 && q.get_den() == 1; }

// Richardson estimate of lim p_n / p_{n+1} from three ratio samples,
// assuming a smooth 1/n expansion of the ratio.
double ratio_limit(const UniSeries& p, int n3) {
  const int ns[3] = {n3 - 80, n3 - 40, n3};
  double h[3], r[3];
  for (int i = 0; i < 3; ++i) {
    h[i] = 1.0 / ns[i];
    r[i] = to_double(p.coeff(ns[i])) / to_double(p.coeff(ns[i] + 1));
  }
  double acc = 0.0;
  for (int i = 0; i < 3; ++i) {
    double w = 1.0;
    for (int j = 0; j < 3; ++j)
      if (j != i) w *= h[j] / (h[j] - h[i]);
    acc += w * r[i];
  }
  return acc;
}

}  // namespace

TEST_CASE("counting series matches the documented prefixes") {
  const CountingBundle b4 = counting_series(4, 8);
  const std::vector<long> t4 = {0, 1, 1, 1, 2, 3, 5, 9, 18};
  const std::vector<long> p4 = {0, 1, 1, 2, 4, 8};
  for (size_t n = 0; n < t4.size(); ++n) CHECK(b4.t.coeff(static_cast<int>(n)) == Rat(t4[n]));
  for (size_t n = 0; n < p4.size(); ++n) CHECK(b4.p.coeff(static_cast<int>(n)) == Rat(p4[n]));
  CHECK(b4.p.coeff(1) == 1);
  CHECK(b4.r.coeff(1) == 1);

  const CountingBundle b2 = counting_series(2, 30);
  for (int n = 1; n <= 30; ++n) CHECK(b2.t.coeff(n) == 1);

  CHECK_THROWS_AS(counting_series(1, 10), std::invalid_argument);
  CHECK_THROWS_AS(counting_series(3, 0), std::invalid_argument);
}

TEST_CASE("counting series coefficients are non-negative integers") {
  for (const auto& [delta, order] : {std::pair{3, 120}, {4, 80}, {5, 60}}) {
    const CountingBundle b = counting_series(delta, order);
    for (int n = 0; n <= order; ++n) {
      CHECK(nonneg_integer(b.p.coeff(n)));
      CHECK(nonneg_integer(b.p_restricted.coeff(n)));
      CHECK(nonneg_integer(b.r.coeff(n)));
      CHECK(nonneg_integer(b.t.coeff(n)));
      CHECK(b.p_restricted.coeff(n) <= b.p.coeff(n));
    }
  }
}

TEST_CASE("counting series agrees with exhaustive enumeration") {
  for (const auto& [delta, nmax] : {std::pair{4, 12}, {3, 13}}) {
    const CountingBundle b = counting_series(delta, nmax);
    for (int n = 1; n <= nmax; ++n) {
      CHECK(b.p.coeff(n) ==
            Rat(static_cast<long>(enumerate_trees(TreeKind::planted, n, delta).size())));
      CHECK(b.r.coeff(n) ==
            Rat(static_cast<long>(enumerate_trees(TreeKind::rooted, n, delta).size())));
      CHECK(b.t.coeff(n) ==
            Rat(static_cast<long>(enumerate_trees(TreeKind::free_trees, n, delta).size())));
    }
  }
}

TEST_CASE("free-tree counts grow with the degree bound") {
  const CountingBundle b3 = counting_series(3, 24);
  const CountingBundle b4 = counting_series(4, 24);
  const CountingBundle b5 = counting_series(5, 24);
  for (int n = 1; n <= 24; ++n) {
    CHECK(b3.t.coeff(n) <= b4.t.coeff(n));
    CHECK(b4.t.coeff(n) <= b5.t.coeff(n));
  }
}

TEST_CASE("find_x0 reproduces the known quartic-bound constants") {
  const SingularityEstimate est = find_x0(4, 300, 1e-8);
  CHECK(std::fabs(est.x0 - 0.3551817) <= 5e-6);
  CHECK(std::fabs(est.p_at_x0 - 1.117421) <= 5e-5);
  CHECK(est.bracket_width <= 1e-8);
  CHECK(est.truncation == 300);
}

TEST_CASE("find_x0 agrees with the coefficient-ratio limit") {
  const CountingBundle b3 = counting_series(3, 401);
  const SingularityEstimate est = find_x0(3, 400, 1e-9);
  CHECK(std::fabs(est.x0 - ratio_limit(b3.p, 400)) <= 1e-4);
  CHECK(est.x0 <= 0.5);

  const SingularityEstimate est4 = find_x0(4, 200, 1e-9);
  const SingularityEstimate est5 = find_x0(5, 200, 1e-9);
  CHECK(est.x0 > est4.x0);
  CHECK(est4.x0 > est5.x0);
  CHECK(est5.x0 > 0.0);
}

TEST_CASE("find_x0 rejects bad arguments and too-coarse truncations") {
  CHECK_THROWS_AS(find_x0(2, 100, 1e-8), std::invalid_argument);
  CHECK_THROWS_AS(find_x0(4, 100, -1.0), std::invalid_argument);
  CHECK_THROWS_WITH_AS(find_x0(9, 2, 1e-8), doctest::Contains("increase order"),
                       std::runtime_error);
}
