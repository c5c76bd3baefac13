#include "trees/series.hpp"

#include <cmath>
#include <random>

#include "doctest.h"

using namespace trees;

namespace {

UniSeries from_ints(const std::vector<long>& v) {
  UniSeries f(static_cast<int>(v.size()) - 1);
  for (size_t i = 0; i < v.size(); ++i) f.set_coeff(static_cast<int>(i), rat_of(v[i]));
  return f;
}

UniSeries random_series(std::mt19937& rng, int order, bool zero_constant) {
  std::uniform_int_distribution<int> coef(0, 4);
  UniSeries f(order);
  for (int i = zero_constant ? 1 : 0; i <= order; ++i) f.set_coeff(i, rat_of(coef(rng)));
  return f;
}

}  // namespace

TEST_CASE("multiset operator on monomials and small polynomials") {
  // Unordered pairs from a single item of size 1: one multiset of size 2.
  const UniSeries x = UniSeries::monomial(6, 1);
  CHECK(cycle_index_multiset(2, x) == UniSeries::monomial(6, 2));

  // Multisets of 3 items drawn from {size 1, size 2}: one of each total size 3..6.
  const UniSeries f = from_ints({0, 1, 1, 0, 0, 0, 0});
  CHECK(cycle_index_multiset(3, f) == from_ints({0, 0, 0, 1, 1, 1, 1}));

  // Empty multiset: the constant series 1.
  CHECK(cycle_index_multiset(0, f) == UniSeries::constant(6, rat_of(1)));

  // Bivariate: both variables are raised to the cycle length.
  const BiSeries xu = BiSeries::monomial(6, 1, 1);
  CHECK(cycle_index_multiset(2, xu) == BiSeries::monomial(6, 2, 2));

  CHECK_THROWS_AS(cycle_index_multiset(2, UniSeries::constant(4, rat_of(1))),
                  std::invalid_argument);
  CHECK_THROWS_AS(cycle_index_multiset(-1, x), std::invalid_argument);
}

TEST_CASE("directional derivative: frozen values") {
  const UniSeries f = from_ints({0, 1, 1, 0, 0, 0, 0, 0, 0});
  const UniSeries g = UniSeries::monomial(8, 3);
  CHECK(multiset_directional_derivative(1, f, g) == g);

  const UniSeries x = UniSeries::monomial(4, 1);
  CHECK(multiset_directional_derivative(3, x, x) == UniSeries::monomial(4, 3));

  // eps-part of Z(S_4; f + eps x^2): expanded by hand via the cycle types of
  // S_4 acting on the first-power slot; equals x^5 + x^6 + x^7 + x^8.
  const UniSeries g2 = UniSeries::monomial(8, 2);
  CHECK(multiset_directional_derivative(4, f, g2) ==
        from_ints({0, 0, 0, 0, 0, 1, 1, 1, 1}));

  CHECK_THROWS_AS(multiset_directional_derivative(0, f, g), std::invalid_argument);
}

TEST_CASE("directional derivative reduces the multiset size by one") {
  std::mt19937 rng(20240817);
  for (int trial = 0; trial < 40; ++trial) {
    const int order = 10;
    const UniSeries f = random_series(rng, order, true);
    const UniSeries g = random_series(rng, order, true);
    for (int m = 1; m <= 6; ++m) {
      CHECK(multiset_directional_derivative(m, f, g) ==
            g * cycle_index_multiset(m - 1, f));
    }
  }
}

TEST_CASE("series ring laws and truncation") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    const UniSeries a = random_series(rng, 9, false);
    const UniSeries b = random_series(rng, 9, false);
    const UniSeries c = random_series(rng, 9, false);
    CHECK((a + b) + c == a + (b + c));
    CHECK(a * b == b * a);
    CHECK(a * (b + c) == a * b + a * c);
    CHECK((a * b) * c == a * (b * c));
  }
  const UniSeries longer = UniSeries::monomial(12, 2);
  const UniSeries shorter = UniSeries::monomial(5, 1);
  CHECK((longer * shorter).order() == 5);
  CHECK((longer + shorter).order() == 5);
}

TEST_CASE("multiset operator preserves non-negativity") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const UniSeries f = random_series(rng, 12, true);
    for (int m = 0; m <= 6; ++m) {
      const UniSeries z = cycle_index_multiset(m, f);
      for (int i = 0; i <= z.order(); ++i) CHECK(z.coeff(i) >= 0);
    }
  }
}

TEST_CASE("bivariate operations specialize at u=1 to univariate ones") {
  std::mt19937 rng(1234);
  std::uniform_int_distribution<int> coef(0, 3);
  std::uniform_int_distribution<int> uexp(0, 4);
  for (int trial = 0; trial < 20; ++trial) {
    BiSeries a(8), b(8);
    for (int i = 1; i <= 8; ++i) {
      UPoly pa, pb;
      pa.add_scaled(UPoly::term(uexp(rng), rat_of(coef(rng))), rat_of(1));
      pb.add_scaled(UPoly::term(uexp(rng), rat_of(coef(rng))), rat_of(1));
      a.set_coeff(i, pa);
      b.set_coeff(i, pb);
    }
    CHECK((a * b).at_u_one() == a.at_u_one() * b.at_u_one());
    CHECK((a + b).at_u_one() == a.at_u_one() + b.at_u_one());
    for (int m = 0; m <= 4; ++m)
      CHECK(cycle_index_multiset(m, a).at_u_one() ==
            cycle_index_multiset(m, a.at_u_one()));
  }
}

TEST_CASE("u-derivative weights at u=1") {
  // x^3 u^2: first derivative weight k = 2, second k(k-1) = 2.
  const BiSeries f = BiSeries::monomial(4, 3, 2);
  CHECK(f.u_derivative_at_one(1) == UniSeries::monomial(4, 3, rat_of(2)));
  CHECK(f.u_derivative_at_one(2) == UniSeries::monomial(4, 3, rat_of(2)));
  CHECK(f.at_u_one() == UniSeries::monomial(4, 3));
}

TEST_CASE("numeric lower-bound evaluation") {
  CHECK(eval_lower_bound(UniSeries(10), 0.3) == 0.0);

  UniSeries geo(20);
  for (int i = 0; i <= 20; ++i) geo.set_coeff(i, rat_of(1));
  CHECK(eval_lower_bound(geo, 0.5) == doctest::Approx(2.0 - std::pow(2.0, -20)).epsilon(1e-14));

  // Lower bounds increase with the truncation order.
  const double v10 = eval_lower_bound(geo.truncated(10), 0.5);
  const double v20 = eval_lower_bound(geo, 0.5);
  CHECK(v10 < v20);
  CHECK(v20 < 2.0);

  CHECK_THROWS_AS(eval_lower_bound(geo, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(eval_lower_bound(geo, -0.1), std::invalid_argument);
  UniSeries neg(3);
  neg.set_coeff(1, rat_of(-1));
  CHECK_THROWS_AS(eval_lower_bound(neg, 0.2), std::invalid_argument);
}

TEST_CASE("square-root extrapolation") {
  // Exact model data: value = 2 - sqrt(0.25 - x).
  std::vector<std::pair<double, double>> samples;
  for (int j = 3; j <= 10; ++j) {
    const double x = 0.25 * (1.0 - std::pow(2.0, -j));
    samples.emplace_back(x, 2.0 - std::sqrt(0.25 - x));
  }
  const ExtrapolationFit fit = sqrt_extrapolate(samples, 0.25);
  CHECK(fit.g == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.h == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.residual < 1e-12);

  // Constant data: h fits to zero.
  std::vector<std::pair<double, double>> flat;
  for (int j = 0; j < 5; ++j) flat.emplace_back(0.01 * j, 3.5);
  const ExtrapolationFit cfit = sqrt_extrapolate(flat, 0.25);
  CHECK(cfit.g == doctest::Approx(3.5).epsilon(1e-12));
  CHECK(std::abs(cfit.h) < 1e-10);
  CHECK(cfit.residual < 1e-12);

  CHECK_THROWS_AS(sqrt_extrapolate({{0.1, 1.0}, {0.2, 1.1}}, 0.25), std::invalid_argument);
  CHECK_THROWS_AS(sqrt_extrapolate({{0.1, 1.0}, {0.3, 1.1}, {0.2, 1.2}}, 0.25),
                  std::invalid_argument);
  CHECK_THROWS_AS(sqrt_extrapolate({{0.1, 1.0}, {0.1, 1.1}, {0.2, 1.2}}, 0.25),
                  std::invalid_argument);
}

TEST_CASE("stretch, shift, derivative") {
  const UniSeries f = from_ints({0, 1, 2, 3});
  CHECK(f.stretched(2) == from_ints({0, 0, 1, 0}));
  CHECK(f.shifted(1) == from_ints({0, 0, 1, 2}));
  CHECK(f.derivative() == from_ints({1, 4, 9, 0}));
  const BiSeries b = BiSeries::monomial(6, 2, 3);
  CHECK(b.stretched(2) == BiSeries::monomial(6, 4, 6));
  CHECK(b.u_shifted(2) == BiSeries::monomial(6, 2, 5));
}
