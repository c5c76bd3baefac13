#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "trees/rational.hpp"

namespace trees {

// Truncated power series over exact rationals. A series of order N stores
// coefficients of x^0..x^N; arithmetic truncates to the smaller operand order.
class UniSeries {
 public:
  explicit UniSeries(int order);
  static UniSeries monomial(int order, int degree, const Rat& c = Rat(1));
  static UniSeries constant(int order, const Rat& c);

  int order() const { return static_cast<int>(c_.size()) - 1; }
  const Rat& coeff(int i) const;
  void set_coeff(int i, Rat v);
  const std::vector<Rat>& coeffs() const { return c_; }

  bool is_zero() const;
  bool zero_constant_term() const { return c_[0] == 0; }

  UniSeries truncated(int new_order) const;  // new_order <= order()
  UniSeries scaled(const Rat& w) const;
  UniSeries stretched(int d) const;  // x -> x^d
  UniSeries shifted(int s) const;    // multiply by x^s
  UniSeries derivative() const;      // formal d/dx; top coefficient dropped

  UniSeries& operator+=(const UniSeries& o);
  UniSeries& operator-=(const UniSeries& o);
  friend UniSeries operator+(UniSeries a, const UniSeries& b) { return a += b; }
  friend UniSeries operator-(UniSeries a, const UniSeries& b) { return a -= b; }
  friend UniSeries operator*(const UniSeries& a, const UniSeries& b);
  UniSeries pow(int e) const;  // e >= 0

  bool operator==(const UniSeries& o) const { return c_ == o.c_; }
  bool operator!=(const UniSeries& o) const { return !(*this == o); }

 private:
  std::vector<Rat> c_;
};

// Sparse polynomial in the marking variable u: sorted (exponent, coefficient)
// pairs, no zero coefficients.
class UPoly {
 public:
  UPoly() = default;
  static UPoly term(long long uexp, Rat c);

  bool empty() const { return t_.empty(); }
  const std::vector<std::pair<long long, Rat>>& terms() const { return t_; }
  Rat coeff(long long uexp) const;

  void add_scaled(const UPoly& o, const Rat& w, long long ushift = 0);
  UPoly scaled(const Rat& w) const;
  UPoly shifted(long long ushift) const;
  UPoly stretched(int d) const;  // u -> u^d

  friend UPoly operator+(const UPoly& a, const UPoly& b);
  friend UPoly operator*(const UPoly& a, const UPoly& b);

  Rat at_one() const;                 // sum of coefficients
  Rat weighted_sum(int falling) const;  // sum c * k(k-1)...(k-falling+1)

  bool operator==(const UPoly& o) const { return t_ == o.t_; }

 private:
  std::vector<std::pair<long long, Rat>> t_;
};

// Truncated bivariate series: for each x-degree up to the order, a sparse
// polynomial in u. Coefficients are exact rationals.
class BiSeries {
 public:
  explicit BiSeries(int order);
  static BiSeries monomial(int order, int degree, long long uexp, const Rat& c = Rat(1));
  static BiSeries lift(const UniSeries& f, long long uexp = 0);

  int order() const { return static_cast<int>(c_.size()) - 1; }
  const UPoly& coeff(int i) const;
  void set_coeff(int i, UPoly p);
  bool zero_constant_term() const { return c_[0].empty(); }

  BiSeries truncated(int new_order) const;
  BiSeries scaled(const Rat& w) const;
  BiSeries stretched(int d) const;    // x -> x^d and u -> u^d
  BiSeries shifted(int s) const;      // multiply by x^s
  BiSeries u_shifted(long long k) const;  // multiply by u^k

  UniSeries at_u_one() const;
  // d/du at u=1 and d^2/du^2 at u=1 (factorial weights k, k(k-1)).
  UniSeries u_derivative_at_one(int falling = 1) const;

  BiSeries& operator+=(const BiSeries& o);
  BiSeries& operator-=(const BiSeries& o);
  friend BiSeries operator+(BiSeries a, const BiSeries& b) { return a += b; }
  friend BiSeries operator-(BiSeries a, const BiSeries& b) { return a -= b; }
  friend BiSeries operator*(const BiSeries& a, const BiSeries& b);

  bool operator==(const BiSeries& o) const { return c_ == o.c_; }
  bool operator!=(const BiSeries& o) const { return !(*this == o); }

 private:
  std::vector<UPoly> c_;
};

// Least-squares fit of samples (x, value) to the model  value = g - h*sqrt(x0 - x).
struct ExtrapolationFit {
  double g = 0.0;
  double h = 0.0;
  double x0 = 0.0;
  double residual = 0.0;  // root-mean-square residual of the fit
};

namespace cycles {
// One conjugacy class of S_m: parts[(d, multiplicity)] with weight 1/z,
// z = prod d^{m_d} * m_d!. Sum of weights over classes is 1.
struct CycleType {
  std::vector<std::pair<int, int>> parts;
  Rat weight;
};
const std::vector<CycleType>& cycle_types(int m);  // m >= 0, memoized
}  // namespace cycles

// Multiset operator Z(S_m; f): substitute s_d -> f(x^d) (and u -> u^d for
// bivariate f) in the cycle-index polynomial of the symmetric group S_m.
// Requires m >= 0 and f with zero constant term.
UniSeries cycle_index_multiset(int m, const UniSeries& f);
BiSeries cycle_index_multiset(int m, const BiSeries& f);

// First-order coefficient in epsilon of Z(S_m; f + eps*g), the perturbation
// entering through the first-power slot s_1 (higher slots stay at f(x^d)).
// Requires m >= 1; f, g with zero constant term.
UniSeries multiset_directional_derivative(int m, const UniSeries& f, const UniSeries& g);
BiSeries multiset_directional_derivative(int m, const BiSeries& f, const BiSeries& g);

// Numeric value of the truncated series at 0 <= x < 1; for series with
// non-negative coefficients this is a lower bound of the full sum, monotone
// in the truncation order. Rejects negative coefficients.
double eval_lower_bound(const UniSeries& f, double x);

// Fit value ~ g - h*sqrt(x0 - x). Requires >= 3 samples, distinct x, all x < x0.
ExtrapolationFit sqrt_extrapolate(const std::vector<std::pair<double, double>>& samples,
                                  double x0);

}  // namespace trees
