#include "trees/counting.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

namespace trees {

namespace {

// One cycle-type monomial prod_d (p(x^d))^{m_d}, flattened to its sorted part
// list, e.g. {(1,2),(2,1)} -> [1,1,2]. Products are memoized per prefix and
// extended one coefficient at a time, so the whole bootstrap is quadratic.
struct Bootstrap {
  explicit Bootstrap(int delta, int order) : delta(delta), order(order), p(order + 1, Rat(0)) {
    for (int j = 0; j <= delta; ++j) {
      std::vector<std::pair<Rat, std::vector<int>>> layer;
      for (const auto& ct : cycles::cycle_types(j)) {
        std::vector<int> parts;
        for (const auto& [d, mult] : ct.parts)
          for (int i = 0; i < mult; ++i) parts.push_back(d);
        for (size_t len = 2; len <= parts.size(); ++len)
          chains.try_emplace(std::vector<int>(parts.begin(), parts.begin() + len));
        layer.emplace_back(ct.weight, std::move(parts));
      }
      monomials.push_back(std::move(layer));
    }
    for (auto& [parts, memo] : chains) memo.assign(1, Rat(0));  // valuation >= 2
    run();
  }

  // Coefficient m of p(x^d).
  Rat stretched(int d, int m) const { return m % d == 0 ? p[m / d] : Rat(0); }

  // Coefficient m of the product for a part list, valid for m <= extended.
  Rat mono_coeff(const std::vector<int>& parts, int m) const {
    if (parts.empty()) return m == 0 ? Rat(1) : Rat(0);
    if (parts.size() == 1) return stretched(parts[0], m);
    return chains.at(parts)[m];
  }

  // Coefficient n of x * sum_{j<=jmax} Z(S_j; p).
  Rat rhs_coeff(int jmax, int n) const {
    if (n < 1) return Rat(0);
    Rat acc(0);
    for (int j = 0; j <= jmax; ++j)
      for (const auto& [w, parts] : monomials[j]) acc += w * mono_coeff(parts, n - 1);
    return acc;
  }

  UniSeries assemble(int jmax) const {
    UniSeries f(order);
    for (int n = 1; n <= order; ++n) f.set_coeff(n, rhs_coeff(jmax, n));
    return f;
  }

  int delta;
  int order;
  std::vector<Rat> p;
  std::map<std::vector<int>, std::vector<Rat>> chains;
  std::vector<std::vector<std::pair<Rat, std::vector<int>>>> monomials;  // by j

 private:
  void run() {
    for (int n = 1; n <= order; ++n) {
      // Every product of two constant-term-free factors has valuation >= 2,
      // so rhs_coeff(n) only reads chain entries < n: p[n] closes first.
      p[n] = rhs_coeff(delta - 1, n);
      for (auto& [parts, memo] : chains) {
        const std::vector<int> prefix(parts.begin(), parts.end() - 1);
        const int last = parts.back();
        Rat acc(0);
        for (int k = last; k < n; k += last) acc += mono_coeff(prefix, n - k) * p[k / last];
        memo.push_back(std::move(acc));  // index n
      }
    }
  }
};

}  // namespace

CountingBundle counting_series(int delta, int order) {
  if (delta < 2) throw std::invalid_argument("degree bound must be >= 2");
  if (order < 1) throw std::invalid_argument("series order must be >= 1");
  Bootstrap boot(delta, order);
  CountingBundle bundle{delta, order, UniSeries(order), boot.assemble(delta - 2),
                        boot.assemble(delta), UniSeries(order)};
  for (int n = 0; n <= order; ++n) bundle.p.set_coeff(n, boot.p[n]);
  // Otter pairing at u = 1: t = r - (p^2 - p(x^2)) / 2.
  const Rat half(1, 2);
  for (int n = 0; n <= order; ++n) {
    Rat v = bundle.r.coeff(n) - half * boot.mono_coeff({1, 1}, n);
    if (n % 2 == 0) v += half * boot.p[n / 2];
    bundle.t.set_coeff(n, std::move(v));
  }
  return bundle;
}

namespace {

// Phi(x, y) = x * sum_{j<=jmax} Z(S_j; s_1 = y, s_d = p(x^d)), the planted
// fixed-point map with an independent first slot. The d >= 2 slots sit at
// x^d <= x0^2, deep inside the disc, where the truncated tail is negligible.
double phi_slots(const UniSeries& p, int jmax, double x, double y) {
  double acc = 0.0;
  for (int j = 0; j <= jmax; ++j) {
    for (const auto& ct : cycles::cycle_types(j)) {
      double term = to_double(ct.weight);
      for (const auto& [d, mult] : ct.parts) {
        const double slot = d == 1 ? y : eval_lower_bound(p, std::pow(x, d));
        for (int i = 0; i < mult; ++i) term *= slot;
      }
      acc += term;
    }
  }
  return x * acc;
}

}  // namespace

SingularityEstimate find_x0(int delta, int order, double tol) {
  if (delta < 3) throw std::invalid_argument("degree bound must be >= 3 for singular analysis");
  if (tol <= 0) throw std::invalid_argument("tolerance must be positive");
  const CountingBundle bundle = counting_series(delta, order);
  const UniSeries& pr = bundle.p_restricted;

  // Stage 1: bisection on the truncated lower bound.
  double lo = 0.0, hi = 0.5;
  if (eval_lower_bound(pr, hi) < 1.0)
    throw std::runtime_error(
        "truncated series stays below 1 on (0, 1/2]; increase order to bracket x0");
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    (eval_lower_bound(pr, mid) < 1.0 ? lo : hi) = mid;
  }
  const double bracket_width = hi - lo;
  double x = 0.5 * (lo + hi);

  // Stage 2: correct the truncation bias. The truncated series evaluated on
  // the geometric grid x_j = x (1 - 2^-j) is accurate (the tail dies off),
  // and the square-root model extends those values to x itself; move x until
  // the extrapolated value hits 1.
  auto extrapolated = [&](double x_hat) {
    std::vector<std::pair<double, double>> samples;
    for (int j = 3; j <= 10; ++j) {
      const double xj = x_hat * (1.0 - std::ldexp(1.0, -j));
      samples.emplace_back(xj, eval_lower_bound(pr, xj));
    }
    return sqrt_extrapolate(samples, x_hat).g - 1.0;
  };
  {
    double a = x * 0.995, b = std::min(0.5, x * 1.005);
    double fa = extrapolated(a), fb = extrapolated(b);
    for (int it = 0; it < 60 && fa * fb < 0 && b - a > 1e-12; ++it) {
      const double mid = 0.5 * (a + b);
      const double fm = extrapolated(mid);
      if (fa * fm <= 0) {
        b = mid;
        fb = fm;
      } else {
        a = mid;
        fa = fm;
      }
    }
    if (fa * fb <= 0) x = 0.5 * (a + b);
  }

  // Stage 3: Newton on the characteristic system
  //   G1 = y - Phi(x, y) = 0,  G2 = dPhi/dy (x, y) - 1 = 0.
  // dPhi/dy lowers the symmetric-group index by one, so it is the restricted
  // sum with a free first slot. The fold Jacobian is nonsingular.
  double y = eval_lower_bound(bundle.p, x * 0.999);
  auto G = [&](double xv, double yv, double& g1, double& g2) {
    g1 = yv - phi_slots(bundle.p, delta - 1, xv, yv);
    g2 = phi_slots(bundle.p, delta - 2, xv, yv) - 1.0;
  };
  for (int it = 0; it < 80; ++it) {
    double g1, g2;
    G(x, y, g1, g2);
    const double hx = 1e-7 * (1.0 + std::fabs(x));
    const double hy = 1e-7 * (1.0 + std::fabs(y));
    double g1x, g2x, g1y, g2y;
    G(x + hx, y, g1x, g2x);
    G(x, y + hy, g1y, g2y);
    const double a11 = (g1x - g1) / hx, a12 = (g1y - g1) / hy;
    const double a21 = (g2x - g2) / hx, a22 = (g2y - g2) / hy;
    const double det = a11 * a22 - a12 * a21;
    if (det == 0.0) break;
    const double dx = (g1 * a22 - g2 * a12) / det;
    const double dy = (g2 * a11 - g1 * a21) / det;
    x -= dx;
    y -= dy;
    if (std::fabs(dx) + std::fabs(dy) < 1e-14) break;
  }

  SingularityEstimate est;
  est.x0 = x;
  est.p_at_x0 = y;
  est.truncation = order;
  est.bracket_width = bracket_width;
  if (delta <= 8 && !(x > 0.0 && x <= 0.5 + 1e-9))
    throw std::logic_error("singularity left the expected interval (0, 1/2]");
  return est;
}

}  // namespace trees
