#include "trees/series.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace trees {

UniSeries::UniSeries(int order) {
  if (order < 0) throw std::invalid_argument("series order must be >= 0");
  c_.assign(order + 1, Rat(0));
}

UniSeries UniSeries::monomial(int order, int degree, const Rat& c) {
  UniSeries f(order);
  if (degree < 0) throw std::invalid_argument("monomial degree must be >= 0");
  if (degree <= order) f.c_[degree] = c;
  return f;
}

UniSeries UniSeries::constant(int order, const Rat& c) { return monomial(order, 0, c); }

const Rat& UniSeries::coeff(int i) const {
  static const Rat zero(0);
  if (i < 0) throw std::out_of_range("negative coefficient index");
  if (i >= static_cast<int>(c_.size())) return zero;
  return c_[i];
}

void UniSeries::set_coeff(int i, Rat v) {
  if (i < 0 || i >= static_cast<int>(c_.size())) throw std::out_of_range("coefficient index");
  c_[i] = std::move(v);
}

bool UniSeries::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const Rat& q) { return q == 0; });
}

UniSeries UniSeries::truncated(int new_order) const {
  if (new_order < 0 || new_order > order()) throw std::invalid_argument("bad truncation order");
  UniSeries f(new_order);
  std::copy(c_.begin(), c_.begin() + new_order + 1, f.c_.begin());
  return f;
}

UniSeries UniSeries::scaled(const Rat& w) const {
  UniSeries f(order());
  for (size_t i = 0; i < c_.size(); ++i) f.c_[i] = c_[i] * w;
  return f;
}

UniSeries UniSeries::stretched(int d) const {
  if (d < 1) throw std::invalid_argument("stretch factor must be >= 1");
  UniSeries f(order());
  for (int i = 0; i * d <= order(); ++i) f.c_[i * d] = c_[i];
  return f;
}

UniSeries UniSeries::shifted(int s) const {
  if (s < 0) throw std::invalid_argument("shift must be >= 0");
  UniSeries f(order());
  for (int i = 0; i + s <= order(); ++i) f.c_[i + s] = c_[i];
  return f;
}

UniSeries UniSeries::derivative() const {
  UniSeries f(order());
  for (int i = 0; i + 1 <= order(); ++i) f.c_[i] = c_[i + 1] * (i + 1);
  return f;
}

UniSeries& UniSeries::operator+=(const UniSeries& o) {
  if (o.order() < order()) *this = truncated(o.order());
  for (int i = 0; i <= order(); ++i) c_[i] += o.c_[i];
  return *this;
}

UniSeries& UniSeries::operator-=(const UniSeries& o) {
  if (o.order() < order()) *this = truncated(o.order());
  for (int i = 0; i <= order(); ++i) c_[i] -= o.c_[i];
  return *this;
}

UniSeries operator*(const UniSeries& a, const UniSeries& b) {
  const int n = std::min(a.order(), b.order());
  UniSeries f(n);
  Rat tmp;
  for (int i = 0; i <= n; ++i) {
    if (a.c_[i] == 0) continue;
    for (int j = 0; i + j <= n; ++j) {
      if (b.c_[j] == 0) continue;
      tmp = a.c_[i] * b.c_[j];
      f.c_[i + j] += tmp;
    }
  }
  return f;
}

UniSeries UniSeries::pow(int e) const {
  if (e < 0) throw std::invalid_argument("negative power");
  UniSeries acc = UniSeries::constant(order(), Rat(1));
  for (int k = 0; k < e; ++k) acc = acc * *this;
  return acc;
}

// ---------------------------------------------------------------------------

UPoly UPoly::term(long long uexp, Rat c) {
  UPoly p;
  if (c != 0) p.t_.emplace_back(uexp, std::move(c));
  return p;
}

Rat UPoly::coeff(long long uexp) const {
  auto it = std::lower_bound(t_.begin(), t_.end(), uexp,
                             [](const auto& a, long long e) { return a.first < e; });
  if (it != t_.end() && it->first == uexp) return it->second;
  return Rat(0);
}

void UPoly::add_scaled(const UPoly& o, const Rat& w, long long ushift) {
  if (o.t_.empty() || w == 0) return;
  std::vector<std::pair<long long, Rat>> merged;
  merged.reserve(t_.size() + o.t_.size());
  size_t i = 0, j = 0;
  while (i < t_.size() || j < o.t_.size()) {
    const long long eo = j < o.t_.size() ? o.t_[j].first + ushift : 0;
    if (j == o.t_.size() || (i < t_.size() && t_[i].first < eo)) {
      merged.push_back(std::move(t_[i++]));
    } else if (i == t_.size() || t_[i].first > eo) {
      merged.emplace_back(eo, o.t_[j].second * w);
      ++j;
    } else {
      Rat c = t_[i].second + o.t_[j].second * w;
      if (c != 0) merged.emplace_back(eo, std::move(c));
      ++i;
      ++j;
    }
  }
  t_ = std::move(merged);
}

UPoly UPoly::scaled(const Rat& w) const {
  UPoly p;
  if (w == 0) return p;
  p.t_.reserve(t_.size());
  for (const auto& [e, c] : t_) p.t_.emplace_back(e, c * w);
  return p;
}

UPoly UPoly::shifted(long long ushift) const {
  UPoly p = *this;
  for (auto& [e, c] : p.t_) e += ushift;
  return p;
}

UPoly UPoly::stretched(int d) const {
  UPoly p = *this;
  for (auto& [e, c] : p.t_) e *= d;
  return p;
}

UPoly operator+(const UPoly& a, const UPoly& b) {
  UPoly r = a;
  r.add_scaled(b, Rat(1));
  return r;
}

UPoly operator*(const UPoly& a, const UPoly& b) {
  UPoly r;
  if (a.t_.empty() || b.t_.empty()) return r;
  std::map<long long, Rat> acc;
  for (const auto& [ea, ca] : a.t_)
    for (const auto& [eb, cb] : b.t_) acc[ea + eb] += ca * cb;
  r.t_.reserve(acc.size());
  for (auto& [e, c] : acc)
    if (c != 0) r.t_.emplace_back(e, std::move(c));
  return r;
}

Rat UPoly::at_one() const {
  Rat s(0);
  for (const auto& [e, c] : t_) s += c;
  return s;
}

Rat UPoly::weighted_sum(int falling) const {
  Rat s(0);
  for (const auto& [e, c] : t_) {
    Rat w(1);
    for (int j = 0; j < falling; ++j) w *= Rat(static_cast<long>(e - j));
    s += c * w;
  }
  return s;
}

// ---------------------------------------------------------------------------

BiSeries::BiSeries(int order) {
  if (order < 0) throw std::invalid_argument("series order must be >= 0");
  c_.assign(order + 1, UPoly());
}

BiSeries BiSeries::monomial(int order, int degree, long long uexp, const Rat& c) {
  BiSeries f(order);
  if (degree < 0) throw std::invalid_argument("monomial degree must be >= 0");
  if (degree <= order) f.c_[degree] = UPoly::term(uexp, c);
  return f;
}

BiSeries BiSeries::lift(const UniSeries& f, long long uexp) {
  BiSeries g(f.order());
  for (int i = 0; i <= f.order(); ++i)
    if (f.coeff(i) != 0) g.c_[i] = UPoly::term(uexp, f.coeff(i));
  return g;
}

const UPoly& BiSeries::coeff(int i) const {
  static const UPoly zero;
  if (i < 0) throw std::out_of_range("negative coefficient index");
  if (i >= static_cast<int>(c_.size())) return zero;
  return c_[i];
}

void BiSeries::set_coeff(int i, UPoly p) {
  if (i < 0 || i >= static_cast<int>(c_.size())) throw std::out_of_range("coefficient index");
  c_[i] = std::move(p);
}

BiSeries BiSeries::truncated(int new_order) const {
  if (new_order < 0 || new_order > order()) throw std::invalid_argument("bad truncation order");
  BiSeries f(new_order);
  std::copy(c_.begin(), c_.begin() + new_order + 1, f.c_.begin());
  return f;
}

BiSeries BiSeries::scaled(const Rat& w) const {
  BiSeries f(order());
  for (size_t i = 0; i < c_.size(); ++i) f.c_[i] = c_[i].scaled(w);
  return f;
}

BiSeries BiSeries::stretched(int d) const {
  if (d < 1) throw std::invalid_argument("stretch factor must be >= 1");
  BiSeries f(order());
  for (int i = 0; i * d <= order(); ++i) f.c_[i * d] = c_[i].stretched(d);
  return f;
}

BiSeries BiSeries::shifted(int s) const {
  if (s < 0) throw std::invalid_argument("shift must be >= 0");
  BiSeries f(order());
  for (int i = 0; i + s <= order(); ++i) f.c_[i + s] = c_[i];
  return f;
}

BiSeries BiSeries::u_shifted(long long k) const {
  BiSeries f(order());
  for (size_t i = 0; i < c_.size(); ++i) f.c_[i] = c_[i].shifted(k);
  return f;
}

UniSeries BiSeries::at_u_one() const {
  UniSeries f(order());
  for (int i = 0; i <= order(); ++i) f.set_coeff(i, c_[i].at_one());
  return f;
}

UniSeries BiSeries::u_derivative_at_one(int falling) const {
  if (falling < 1) throw std::invalid_argument("falling factor must be >= 1");
  UniSeries f(order());
  for (int i = 0; i <= order(); ++i) f.set_coeff(i, c_[i].weighted_sum(falling));
  return f;
}

BiSeries& BiSeries::operator+=(const BiSeries& o) {
  if (o.order() < order()) *this = truncated(o.order());
  for (int i = 0; i <= order(); ++i) c_[i].add_scaled(o.c_[i], Rat(1));
  return *this;
}

BiSeries& BiSeries::operator-=(const BiSeries& o) {
  if (o.order() < order()) *this = truncated(o.order());
  for (int i = 0; i <= order(); ++i) c_[i].add_scaled(o.c_[i], Rat(-1));
  return *this;
}

BiSeries operator*(const BiSeries& a, const BiSeries& b) {
  const int n = std::min(a.order(), b.order());
  BiSeries f(n);
  for (int i = 0; i <= n; ++i) {
    if (a.c_[i].empty()) continue;
    for (int j = 0; i + j <= n; ++j) {
      if (b.c_[j].empty()) continue;
      f.c_[i + j].add_scaled(a.c_[i] * b.c_[j], Rat(1));
    }
  }
  return f;
}

// ---------------------------------------------------------------------------

namespace cycles {

namespace {
Rat cycle_type_weight(const std::vector<std::pair<int, int>>& parts) {
  // 1/z with z = prod d^{m_d} * m_d!
  Int z(1);
  for (const auto& [d, m] : parts) {
    for (int k = 0; k < m; ++k) z *= d;
    for (int k = 2; k <= m; ++k) z *= k;
  }
  return Rat(Int(1), z);
}

void build(int remaining, int max_part, std::vector<std::pair<int, int>>& acc,
           std::vector<CycleType>& out) {
  if (remaining == 0) {
    out.push_back({acc, cycle_type_weight(acc)});
    return;
  }
  for (int d = std::min(remaining, max_part); d >= 1; --d) {
    int m_max = remaining / d;
    for (int m = 1; m <= m_max; ++m) {
      acc.emplace_back(d, m);
      build(remaining - d * m, d - 1, acc, out);
      acc.pop_back();
    }
  }
}
}  // namespace

const std::vector<CycleType>& cycle_types(int m) {
  constexpr int kMaxM = 64;
  if (m < 0 || m >= kMaxM) throw std::invalid_argument("cycle_types: m out of range");
  static std::array<std::vector<CycleType>, kMaxM> memo;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  if (memo[m].empty()) {
    std::vector<CycleType> out;
    std::vector<std::pair<int, int>> acc;
    build(m, m, acc, out);  // for m == 0 this yields the single empty type
    memo[m] = std::move(out);
  }
  return memo[m];
}

}  // namespace cycles

namespace {

template <class S>
void require_zero_constant(const S& f, const char* who) {
  if (!f.zero_constant_term())
    throw std::invalid_argument(std::string(who) + ": argument must have zero constant term");
}

template <class S>
S cycle_index_impl(int m, const S& f) {
  if (m < 0) throw std::invalid_argument("cycle_index_multiset: m must be >= 0");
  require_zero_constant(f, "cycle_index_multiset");
  S acc(f.order());
  for (const auto& ct : cycles::cycle_types(m)) {
    S term = [&] {
      if constexpr (std::is_same_v<S, UniSeries>)
        return UniSeries::constant(f.order(), Rat(1));
      else
        return BiSeries::monomial(f.order(), 0, 0, Rat(1));
    }();
    for (const auto& [d, mult] : ct.parts) {
      const S fd = d == 1 ? f : f.stretched(d);
      for (int k = 0; k < mult; ++k) term = term * fd;
    }
    acc += term.scaled(ct.weight);
  }
  return acc;
}

// Pair (value, eps-part) representing a series modulo eps^2.
template <class S>
struct Dual {
  S val, eps;
};

template <class S>
Dual<S> dual_mul(const Dual<S>& a, const Dual<S>& b) {
  S e = a.val * b.eps;
  e += a.eps * b.val;
  return {a.val * b.val, std::move(e)};
}

template <class S>
S directional_impl(int m, const S& f, const S& g) {
  if (m < 1) throw std::invalid_argument("multiset_directional_derivative: m must be >= 1");
  require_zero_constant(f, "multiset_directional_derivative");
  require_zero_constant(g, "multiset_directional_derivative");
  const S one = [&] {
    if constexpr (std::is_same_v<S, UniSeries>)
      return UniSeries::constant(f.order(), Rat(1));
    else
      return BiSeries::monomial(f.order(), 0, 0, Rat(1));
  }();
  S acc(f.order());
  for (const auto& ct : cycles::cycle_types(m)) {
    Dual<S> term{one, S(f.order())};
    for (const auto& [d, mult] : ct.parts) {
      // The perturbation f + eps*g enters the first-power slot only; higher
      // slots keep the unperturbed f(x^d).
      Dual<S> base = d == 1 ? Dual<S>{f, g} : Dual<S>{f.stretched(d), S(f.order())};
      for (int k = 0; k < mult; ++k) term = dual_mul(term, base);
    }
    acc += term.eps.scaled(ct.weight);
  }
  return acc;
}

}  // namespace

UniSeries cycle_index_multiset(int m, const UniSeries& f) { return cycle_index_impl(m, f); }
BiSeries cycle_index_multiset(int m, const BiSeries& f) { return cycle_index_impl(m, f); }

UniSeries multiset_directional_derivative(int m, const UniSeries& f, const UniSeries& g) {
  return directional_impl(m, f, g);
}
BiSeries multiset_directional_derivative(int m, const BiSeries& f, const BiSeries& g) {
  return directional_impl(m, f, g);
}

double eval_lower_bound(const UniSeries& f, double x) {
  if (!(x >= 0.0 && x < 1.0))
    throw std::invalid_argument("eval_lower_bound: x must lie in [0, 1)");
  long double acc = 0.0L;
  long double xp = 1.0L;
  for (int i = 0; i <= f.order(); ++i) {
    const Rat& c = f.coeff(i);
    if (c < 0) throw std::invalid_argument("eval_lower_bound: negative coefficient");
    if (c != 0) acc += static_cast<long double>(to_double(c)) * xp;
    xp *= x;
  }
  return static_cast<double>(acc);
}

ExtrapolationFit sqrt_extrapolate(const std::vector<std::pair<double, double>>& samples,
                                  double x0) {
  if (samples.size() < 3)
    throw std::invalid_argument("sqrt_extrapolate: need at least 3 samples");
  for (size_t i = 0; i < samples.size(); ++i) {
    if (!(samples[i].first < x0))
      throw std::invalid_argument("sqrt_extrapolate: samples must satisfy x < x0");
    for (size_t j = i + 1; j < samples.size(); ++j)
      if (samples[i].first == samples[j].first)
        throw std::invalid_argument("sqrt_extrapolate: duplicate sample abscissa");
  }
  // Normal equations for value ~ g - h * sqrt(x0 - x).
  double s11 = 0, s1b = 0, sbb = 0, sy1 = 0, syb = 0;
  for (const auto& [x, y] : samples) {
    const double b = -std::sqrt(x0 - x);
    s11 += 1.0;
    s1b += b;
    sbb += b * b;
    sy1 += y;
    syb += y * b;
  }
  const double det = s11 * sbb - s1b * s1b;
  if (det == 0.0) throw std::invalid_argument("sqrt_extrapolate: degenerate sample set");
  ExtrapolationFit fit;
  fit.x0 = x0;
  fit.g = (sy1 * sbb - syb * s1b) / det;
  fit.h = (s11 * syb - s1b * sy1) / det;
  double rss = 0;
  for (const auto& [x, y] : samples) {
    const double pred = fit.g - fit.h * std::sqrt(x0 - x);
    rss += (y - pred) * (y - pred);
  }
  fit.residual = std::sqrt(rss / static_cast<double>(samples.size()));
  return fit;
}

}  // namespace trees
