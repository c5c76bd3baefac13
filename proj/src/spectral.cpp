#include "trees/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace trees {

namespace {

void validate(const FreeTree& t, const char* who) {
  if (t.n < 1 || static_cast<int>(t.adj.size()) != t.n) {
    throw std::invalid_argument(std::string(who) + ": malformed tree");
  }
}

}  // namespace

std::vector<double> eigenvalues(const FreeTree& t) {
  validate(t, "eigenvalues");
  const int n = t.n;
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (int v = 0; v < n; ++v) {
    for (int w : t.adj[v]) a[v][w] = 1.0;
  }
  for (int sweep = 0; sweep <= 50; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) off += 2.0 * a[p][q] * a[p][q];
    }
    if (std::sqrt(off) < 1e-12) {
      std::vector<double> lam(n);
      for (int i = 0; i < n; ++i) lam[i] = a[i][i];
      std::sort(lam.rbegin(), lam.rend());
      return lam;
    }
    if (sweep == 50) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::fabs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double tt =
            (theta >= 0.0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(tt * tt + 1.0);
        const double s = tt * c;
        for (int i = 0; i < n; ++i) {
          const double aip = a[i][p], aiq = a[i][q];
          a[i][p] = c * aip - s * aiq;
          a[i][q] = s * aip + c * aiq;
        }
        for (int i = 0; i < n; ++i) {
          const double api = a[p][i], aqi = a[q][i];
          a[p][i] = c * api - s * aqi;
          a[q][i] = s * api + c * aqi;
        }
      }
    }
  }
  throw std::runtime_error("eigenvalues: rotation sweeps failed to converge");
}

std::vector<Int> walk_moments(const FreeTree& t, int K) {
  validate(t, "walk_moments");
  if (K < 0) throw std::invalid_argument("walk_moments: K must be non-negative");
  std::vector<Int> M(K + 1, Int(0));
  M[0] = t.n;
  std::vector<Int> cur(t.n), next(t.n);
  for (int s = 0; s < t.n; ++s) {
    std::fill(cur.begin(), cur.end(), Int(0));
    cur[s] = 1;
    for (int k = 1; k <= K; ++k) {
      for (int v = 0; v < t.n; ++v) {
        next[v] = 0;
        for (int w : t.adj[v]) next[v] += cur[w];
      }
      std::swap(cur, next);
      M[k] += cur[s];
    }
  }
  return M;
}

Int zagreb(const FreeTree& t) {
  validate(t, "zagreb");
  Int acc(0);
  for (int v = 0; v < t.n; ++v) {
    const long d = static_cast<long>(t.adj[v].size());
    acc += d * d;
  }
  return acc;
}

double estrada_tail(int delta, int K) {
  if (delta < 1) throw std::invalid_argument("estrada_tail: degree bound must be positive");
  if (K < 0) throw std::invalid_argument("estrada_tail: K must be non-negative");
  // First tail term delta^(2K+2)/(2K+2)!, accumulated by ratios to stay
  // inside double range.
  double term = 1.0;
  for (int i = 1; i <= 2 * K + 2; ++i) term *= static_cast<double>(delta) / i;
  double sum = 0.0;
  for (int k = K + 1; term > 1e-320 && k < K + 500; ++k) {
    sum += term;
    term *= static_cast<double>(delta) * delta / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
  }
  return sum;
}

int default_estrada_terms(int delta) {
  for (int K = 1; K <= 300; ++K) {
    if (estrada_tail(delta, K) < 1e-9) return K;
  }
  throw std::invalid_argument("default_estrada_terms: degree bound too large");
}

EstradaResult estrada(const FreeTree& t, EstradaMode mode, int K, int delta) {
  validate(t, "estrada");
  EstradaResult out;
  if (mode == EstradaMode::eigen) {
    for (double lam : eigenvalues(t)) out.value += std::exp(lam);
    return out;
  }
  if (delta < 1 || delta < max_degree(t)) {
    throw std::invalid_argument("estrada: the moments route needs a degree bound covering the tree");
  }
  if (K == 0) K = default_estrada_terms(delta);
  if (K < 1) throw std::invalid_argument("estrada: K must be at least 1");
  const std::vector<Int> M = walk_moments(t, 2 * K);
  Rat acc(0);
  for (int k = 0; k <= K; ++k) {
    Int fact;
    mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(2 * k));
    acc += Rat(M[2 * k]) / Rat(fact);
  }
  out.value = to_double(acc);
  out.tail_bound = t.n * estrada_tail(delta, K);
  out.terms = K;
  return out;
}

MomentDegreeWitness moment_degree_check(const FreeTree& t, int K) {
  validate(t, "moment_degree_check");
  if (K < 1) throw std::invalid_argument("moment_degree_check: K must be at least 1");
  const std::vector<Int> M = walk_moments(t, 2 * K);
  MomentDegreeWitness w;
  for (int k = 1; k <= K; ++k) {
    Int degree_sum(0);
    for (int v = 0; v < t.n; ++v) {
      Int dp;
      const Int d(static_cast<long>(t.adj[v].size()));
      mpz_pow_ui(dp.get_mpz_t(), d.get_mpz_t(), static_cast<unsigned long>(2 * k));
      degree_sum += dp;
    }
    w.moment = M[2 * k];
    w.degree_sum = degree_sum;
    if (w.moment > w.degree_sum) {
      w.ok = false;
      w.violating_k = k;
      return w;
    }
  }
  return w;
}

SpectralSummary summarize_spectrum(const FreeTree& t, int K) {
  SpectralSummary s;
  s.n = t.n;
  s.eigenvalues = eigenvalues(t);
  for (double lam : s.eigenvalues) s.ee += std::exp(lam);
  s.moments = walk_moments(t, K);
  s.zagreb = zagreb(t);
  return s;
}

}  // namespace trees
