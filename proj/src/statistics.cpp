#include "trees/statistics.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

namespace trees {

MomentsReport table_moments(const OccurrenceTable& table) {
  if (table.counts.empty()) throw std::invalid_argument("table_moments: empty table");
  Rat total(0), s1(0);
  for (const auto& [k, c] : table.counts) {
    const Rat ck(c);
    total += ck;
    s1 += ck * rat_of(static_cast<long>(k));
  }
  MomentsReport rep;
  rep.n = table.n;
  rep.mean = s1 / total;
  Rat m2(0), m3(0), m4(0);
  for (const auto& [k, c] : table.counts) {
    const Rat d = rat_of(static_cast<long>(k)) - rep.mean;
    const Rat d2 = d * d;
    const Rat ck(c);
    m2 += ck * d2;
    m3 += ck * d2 * d;
    m4 += ck * d2 * d2;
  }
  m2 /= total;
  m3 /= total;
  m4 /= total;
  rep.variance = m2;
  if (m2 > 0) {
    rep.skewness = to_double(m3) / std::pow(to_double(m2), 1.5);
    rep.excess_kurtosis = to_double(m4 / (m2 * m2)) - 3.0;
  }
  return rep;
}

RegressionResult linear_fit(const std::vector<std::pair<double, double>>& points) {
  const int m = static_cast<int>(points.size());
  if (m < 2) throw std::invalid_argument("linear_fit: need at least two points");
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : points) {
    mx += x;
    my += y;
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("linear_fit: x values are constant");
  RegressionResult r;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  r.count = m;
  if (syy > 0.0) {
    double ss_res = 0.0;
    for (const auto& [x, y] : points) {
      const double e = y - (r.slope * x + r.intercept);
      ss_res += e * e;
    }
    r.r_squared = std::min(1.0, std::max(0.0, 1.0 - ss_res / syy));
  } else {
    r.r_squared = 1.0;  // zero residual by construction
  }
  return r;
}

EstradaSurvey estrada_survey(int n, int delta, int K, int threads) {
  if (K < 1) throw std::invalid_argument("estrada_survey: K must be at least 1");
  std::vector<RootedTree> trees_list = enumerate_trees(TreeKind::free_trees, n, delta);
  EstradaSurvey out;
  out.n = n;
  out.delta = delta;
  out.terms = K;
  out.rows.resize(trees_list.size());
  const int count = static_cast<int>(trees_list.size());
  threads = std::max(1, std::min(threads, count));
  auto work = [&](int tid) {
    for (int i = tid; i < count; i += threads) {
      out.rows[i].tree = std::move(trees_list[i]);
      out.rows[i].spectral = summarize_spectrum(out.rows[i].tree.tree, 2 * K);
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (std::thread& th : pool) th.join();
  }

  std::vector<std::pair<double, double>> points;
  points.reserve(count);
  for (const SurveyRow& row : out.rows) {
    out.mean_ee_per_n += row.spectral.ee / n;
    points.emplace_back(to_double(row.spectral.zagreb), row.spectral.ee);
  }
  out.mean_ee_per_n /= count;
  for (const SurveyRow& row : out.rows) {
    const double d = row.spectral.ee / n - out.mean_ee_per_n;
    out.std_ee_per_n += d * d;
  }
  out.std_ee_per_n = std::sqrt(out.std_ee_per_n / count);
  bool varying = false;
  for (const auto& [x, y] : points) varying = varying || x != points.front().first;
  if (count >= 2 && varying) out.fit = linear_fit(points);
  return out;
}

AsymptoticReport asymptotic_checks(const FreeTree& subtree, int delta, int n_min, int n_max) {
  if (subtree.n < 1 || static_cast<int>(subtree.adj.size()) != subtree.n) {
    throw std::invalid_argument("asymptotic_checks: malformed subtree");
  }
  if (n_min < 1 || n_max < n_min) {
    throw std::invalid_argument("asymptotic_checks: bad n range");
  }
  AsymptoticReport rep;
  rep.subtree = subtree;
  rep.delta = delta;
  for (int n = n_min; n <= n_max; ++n) {
    const OccurrenceTable table = occurrence_distribution(TreeKind::free_trees, n, delta, subtree);
    const MomentsReport m = table_moments(table);
    AsymptoticRow row;
    row.n = n;
    row.mean = m.mean;
    row.variance = m.variance;
    row.mean_per_n = to_double(m.mean) / n;
    row.variance_per_n = to_double(m.variance) / n;
    const double threshold = std::pow(n, 0.75);
    Rat tail(0), total(0);
    for (const auto& [k, c] : table.counts) {
      total += Rat(c);
      if (std::fabs(to_double(rat_of(static_cast<long>(k)) - m.mean)) > threshold) tail += Rat(c);
    }
    row.concentration_fraction = to_double(tail / total);
    row.chebyshev_bound = to_double(m.variance) / std::pow(n, 1.5);
    row.rooted_skewness =
        table_moments(occurrence_distribution(TreeKind::rooted, n, delta, subtree)).skewness;
    row.planted_skewness =
        table_moments(occurrence_distribution(TreeKind::planted, n, delta, subtree)).skewness;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace trees
