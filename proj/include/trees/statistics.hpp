#pragma once

#include <utility>
#include <vector>

#include "trees/occurrences.hpp"
#include "trees/rational.hpp"
#include "trees/spectral.hpp"
#include "trees/tree.hpp"

namespace trees {

// Distribution moments, least-squares fits, and the survey/concentration
// reports built on top of the enumeration and spectral layers.

struct MomentsReport {
  int n = 0;
  Rat mean;      // exact
  Rat variance;  // exact, >= 0
  // Standardized from exact central moments at the last step; both are 0 for
  // a degenerate (zero-variance) distribution.
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
};

struct RegressionResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;  // zero-residual fits report 1
  int count = 0;           // 0 marks "no fit computed"
};

// Exact mean and central moments of an occurrence table.
MomentsReport table_moments(const OccurrenceTable& table);

// Ordinary least squares y ~ a x + b. Needs two points and non-constant x.
RegressionResult linear_fit(const std::vector<std::pair<double, double>>& points);

struct SurveyRow {
  RootedTree tree;
  SpectralSummary spectral;  // moments M_0..M_2K
};

struct EstradaSurvey {
  int n = 0;
  int delta = 0;
  int terms = 0;  // K: rows carry walk moments up to M_2K
  std::vector<SurveyRow> rows;  // enumeration (canonical) order
  double mean_ee_per_n = 0.0;
  double std_ee_per_n = 0.0;  // population deviation
  RegressionResult fit;       // EE ~ zagreb; count 0 when D is constant
};

// Spectral summaries of every free tree of order n with the degree bound,
// plus the aggregate concentration and correlation figures. Work splits
// across `threads` without affecting any output.
EstradaSurvey estrada_survey(int n, int delta, int K = 30, int threads = 1);

struct AsymptoticRow {
  int n = 0;
  Rat mean;      // free-tree occurrence distribution
  Rat variance;
  double mean_per_n = 0.0;
  double variance_per_n = 0.0;
  double concentration_fraction = 0.0;  // mass at |k - mean| > n^(3/4)
  double chebyshev_bound = 0.0;         // variance / n^(3/2)
  double rooted_skewness = 0.0;
  double planted_skewness = 0.0;
};

struct AsymptoticReport {
  FreeTree subtree;
  int delta = 0;
  std::vector<AsymptoticRow> rows;  // one per n, ascending
};

// Finite-n trajectories toward the limit laws: normalized mean/variance,
// concentration mass against its Chebyshev bound, and the skewness of the
// rooted/planted distributions (expected to shrink as n grows).
AsymptoticReport asymptotic_checks(const FreeTree& subtree, int delta, int n_min, int n_max);

}  // namespace trees
