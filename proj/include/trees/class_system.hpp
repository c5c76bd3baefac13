#pragma once

#include <string>
#include <utility>
#include <vector>

#include "trees/occurrences.hpp"
#include "trees/series.hpp"
#include "trees/tree.hpp"

namespace trees {

// One truncation class: a planted degree-bounded shape of depth <= h. Deep
// classes (depth exactly h) are the unknowns of the functional system;
// shallow ones are known monomials x^{|shape|} u^{occurrences(H, shape)}.
struct TruncationClass {
  RootedTree shape;
  bool deep = false;
};

// Equation of one deep class: x * u^{k_root} * prod_s Z(S_{l_s}; B_{sigma_s}),
// children grouped by the (h-1)-depth truncation of the root's subtrees.
struct ClassEquation {
  int class_id = 0;
  long long k_root = 0;
  std::vector<std::pair<int, int>> children;  // (group id, multiplicity), sorted
};

struct ClassSystem {
  int delta = 0;
  int h = 0;
  CanonicalCode subtree;  // canonical code of H
  FreeTree pattern;       // H itself
  std::vector<TruncationClass> classes;  // canonical order
  std::vector<int> deep_ids;             // indices into classes, one per unknown
  std::vector<ClassEquation> equations;  // parallel to deep_ids
  std::vector<std::vector<int>> group_map;  // group id -> member class ids
  std::vector<int> group_of;                // class id -> group id
  std::vector<int> group_shape;             // group id -> its shallow class id
  bool single_vertex = false;  // H = K1; no system, mu = 1 by definition
  bool trivial_zero = false;   // max degree of H exceeds delta; all counts zero
};

struct ConnectivityReport {
  bool strongly_connected = false;
  std::vector<std::vector<int>> components;  // condensation members (class ids)
};

struct SolvedSeries {
  std::vector<BiSeries> deep;  // parallel to sys.deep_ids
  BiSeries p;
  BiSeries r;
  BiSeries t;
};

// Exact moments of the occurrence count over free trees by order n.
struct MomentSeries {
  std::vector<Rat> total;  // t_n
  std::vector<Rat> m1;     // sum_k k   * t_{n,k}
  std::vector<Rat> m2;     // sum_k k^2 * t_{n,k}
};

// bivariate: read moments off the u-polynomial coefficients of t(x,u).
// derivative: solve the linearized first/second u-derivative systems at u=1.
// Both are exact and must agree.
enum class MomentRoute { bivariate, derivative };

struct SingularityReport {
  double x0 = 0.0;
  double mu = 0.0;
  double column_sum_residual = 0.0;   // max |column sum - 1| at the solved point
  double extrapolation_residual = 0.0;
  std::string warning;  // empty when clean
};

// All planted degree-bounded shapes of depth <= h in canonical order; the
// count is predicted first and a resource error is raised beyond the cap.
std::vector<TruncationClass> enumerate_classes(int delta, int h, long long cap = 100000);

// h = diameter(H). H = K1 yields the single_vertex marker; max degree of H
// above delta yields the trivial zero system (with a warning on stderr).
ClassSystem build_system(int delta, const FreeTree& H);

// Dependency digraph over deep classes; an isolated class that does not feed
// on itself counts as not strongly connected (it is solvable on its own).
ConnectivityReport check_strong_connectivity(const ClassSystem& sys);

// Bootstrap the bivariate series of every unknown and assemble p(x,u),
// r(x,u) (root budget delta, root exponents by occurrences_containing_root)
// and t(x,u) (pairing over group pairs with join-spanning exponents plus the
// diagonal (x^2,u^2) correction).
SolvedSeries solve_series(const ClassSystem& sys, int order);

MomentSeries mean_variance_series(const ClassSystem& sys, int order,
                                  MomentRoute route = MomentRoute::bivariate);

// Column sums of the system Jacobian at u=1, one series per deep column; all
// columns agree and equal the restricted planted series.
std::vector<UniSeries> jacobian_column_sums(const ClassSystem& sys, int order);
std::vector<double> jacobian_column_sums_at(const ClassSystem& sys, double x, int order);

// Mean-growth constant mu_H = sum_rows F_u / (x0 * sum_rows F_x) evaluated at
// (x0, a(x0,1), 1). Class values at x0 are obtained by Newton continuation in
// x with a final fold-point solve; the grid extrapolation is kept as a
// cross-check and its fit residual is reported.
SingularityReport compute_mu(const ClassSystem& sys, double x0, int order = 240);

}  // namespace trees
