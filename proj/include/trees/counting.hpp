#pragma once

#include "trees/series.hpp"

namespace trees {

// Counting series of planted / rooted / free degree-bounded trees, truncated
// at the given order. All coefficients are non-negative integers.
struct CountingBundle {
  int delta;
  int order;
  UniSeries p;             // planted: p = x * sum_{j<=delta-1} Z(S_j; p)
  UniSeries p_restricted;  // root budget one lower: x * sum_{j<=delta-2} Z(S_j; p)
  UniSeries r;             // rooted: x * sum_{j<=delta} Z(S_j; p)
  UniSeries t;             // free, via the pairing form r - (p^2 - p(x^2))/2
};

// Dominant singularity x0 of the planted series and the value p(x0).
struct SingularityEstimate {
  double x0 = 0.0;
  double p_at_x0 = 0.0;
  int truncation = 0;
  double bracket_width = 0.0;  // width of the final bisection interval
};

CountingBundle counting_series(int delta, int order);

// Locate x0 by bisection on p_restricted(x) = 1 over (0, 1/2], then sharpen:
// square-root extrapolation of the truncated series on a geometric grid, and
// finally a two-variable Newton solve of the characteristic system
//   y = Phi(x, y),  dPhi/dy (x, y) = 1,
// where Phi is the planted fixed-point map with the tail slots evaluated from
// the truncated series (those arguments are x^d, d >= 2, far inside the disc
// of convergence, so the truncation error there is negligible).
SingularityEstimate find_x0(int delta, int order = 600, double tol = 1e-8);

}  // namespace trees
