#pragma once

#include <vector>

#include "trees/rational.hpp"
#include "trees/tree.hpp"

namespace trees {

// Adjacency spectra of trees, the Estrada index by two routes, and exact
// closed-walk moments. Everything here is per-tree and independent of the
// generating-function machinery.

struct SpectralSummary {
  int n = 0;
  std::vector<double> eigenvalues;  // descending
  double ee = 0.0;                  // eigenvalue route
  std::vector<Int> moments;         // closed-walk counts M_0..M_K
  Int zagreb;                       // sum of squared degrees
};

enum class EstradaMode { eigen, moments };

struct EstradaResult {
  double value = 0.0;
  double tail_bound = 0.0;  // only the moments route truncates
  int terms = 0;            // K actually used (moments route)
};

// All n eigenvalues of the adjacency matrix by cyclic plane rotations:
// deterministic sweep order, off-diagonal norm driven below 1e-12, at most
// 50 sweeps (ample for the tree orders enumerated here). Sorted descending.
std::vector<double> eigenvalues(const FreeTree& t);

// Exact closed-walk counts M_0..M_K: repeated integer application of the
// adjacency map, one start vertex at a time. M_k = tr(A^k).
std::vector<Int> walk_moments(const FreeTree& t, int K);

// First Zagreb index, sum of d_i^2.
Int zagreb(const FreeTree& t);

// Per-vertex tail of the even-walk expansion: sum_{k>K} delta^(2k)/(2k)!.
double estrada_tail(int delta, int K);

// Smallest K whose per-vertex tail drops below 1e-9, so the moment-route
// truncation error is below 1e-9 * n.
int default_estrada_terms(int delta);

// mode=eigen sums e^(lambda_i). mode=moments sums M_2k/(2k)! for k <= K with
// exact rational partial sums (K=0 picks the default for the degree bound)
// and reports the tail bound n * estrada_tail(delta, K); the routes agree
// within that bound. The moments route needs delta >= max degree of t.
EstradaResult estrada(const FreeTree& t, EstradaMode mode, int K = 0, int delta = 0);

struct MomentDegreeWitness {
  bool ok = true;
  int violating_k = -1;  // first k with M_2k > sum of d_i^2k, if any
  Int moment;            // the checked pair at violating_k, or at K on success
  Int degree_sum;
};

// Exact verification of M_2k <= sum_i d_i^2k for 1 <= k <= K.
MomentDegreeWitness moment_degree_check(const FreeTree& t, int K);

// Bundle used by surveys: spectrum, eigen-route EE, moments M_0..M_K, zagreb.
SpectralSummary summarize_spectrum(const FreeTree& t, int K);

}  // namespace trees
