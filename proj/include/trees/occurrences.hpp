#pragma once

#include <map>

#include "trees/rational.hpp"
#include "trees/tree.hpp"

namespace trees {

// Sparse histogram k -> number of isomorphism classes with exactly k
// occurrences of the fixed subtree.
struct OccurrenceTable {
  int n = 0;
  int delta = 0;
  CanonicalCode subtree;
  std::map<long long, Int> counts;
};

// Connect the roots of two planted trees by a new edge; both plants are
// discarded, so the joined roots' degrees are their child counts plus one.
FreeTree join_at_roots(const RootedTree& a, const RootedTree& b);

// Number of vertex subsets S of T inducing a connected subgraph isomorphic to
// H as a free tree. Subsets are counted, not embeddings. With pattern_mode,
// vertices internal to the copy (induced degree >= 2) must keep their full
// host degree.
long long occurrences(const FreeTree& H, const FreeTree& T, bool pattern_mode = false);

// Occurrences of H in t whose vertex set contains the root. The plant of a
// planted tree never participates.
long long occurrences_containing_root(const FreeTree& H, const RootedTree& t,
                                      bool pattern_mode = false);

// Occurrences of H in join_at_roots(a, b) using vertices from both halves;
// every such occurrence contains the join edge.
long long occurrences_spanning_join(const FreeTree& H, const RootedTree& a, const RootedTree& b,
                                    bool pattern_mode = false);

// Exhaustive occurrence histogram over enumerate_trees(kind, n, delta).
OccurrenceTable occurrence_distribution(TreeKind kind, int n, int delta, const FreeTree& H,
                                        bool pattern_mode = false);

}  // namespace trees
