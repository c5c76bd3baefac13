#pragma once

#include <string>
#include <vector>

#include "trees/rational.hpp"

namespace trees {

// Unlabeled tree given by one concrete labeling; identity is always taken up
// to isomorphism via canonical codes.
struct FreeTree {
  int n = 0;
  std::vector<std::vector<int>> adj;
};

// Rooted (or planted) tree. A planted tree has an implicit plant edge at the
// root which is never materialized: it only reserves one unit of the root's
// degree budget during enumeration and class construction.
struct RootedTree {
  FreeTree tree;
  int root = 0;
  bool planted = false;
};

// Preorder child-count sequence with children ordered by non-increasing
// subtree code; equal codes exactly for isomorphic (rooted) trees.
struct CanonicalCode {
  std::vector<int> code;
  bool operator==(const CanonicalCode& o) const { return code == o.code; }
  bool operator!=(const CanonicalCode& o) const { return code != o.code; }
  bool operator<(const CanonicalCode& o) const { return code < o.code; }
  bool operator<=(const CanonicalCode& o) const { return code <= o.code; }
};

enum class TreeKind { free_trees, rooted, planted };

// Parent-array text format: "p1 p2 ... p_{n-1}" with p_i < i, vertex 0 the
// root; the empty string is the one-vertex tree.
RootedTree parse_tree(const std::string& text);
std::string format_tree(const RootedTree& t);
std::string format_tree(const FreeTree& t);

CanonicalCode canonical_code(const RootedTree& t);
CanonicalCode canonical_code(const FreeTree& t);

// Rebuild a tree from a rooted canonical code (preorder child counts).
RootedTree tree_from_code(const CanonicalCode& code, bool planted = false);

int diameter(const FreeTree& t);
std::vector<int> centers(const FreeTree& t);  // one or two vertices
int max_degree(const FreeTree& t);

// Vertices within distance ell of the root, relabeled in preorder.
RootedTree truncate_depth(const RootedTree& t, int ell);
int depth(const RootedTree& t);  // eccentricity of the root

// All degree-bounded trees of the given size, each isomorphism class exactly
// once, sorted by canonical code (free code for free trees). Root degree
// budgets: free/rooted <= delta, planted <= delta - 1 (plant edge reserved);
// all other vertices <= delta.
std::vector<RootedTree> enumerate_trees(TreeKind kind, int n, int delta);

}  // namespace trees
