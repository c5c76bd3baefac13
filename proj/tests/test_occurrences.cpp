#include "trees/occurrences.hpp"

#include <bit>
#include <numeric>
#include <queue>
#include <random>

#include "doctest.h"

using namespace trees;

namespace {

RootedTree random_rooted(std::mt19937& rng, int n) {
  RootedTree t;
  t.tree.n = n;
  t.tree.adj.assign(n, {});
  for (int v = 1; v < n; ++v) {
    const int p = std::uniform_int_distribution<int>(0, v - 1)(rng);
    t.tree.adj[p].push_back(v);
    t.tree.adj[v].push_back(p);
  }
  return t;
}

// Brute force over all vertex subsets, independent of the implementation.
long long oracle_occurrences(const FreeTree& H, const FreeTree& T, bool pattern_mode = false) {
  if (H.n > T.n) return 0;
  REQUIRE(T.n <= 20);
  const CanonicalCode hc = canonical_code(H);
  long long count = 0;
  for (unsigned mask = 0; mask < (1u << T.n); ++mask) {
    if (std::popcount(mask) != H.n) continue;
    std::vector<int> S;
    std::vector<int> index(T.n, -1);
    for (int v = 0; v < T.n; ++v)
      if (mask >> v & 1) {
        index[v] = static_cast<int>(S.size());
        S.push_back(v);
      }
    FreeTree sub;
    sub.n = H.n;
    sub.adj.assign(sub.n, {});
    for (int v : S)
      for (int w : T.adj[v])
        if (index[w] >= 0 && v < w) {
          sub.adj[index[v]].push_back(index[w]);
          sub.adj[index[w]].push_back(index[v]);
        }
    // connected iff BFS from S[0] inside the subset reaches everything
    std::vector<char> reached(sub.n, 0);
    std::queue<int> q;
    q.push(0);
    reached[0] = 1;
    int seen = 1;
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (int w : sub.adj[v])
        if (!reached[w]) {
          reached[w] = 1;
          ++seen;
          q.push(w);
        }
    }
    if (seen != sub.n) continue;
    if (pattern_mode) {
      bool ok = true;
      for (int i = 0; i < sub.n && ok; ++i)
        if (sub.adj[i].size() >= 2 && sub.adj[i].size() != T.adj[S[i]].size()) ok = false;
      if (!ok) continue;
    }
    if (canonical_code(sub) == hc) ++count;
  }
  return count;
}

// Child subtrees hanging below the root, as independently rooted trees.
std::vector<RootedTree> root_branches(const RootedTree& t) {
  std::vector<RootedTree> out;
  for (int c : t.tree.adj[t.root]) {
    RootedTree branch;
    std::vector<int> index(t.tree.n, -1);
    std::vector<int> order;
    index[c] = 0;
    order.push_back(c);
    for (size_t i = 0; i < order.size(); ++i)
      for (int w : t.tree.adj[order[i]])
        if (w != t.root && index[w] < 0) {
          index[w] = static_cast<int>(order.size());
          order.push_back(w);
        }
    branch.tree.n = static_cast<int>(order.size());
    branch.tree.adj.assign(branch.tree.n, {});
    for (int v : order)
      for (int w : t.tree.adj[v])
        if (w != t.root && v < w) {
          branch.tree.adj[index[v]].push_back(index[w]);
          branch.tree.adj[index[w]].push_back(index[v]);
        }
    out.push_back(std::move(branch));
  }
  return out;
}

const FreeTree kP3 = parse_tree("0 1").tree;
const FreeTree kP4 = parse_tree("0 1 2").tree;
const FreeTree kStar3 = parse_tree("0 0 0").tree;
const FreeTree kK2 = parse_tree("0").tree;
const FreeTree kK1 = parse_tree("").tree;

}  // namespace

TEST_CASE("occurrences matches the documented examples") {
  CHECK(occurrences(kP3, kStar3) == 3);
  CHECK(occurrences(kP4, kStar3) == 0);
  std::mt19937 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 12)(rng);
    const FreeTree t = random_rooted(rng, n).tree;
    CHECK(occurrences(kK1, t) == n);
    CHECK(occurrences(kK2, t) == n - 1);
  }
}

TEST_CASE("occurrences agrees with the subset brute force") {
  std::mt19937 rng(20240817);
  std::vector<FreeTree> patterns;
  for (int m = 1; m <= 5; ++m)
    for (const RootedTree& h : enumerate_trees(TreeKind::free_trees, m, 7))
      patterns.push_back(h.tree);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 12)(rng);
    const FreeTree t = random_rooted(rng, n).tree;
    for (const FreeTree& h : patterns) {
      CHECK(occurrences(h, t) == oracle_occurrences(h, t));
      CHECK(occurrences(h, t, true) == oracle_occurrences(h, t, true));
    }
  }
}

TEST_CASE("pattern mode constrains internal host degrees") {
  CHECK(occurrences(kP3, kStar3, true) == 0);  // centre has degree 3, not 2
  CHECK(occurrences(kP3, kP4, true) == 2);
  CHECK(occurrences(kP3, parse_tree("0 1 2 3").tree, true) == 3);
  std::mt19937 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const FreeTree t = random_rooted(rng, 10).tree;
    CHECK(occurrences(kP4, t, true) <= occurrences(kP4, t));
  }
}

TEST_CASE("occurrences_containing_root matches the documented examples") {
  RootedTree star_center = parse_tree("0 0 0");
  CHECK(occurrences_containing_root(kP3, star_center) == 3);
  RootedTree star_leaf = star_center;
  star_leaf.root = 1;
  CHECK(occurrences_containing_root(kP3, star_leaf) == 2);
  std::mt19937 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = std::uniform_int_distribution<int>(2, 12)(rng);
    const RootedTree t = random_rooted(rng, n);
    CHECK(occurrences_containing_root(kK2, t) ==
          static_cast<long long>(t.tree.adj[t.root].size()));
    CHECK(occurrences_containing_root(kK1, t) == 1);
  }
}

TEST_CASE("root decomposition and truncation sufficiency") {
  std::mt19937 rng(31);
  std::vector<FreeTree> patterns = {kK2, kP3, kP4, kStar3};
  for (int trial = 0; trial < 200; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 14)(rng);
    const RootedTree t = random_rooted(rng, n);
    for (const FreeTree& h : patterns) {
      long long below = 0;
      for (const RootedTree& branch : root_branches(t)) below += occurrences(h, branch.tree);
      CHECK(occurrences(h, t.tree) == occurrences_containing_root(h, t) + below);
      CHECK(occurrences_containing_root(h, t) ==
            occurrences_containing_root(h, truncate_depth(t, diameter(h))));
    }
  }
}

TEST_CASE("occurrences_spanning_join matches the documented examples") {
  const RootedTree k1 = parse_tree("");
  const RootedTree chain2 = parse_tree("0");  // planted path of two vertices
  CHECK(occurrences_spanning_join(kP3, k1, k1) == 0);
  CHECK(occurrences_spanning_join(kP3, chain2, k1) == 1);
  CHECK(occurrences_spanning_join(kP3, k1, chain2) == 1);
  CHECK(occurrences_spanning_join(kP3, chain2, chain2) == 2);
}

TEST_CASE("join decomposition and join truncation sufficiency") {
  std::mt19937 rng(47);
  std::vector<FreeTree> patterns = {kK2, kP3, kP4, kStar3};
  for (int trial = 0; trial < 120; ++trial) {
    const RootedTree a = random_rooted(rng, std::uniform_int_distribution<int>(1, 8)(rng));
    const RootedTree b = random_rooted(rng, std::uniform_int_distribution<int>(1, 8)(rng));
    const FreeTree joined = join_at_roots(a, b);
    for (const FreeTree& h : patterns) {
      const long long spanning = occurrences_spanning_join(h, a, b);
      CHECK(occurrences(h, joined) ==
            occurrences(h, a.tree) + occurrences(h, b.tree) + spanning);
      const int ell = diameter(h) - 1;
      CHECK(spanning ==
            occurrences_spanning_join(h, truncate_depth(a, ell), truncate_depth(b, ell)));
    }
  }
}

TEST_CASE("path-of-three occurrences equal the degree-pair count") {
  for (int n = 2; n <= 12; ++n) {
    for (const RootedTree& t : enumerate_trees(TreeKind::free_trees, n, 4)) {
      long long pairs = 0;
      long long zagreb = 0;
      for (const auto& nb : t.tree.adj) {
        const long long d = static_cast<long long>(nb.size());
        pairs += d * (d - 1) / 2;
        zagreb += d * d;
      }
      CHECK(occurrences(kP3, t.tree) == pairs);
      CHECK(occurrences(kP3, t.tree) == zagreb / 2 - n + 1);
    }
  }
}

TEST_CASE("occurrence_distribution tabulates the enumeration") {
  const OccurrenceTable p3 = occurrence_distribution(TreeKind::free_trees, 4, 4, kP3);
  CHECK(p3.counts.size() == 2);
  CHECK(p3.counts.at(2) == 1);
  CHECK(p3.counts.at(3) == 1);

  for (int n = 2; n <= 9; ++n) {
    const OccurrenceTable k2 = occurrence_distribution(TreeKind::free_trees, n, 4, kK2);
    const Int total = Int(enumerate_trees(TreeKind::free_trees, n, 4).size());
    CHECK(k2.counts.size() == 1);
    CHECK(k2.counts.at(n - 1) == total);
  }

  const FreeTree star4 = parse_tree("0 0 0 0").tree;
  const OccurrenceTable blocked = occurrence_distribution(TreeKind::free_trees, 5, 3, star4);
  CHECK(blocked.counts.size() == 1);
  CHECK(blocked.counts.at(0) == 2);

  // the histogram covers every class exactly once
  const OccurrenceTable rooted = occurrence_distribution(TreeKind::rooted, 7, 3, kP4);
  Int total = 0;
  for (const auto& [k, c] : rooted.counts) total += c;
  CHECK(total == Int(enumerate_trees(TreeKind::rooted, 7, 3).size()));
}
