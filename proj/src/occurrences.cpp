#include "trees/occurrences.hpp"

#include <algorithm>
#include <iostream>

namespace trees {

namespace {

// Induced subgraph on S; in a tree this is a forest, and the callers only
// pass connected S, so the result is a tree on |S| relabeled vertices.
FreeTree induced_tree(const FreeTree& t, const std::vector<int>& S) {
  FreeTree sub;
  sub.n = static_cast<int>(S.size());
  sub.adj.assign(sub.n, {});
  std::vector<int> index(t.n, -1);
  for (int i = 0; i < sub.n; ++i) index[S[i]] = i;
  for (int i = 0; i < sub.n; ++i)
    for (int w : t.adj[S[i]])
      if (index[w] > i) {
        sub.adj[i].push_back(index[w]);
        sub.adj[index[w]].push_back(i);
      }
  return sub;
}

bool matches(const FreeTree& t, const std::vector<int>& S, const CanonicalCode& h_code,
             bool pattern_mode) {
  const FreeTree sub = induced_tree(t, S);
  if (pattern_mode) {
    for (int i = 0; i < sub.n; ++i)
      if (sub.adj[i].size() >= 2 && sub.adj[i].size() != t.adj[S[i]].size()) return false;
  }
  return canonical_code(sub) == h_code;
}

// Visit each connected k-subset of t containing all of `seed` exactly once;
// vertices with blocked[v]!=0 never participate. Branching on the ordered
// extension list: a popped vertex is either taken now or banned for the rest
// of the frame, so no subset repeats.
template <class Fn>
void for_each_connected_subset(const FreeTree& t, const std::vector<int>& seed, size_t k,
                               std::vector<char> seen, Fn fn) {
  if (seed.size() > k) return;
  for (int v : seed) seen[v] = 1;
  std::vector<int> ext;
  for (int v : seed)
    for (int w : t.adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        ext.push_back(w);
      }
  std::vector<int> S = seed;
  auto rec = [&](auto&& self, std::vector<int> frontier, std::vector<char> mark) -> void {
    if (S.size() == k) {
      fn(S);
      return;
    }
    while (!frontier.empty()) {
      const int v = frontier.back();
      frontier.pop_back();
      std::vector<int> next = frontier;
      std::vector<char> mark2 = mark;
      for (int w : t.adj[v])
        if (!mark2[w]) {
          mark2[w] = 1;
          next.push_back(w);
        }
      S.push_back(v);
      self(self, std::move(next), std::move(mark2));
      S.pop_back();
      // v stays marked: excluded from every later branch of this frame.
    }
  };
  rec(rec, std::move(ext), std::move(seen));
}

}  // namespace

FreeTree join_at_roots(const RootedTree& a, const RootedTree& b) {
  FreeTree t;
  t.n = a.tree.n + b.tree.n;
  t.adj.assign(t.n, {});
  auto edge = [&](int u, int v) {
    t.adj[u].push_back(v);
    t.adj[v].push_back(u);
  };
  for (int v = 0; v < a.tree.n; ++v)
    for (int w : a.tree.adj[v])
      if (v < w) edge(v, w);
  for (int v = 0; v < b.tree.n; ++v)
    for (int w : b.tree.adj[v])
      if (v < w) edge(v + a.tree.n, w + a.tree.n);
  edge(a.root, b.root + a.tree.n);
  return t;
}

long long occurrences(const FreeTree& H, const FreeTree& T, bool pattern_mode) {
  if (H.n > T.n) return 0;
  const CanonicalCode h_code = canonical_code(H);
  long long count = 0;
  // Each subset is generated from its minimum vertex; larger ids only.
  for (int v = 0; v < T.n; ++v) {
    std::vector<char> blocked(T.n, 0);
    for (int w = 0; w < v; ++w) blocked[w] = 1;
    for_each_connected_subset(T, {v}, static_cast<size_t>(H.n), std::move(blocked),
                              [&](const std::vector<int>& S) {
                                if (matches(T, S, h_code, pattern_mode)) ++count;
                              });
  }
  return count;
}

long long occurrences_containing_root(const FreeTree& H, const RootedTree& t,
                                      bool pattern_mode) {
  if (H.n > t.tree.n) return 0;
  const CanonicalCode h_code = canonical_code(H);
  long long count = 0;
  for_each_connected_subset(t.tree, {t.root}, static_cast<size_t>(H.n),
                            std::vector<char>(t.tree.n, 0),
                            [&](const std::vector<int>& S) {
                              if (matches(t.tree, S, h_code, pattern_mode)) ++count;
                            });
  return count;
}

long long occurrences_spanning_join(const FreeTree& H, const RootedTree& a, const RootedTree& b,
                                    bool pattern_mode) {
  const FreeTree t = join_at_roots(a, b);
  if (H.n > t.n || H.n < 2) return 0;
  const CanonicalCode h_code = canonical_code(H);
  // Connected and touching both halves means containing both roots.
  const int ra = a.root;
  const int rb = b.root + a.tree.n;
  long long count = 0;
  for_each_connected_subset(t, {ra, rb}, static_cast<size_t>(H.n), std::vector<char>(t.n, 0),
                            [&](const std::vector<int>& S) {
                              if (matches(t, S, h_code, pattern_mode)) ++count;
                            });
  return count;
}

OccurrenceTable occurrence_distribution(TreeKind kind, int n, int delta, const FreeTree& H,
                                        bool pattern_mode) {
  OccurrenceTable table;
  table.n = n;
  table.delta = delta;
  table.subtree = canonical_code(H);
  if (max_degree(H) > delta)
    std::cerr << "warning: subtree has max degree " << max_degree(H)
              << " > bound " << delta << "; every count is zero\n";
  for (const RootedTree& t : enumerate_trees(kind, n, delta))
    table.counts[occurrences(H, t.tree, pattern_mode)] += 1;
  return table;
}

}  // namespace trees
