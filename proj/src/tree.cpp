#include "trees/tree.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace trees {

namespace {

void add_edge(FreeTree& t, int a, int b) {
  t.adj[a].push_back(b);
  t.adj[b].push_back(a);
}

// Children lists induced by rooting at `root`, plus a preorder of vertices.
struct Orientation {
  std::vector<std::vector<int>> children;
  std::vector<int> preorder;
  std::vector<int> parent;
};

Orientation orient(const FreeTree& t, int root) {
  Orientation o;
  o.children.assign(t.n, {});
  o.parent.assign(t.n, -1);
  o.preorder.reserve(t.n);
  std::vector<int> stack{root};
  std::vector<char> seen(t.n, 0);
  seen[root] = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    o.preorder.push_back(v);
    for (int w : t.adj[v]) {
      if (seen[w]) continue;
      seen[w] = 1;
      o.parent[w] = v;
      o.children[v].push_back(w);
      stack.push_back(w);
    }
  }
  if (static_cast<int>(o.preorder.size()) != t.n)
    throw std::invalid_argument("tree is not connected");
  return o;
}

// Code of the subtree at v; children codes sorted non-increasing.
std::vector<int> subtree_code(const Orientation& o, int v) {
  std::vector<std::vector<int>> child_codes;
  child_codes.reserve(o.children[v].size());
  for (int w : o.children[v]) child_codes.push_back(subtree_code(o, w));
  std::sort(child_codes.begin(), child_codes.end(),
            [](const auto& a, const auto& b) { return b < a; });
  std::vector<int> code{static_cast<int>(child_codes.size())};
  for (const auto& c : child_codes) code.insert(code.end(), c.begin(), c.end());
  return code;
}

int subtree_height(const Orientation& o, int v) {
  int h = 0;
  for (int w : o.children[v]) h = std::max(h, 1 + subtree_height(o, w));
  return h;
}

void check_vertex_count(int n) {
  if (n < 1) throw std::invalid_argument("vertex count must be >= 1");
}

// ---------------------------------------------------------------------------
// Shape lists for enumeration. A shape is a rooted isomorphism class stored
// as its canonical code plus size and height; all non-root degrees are
// bounded by delta, so every vertex below the root has at most delta - 1
// children and planted shape lists are self-similar in the size alone.

struct Shape {
  int size = 0;
  int height = 0;
  std::vector<int> code;
};

std::vector<int> compose_code(std::vector<std::vector<int>> child_codes) {
  std::sort(child_codes.begin(), child_codes.end(),
            [](const auto& a, const auto& b) { return b < a; });
  std::vector<int> code{static_cast<int>(child_codes.size())};
  for (const auto& c : child_codes) code.insert(code.end(), c.begin(), c.end());
  return code;
}

class ShapeCache {
 public:
  explicit ShapeCache(int delta) : delta_(delta) {}

  // Planted shapes of the given size: root has at most delta - 1 children.
  const std::vector<Shape>& planted(int size) {
    extend(size);
    return planted_[size];
  }

  int delta() const { return delta_; }

  // Enumerate child multisets of total size `total` with at most `slots`
  // children drawn from planted shapes of size < total budget; `emit` receives
  // the chosen shapes.
  template <class Emit>
  void child_multisets(int total, int slots, Emit emit) {
    extend(total);
    std::vector<const Shape*> acc;
    recurse(total, slots, 1, 0, acc, emit);
  }

 private:
  template <class Emit>
  void recurse(int remaining, int slots, int min_size, size_t min_idx,
               std::vector<const Shape*>& acc, Emit& emit) {
    if (remaining == 0) {
      emit(acc);
      return;
    }
    if (slots == 0) return;
    for (int s = min_size; s <= remaining; ++s) {
      const auto& pool = planted_[s];
      for (size_t i = (s == min_size ? min_idx : 0); i < pool.size(); ++i) {
        acc.push_back(&pool[i]);
        recurse(remaining - s, slots - 1, s, i, acc, emit);
        acc.pop_back();
      }
    }
  }

  void extend(int size) {
    while (static_cast<int>(planted_.size()) <= size) {
      const int n = static_cast<int>(planted_.size());
      std::vector<Shape> shapes;
      if (n == 1) {
        shapes.push_back({1, 0, {0}});
      } else if (n > 1) {
        std::vector<const Shape*> acc;
        auto emit = [&](const std::vector<const Shape*>& children) {
          Shape sh;
          sh.size = n;
          std::vector<std::vector<int>> codes;
          codes.reserve(children.size());
          for (const Shape* c : children) {
            sh.height = std::max(sh.height, c->height + 1);
            codes.push_back(c->code);
          }
          sh.code = compose_code(std::move(codes));
          shapes.push_back(std::move(sh));
        };
        recurse(n - 1, delta_ - 1, 1, 0, acc, emit);
      }
      std::sort(shapes.begin(), shapes.end(),
                [](const Shape& a, const Shape& b) { return a.code < b.code; });
      planted_.push_back(std::move(shapes));
    }
  }

  int delta_;
  std::vector<std::vector<Shape>> planted_;  // by size; index 0 unused
};

ShapeCache& cache_for(int delta) {
  static std::mutex mu;
  static std::map<int, ShapeCache> caches;
  std::lock_guard<std::mutex> lock(mu);
  return caches.try_emplace(delta, delta).first->second;
}

}  // namespace

// ---------------------------------------------------------------------------

RootedTree parse_tree(const std::string& text) {
  std::istringstream in(text);
  std::vector<int> parents;
  std::string tok;
  int pos = 0;
  while (in >> tok) {
    ++pos;
    size_t used = 0;
    int p = 0;
    try {
      p = std::stoi(tok, &used);
    } catch (const std::exception&) {
      throw parse_error("parent entry " + std::to_string(pos) + " is not an integer", pos);
    }
    if (used != tok.size())
      throw parse_error("parent entry " + std::to_string(pos) + " is not an integer", pos);
    if (p < 0 || p >= pos)
      throw parse_error("parent entry " + std::to_string(pos) + " must lie in [0, " +
                            std::to_string(pos - 1) + "]",
                        pos);
    parents.push_back(p);
  }
  RootedTree t;
  t.tree.n = static_cast<int>(parents.size()) + 1;
  t.tree.adj.assign(t.tree.n, {});
  for (size_t i = 0; i < parents.size(); ++i)
    add_edge(t.tree, parents[i], static_cast<int>(i) + 1);
  return t;
}

std::string format_tree(const RootedTree& t) {
  // Emit the canonical labeling: preorder with children in non-increasing
  // code order, so equal trees format identically.
  const Orientation o = orient(t.tree, t.root);
  std::vector<std::vector<int>> codes(t.tree.n);
  for (auto it = o.preorder.rbegin(); it != o.preorder.rend(); ++it) {
    std::vector<std::vector<int>> child_codes;
    for (int w : o.children[*it]) child_codes.push_back(codes[w]);
    codes[*it] = compose_code(std::move(child_codes));
  }
  std::vector<int> label(t.tree.n, -1);
  int next = 0;
  std::string out;
  // Recursive preorder with children sorted by code (non-increasing).
  std::vector<std::pair<int, int>> stack{{t.root, -1}};  // (vertex, parent label)
  while (!stack.empty()) {
    auto [v, plabel] = stack.back();
    stack.pop_back();
    label[v] = next++;
    if (plabel >= 0) {
      if (!out.empty()) out += ' ';
      out += std::to_string(plabel);
    }
    auto kids = o.children[v];
    std::sort(kids.begin(), kids.end(), [&](int a, int b) { return codes[a] < codes[b]; });
    // Stack is LIFO: push ascending so the largest code is visited first.
    for (int w : kids) stack.emplace_back(w, label[v]);
  }
  return out;
}

std::string format_tree(const FreeTree& t) {
  const CanonicalCode code = canonical_code(t);
  return format_tree(tree_from_code(code));
}

CanonicalCode canonical_code(const RootedTree& t) {
  const Orientation o = orient(t.tree, t.root);
  return {subtree_code(o, t.root)};
}

CanonicalCode canonical_code(const FreeTree& t) {
  CanonicalCode best;
  for (int c : centers(t)) {
    RootedTree r{t, c, false};
    CanonicalCode code = canonical_code(r);
    if (best.code.empty() || code < best) best = std::move(code);
  }
  return best;
}

RootedTree tree_from_code(const CanonicalCode& code, bool planted) {
  if (code.code.empty()) throw std::invalid_argument("empty canonical code");
  RootedTree t;
  t.planted = planted;
  t.tree.n = static_cast<int>(code.code.size());
  t.tree.adj.assign(t.tree.n, {});
  size_t pos = 0;
  int next = 0;
  // Preorder reconstruction: read a child count, then that many subtrees.
  auto rec = [&](auto&& self, int parent) -> void {
    const int v = next++;
    if (parent >= 0) add_edge(t.tree, parent, v);
    if (pos >= code.code.size()) throw std::invalid_argument("truncated canonical code");
    const int k = code.code[pos++];
    for (int i = 0; i < k; ++i) self(self, v);
  };
  rec(rec, -1);
  if (pos != code.code.size() || next != t.tree.n)
    throw std::invalid_argument("malformed canonical code");
  return t;
}

int diameter(const FreeTree& t) {
  check_vertex_count(t.n);
  auto bfs = [&](int s) {
    std::vector<int> dist(t.n, -1);
    std::queue<int> q;
    q.push(s);
    dist[s] = 0;
    int far = s;
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      if (dist[v] > dist[far]) far = v;
      for (int w : t.adj[v])
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          q.push(w);
        }
    }
    return std::make_pair(far, dist);
  };
  const int a = bfs(0).first;
  const auto [b, dist] = bfs(a);
  return dist[b];
}

std::vector<int> centers(const FreeTree& t) {
  check_vertex_count(t.n);
  if (t.n == 1) return {0};
  // Strip leaves layer by layer; the last one or two vertices remain.
  std::vector<int> degree(t.n);
  std::vector<int> layer;
  for (int v = 0; v < t.n; ++v) {
    degree[v] = static_cast<int>(t.adj[v].size());
    if (degree[v] <= 1) layer.push_back(v);
  }
  int remaining = t.n;
  while (remaining > 2) {
    std::vector<int> next;
    remaining -= static_cast<int>(layer.size());
    for (int v : layer)
      for (int w : t.adj[v])
        if (--degree[w] == 1) next.push_back(w);
    layer = std::move(next);
  }
  std::sort(layer.begin(), layer.end());
  return layer;
}

int max_degree(const FreeTree& t) {
  int d = 0;
  for (const auto& nb : t.adj) d = std::max(d, static_cast<int>(nb.size()));
  return d;
}

int depth(const RootedTree& t) {
  const Orientation o = orient(t.tree, t.root);
  return subtree_height(o, t.root);
}

RootedTree truncate_depth(const RootedTree& t, int ell) {
  if (ell < 0) throw std::invalid_argument("truncation depth must be >= 0");
  const Orientation o = orient(t.tree, t.root);
  std::vector<int> dist(t.tree.n, 0);
  std::vector<int> label(t.tree.n, -1);
  RootedTree out;
  out.planted = t.planted;
  out.root = 0;
  std::vector<int> parents;
  // Preorder over kept vertices keeps parent labels below child labels.
  for (int v : o.preorder) {
    if (o.parent[v] >= 0) dist[v] = dist[o.parent[v]] + 1;
    if (dist[v] > ell) continue;
    if (o.parent[v] >= 0) {
      label[v] = static_cast<int>(parents.size()) + 1;
      parents.push_back(label[o.parent[v]]);
    } else {
      label[v] = 0;
    }
  }
  out.tree.n = static_cast<int>(parents.size()) + 1;
  out.tree.adj.assign(out.tree.n, {});
  for (size_t i = 0; i < parents.size(); ++i)
    add_edge(out.tree, parents[i], static_cast<int>(i) + 1);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

RootedTree shape_to_tree(const Shape& sh, bool planted) {
  return tree_from_code({sh.code}, planted);
}

std::vector<RootedTree> enumerate_planted(int n, int delta) {
  auto& cache = cache_for(delta);
  std::vector<RootedTree> out;
  for (const Shape& sh : cache.planted(n)) out.push_back(shape_to_tree(sh, true));
  return out;
}

std::vector<RootedTree> enumerate_rooted(int n, int delta) {
  auto& cache = cache_for(delta);
  std::vector<Shape> shapes;
  if (n == 1) {
    shapes.push_back({1, 0, {0}});
  } else {
    std::vector<const Shape*> acc;
    cache.child_multisets(n - 1, delta, [&](const std::vector<const Shape*>& children) {
      Shape sh;
      sh.size = n;
      std::vector<std::vector<int>> codes;
      for (const Shape* c : children) {
        sh.height = std::max(sh.height, c->height + 1);
        codes.push_back(c->code);
      }
      sh.code = compose_code(std::move(codes));
      shapes.push_back(std::move(sh));
    });
    std::sort(shapes.begin(), shapes.end(),
              [](const Shape& a, const Shape& b) { return a.code < b.code; });
  }
  std::vector<RootedTree> out;
  out.reserve(shapes.size());
  for (const Shape& sh : shapes) out.push_back(shape_to_tree(sh, false));
  return out;
}

std::vector<RootedTree> enumerate_free(int n, int delta) {
  auto& cache = cache_for(delta);
  std::vector<std::pair<CanonicalCode, RootedTree>> found;

  if (n == 1) {
    RootedTree t = tree_from_code({{0}});
    found.emplace_back(canonical_code(t.tree), std::move(t));
  } else {
    // Unique central vertex: root it there. The root must have at least two
    // children of maximal height, otherwise the center lies deeper.
    std::vector<const Shape*> acc;
    cache.child_multisets(n - 1, delta, [&](const std::vector<const Shape*>& children) {
      int hmax = -1, count = 0;
      for (const Shape* c : children) {
        if (c->height > hmax) {
          hmax = c->height;
          count = 1;
        } else if (c->height == hmax) {
          ++count;
        }
      }
      if (count < 2) return;
      std::vector<std::vector<int>> codes;
      for (const Shape* c : children) codes.push_back(c->code);
      RootedTree t = tree_from_code({compose_code(std::move(codes))});
      found.emplace_back(canonical_code(t.tree), std::move(t));
    });

    // Central edge: an unordered pair of planted halves of equal height.
    for (int sa = 1; sa <= n - sa; ++sa) {
      const int sb = n - sa;
      const auto& pa = cache.planted(sa);
      const auto& pb = cache.planted(sb);
      for (size_t i = 0; i < pa.size(); ++i) {
        const size_t jstart = (sa == sb) ? i : 0;
        for (size_t j = jstart; j < pb.size(); ++j) {
          if (pa[i].height != pb[j].height) continue;
          RootedTree a = shape_to_tree(pa[i], false);
          const RootedTree b = shape_to_tree(pb[j], false);
          // Join the two roots: b is appended with shifted labels.
          FreeTree t;
          t.n = n;
          t.adj.assign(n, {});
          for (int v = 0; v < a.tree.n; ++v)
            for (int w : a.tree.adj[v])
              if (v < w) add_edge(t, v, w);
          for (int v = 0; v < b.tree.n; ++v)
            for (int w : b.tree.adj[v])
              if (v < w) add_edge(t, v + sa, w + sa);
          add_edge(t, 0, sa);
          CanonicalCode code = canonical_code(t);
          RootedTree rooted = tree_from_code(code);
          found.emplace_back(std::move(code), std::move(rooted));
        }
      }
    }
  }

  std::sort(found.begin(), found.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<RootedTree> out;
  out.reserve(found.size());
  for (auto& [code, t] : found) out.push_back(std::move(t));
  return out;
}

}  // namespace

std::vector<RootedTree> enumerate_trees(TreeKind kind, int n, int delta) {
  check_vertex_count(n);
  if (delta < 2) throw std::invalid_argument("degree bound must be >= 2");
  switch (kind) {
    case TreeKind::planted:
      return enumerate_planted(n, delta);
    case TreeKind::rooted:
      return enumerate_rooted(n, delta);
    case TreeKind::free_trees:
      return enumerate_free(n, delta);
  }
  throw std::invalid_argument("unknown tree kind");
}

}  // namespace trees
