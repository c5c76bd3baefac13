#include "trees/class_system.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "trees/counting.hpp"

namespace trees {

namespace {

void add_edge(FreeTree& t, int a, int b) {
  t.adj[a].push_back(b);
  t.adj[b].push_back(a);
}

// Fresh root with the given planted subtrees (each rooted at its vertex 0)
// attached as children.
FreeTree attach_children(const std::vector<const FreeTree*>& kids) {
  FreeTree out;
  out.n = 1;
  for (const FreeTree* k : kids) out.n += k->n;
  out.adj.assign(out.n, {});
  int base = 1;
  for (const FreeTree* k : kids) {
    add_edge(out, 0, base);
    for (int v = 0; v < k->n; ++v) {
      for (int w : k->adj[v]) {
        if (w > v) add_edge(out, base + v, base + w);
      }
    }
    base += k->n;
  }
  return out;
}

// Component of `start` after deleting the edge to `avoid`, relabeled so that
// `start` becomes vertex 0.
FreeTree split_subtree(const FreeTree& t, int start, int avoid) {
  std::vector<int> label(t.n, -1);
  std::vector<int> queue{start};
  label[start] = 0;
  FreeTree out;
  out.adj.assign(1, {});
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    int v = queue[qi];
    for (int w : t.adj[v]) {
      if (w == avoid || label[w] >= 0) continue;
      label[w] = static_cast<int>(out.adj.size());
      out.adj.push_back({});
      add_edge(out, label[v], label[w]);
      queue.push_back(w);
    }
  }
  out.n = static_cast<int>(out.adj.size());
  return out;
}

}  // namespace

std::vector<TruncationClass> enumerate_classes(int delta, int h, long long cap) {
  if (delta < 3) throw std::invalid_argument("enumerate_classes: delta must be at least 3");
  if (h < 1) throw std::invalid_argument("enumerate_classes: depth bound must be at least 1");
  if (cap < 1) throw std::invalid_argument("enumerate_classes: cap must be positive");
  // Count first: level sizes follow the multiset recurrence, so the total is
  // known exactly before any tree is materialized.
  {
    Int size(1);
    for (int d = 1; d <= h; ++d) {
      Int next(0);
      for (int k = 0; k < delta; ++k) {
        Int top = size + k - 1;
        Int b;
        mpz_bin_ui(b.get_mpz_t(), top.get_mpz_t(), static_cast<unsigned long>(k));
        next += b;
      }
      size = next;
      if (size > static_cast<long>(cap)) {
        throw resource_error("enumerate_classes: delta=" + std::to_string(delta) + ", h=" +
                             std::to_string(h) + " needs " + to_string(size) +
                             " classes, above the cap of " + std::to_string(cap));
      }
    }
  }

  struct Gen {
    FreeTree t;
    int depth = 0;
  };
  std::vector<Gen> level;
  {
    FreeTree one;
    one.n = 1;
    one.adj.assign(1, {});
    level.push_back({one, 0});
  }
  // Shapes of depth <= d are exactly the root plus a multiset of at most
  // delta-1 shapes of depth <= d-1; only the last level is kept.
  for (int d = 1; d <= h; ++d) {
    std::vector<Gen> next;
    std::vector<int> pick;
    auto rec = [&](auto&& self, int min_idx) -> void {
      std::vector<const FreeTree*> kids;
      int dep = 0;
      for (int i : pick) {
        kids.push_back(&level[i].t);
        dep = std::max(dep, level[i].depth + 1);
      }
      next.push_back({attach_children(kids), dep});
      if (static_cast<int>(pick.size()) == delta - 1) return;
      for (int i = min_idx; i < static_cast<int>(level.size()); ++i) {
        pick.push_back(i);
        self(self, i);
        pick.pop_back();
      }
    };
    rec(rec, 0);
    level = std::move(next);
  }

  std::vector<std::pair<CanonicalCode, int>> keyed;
  keyed.reserve(level.size());
  for (int i = 0; i < static_cast<int>(level.size()); ++i) {
    keyed.emplace_back(canonical_code(RootedTree{level[i].t, 0, true}), i);
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<TruncationClass> out;
  out.reserve(level.size());
  for (const auto& [code, i] : keyed) {
    out.push_back({RootedTree{std::move(level[i].t), 0, true}, level[i].depth == h});
  }
  return out;
}

ClassSystem build_system(int delta, const FreeTree& H) {
  if (delta < 3) throw std::invalid_argument("build_system: delta must be at least 3");
  if (H.n < 1 || static_cast<int>(H.adj.size()) != H.n) {
    throw std::invalid_argument("build_system: malformed subtree");
  }
  ClassSystem sys;
  sys.delta = delta;
  sys.pattern = H;
  sys.subtree = canonical_code(H);
  if (H.n == 1) {
    sys.single_vertex = true;
    return sys;
  }
  if (max_degree(H) > delta) {
    std::cerr << "build_system: subtree max degree " << max_degree(H) << " exceeds delta="
              << delta << "; every occurrence count is zero\n";
    sys.trivial_zero = true;
    sys.h = 1;  // smallest system; all marking exponents below vanish
  } else {
    sys.h = diameter(H);
  }
  sys.classes = enumerate_classes(delta, sys.h);
  const int m = static_cast<int>(sys.classes.size());

  std::map<CanonicalCode, int> gid_of;
  for (int i = 0; i < m; ++i) {
    if (sys.classes[i].deep) continue;
    gid_of.emplace(canonical_code(sys.classes[i].shape), static_cast<int>(sys.group_shape.size()));
    sys.group_shape.push_back(i);
  }
  sys.group_map.assign(sys.group_shape.size(), {});
  sys.group_of.assign(m, -1);
  for (int i = 0; i < m; ++i) {
    int g = sys.classes[i].deep
                ? gid_of.at(canonical_code(truncate_depth(sys.classes[i].shape, sys.h - 1)))
                : gid_of.at(canonical_code(sys.classes[i].shape));
    sys.group_of[i] = g;
    sys.group_map[g].push_back(i);
  }
  for (int i = 0; i < m; ++i) {
    if (!sys.classes[i].deep) continue;
    ClassEquation eq;
    eq.class_id = i;
    eq.k_root = occurrences_containing_root(H, sys.classes[i].shape);
    const RootedTree& s = sys.classes[i].shape;
    std::map<int, int> mult;
    for (int c : s.tree.adj[s.root]) {
      FreeTree sub = split_subtree(s.tree, c, s.root);
      mult[gid_of.at(canonical_code(RootedTree{std::move(sub), 0, true}))] += 1;
    }
    eq.children.assign(mult.begin(), mult.end());
    sys.deep_ids.push_back(i);
    sys.equations.push_back(std::move(eq));
  }
  return sys;
}

ConnectivityReport check_strong_connectivity(const ClassSystem& sys) {
  ConnectivityReport rep;
  const int n = static_cast<int>(sys.equations.size());
  if (n == 0) {
    rep.strongly_connected = true;
    return rep;
  }
  std::vector<int> deep_idx(sys.classes.size(), -1);
  for (int i = 0; i < n; ++i) deep_idx[sys.deep_ids[i]] = i;
  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; ++i) {
    std::set<int> outs;
    for (const auto& child : sys.equations[i].children) {
      for (int member : sys.group_map[child.first]) {
        if (deep_idx[member] >= 0) outs.insert(deep_idx[member]);
      }
    }
    adj[i].assign(outs.begin(), outs.end());
  }

  std::vector<int> idx(n, -1), low(n, 0), on_stack(n, 0), stck;
  int counter = 0;
  struct Frame {
    int v;
    size_t e;
  };
  for (int s = 0; s < n; ++s) {
    if (idx[s] >= 0) continue;
    std::vector<Frame> frames{{s, 0}};
    idx[s] = low[s] = counter++;
    stck.push_back(s);
    on_stack[s] = 1;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.e < adj[f.v].size()) {
        int w = adj[f.v][f.e++];
        if (idx[w] < 0) {
          idx[w] = low[w] = counter++;
          stck.push_back(w);
          on_stack[w] = 1;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], idx[w]);
        }
      } else {
        int v = f.v;
        frames.pop_back();
        if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
        if (low[v] == idx[v]) {
          std::vector<int> comp;
          while (true) {
            int w = stck.back();
            stck.pop_back();
            on_stack[w] = 0;
            comp.push_back(sys.deep_ids[w]);
            if (w == v) break;
          }
          std::sort(comp.begin(), comp.end());
          rep.components.push_back(std::move(comp));
        }
      }
    }
  }
  bool self_dep = false;
  if (n == 1) {
    for (int w : adj[0]) self_dep = self_dep || w == 0;
  }
  rep.strongly_connected = rep.components.size() == 1 && (n > 1 || self_dep);
  return rep;
}

namespace {

// The bootstrap below is generic in the coefficient carried alongside each
// x-power: the full marking polynomial, a second-order Taylor jet at u=1, or
// a bare rational (u erased). All three share one node graph evaluator.

struct UPolyRing {
  using T = UPoly;
  static T zero() { return UPoly(); }
  static T uterm(long long k) { return UPoly::term(k, Rat(1)); }
  static void add_to(T& a, const T& b) { a.add_scaled(b, Rat(1)); }
  static void add_scaled_to(T& a, const T& b, const Rat& w, long long ushift) {
    a.add_scaled(b, w, ushift);
  }
  static void add_mul(T& acc, const T& a, const T& b) { acc.add_scaled(a * b, Rat(1)); }
  static T stretch(const T& a, int d) { return a.stretched(d); }
  static T ushifted(const T& a, long long k) { return a.shifted(k); }
  static bool is_zero(const T& a) { return a.empty(); }
};

struct ScalarRing {
  using T = Rat;
  static T zero() { return Rat(0); }
  static T uterm(long long) { return Rat(1); }
  static void add_to(T& a, const T& b) { a += b; }
  static void add_scaled_to(T& a, const T& b, const Rat& w, long long) { a += b * w; }
  static void add_mul(T& acc, const T& a, const T& b) { acc += a * b; }
  static T stretch(const T& a, int) { return a; }
  static T ushifted(const T& a, long long) { return a; }
  static bool is_zero(const T& a) { return a == 0; }
};

// Taylor jet v0 + v1*e + v2*e^2 at e = u-1.
struct Jet2 {
  Rat v0, v1, v2;
};

struct Jet2Ring {
  using T = Jet2;
  static T zero() { return {Rat(0), Rat(0), Rat(0)}; }
  static T uterm(long long k) {
    Rat kk(static_cast<long>(k));
    return {Rat(1), kk, kk * (kk - 1) / 2};
  }
  static void add_to(T& a, const T& b) {
    a.v0 += b.v0;
    a.v1 += b.v1;
    a.v2 += b.v2;
  }
  static T mul(const T& a, const T& b) {
    return {a.v0 * b.v0, a.v0 * b.v1 + a.v1 * b.v0, a.v0 * b.v2 + a.v1 * b.v1 + a.v2 * b.v0};
  }
  static void add_scaled_to(T& a, const T& b, const Rat& w, long long k) {
    T s = mul(b, uterm(k));
    a.v0 += s.v0 * w;
    a.v1 += s.v1 * w;
    a.v2 += s.v2 * w;
  }
  static void add_mul(T& acc, const T& a, const T& b) { add_to(acc, mul(a, b)); }
  static T stretch(const T& a, int d) {
    // u -> u^d moves the expansion point: u^d - 1 = d e + C(d,2) e^2 + O(e^3).
    Rat dd(d);
    return {a.v0, dd * a.v1, Rat(d * (d - 1) / 2) * a.v1 + dd * dd * a.v2};
  }
  static T ushifted(const T& a, long long k) { return mul(a, uterm(k)); }
  static bool is_zero(const T& a) { return a.v0 == 0 && a.v1 == 0 && a.v2 == 0; }
};

// Incremental per-coefficient evaluation of the class system. Shared
// subexpressions (stretches of a group series, cycle-type chains, multiset
// products) are deduplicated into one DAG; each step extends every node by a
// single coefficient, so unknowns may feed back into their own equations.
template <class Ring>
class SystemSolver {
 public:
  using T = typename Ring::T;

  SystemSolver(const ClassSystem& sys, int order, bool with_columns) : sys_(sys), order_(order) {
    build();
    if (with_columns) build_columns();
    run();
  }

  std::vector<std::vector<T>> deep;  // per unknown, coefficients 0..order
  std::vector<T> p, r, t;
  std::vector<std::vector<T>> columns;  // per group, when requested

  const std::vector<T>& group_series(int g) const { return nodes_[group_node_[g]].memo; }

 private:
  struct Node {
    int kind = 0;  // 0 source, 1 product, 2 stretch, 3 weighted sum
    int a = -1;    // product/stretch operand
    int b = -1;    // product operand or stretch factor
    std::vector<std::tuple<int, Rat, long long>> terms;  // weighted sum
    int mono_n = -1;                                     // optional monomial position
    long long mono_u = 0;
    int val = 0;  // lower bound of the x-valuation, used to skip zero work
    std::vector<T> memo;
  };

  const ClassSystem& sys_;
  int order_;
  std::vector<Node> nodes_;
  int one_node_ = -1;
  std::vector<int> src_node_;
  std::vector<int> group_node_;
  std::map<std::pair<int, int>, int> stretch_of_;
  std::map<std::pair<int, std::vector<int>>, int> chain_of_;
  std::map<std::pair<int, int>, int> z_of_;
  std::map<std::vector<int>, int> prod_of_;
  std::vector<int> eq_node_;
  std::vector<std::pair<int, long long>> r_terms_;
  std::vector<std::tuple<int, Rat, long long>> t_terms_;
  std::vector<std::vector<std::pair<int, long long>>> col_terms_;

  int new_node(Node n) {
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
  }

  int get_stretch(int g, int d) {
    auto it = stretch_of_.find({g, d});
    if (it != stretch_of_.end()) return it->second;
    Node n;
    n.kind = 2;
    n.a = group_node_[g];
    n.b = d;
    n.val = d * nodes_[n.a].val;
    int id = new_node(std::move(n));
    stretch_of_.emplace(std::make_pair(g, d), id);
    return id;
  }

  int factor_node(int g, int d) { return d == 1 ? group_node_[g] : get_stretch(g, d); }

  int get_chain(int g, const std::vector<int>& parts) {
    if (parts.size() == 1) return factor_node(g, parts[0]);
    auto it = chain_of_.find({g, parts});
    if (it != chain_of_.end()) return it->second;
    std::vector<int> prefix(parts.begin(), parts.end() - 1);
    int a = get_chain(g, prefix);
    int b = factor_node(g, parts.back());
    Node n;
    n.kind = 1;
    n.a = a;
    n.b = b;
    n.val = nodes_[a].val + nodes_[b].val;
    int id = new_node(std::move(n));
    chain_of_.emplace(std::make_pair(g, parts), id);
    return id;
  }

  int get_z(int g, int l) {
    if (l == 0) return one_node_;
    auto it = z_of_.find({g, l});
    if (it != z_of_.end()) return it->second;
    Node n;
    n.kind = 3;
    n.val = order_ + 1;
    for (const auto& ct : cycles::cycle_types(l)) {
      std::vector<int> parts;
      for (const auto& [d, m] : ct.parts) {
        for (int i = 0; i < m; ++i) parts.push_back(d);
      }
      std::sort(parts.begin(), parts.end());
      int c = get_chain(g, parts);
      n.val = std::min(n.val, nodes_[c].val);
      n.terms.emplace_back(c, ct.weight, 0);
    }
    int id = new_node(std::move(n));
    z_of_.emplace(std::make_pair(g, l), id);
    return id;
  }

  int get_prodlist(std::vector<int> factors) {
    std::sort(factors.begin(), factors.end());
    if (factors.empty()) return one_node_;
    if (factors.size() == 1) return factors[0];
    auto it = prod_of_.find(factors);
    if (it != prod_of_.end()) return it->second;
    std::vector<int> prefix(factors.begin(), factors.end() - 1);
    int a = get_prodlist(prefix);
    int b = factors.back();
    Node n;
    n.kind = 1;
    n.a = a;
    n.b = b;
    n.val = nodes_[a].val + nodes_[b].val;
    int id = new_node(std::move(n));
    prod_of_.emplace(std::move(factors), id);
    return id;
  }

  void build() {
    const int N = static_cast<int>(sys_.deep_ids.size());
    const int G = static_cast<int>(sys_.group_shape.size());
    {
      Node n;
      n.kind = 3;
      n.mono_n = 0;
      n.mono_u = 0;
      one_node_ = new_node(std::move(n));
    }
    std::vector<int> deep_idx(sys_.classes.size(), -1);
    src_node_.resize(N);
    for (int i = 0; i < N; ++i) {
      deep_idx[sys_.deep_ids[i]] = i;
      Node n;
      n.kind = 0;
      n.val = sys_.classes[sys_.deep_ids[i]].shape.tree.n;
      src_node_[i] = new_node(std::move(n));
    }
    group_node_.resize(G);
    for (int g = 0; g < G; ++g) {
      const TruncationClass& shallow = sys_.classes[sys_.group_shape[g]];
      Node n;
      n.kind = 3;
      n.mono_n = shallow.shape.tree.n;
      n.mono_u = occurrences(sys_.pattern, shallow.shape.tree);
      n.val = n.mono_n;
      for (int member : sys_.group_map[g]) {
        if (deep_idx[member] >= 0) n.terms.emplace_back(src_node_[deep_idx[member]], Rat(1), 0);
      }
      group_node_[g] = new_node(std::move(n));
    }
    eq_node_.resize(N);
    for (int i = 0; i < N; ++i) {
      std::vector<int> factors;
      for (const auto& [g, l] : sys_.equations[i].children) factors.push_back(get_z(g, l));
      eq_node_[i] = get_prodlist(std::move(factors));
    }
    // Root of an unrestricted rooted tree: a multiset of group shapes with
    // total multiplicity up to delta, each carrying its own root exponent.
    {
      std::vector<std::pair<int, int>> mset;
      auto emit = [&]() {
        std::vector<int> factors;
        std::vector<const FreeTree*> kids;
        for (const auto& [g, l] : mset) {
          factors.push_back(get_z(g, l));
          for (int c = 0; c < l; ++c) kids.push_back(&sys_.classes[sys_.group_shape[g]].shape.tree);
        }
        FreeTree joined = attach_children(kids);
        long long k = occurrences_containing_root(sys_.pattern, RootedTree{std::move(joined), 0, false});
        r_terms_.emplace_back(get_prodlist(std::move(factors)), k);
      };
      auto rec = [&](auto&& self, int g, int budget) -> void {
        if (g == G) {
          emit();
          return;
        }
        self(self, g + 1, budget);
        for (int l = 1; l <= budget; ++l) {
          mset.emplace_back(g, l);
          self(self, g + 1, budget - l);
          mset.pop_back();
        }
      };
      rec(rec, 0, sys_.delta);
    }
    // Edge-rooted pairing: every unordered pair of groups, plus the diagonal
    // substitution (x^2, u^2) for symmetric pairs.
    for (int a = 0; a < G; ++a) {
      const RootedTree& sa = sys_.classes[sys_.group_shape[a]].shape;
      for (int b = a; b < G; ++b) {
        const RootedTree& sb = sys_.classes[sys_.group_shape[b]].shape;
        long long k = occurrences_spanning_join(sys_.pattern, sa, sb);
        int node = get_prodlist({group_node_[a], group_node_[b]});
        t_terms_.emplace_back(node, a == b ? Rat(-1, 2) : Rat(-1), k);
      }
      long long kd = occurrences_spanning_join(sys_.pattern, sa, sa);
      t_terms_.emplace_back(get_stretch(a, 2), Rat(1, 2), kd);
    }
  }

  void build_columns() {
    col_terms_.assign(sys_.group_shape.size(), {});
    for (int i = 0; i < static_cast<int>(sys_.equations.size()); ++i) {
      const ClassEquation& eq = sys_.equations[i];
      for (size_t s = 0; s < eq.children.size(); ++s) {
        std::vector<int> factors;
        for (size_t s2 = 0; s2 < eq.children.size(); ++s2) {
          const auto& [g2, l2] = eq.children[s2];
          if (s2 == s) {
            if (l2 > 1) factors.push_back(get_z(g2, l2 - 1));
          } else {
            factors.push_back(get_z(g2, l2));
          }
        }
        col_terms_[eq.children[s].first].emplace_back(get_prodlist(std::move(factors)), eq.k_root);
      }
    }
  }

  void run() {
    const int N = static_cast<int>(sys_.deep_ids.size());
    const int G = static_cast<int>(sys_.group_shape.size());
    columns.assign(col_terms_.size(), {});
    for (int n = 0; n <= order_; ++n) {
      // Unknowns first: coefficient n of x * u^k * (product) reads the
      // product at n-1, which the previous step has already extended.
      for (int i = 0; i < N; ++i) {
        T v = Ring::zero();
        if (n >= 1) {
          const T& prev = nodes_[eq_node_[i]].memo[n - 1];
          if (!Ring::is_zero(prev)) v = Ring::ushifted(prev, sys_.equations[i].k_root);
        }
        nodes_[src_node_[i]].memo.push_back(std::move(v));
      }
      for (int id = 0; id < static_cast<int>(nodes_.size()); ++id) {
        Node& node = nodes_[id];
        if (node.kind == 0) continue;
        T acc = Ring::zero();
        switch (node.kind) {
          case 1: {
            const auto& ma = nodes_[node.a].memo;
            const auto& mb = nodes_[node.b].memo;
            const int hi = n - nodes_[node.b].val;
            for (int i = nodes_[node.a].val; i <= hi; ++i) {
              const T& x1 = ma[i];
              const T& x2 = mb[n - i];
              if (Ring::is_zero(x1) || Ring::is_zero(x2)) continue;
              Ring::add_mul(acc, x1, x2);
            }
            break;
          }
          case 2: {
            if (n % node.b == 0) {
              const T& base = nodes_[node.a].memo[n / node.b];
              if (!Ring::is_zero(base)) acc = Ring::stretch(base, node.b);
            }
            break;
          }
          default: {
            if (n == node.mono_n) Ring::add_to(acc, Ring::uterm(node.mono_u));
            for (const auto& [src, w, ush] : node.terms) {
              const T& v = nodes_[src].memo[n];
              if (!Ring::is_zero(v)) Ring::add_scaled_to(acc, v, w, ush);
            }
            break;
          }
        }
        node.memo.push_back(std::move(acc));
      }
      {
        T acc = Ring::zero();
        for (int g = 0; g < G; ++g) Ring::add_to(acc, nodes_[group_node_[g]].memo[n]);
        p.push_back(std::move(acc));
      }
      {
        T acc = Ring::zero();
        if (n >= 1) {
          for (const auto& [node, k] : r_terms_) {
            const T& v = nodes_[node].memo[n - 1];
            if (!Ring::is_zero(v)) Ring::add_scaled_to(acc, v, Rat(1), k);
          }
        }
        r.push_back(acc);
        for (const auto& [node, w, k] : t_terms_) {
          const T& v = nodes_[node].memo[n];
          if (!Ring::is_zero(v)) Ring::add_scaled_to(acc, v, w, k);
        }
        t.push_back(std::move(acc));
      }
      for (size_t g = 0; g < col_terms_.size(); ++g) {
        T acc = Ring::zero();
        if (n >= 1) {
          for (const auto& [node, k] : col_terms_[g]) {
            const T& v = nodes_[node].memo[n - 1];
            if (!Ring::is_zero(v)) Ring::add_scaled_to(acc, v, Rat(1), k);
          }
        }
        columns[g].push_back(std::move(acc));
      }
    }
    deep.assign(N, {});
    for (int i = 0; i < N; ++i) deep[i] = nodes_[src_node_[i]].memo;
  }
};

}  // namespace

SolvedSeries solve_series(const ClassSystem& sys, int order) {
  if (sys.single_vertex) {
    throw std::invalid_argument("solve_series: the one-vertex subtree has no class system");
  }
  if (order < 0) throw std::invalid_argument("solve_series: order must be non-negative");
  SystemSolver<UPolyRing> solver(sys, order, false);
  SolvedSeries out{{}, BiSeries(order), BiSeries(order), BiSeries(order)};
  for (auto& series : solver.deep) {
    BiSeries s(order);
    for (int n = 0; n <= order; ++n) s.set_coeff(n, std::move(series[n]));
    out.deep.push_back(std::move(s));
  }
  for (int n = 0; n <= order; ++n) {
    out.p.set_coeff(n, std::move(solver.p[n]));
    out.r.set_coeff(n, std::move(solver.r[n]));
    out.t.set_coeff(n, std::move(solver.t[n]));
  }
  return out;
}

MomentSeries mean_variance_series(const ClassSystem& sys, int order, MomentRoute route) {
  if (order < 0) throw std::invalid_argument("mean_variance_series: order must be non-negative");
  MomentSeries out;
  out.total.assign(order + 1, Rat(0));
  out.m1.assign(order + 1, Rat(0));
  out.m2.assign(order + 1, Rat(0));
  if (sys.single_vertex) {
    // Every vertex is an occurrence, so the count over an n-vertex tree is n.
    CountingBundle bundle = counting_series(sys.delta, std::max(order, 1));
    for (int n = 0; n <= order; ++n) {
      const Rat& tn = bundle.t.coeff(n);
      out.total[n] = tn;
      out.m1[n] = tn * n;
      out.m2[n] = tn * n * n;
    }
    return out;
  }
  if (route == MomentRoute::bivariate) {
    SystemSolver<UPolyRing> solver(sys, order, false);
    for (int n = 0; n <= order; ++n) {
      const UPoly& c = solver.t[n];
      out.total[n] = c.at_one();
      out.m1[n] = c.weighted_sum(1);
      out.m2[n] = c.weighted_sum(2) + out.m1[n];
    }
  } else {
    SystemSolver<Jet2Ring> solver(sys, order, false);
    for (int n = 0; n <= order; ++n) {
      const Jet2& c = solver.t[n];
      out.total[n] = c.v0;
      out.m1[n] = c.v1;
      out.m2[n] = c.v2 * 2 + c.v1;
    }
  }
  return out;
}

std::vector<UniSeries> jacobian_column_sums(const ClassSystem& sys, int order) {
  if (sys.single_vertex) {
    throw std::invalid_argument("jacobian_column_sums: the one-vertex subtree has no class system");
  }
  if (order < 0) throw std::invalid_argument("jacobian_column_sums: order must be non-negative");
  SystemSolver<ScalarRing> solver(sys, order, true);
  std::vector<UniSeries> out;
  out.reserve(sys.deep_ids.size());
  for (int id : sys.deep_ids) {
    const std::vector<Rat>& col = solver.columns[sys.group_of[id]];
    UniSeries s(order);
    for (int n = 0; n <= order; ++n) s.set_coeff(n, col[n]);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<double> jacobian_column_sums_at(const ClassSystem& sys, double x, int order) {
  std::vector<double> out;
  for (const UniSeries& s : jacobian_column_sums(sys, order)) {
    out.push_back(eval_lower_bound(s, x));
  }
  return out;
}

namespace {

double eval_poly(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
  return acc;
}

double eval_poly_derivative(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (size_t i = c.size(); i-- > 1;) acc = acc * x + c[i] * static_cast<double>(i);
  return acc;
}

// Z(S_l) at explicit slot values s[1..l].
double zval(int l, const std::vector<double>& s) {
  double acc = 0.0;
  for (const auto& ct : cycles::cycle_types(l)) {
    double term = to_double(ct.weight);
    for (const auto& [d, m] : ct.parts) term *= std::pow(s[d], m);
    acc += term;
  }
  return acc;
}

double zval_slot_derivative(int l, int dd, const std::vector<double>& s) {
  double acc = 0.0;
  for (const auto& ct : cycles::cycle_types(l)) {
    int mdd = 0;
    for (const auto& [d, m] : ct.parts) {
      if (d == dd) mdd = m;
    }
    if (mdd == 0) continue;
    double term = to_double(ct.weight) * mdd * std::pow(s[dd], mdd - 1);
    for (const auto& [d, m] : ct.parts) {
      if (d != dd) term *= std::pow(s[d], m);
    }
    acc += term;
  }
  return acc;
}

// Gaussian elimination with partial pivoting, in place.
bool solve_dense(std::vector<std::vector<double>>& m, std::vector<double>& rhs) {
  const int n = static_cast<int>(rhs.size());
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int rw = col + 1; rw < n; ++rw) {
      if (std::fabs(m[rw][col]) > std::fabs(m[piv][col])) piv = rw;
    }
    if (m[piv][col] == 0.0) return false;
    std::swap(m[piv], m[col]);
    std::swap(rhs[piv], rhs[col]);
    for (int rw = col + 1; rw < n; ++rw) {
      double f = m[rw][col] / m[col][col];
      if (f == 0.0) continue;
      for (int c2 = col; c2 < n; ++c2) m[rw][c2] -= f * m[col][c2];
      rhs[rw] -= f * rhs[col];
    }
  }
  for (int rw = n - 1; rw >= 0; --rw) {
    double acc = rhs[rw];
    for (int c2 = rw + 1; c2 < n; ++c2) acc -= m[rw][c2] * rhs[c2];
    rhs[rw] = acc / m[rw][rw];
  }
  return true;
}

// Finite-dimensional view of the system at u=1: the unknown vector a holds
// the deep class values, the first-power slots are free in a, the stretched
// slots are series evaluations inside the disc (arguments x^d, d >= 2).
struct NumericSystem {
  const ClassSystem& sys;
  int count = 0;  // unknowns
  int groups = 0;
  int maxl = 1;
  std::vector<int> gsize;
  std::vector<double> gocc;
  std::vector<std::vector<int>> gdeep;      // deep indices per group
  std::vector<std::vector<double>> b0, b1;  // group series and their u-derivative at u=1
  std::vector<std::vector<double>> a0;      // per-unknown series, for initial guesses

  NumericSystem(const ClassSystem& s, int order) : sys(s) {
    count = static_cast<int>(s.deep_ids.size());
    groups = static_cast<int>(s.group_shape.size());
    for (const auto& eq : s.equations) {
      for (const auto& [g, l] : eq.children) maxl = std::max(maxl, l);
    }
    SystemSolver<Jet2Ring> solver(s, order, false);
    std::vector<int> deep_idx(s.classes.size(), -1);
    for (int i = 0; i < count; ++i) deep_idx[s.deep_ids[i]] = i;
    gsize.resize(groups);
    gocc.resize(groups);
    gdeep.resize(groups);
    b0.resize(groups);
    b1.resize(groups);
    for (int g = 0; g < groups; ++g) {
      const FreeTree& shape = s.classes[s.group_shape[g]].shape.tree;
      gsize[g] = shape.n;
      gocc[g] = static_cast<double>(occurrences(s.pattern, shape));
      for (int member : s.group_map[g]) {
        if (deep_idx[member] >= 0) gdeep[g].push_back(deep_idx[member]);
      }
      for (const Jet2& c : solver.group_series(g)) {
        b0[g].push_back(to_double(c.v0));
        b1[g].push_back(to_double(c.v1));
      }
    }
    a0.resize(count);
    for (int i = 0; i < count; ++i) {
      for (const Jet2& c : solver.deep[i]) a0[i].push_back(to_double(c.v0));
    }
  }

  void slots(double x, const std::vector<double>& a, std::vector<std::vector<double>>& s) const {
    s.assign(groups, {});
    for (int g = 0; g < groups; ++g) {
      s[g].assign(maxl + 1, 0.0);
      s[g][1] = std::pow(x, gsize[g]);
      for (int w : gdeep[g]) s[g][1] += a[w];
      for (int d = 2; d <= maxl; ++d) s[g][d] = eval_poly(b0[g], std::pow(x, d));
    }
  }

  void eval_map(double x, const std::vector<double>& a, std::vector<double>& F) const {
    std::vector<std::vector<double>> s;
    slots(x, a, s);
    F.assign(count, 0.0);
    for (int i = 0; i < count; ++i) {
      double prod = x;
      for (const auto& [g, l] : sys.equations[i].children) prod *= zval(l, s[g]);
      F[i] = prod;
    }
  }

  void jacobian(double x, const std::vector<double>& a, std::vector<std::vector<double>>& J) const {
    std::vector<std::vector<double>> s;
    slots(x, a, s);
    J.assign(count, std::vector<double>(count, 0.0));
    for (int i = 0; i < count; ++i) {
      const auto& ch = sys.equations[i].children;
      std::vector<double> zv(ch.size());
      for (size_t c = 0; c < ch.size(); ++c) zv[c] = zval(ch[c].second, s[ch[c].first]);
      for (size_t c = 0; c < ch.size(); ++c) {
        double others = x;
        for (size_t c2 = 0; c2 < ch.size(); ++c2) {
          if (c2 != c) others *= zv[c2];
        }
        double v = others * zval_slot_derivative(ch[c].second, 1, s[ch[c].first]);
        for (int w : gdeep[ch[c].first]) J[i][w] += v;
      }
    }
  }
};

bool newton_fixed_point(const NumericSystem& ns, double x, std::vector<double>& a, int iters) {
  const int n = ns.count;
  std::vector<double> F, rhs;
  std::vector<std::vector<double>> J;
  for (int it = 0; it < iters; ++it) {
    ns.eval_map(x, a, F);
    double resid = 0.0, scale = 1.0;
    for (int i = 0; i < n; ++i) {
      resid = std::max(resid, std::fabs(F[i] - a[i]));
      scale = std::max(scale, std::fabs(a[i]));
    }
    if (resid < 1e-14 * scale) return true;
    ns.jacobian(x, a, J);
    rhs.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
      rhs[i] = F[i] - a[i];
      for (int c = 0; c < n; ++c) J[i][c] = (i == c ? 1.0 : 0.0) - J[i][c];
    }
    if (!solve_dense(J, rhs)) return false;
    double step = 0.0;
    for (int i = 0; i < n; ++i) {
      a[i] += rhs[i];
      step = std::max(step, std::fabs(rhs[i]));
    }
    if (step < 1e-12 * scale) return true;
  }
  return false;
}

}  // namespace

SingularityReport compute_mu(const ClassSystem& sys, double x0, int order) {
  if (!(x0 > 0.0 && x0 < 1.0)) {
    throw std::invalid_argument("compute_mu: x0 must lie inside (0,1)");
  }
  SingularityReport rep;
  rep.x0 = x0;
  if (sys.single_vertex) {
    rep.mu = 1.0;
    return rep;
  }
  ConnectivityReport conn = check_strong_connectivity(sys);
  if (!conn.strongly_connected) {
    std::string msg = "compute_mu: class dependency graph is not strongly connected; components:";
    for (const auto& comp : conn.components) {
      msg += " {";
      for (size_t i = 0; i < comp.size(); ++i) msg += (i ? "," : "") + std::to_string(comp[i]);
      msg += "}";
    }
    throw std::runtime_error(msg);
  }
  if (order < 60) order = 60;
  NumericSystem ns(sys, order);
  const int n = ns.count;

  // Continuation toward the fold: exact Newton solutions on a dyadic grid,
  // then the near-singular solve at x0 itself (convergence degrades to rate
  // 1/2 there, which the iteration budget absorbs).
  std::vector<double> a(n);
  {
    double xinit = x0 * (1.0 - 1.0 / 16.0);
    for (int i = 0; i < n; ++i) a[i] = eval_poly(ns.a0[i], xinit);
  }
  std::vector<std::pair<double, double>> grid;
  for (int j = 4; j <= 18; ++j) {
    double xj = x0 * (1.0 - std::ldexp(1.0, -j));
    newton_fixed_point(ns, xj, a, 80);
    // Early points only warm up the continuation; the square-root fit is
    // biased by its neglected analytic part unless the grid hugs the fold.
    if (j < 8) continue;
    double sum = 0.0;
    for (double v : a) sum += v;
    grid.emplace_back(xj, sum);
  }
  newton_fixed_point(ns, x0 * (1.0 - 1e-12), a, 400);
  double asum = 0.0;
  for (double v : a) asum += v;

  ExtrapolationFit fit = sqrt_extrapolate(grid, x0);
  rep.extrapolation_residual = fit.residual;
  if (std::fabs(fit.g - asum) > 2e-2 * std::max(1.0, std::fabs(asum))) {
    rep.warning = "grid extrapolation of the class values deviates from the fold solution; ";
  }

  std::vector<std::vector<double>> s;
  ns.slots(x0, a, s);
  double fu = 0.0, fx = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto& ch = sys.equations[i].children;
    std::vector<double> zv(ch.size());
    double prod = x0;
    for (size_t c = 0; c < ch.size(); ++c) {
      zv[c] = zval(ch[c].second, s[ch[c].first]);
      prod *= zv[c];
    }
    fu += static_cast<double>(sys.equations[i].k_root) * prod;
    fx += prod / x0;
    for (size_t c = 0; c < ch.size(); ++c) {
      const auto& [g, l] = ch[c];
      double others = x0;
      for (size_t c2 = 0; c2 < ch.size(); ++c2) {
        if (c2 != c) others *= zv[c2];
      }
      double inner_u = 0.0, inner_x = 0.0;
      for (int d = 1; d <= l; ++d) {
        double dz = zval_slot_derivative(l, d, s[g]);
        if (dz == 0.0) continue;
        double du, dx;
        if (d == 1) {
          // Only the shallow monomial moves: the unknown coordinates are held.
          du = ns.gocc[g] * std::pow(x0, ns.gsize[g]);
          dx = ns.gsize[g] * std::pow(x0, ns.gsize[g] - 1);
        } else {
          double xd = std::pow(x0, d);
          du = d * eval_poly(ns.b1[g], xd);
          dx = d * std::pow(x0, d - 1) * eval_poly_derivative(ns.b0[g], xd);
        }
        inner_u += dz * du;
        inner_x += dz * dx;
      }
      fu += others * inner_u;
      fx += others * inner_x;
    }
  }
  rep.mu = fu / (x0 * fx);

  std::vector<std::vector<double>> J;
  ns.jacobian(x0, a, J);
  double res = 0.0;
  for (int w = 0; w < n; ++w) {
    double cs = 0.0;
    for (int i = 0; i < n; ++i) cs += J[i][w];
    res = std::max(res, std::fabs(cs - 1.0));
  }
  rep.column_sum_residual = res;

  if (sys.trivial_zero) {
    rep.warning += "subtree max degree exceeds delta; the count is identically zero";
    return rep;
  }
  if (!(rep.mu > 0.0)) throw std::logic_error("compute_mu: growth constant must be positive");
  return rep;
}

}  // namespace trees
