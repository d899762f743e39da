/**
 * @file hassett_trees.hpp
 * @brief Combinatorial types of weighted pointed stable rational curves:
 *        dual trees whose vertices carry marked legs grouped into collision
 *        clusters.
 *
 * A type is stable for weights A when every cluster has weight at most 1 and
 * every vertex v has deg(v) + sum of leg weights > 2. Reduction to smaller
 * weights collapses the end components that fail the second condition; the
 * legs of a collapsed component become a single cluster on its neighbour.
 */
#pragma once

#include "moduli/core.hpp"

#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace moduli::trees {

// ---------------------------------------------------------------------------
// Weight data
// ---------------------------------------------------------------------------

struct WeightData {
  std::vector<Rational> weights;

  WeightData() = default;
  explicit WeightData(std::vector<Rational> w) : weights(std::move(w)) { validate(); }

  int n() const { return static_cast<int>(weights.size()); }
  const Rational& operator[](int leg) const { return weights[leg - 1]; }

  Rational sum(Mask legs) const {
    Rational s;
    for (int i : members_of(legs)) s += (*this)[i];
    return s;
  }

  void validate() const {
    if (weights.empty()) throw Error(ErrorCode::InvalidWeights, "no weights");
    Rational total;
    for (const auto& w : weights) {
      if (w.sign() <= 0 || w > Rational(1)) throw Error(ErrorCode::InvalidWeights, "weight " + w.str() + " not in (0,1]");
      total += w;
    }
    if (total <= Rational(2)) throw Error(ErrorCode::InvalidWeights, "total weight " + total.str() + " must exceed 2");
  }

  static WeightData sym(int n, const Rational& w) { return WeightData(std::vector<Rational>(n, w)); }

  /// n copies of the right endpoint 1/(m-k) of the level-k chamber.
  static WeightData sym_eps(int n, int k) { return sym(n, eps_range(n, k).second); }

  /// "sym:p/q", "eps:k" or "list:a1,a2,...".
  static WeightData parse(int n, std::string_view s) {
    auto colon = s.find(':');
    if (colon == std::string_view::npos)
      throw Error(ErrorCode::ParseError, "weights '" + std::string(s) + "' at position 0: expected sym:, eps: or list:");
    std::string_view kind = s.substr(0, colon), body = s.substr(colon + 1);
    if (kind == "sym") return sym(n, Rational::parse(body));
    if (kind == "eps") {
      auto v = parse_int_list(body);
      if (v.size() != 1) throw Error(ErrorCode::ParseError, "eps: expects one level index");
      return sym_eps(n, v[0]);
    }
    if (kind == "list") {
      std::vector<Rational> w;
      std::size_t pos = 0;
      while (true) {
        std::size_t comma = body.find(',', pos);
        w.push_back(Rational::parse(body.substr(pos, comma == std::string_view::npos ? comma : comma - pos)));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
      }
      if (static_cast<int>(w.size()) != n) throw Error(ErrorCode::InvalidWeights, "list length differs from n");
      return WeightData(std::move(w));
    }
    throw Error(ErrorCode::ParseError, "weights '" + std::string(s) + "' at position 0: unknown kind");
  }

  friend bool operator==(const WeightData&, const WeightData&) = default;
};

/// a_i >= b_i for every i.
inline bool dominates(const WeightData& a, const WeightData& b) {
  if (a.n() != b.n()) return false;
  for (int i = 1; i <= a.n(); ++i)
    if (a[i] < b[i]) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Combinatorial curve types
// ---------------------------------------------------------------------------

struct Vertex {
  int id = 0;
  std::vector<int> legs;                   // sorted
  std::vector<std::vector<int>> clusters;  // partition of legs

  friend bool operator==(const Vertex&, const Vertex&) = default;
};

struct CombCurveType {
  std::vector<Vertex> vertices;
  std::vector<std::pair<int, int>> edges;

  int n() const {
    int c = 0;
    for (const auto& v : vertices) c += static_cast<int>(v.legs.size());
    return c;
  }
  int edge_count() const { return static_cast<int>(edges.size()); }

  friend bool operator==(const CombCurveType&, const CombCurveType&) = default;
};

namespace detail {

struct Node {
  Mask legs = 0;
  std::vector<Mask> clusters;  // sorted by lowest member
  std::set<int> nbrs;
};

using Graph = std::map<int, Node>;

inline void sort_clusters(std::vector<Mask>& cs) {
  std::sort(cs.begin(), cs.end(), [](Mask a, Mask b) { return (a & (~a + 1)) < (b & (~b + 1)); });
}

/// Checks the structural invariants and converts to the adjacency form.
inline Graph to_graph(const CombCurveType& t) {
  if (t.vertices.empty()) throw Error(ErrorCode::MalformedTree, "no vertices");
  Graph g;
  int n = t.n();
  if (n < 3 || n > kMaxPoints) throw Error(ErrorCode::MalformedTree, "leg count out of range");
  Mask seen = 0;
  for (const auto& v : t.vertices) {
    if (g.count(v.id)) throw Error(ErrorCode::MalformedTree, "duplicate vertex id " + std::to_string(v.id));
    Node node;
    for (int l : v.legs) {
      if (l < 1 || l > n) throw Error(ErrorCode::MalformedTree, "leg " + std::to_string(l) + " out of range");
      if ((seen | node.legs) & bit(l)) throw Error(ErrorCode::MalformedTree, "leg " + std::to_string(l) + " repeated");
      node.legs |= bit(l);
    }
    seen |= node.legs;
    Mask covered = 0;
    for (const auto& c : v.clusters) {
      if (c.empty()) throw Error(ErrorCode::MalformedTree, "empty cluster");
      Mask cm = 0;
      for (int l : c) {
        if (l < 1 || l > n || !(node.legs & bit(l)) || ((covered | cm) & bit(l)))
          throw Error(ErrorCode::MalformedTree, "clusters do not partition the legs of vertex " + std::to_string(v.id));
        cm |= bit(l);
      }
      covered |= cm;
      node.clusters.push_back(cm);
    }
    if (covered != node.legs)
      throw Error(ErrorCode::MalformedTree, "clusters do not partition the legs of vertex " + std::to_string(v.id));
    sort_clusters(node.clusters);
    g.emplace(v.id, std::move(node));
  }
  if (seen != full_mask(n)) throw Error(ErrorCode::MalformedTree, "legs do not partition 1..n");
  for (auto [a, b] : t.edges) {
    if (a == b || !g.count(a) || !g.count(b)) throw Error(ErrorCode::MalformedTree, "bad edge");
    if (g[a].nbrs.count(b)) throw Error(ErrorCode::MalformedTree, "repeated edge");
    g[a].nbrs.insert(b);
    g[b].nbrs.insert(a);
  }
  if (t.edges.size() + 1 != g.size()) throw Error(ErrorCode::MalformedTree, "edge count is not vertices - 1");
  // Connectivity.
  std::set<int> reached{g.begin()->first};
  std::vector<int> stack{g.begin()->first};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : g[v].nbrs)
      if (reached.insert(w).second) stack.push_back(w);
  }
  if (reached.size() != g.size()) throw Error(ErrorCode::MalformedTree, "not connected");
  return g;
}

inline CombCurveType from_graph(const Graph& g) {
  CombCurveType t;
  std::map<int, int> renumber;
  for (const auto& [id, node] : g) renumber[id] = static_cast<int>(renumber.size());
  for (const auto& [id, node] : g) {
    Vertex v;
    v.id = renumber[id];
    v.legs = members_of(node.legs);
    for (Mask c : node.clusters) v.clusters.push_back(members_of(c));
    t.vertices.push_back(std::move(v));
    for (int w : node.nbrs)
      if (id < w) t.edges.emplace_back(renumber[id], renumber[w]);
  }
  std::sort(t.edges.begin(), t.edges.end());
  return t;
}

inline bool vertex_stable(const Node& v, const WeightData& w) {
  return Rational(static_cast<int>(v.nbrs.size())) + w.sum(v.legs) > Rational(2);
}

inline bool clusters_ok(const Node& v, const WeightData& w) {
  for (Mask c : v.clusters)
    if (w.sum(c) > Rational(1)) return false;
  return true;
}

inline std::string label(const Node& v) {
  std::string s;
  for (Mask c : v.clusters) s += "{" + mask_str(c) + "}";
  return s;
}

inline std::string rooted_encoding(const Graph& g, int v, int parent) {
  std::vector<std::string> kids;
  for (int w : g.at(v).nbrs)
    if (w != parent) kids.push_back(rooted_encoding(g, w, v));
  std::sort(kids.begin(), kids.end());
  std::string s = "[" + label(g.at(v));
  for (const auto& k : kids) s += k;
  return s + "]";
}

}  // namespace detail

/// Leg-labelled canonical form: the minimal rooted serialization over all
/// choices of root. Two types are isomorphic iff their encodings agree.
inline std::string canonical_encoding(const CombCurveType& t) {
  auto g = detail::to_graph(t);
  std::string best;
  for (const auto& [id, node] : g) {
    auto e = detail::rooted_encoding(g, id, -1);
    if (best.empty() || e < best) best = std::move(e);
  }
  return best;
}

inline bool is_stable_type(const CombCurveType& t, const WeightData& a) {
  auto g = detail::to_graph(t);
  if (t.n() != a.n()) throw Error(ErrorCode::MalformedTree, "leg count differs from weight length");
  for (const auto& [id, v] : g)
    if (!detail::clusters_ok(v, a) || !detail::vertex_stable(v, a)) return false;
  return true;
}

/// Collapses the components destabilized by passing from weights A to B.
inline CombCurveType reduce_type(const CombCurveType& t, const WeightData& a, const WeightData& b) {
  if (a.n() != b.n() || t.n() != a.n()) throw Error(ErrorCode::SizeMismatch, "weight lengths differ");
  if (!dominates(a, b)) throw Error(ErrorCode::WeightsNotDominated, "some a_i < b_i");
  if (!is_stable_type(t, a)) throw Error(ErrorCode::NotStableForSource, "type is not stable for the source weights");
  auto g = detail::to_graph(t);
  // Only end components can fail once a type is stable: a vertex of degree
  // >= 2 with a leg, or of degree >= 3, always passes.
  bool changed = true;
  while (changed && g.size() > 1) {
    changed = false;
    for (auto it = g.begin(); it != g.end(); ++it) {
      auto& v = it->second;
      if (v.nbrs.size() != 1 || detail::vertex_stable(v, b)) continue;
      int target = *v.nbrs.begin();
      auto& w = g[target];
      w.nbrs.erase(it->first);
      w.legs |= v.legs;
      if (v.legs != 0) {
        w.clusters.push_back(v.legs);
        detail::sort_clusters(w.clusters);
      }
      g.erase(it);
      changed = true;
      break;
    }
  }
  return detail::from_graph(g);
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

namespace detail {

inline bool compatible(Mask s, Mask t, Mask full) {
  return (s & t) == 0 || (s & ~t) == 0 || (t & ~s) == 0 || (s | t) == full;
}

/// Builds the tree of a family of pairwise compatible splits. Each split is
/// oriented away from leg 1; leg 1 sits on the root.
inline Graph tree_of_splits(int n, const std::vector<Mask>& splits) {
  Mask full = full_mask(n);
  std::vector<Mask> clades;
  for (Mask s : splits) clades.push_back((s & 1u) ? (full & ~s) : s);
  std::sort(clades.begin(), clades.end(), [](Mask a, Mask b) { return popcount(a) > popcount(b); });
  Graph g;
  g[0].legs = full;
  std::vector<int> parent(clades.size(), 0);
  for (std::size_t i = 0; i < clades.size(); ++i) {
    // Largest-first order: the last containing clade seen is the smallest.
    for (std::size_t j = 0; j < i; ++j)
      if ((clades[i] & ~clades[j]) == 0) parent[i] = static_cast<int>(j) + 1;
    int id = static_cast<int>(i) + 1;
    g[id].legs = clades[i];
  }
  for (std::size_t i = 0; i < clades.size(); ++i) {
    int id = static_cast<int>(i) + 1;
    g[parent[i]].legs &= ~clades[i];
    g[parent[i]].nbrs.insert(id);
    g[id].nbrs.insert(parent[i]);
  }
  return g;
}

/// Partitions of `legs` into clusters of weight at most 1.
inline void cluster_partitions(Mask legs, const WeightData& w, std::vector<std::vector<Mask>>& out) {
  std::vector<int> ls = members_of(legs);
  std::vector<Mask> blocks;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == ls.size()) {
      out.push_back(blocks);
      return;
    }
    Mask b = bit(ls[i]);
    // by index: the recursion below may reallocate blocks
    for (std::size_t j = 0; j < blocks.size(); ++j) {
      if (w.sum(blocks[j] | b) <= Rational(1)) {
        blocks[j] |= b;
        rec(i + 1);
        blocks[j] &= ~b;
      }
    }
    blocks.push_back(b);
    rec(i + 1);
    blocks.pop_back();
  };
  rec(0);
}

}  // namespace detail

/// All stable combinatorial types for the weights, up to leg-preserving
/// isomorphism; ordered by edge count, then canonical encoding.
inline std::vector<CombCurveType> enumerate_stable_types(int n, const WeightData& a, int cap = 8) {
  check_cap(n, cap, "enumerate_stable_types");
  if (a.n() != n) throw Error(ErrorCode::SizeMismatch, "weight length differs from n");
  if (n < 3) throw Error(ErrorCode::InvalidN, "n must be at least 3");
  const Mask full = full_mask(n);

  // Every vertex of a stable type has valence >= 3, so a type is its set of
  // splits together with its clusters.
  std::vector<Mask> splits;
  for (Mask s = 1; s < full; ++s) {
    int c = popcount(s);
    if (c >= 2 && c <= n - 2 && (s & 1u)) splits.push_back(s);
  }

  std::map<std::pair<int, std::string>, CombCurveType> found;
  std::vector<Mask> chosen;
  auto emit = [&]() {
    auto g = detail::tree_of_splits(n, chosen);
    for (const auto& [id, v] : g)
      if (!detail::vertex_stable(v, a)) return;
    std::vector<int> ids;
    std::vector<std::vector<std::vector<Mask>>> options;
    for (const auto& [id, v] : g) {
      ids.push_back(id);
      options.emplace_back();
      detail::cluster_partitions(v.legs, a, options.back());
    }
    std::vector<std::size_t> pick(ids.size(), 0);
    while (true) {
      for (std::size_t i = 0; i < ids.size(); ++i) {
        g[ids[i]].clusters = options[i][pick[i]];
        detail::sort_clusters(g[ids[i]].clusters);
      }
      auto t = detail::from_graph(g);
      auto key = std::make_pair(t.edge_count(), canonical_encoding(t));
      found.emplace(std::move(key), std::move(t));
      std::size_t i = 0;
      while (i < ids.size() && ++pick[i] == options[i].size()) pick[i++] = 0;
      if (i == ids.size()) break;
    }
  };
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    emit();
    for (std::size_t j = start; j < splits.size(); ++j) {
      bool ok = true;
      for (Mask c : chosen)
        if (!detail::compatible(c, splits[j], full)) { ok = false; break; }
      if (!ok) continue;
      chosen.push_back(splits[j]);
      rec(j + 1);
      chosen.pop_back();
    }
  };
  rec(0);

  std::vector<CombCurveType> out;
  out.reserve(found.size());
  for (auto& [key, t] : found) out.push_back(std::move(t));
  return out;
}

// ---------------------------------------------------------------------------
// Boundary bookkeeping
// ---------------------------------------------------------------------------

struct BoundaryInventory {
  LevelSpec level;
  std::vector<MarkedSubset> collision;  // |S| = 2
  std::vector<MarkedSubset> nodal;      // m-k < |S| <= m

  std::size_t total() const { return collision.size() + nodal.size(); }
};

inline BoundaryInventory boundary_divisor_inventory(const LevelSpec& level) {
  if (level.is_git() && level.n() % 2 == 0)
    throw Error(ErrorCode::LevelOutOfRange, "the GIT quotient has no weight-level inventory");
  BoundaryInventory inv{level, canonical_subsets_of_size(level.n(), 2), {}};
  for (int j = level.m() - level.index() + 1; j <= level.m(); ++j) {
    auto s = canonical_subsets_of_size(level.n(), j);
    inv.nodal.insert(inv.nodal.end(), s.begin(), s.end());
  }
  return inv;
}

/// Boundary divisors contracted by the reduction from level k to level k-1:
/// the canonical S with |S| = m-k+1.
inline std::vector<MarkedSubset> contracted_divisors(int n, int k) {
  int m = half(n);
  if (n < 4 || k < 1 || k > m - 2)
    throw Error(ErrorCode::LevelOutOfRange, "k=" + std::to_string(k) + " outside 1.." + std::to_string(m - 2));
  return canonical_subsets_of_size(n, m - k + 1);
}

}  // namespace moduli::trees
