#include "moduli/hassett_trees.hpp"

#include "oracles/tree_oracle.hpp"

#include <gtest/gtest.h>

#include <cstring>
#include <map>
#include <numeric>
#include <set>
#include <random>

using namespace moduli;
using namespace moduli::trees;

namespace {

// "1,2|3,4,5" with vertices in a chain; clusters given as "1,2,3;4" per
// vertex (empty means all singletons).
CombCurveType chain(const std::vector<std::vector<int>>& legs,
                    const std::vector<std::vector<std::vector<int>>>& clusters = {}) {
  CombCurveType t;
  for (std::size_t i = 0; i < legs.size(); ++i) {
    Vertex v{static_cast<int>(i), legs[i], {}};
    if (i < clusters.size() && !clusters[i].empty()) {
      v.clusters = clusters[i];
    } else {
      for (int l : legs[i]) v.clusters.push_back({l});
    }
    t.vertices.push_back(v);
    if (i > 0) t.edges.emplace_back(static_cast<int>(i) - 1, static_cast<int>(i));
  }
  return t;
}

std::vector<mpq_class> raw(const WeightData& w) {
  std::vector<mpq_class> out;
  for (const auto& r : w.weights) out.push_back(r.raw());
  return out;
}

// weight chain 1 >= eps_{m-2} >= ... >= eps_lowest
std::vector<WeightData> symmetric_chain(int n) {
  std::vector<WeightData> out{WeightData::sym(n, Rational(1))};
  int m = half(n);
  for (int k = m - 2; k >= (n % 2 ? 0 : 1); --k) out.push_back(WeightData::sym_eps(n, k));
  return out;
}

}  // namespace

TEST(IsStable, Examples) {
  EXPECT_TRUE(is_stable_type(chain({{1, 2, 3, 4, 5}}), WeightData::sym(5, 1)));
  EXPECT_TRUE(is_stable_type(chain({{1, 2}, {3, 4, 5}}), WeightData::sym(5, 1)));
  EXPECT_FALSE(is_stable_type(chain({{1, 2, 3, 4, 5, 6}}, {{{1, 2, 3}, {4}, {5}, {6}}}),
                              WeightData::sym(6, Rational(1, 2))));
  EXPECT_FALSE(is_stable_type(chain({{1, 2}, {3, 4, 5, 6}}), WeightData::sym(6, Rational(1, 2))));
  EXPECT_EQ(WeightData::sym_eps(6, 1), WeightData::sym(6, Rational(1, 2)));
}

TEST(IsStable, MalformedTrees) {
  auto code = [](const CombCurveType& t, int n) {
    try {
      is_stable_type(t, WeightData::sym(n, 1));
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::ParseError;
  };
  auto cyc = chain({{1}, {2}, {3, 4, 5}});
  cyc.edges.emplace_back(0, 2);
  EXPECT_EQ(code(cyc, 5), ErrorCode::MalformedTree);
  EXPECT_EQ(code(chain({{1, 2}, {2, 3, 4, 5}}), 5), ErrorCode::MalformedTree);
  EXPECT_EQ(code(chain({{1, 2}, {3, 4, 5}}, {{{1}}}), 5), ErrorCode::MalformedTree);
  auto disconnected = chain({{1, 2}, {3, 4, 5}});
  disconnected.edges.clear();
  EXPECT_EQ(code(disconnected, 5), ErrorCode::MalformedTree);
  auto dangling = chain({{1, 2}, {3, 4, 5}});
  dangling.edges.emplace_back(1, 9);
  EXPECT_EQ(code(dangling, 5), ErrorCode::MalformedTree);
}

TEST(WeightData, Validation) {
  EXPECT_THROW(WeightData::sym(6, Rational(1, 3)), Error);  // total exactly 2
  EXPECT_THROW(WeightData::sym(4, Rational(3, 2)), Error);
  EXPECT_THROW(WeightData::sym(4, Rational(0)), Error);
  EXPECT_EQ(WeightData::parse(5, "sym:1/2"), WeightData::sym(5, Rational(1, 2)));
  EXPECT_EQ(WeightData::parse(9, "eps:1"), WeightData::sym(9, Rational(1, 3)));
  EXPECT_EQ(WeightData::parse(3, "list:1,1,1/2").weights[2], Rational(1, 2));
  EXPECT_THROW(WeightData::parse(3, "list:1,1"), Error);
  EXPECT_THROW(WeightData::parse(3, "foo:1"), Error);
}

TEST(Enumerate, SmallCounts) {
  auto four = enumerate_stable_types(4, WeightData::sym(4, 1));
  ASSERT_EQ(four.size(), 4u);
  EXPECT_EQ(four[0].edge_count(), 0);
  for (int i = 1; i < 4; ++i) EXPECT_EQ(four[i].edge_count(), 1);

  auto five = enumerate_stable_types(5, WeightData::sym(5, 1));
  ASSERT_EQ(five.size(), 26u);
  std::map<int, int> by_edges;
  for (const auto& t : five) ++by_edges[t.edge_count()];
  EXPECT_EQ(by_edges, (std::map<int, int>{{0, 1}, {1, 10}, {2, 15}}));
}

TEST(Enumerate, HalfWeightsOnFivePoints) {
  // The 1/2 chamber for n = 5 is the same space; strata trade nodes for
  // collisions one-for-one.
  auto a = WeightData::sym(5, Rational(1, 2));
  auto types = enumerate_stable_types(5, a);
  EXPECT_EQ(types.size(), 26u);
  EXPECT_EQ(types.size(), oracle::count_stable_types(5, raw(a)));
  for (const auto& t : types) {
    EXPECT_TRUE(is_stable_type(t, a));
    std::map<int, int> deg;
    for (auto [x, y] : t.edges) ++deg[x], ++deg[y];
    for (const auto& v : t.vertices) EXPECT_FALSE(v.legs.size() == 2 && deg[v.id] == 1);
  }
}

TEST(Enumerate, CapExceeded) {
  try {
    enumerate_stable_types(9, WeightData::sym(9, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CapExceeded);
  }
}

TEST(EnumerateProperty, OneEdgeCountIsBoundaryCount) {
  for (int n = 4; n <= 8; ++n) {
    auto types = enumerate_stable_types(n, WeightData::sym(n, 1));
    long long one = 0;
    for (const auto& t : types) one += t.edge_count() == 1;
    EXPECT_EQ(one, (1LL << (n - 1)) - n - 1) << n;
  }
}

TEST(EnumerateProperty, MatchesBruteForceOracle) {
  for (int n = 4; n <= 6; ++n) {
    for (const auto& a : symmetric_chain(n)) {
      EXPECT_EQ(enumerate_stable_types(n, a).size(), oracle::count_stable_types(n, raw(a))) << n;
    }
  }
  for (const char* w : {"list:1,1,1,1/2,1/2,1/3", "list:1/3,1/3,1/3,1/3,1/3,1/2", "list:1,1/2,1/2,1/2,1/4"}) {
    int n = static_cast<int>(std::count(w, w + std::strlen(w), ',')) + 1;
    auto a = WeightData::parse(n, w);
    EXPECT_EQ(enumerate_stable_types(n, a).size(), oracle::count_stable_types(n, raw(a))) << w;
  }
}

TEST(EnumerateProperty, EveryTypeStableAndDistinct) {
  for (int n = 4; n <= 7; ++n) {
    for (const auto& a : symmetric_chain(n)) {
      auto types = enumerate_stable_types(n, a);
      std::set<std::string> enc;
      for (const auto& t : types) {
        ASSERT_TRUE(is_stable_type(t, a));
        enc.insert(canonical_encoding(t));
      }
      EXPECT_EQ(enc.size(), types.size());
    }
  }
}

TEST(EnumerateProperty, PermutationEquivariance) {
  std::mt19937 rng(5);
  std::vector<Rational> base{Rational(1), Rational(1), Rational(1, 2), Rational(1, 2), Rational(1, 3), Rational(1, 3),
                             Rational(1, 4)};
  auto expected = enumerate_stable_types(7, WeightData(base)).size();
  for (int trial = 0; trial < 4; ++trial) {
    std::shuffle(base.begin(), base.end(), rng);
    EXPECT_EQ(enumerate_stable_types(7, WeightData(base)).size(), expected);
  }
}

TEST(EnumerateProperty, DeterministicOrder) {
  auto a = enumerate_stable_types(6, WeightData::sym(6, 1));
  auto b = enumerate_stable_types(6, WeightData::sym(6, 1));
  EXPECT_EQ(a, b);
  for (std::size_t i = 1; i < a.size(); ++i) EXPECT_LE(a[i - 1].edge_count(), a[i].edge_count());
}

TEST(Encoding, RelabelingVertexIdsDoesNotMatter) {
  auto t = chain({{1, 2}, {3}, {4, 5, 6}});
  auto u = t;
  for (auto& v : u.vertices) v.id = 10 - v.id;
  for (auto& [x, y] : u.edges) x = 10 - x, y = 10 - y;
  std::reverse(u.vertices.begin(), u.vertices.end());
  EXPECT_EQ(canonical_encoding(t), canonical_encoding(u));
  EXPECT_NE(canonical_encoding(t), canonical_encoding(chain({{1, 3}, {2}, {4, 5, 6}})));
}

TEST(Reduce, CollapseToCluster) {
  auto t = chain({{1, 2, 3}, {4, 5, 6, 7}});
  auto r = reduce_type(t, WeightData::sym(7, 1), WeightData::sym(7, Rational(1, 3)));
  ASSERT_EQ(r.vertices.size(), 1u);
  EXPECT_EQ(r.vertices[0].legs, (std::vector<int>{1, 2, 3, 4, 5, 6, 7}));
  EXPECT_EQ(r.vertices[0].clusters, (std::vector<std::vector<int>>{{1, 2, 3}, {4}, {5}, {6}, {7}}));
  EXPECT_TRUE(is_stable_type(r, WeightData::sym(7, Rational(1, 3))));
}

TEST(Reduce, ChainEndsCollapse) {
  auto t = chain({{1, 2}, {3, 4}, {5, 6}});
  auto b = WeightData::sym(6, Rational(1, 2));
  auto r = reduce_type(t, WeightData::sym(6, 1), b);
  ASSERT_EQ(r.vertices.size(), 1u);
  EXPECT_EQ(r.vertices[0].clusters, (std::vector<std::vector<int>>{{1, 2}, {3}, {4}, {5, 6}}));
  EXPECT_TRUE(is_stable_type(r, b));
}

TEST(Reduce, IdentityAndErrors) {
  auto t = chain({{1, 2}, {3, 4, 5}});
  auto a = WeightData::sym(5, 1);
  EXPECT_EQ(canonical_encoding(reduce_type(t, a, a)), canonical_encoding(t));
  auto code = [](auto f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::ParseError;
  };
  EXPECT_EQ(code([&] { reduce_type(t, WeightData::sym(5, Rational(1, 2)), a); }), ErrorCode::WeightsNotDominated);
  EXPECT_EQ(code([&] { reduce_type(chain({{1, 2}, {3, 4, 5, 6}}), WeightData::sym(6, Rational(1, 2)),
                                   WeightData::sym(6, Rational(1, 2))); }),
            ErrorCode::NotStableForSource);
}

TEST(ReduceProperty, FunctorialOverSymmetricChain) {
  for (int n = 4; n <= 7; ++n) {
    auto ws = symmetric_chain(n);
    for (std::size_t i = 0; i < ws.size(); ++i) {
      for (const auto& t : enumerate_stable_types(n, ws[i])) {
        for (std::size_t j = i; j < ws.size(); ++j) {
          auto tj = reduce_type(t, ws[i], ws[j]);
          ASSERT_TRUE(is_stable_type(tj, ws[j]));
          for (std::size_t l = j; l < ws.size(); ++l) {
            ASSERT_EQ(canonical_encoding(reduce_type(tj, ws[j], ws[l])),
                      canonical_encoding(reduce_type(t, ws[i], ws[l])))
                << n << " " << i << " " << j << " " << l;
          }
        }
      }
    }
  }
}

TEST(ReduceProperty, FunctorialOverRandomDominatedWeights) {
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> den(1, 6);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 5 + trial % 2;
    std::vector<Rational> a(n), b(n), c(n);
    for (int i = 0; i < n; ++i) {
      a[i] = Rational(1, den(rng));
      b[i] = a[i] * Rational(1, 1 + rng() % 2);
      c[i] = b[i] * Rational(1, 1 + rng() % 2);
    }
    std::vector<Rational> ws[3] = {a, b, c};
    bool valid = true;
    for (auto& w : ws) {
      Rational s;
      for (auto& x : w) s += x;
      valid = valid && s > Rational(2);
    }
    if (!valid) continue;
    WeightData wa(a), wb(b), wc(c);
    for (const auto& t : enumerate_stable_types(n, wa)) {
      auto tb = reduce_type(t, wa, wb);
      ASSERT_TRUE(is_stable_type(tb, wb));
      ASSERT_EQ(canonical_encoding(reduce_type(tb, wb, wc)), canonical_encoding(reduce_type(t, wa, wc)));
    }
  }
}

TEST(ReduceProperty, ImageIsTheTargetStrata) {
  // every target stratum is hit, and nothing else
  for (int n = 5; n <= 7; ++n) {
    auto ws = symmetric_chain(n);
    auto a = ws.front(), b = ws.back();
    std::set<std::string> image, target;
    for (const auto& t : enumerate_stable_types(n, a)) image.insert(canonical_encoding(reduce_type(t, a, b)));
    for (const auto& t : enumerate_stable_types(n, b)) target.insert(canonical_encoding(t));
    EXPECT_EQ(image, target) << n;
  }
}

TEST(Inventory, Examples) {
  auto i61 = boundary_divisor_inventory(LevelSpec::weight(6, 1));
  EXPECT_EQ(i61.collision.size(), 15u);
  EXPECT_EQ(i61.nodal.size(), 10u);
  EXPECT_EQ(i61.total(), 25u);
  auto i91 = boundary_divisor_inventory(LevelSpec::weight(9, 1));
  EXPECT_EQ(i91.collision.size(), 36u);
  EXPECT_EQ(i91.nodal.size(), 126u);
  try {
    boundary_divisor_inventory(LevelSpec::git(6));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::LevelOutOfRange);
  }
}

TEST(InventoryProperty, TopLevelIsFullBoundary) {
  for (int n = 5; n <= 16; ++n)
    EXPECT_EQ(boundary_divisor_inventory(LevelSpec::top(n)).total(), (std::size_t{1} << (n - 1)) - n - 1) << n;
}

TEST(Contracted, Examples) {
  EXPECT_EQ(contracted_divisors(9, 1).size(), 126u);
  for (const auto& s : contracted_divisors(9, 1)) EXPECT_EQ(s.size(), 4);
  EXPECT_EQ(contracted_divisors(8, 1).size(), 35u);
  try {
    contracted_divisors(9, 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::LevelOutOfRange);
  }
}
