// test_graph.cpp — graphs, edge basis, functional graphs
#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace sqw;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidInput;  // sentinel: nothing thrown
}

}  // namespace

TEST(Graph, T3Degrees) {
  Graph g = build_graph({{0, 1}, {1, 2}});
  EXPECT_EQ(g.vertex_count, 3);
  EXPECT_EQ(g.degree(0), 1);
  EXPECT_EQ(g.degree(1), 2);
  EXPECT_EQ(g.degree(2), 1);
}

TEST(Graph, StarDegrees) {
  for (int N = 1; N <= 7; ++N) {
    Graph g = star_graph(N);
    EXPECT_EQ(g.degree(0), N);
    for (int j = 1; j <= N; ++j) EXPECT_EQ(g.degree(j), 1);
  }
}

TEST(Graph, SingleEdge) {
  Graph g = build_graph({{0, 1}});
  EXPECT_EQ(g.vertex_count, 2);
  EXPECT_EQ(g.edge_count(), 1);
}

TEST(Graph, ValidationErrors) {
  EXPECT_EQ(code_of([] { build_graph({{0, 0}, {0, 1}}); }), ErrorCode::SelfLoop);
  EXPECT_EQ(code_of([] { build_graph({{0, 1}, {1, 0}}); }), ErrorCode::DuplicateEdge);
  EXPECT_EQ(code_of([] { build_graph({{0, 1}, {2, 3}}); }), ErrorCode::DisconnectedGraph);
  EXPECT_EQ(code_of([] { build_graph({}, 1); }), ErrorCode::TooFewVertices);
  EXPECT_EQ(code_of([] { build_graph({{0, 1}, {1, 2}}, 3, std::vector<std::vector<int>>{{1}, {0}, {1}}); }),
            ErrorCode::InvalidNeighborOrder);
  EXPECT_EQ(code_of([] { build_graph({{0, 1}, {1, 2}}, 3, std::vector<std::vector<int>>{{1}, {2, 0}}); }),
            ErrorCode::InvalidNeighborOrder);
}

TEST(Graph, NeighborOrderIsKept) {
  Graph g = build_graph({{0, 1}, {1, 2}}, 3, std::vector<std::vector<int>>{{1}, {2, 0}, {1}});
  EXPECT_EQ(g.adjacency[1], (std::vector<int>{2, 0}));
  EXPECT_EQ(g.slot(1, 0), 1);
}

TEST(EdgeBasis, Sizes) {
  EXPECT_EQ(edge_basis(build_graph({{0, 1}, {1, 2}})).size(), 4);
  for (int N = 1; N <= 6; ++N) EXPECT_EQ(edge_basis(star_graph(N)).size(), 2 * N);
  EXPECT_EQ(edge_basis(complete_graph(4)).size(), 12);
}

TEST(EdgeBasis, BlocksPartitionAndIndexRoundTrip) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    Graph g = oracle::shuffled(oracle::random_graph(rng, 2, 10), rng);
    auto b = edge_basis(g);
    EXPECT_EQ(b.size(), g.total_degree());
    std::vector<int> seen_in(b.size(), 0), seen_out(b.size(), 0);
    for (int x = 0; x < g.vertex_count; ++x) {
      for (int i : b.in_block(x)) {
        ++seen_in[i];
        EXPECT_EQ(b.directed_edges[i].first, x);
      }
      for (int i : b.out_block(x)) {
        ++seen_out[i];
        EXPECT_EQ(b.directed_edges[i].second, x);
      }
    }
    for (int i = 0; i < b.size(); ++i) {
      EXPECT_EQ(seen_in[i], 1);
      EXPECT_EQ(seen_out[i], 1);
      auto [tg, sc] = b.directed_edges[i];
      EXPECT_EQ(b.index_of(tg, sc), i);
    }
  }
}

TEST(Graph, OddCycle) {
  EXPECT_TRUE(has_odd_cycle(cycle_graph(3)));
  EXPECT_FALSE(has_odd_cycle(path_graph(3)));
  EXPECT_FALSE(has_odd_cycle(cycle_graph(4)));
  std::mt19937_64 rng(2);
  for (int t = 0; t < 40; ++t) {
    Graph g = oracle::random_graph(rng, 2, 9);
    EXPECT_EQ(has_odd_cycle(g), oracle::brute_odd_cycle(g));
  }
}

TEST(FunctionalGraph, EightVertexExample) {
  // s t u v w x y z
  enum { s, t, u, v, w, x, y, z };
  Graph g = build_graph({{s, y}, {t, x}, {u, x}, {v, t}, {w, t}, {x, y}, {y, z}, {z, x}}, 8);
  std::vector<int> N{y, x, x, t, t, y, z, x};
  auto fg = functional_graph(g, N);
  ASSERT_EQ(fg.component_count(), 1);
  std::set<int> cyc(fg.cycle_of(0).begin(), fg.cycle_of(0).end());
  EXPECT_EQ(cyc, (std::set<int>{x, y, z}));
}

TEST(FunctionalGraph, TwoCycleOnEdge) {
  Graph g = build_graph({{0, 1}});
  auto fg = functional_graph(g, {1, 0});
  ASSERT_EQ(fg.component_count(), 1);
  EXPECT_EQ(fg.cycle_of(0).size(), 2u);
}

TEST(FunctionalGraph, TwoComponents) {
  // 0-1 and 4-5 are 2-cycles, path 1-2-3-4 with successors pointing apart
  Graph g = build_graph({{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}});
  auto fg = functional_graph(g, {1, 0, 1, 4, 5, 4});
  EXPECT_EQ(fg.component_count(), 2);
  EXPECT_EQ(oracle::cycles(fg.successor).size(), 2u);
}

TEST(FunctionalGraph, MatchesBruteForceOrbits) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    Graph g = oracle::random_graph(rng, 2, 12);
    std::vector<int> succ(g.vertex_count);
    for (int x = 0; x < g.vertex_count; ++x) {
      std::uniform_int_distribution<int> k(0, g.degree(x) - 1);
      succ[x] = g.adjacency[x][k(rng)];
    }
    auto fg = functional_graph(g, succ);
    std::set<std::set<int>> got;
    for (int c = 0; c < fg.component_count(); ++c) got.insert({fg.cycle_of(c).begin(), fg.cycle_of(c).end()});
    EXPECT_EQ(got, oracle::cycles(succ));
    for (int c = 0; c < fg.component_count(); ++c)
      for (int v : fg.components[c]) EXPECT_EQ(fg.component_of[v], c);
  }
}

TEST(FunctionalGraph, RejectsNonNeighbor) {
  Graph g = path_graph(3);
  EXPECT_EQ(code_of([&] { functional_graph(g, {2, 0, 1}); }), ErrorCode::InvalidSuccessor);
}

TEST(Generators, Torus) {
  Graph g = torus_graph({3, 4});
  EXPECT_EQ(g.vertex_count, 12);
  EXPECT_TRUE(g.is_regular());
  EXPECT_EQ(g.degree(0), 4);
  EXPECT_EQ(code_of([] { torus_graph({2, 4}); }), ErrorCode::NotTorus);
}

TEST(Generators, Complement) {
  Graph t3 = build_graph({{0, 1}, {1, 2}});
  Graph h = complement_graph(t3);
  EXPECT_EQ(h.edge_count(), 1);
  EXPECT_TRUE(h.adjacent(0, 2));
  EXPECT_EQ(code_of([] { complement_graph(complete_graph(4)); }), ErrorCode::ComplementEmpty);
}

TEST(Generators, RandomIsDeterministicAndConnected) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Graph a = random_connected_graph(9, 0.3, seed), b = random_connected_graph(9, 0.3, seed);
    EXPECT_EQ(a.adjacency, b.adjacency);
    EXPECT_GE(a.edge_count(), 8);
  }
}
