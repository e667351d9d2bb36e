// graph.hpp — finite graphs, directed-edge basis, functional graphs
#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sqw/errors.hpp"

namespace sqw {

struct Graph {
  int vertex_count = 0;
  std::vector<std::vector<int>> adjacency;  // ordered neighbor lists
  std::vector<std::string> labels;

  int degree(int x) const { return static_cast<int>(adjacency[x].size()); }

  // position of y in the neighbor list of x, or -1
  int slot(int x, int y) const {
    const auto& a = adjacency[x];
    for (std::size_t k = 0; k < a.size(); ++k)
      if (a[k] == y) return static_cast<int>(k);
    return -1;
  }

  bool adjacent(int x, int y) const { return slot(x, y) >= 0; }

  int total_degree() const {
    int s = 0;
    for (int x = 0; x < vertex_count; ++x) s += degree(x);
    return s;
  }

  int edge_count() const { return total_degree() / 2; }

  bool is_regular() const {
    for (int x = 1; x < vertex_count; ++x)
      if (degree(x) != degree(0)) return false;
    return true;
  }

  std::string label(int x) const {
    return x < static_cast<int>(labels.size()) ? labels[x] : std::to_string(x);
  }
};

using EdgeList = std::vector<std::pair<int, int>>;

namespace detail {

inline bool connected(const std::vector<std::vector<int>>& adj) {
  if (adj.empty()) return false;
  std::vector<char> seen(adj.size(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    for (int y : adj[x])
      if (!seen[y]) {
        seen[y] = 1;
        ++count;
        stack.push_back(y);
      }
  }
  return count == adj.size();
}

// shared validation; connectivity optional so complements can be represented
inline Graph assemble(int n, const EdgeList& edges,
                      const std::optional<std::vector<std::vector<int>>>& order,
                      bool require_connected) {
  if (n < 2) throw Error(ErrorCode::TooFewVertices, "need at least 2 vertices");
  std::set<std::pair<int, int>> seen;
  std::vector<std::vector<int>> adj(n);
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n || b >= n)
      throw Error(ErrorCode::InvalidInput, "vertex id out of range");
    if (a == b) throw Error(ErrorCode::SelfLoop, "self-loop at " + std::to_string(a));
    auto key = std::minmax(a, b);
    if (!seen.insert(key).second)
      throw Error(ErrorCode::DuplicateEdge,
                  std::to_string(a) + "-" + std::to_string(b));
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  if (order) {
    if (static_cast<int>(order->size()) != n)
      throw Error(ErrorCode::InvalidNeighborOrder, "one order list per vertex required");
    for (int x = 0; x < n; ++x) {
      auto sorted = (*order)[x];
      std::sort(sorted.begin(), sorted.end());
      if (sorted != adj[x])
        throw Error(ErrorCode::InvalidNeighborOrder,
                    "order at vertex " + std::to_string(x) + " is not a permutation of its neighbors");
      adj[x] = (*order)[x];
    }
  }
  if (require_connected && !connected(adj))
    throw Error(ErrorCode::DisconnectedGraph, "graph is not connected");
  Graph g;
  g.vertex_count = n;
  g.adjacency = std::move(adj);
  return g;
}

}  // namespace detail

inline Graph build_graph(const EdgeList& edges, int vertex_count = -1,
                         const std::optional<std::vector<std::vector<int>>>& neighbor_order = std::nullopt,
                         std::vector<std::string> labels = {}) {
  int n = vertex_count;
  if (n < 0) {
    n = 0;
    for (auto [a, b] : edges) n = std::max({n, a + 1, b + 1});
  }
  Graph g = detail::assemble(n, edges, neighbor_order, true);
  g.labels = std::move(labels);
  return g;
}

inline EdgeList edges_of(const Graph& g) {
  EdgeList e;
  for (int x = 0; x < g.vertex_count; ++x)
    for (int y : g.adjacency[x])
      if (x < y) e.emplace_back(x, y);
  return e;
}

// ------- directed-edge basis -------

struct EdgeBasis {
  std::vector<std::pair<int, int>> directed_edges;  // (target, source) = |target source>
  std::vector<int> offset;                          // start of in_block(x)
  std::vector<int> degree;
  std::vector<std::vector<int>> out_blocks;
  std::vector<std::vector<int>> adjacency;

  int size() const { return static_cast<int>(directed_edges.size()); }

  // index of |target source>
  int index_of(int target, int source) const {
    const auto& a = adjacency[target];
    for (std::size_t k = 0; k < a.size(); ++k)
      if (a[k] == source) return offset[target] + static_cast<int>(k);
    throw Error(ErrorCode::InvalidInput, "not an edge");
  }

  std::vector<int> in_block(int x) const {
    std::vector<int> r(degree[x]);
    std::iota(r.begin(), r.end(), offset[x]);
    return r;
  }

  const std::vector<int>& out_block(int x) const { return out_blocks[x]; }

  // vertex owning basis index i as an incoming edge
  int head(int i) const { return directed_edges[i].first; }
  int vertex_count() const { return static_cast<int>(degree.size()); }
};

inline EdgeBasis edge_basis(const Graph& g) {
  EdgeBasis b;
  b.adjacency = g.adjacency;
  b.offset.resize(g.vertex_count + 1, 0);
  b.degree.resize(g.vertex_count);
  for (int x = 0; x < g.vertex_count; ++x) {
    b.degree[x] = g.degree(x);
    b.offset[x + 1] = b.offset[x] + g.degree(x);
    for (int y : g.adjacency[x]) b.directed_edges.emplace_back(x, y);
  }
  b.out_blocks.resize(g.vertex_count);
  for (int x = 0; x < g.vertex_count; ++x)
    for (int y : g.adjacency[x]) b.out_blocks[x].push_back(b.index_of(y, x));
  return b;
}

// ------- cycle parity -------

inline bool has_odd_cycle(const Graph& g) {
  std::vector<int> color(g.vertex_count, -1);
  for (int s = 0; s < g.vertex_count; ++s) {
    if (color[s] >= 0) continue;
    color[s] = 0;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      int x = q.front();
      q.pop();
      for (int y : g.adjacency[x]) {
        if (color[y] < 0) {
          color[y] = 1 - color[x];
          q.push(y);
        } else if (color[y] == color[x]) {
          return true;
        }
      }
    }
  }
  return false;
}

// ------- functional graphs -------

struct FunctionalGraph {
  std::vector<int> successor;
  std::vector<int> component_of;            // vertex -> component id
  std::vector<std::vector<int>> components;
  std::vector<std::vector<int>> cycles;     // cycle vertices per component, in orbit order

  int component_count() const { return static_cast<int>(components.size()); }
  const std::vector<int>& cycle_of(int c) const { return cycles[c]; }
};

inline FunctionalGraph functional_graph(const Graph& g, const std::vector<int>& successor) {
  const int n = g.vertex_count;
  if (static_cast<int>(successor.size()) != n)
    throw Error(ErrorCode::InvalidSuccessor, "successor map must cover all vertices");
  for (int x = 0; x < n; ++x)
    if (successor[x] < 0 || successor[x] >= n || !g.adjacent(x, successor[x]))
      throw Error(ErrorCode::InvalidSuccessor,
                  "N(" + std::to_string(x) + ") is not adjacent to it");

  FunctionalGraph fg;
  fg.successor = successor;
  fg.component_of.assign(n, -1);

  // 0 unvisited, 1 on current path, 2 done
  std::vector<int> state(n, 0);
  for (int s = 0; s < n; ++s) {
    if (state[s]) continue;
    std::vector<int> path;
    int x = s;
    while (state[x] == 0) {
      state[x] = 1;
      path.push_back(x);
      x = successor[x];
    }
    int comp;
    if (state[x] == 1) {
      // closed a new cycle starting at x
      comp = fg.component_count();
      fg.components.emplace_back();
      fg.cycles.emplace_back();
      auto it = std::find(path.begin(), path.end(), x);
      fg.cycles[comp].assign(it, path.end());
    } else {
      comp = fg.component_of[x];
    }
    for (int v : path) {
      state[v] = 2;
      fg.component_of[v] = comp;
      fg.components[comp].push_back(v);
    }
  }
  for (auto& c : fg.components) std::sort(c.begin(), c.end());
  return fg;
}

// ------- generators -------

inline Graph path_graph(int n) {
  EdgeList e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return build_graph(e, n);
}

inline Graph cycle_graph(int n) {
  if (n < 3) throw Error(ErrorCode::InvalidInput, "cycle needs at least 3 vertices");
  EdgeList e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return build_graph(e, n);
}

// center 0, leaves 1..N
inline Graph star_graph(int N) {
  EdgeList e;
  for (int j = 1; j <= N; ++j) e.emplace_back(0, j);
  return build_graph(e, N + 1);
}

inline Graph complete_graph(int n) {
  EdgeList e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return build_graph(e, n);
}

// Periodic Z^d box. Neighbor slot 2i is x - e_i, slot 2i+1 is x + e_i.
inline Graph torus_graph(const std::vector<int>& sides) {
  if (sides.empty()) throw Error(ErrorCode::NotTorus, "empty side list");
  for (int L : sides)
    if (L < 3) throw Error(ErrorCode::NotTorus, "side lengths must be at least 3");
  const int d = static_cast<int>(sides.size());
  int n = 1;
  for (int L : sides) n *= L;
  auto coord = [&](int v) {
    std::vector<int> c(d);
    for (int i = 0; i < d; ++i) {
      c[i] = v % sides[i];
      v /= sides[i];
    }
    return c;
  };
  auto id = [&](const std::vector<int>& c) {
    int v = 0;
    for (int i = d - 1; i >= 0; --i) v = v * sides[i] + c[i];
    return v;
  };
  EdgeList e;
  std::vector<std::vector<int>> order(n);
  for (int v = 0; v < n; ++v) {
    auto c = coord(v);
    for (int i = 0; i < d; ++i) {
      auto m = c, p = c;
      m[i] = (c[i] - 1 + sides[i]) % sides[i];
      p[i] = (c[i] + 1) % sides[i];
      order[v].push_back(id(m));
      order[v].push_back(id(p));
      e.emplace_back(v, id(p));
    }
  }
  return build_graph(e, n, order);
}

// random spanning tree plus extra edges with probability p
inline Graph random_connected_graph(int n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::set<std::pair<int, int>> es;
  for (int i = 1; i < n; ++i) {
    std::uniform_int_distribution<int> pick(0, i - 1);
    es.insert(std::minmax(i, pick(rng)));
  }
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (u(rng) < p) es.insert({i, j});
  return build_graph(EdgeList(es.begin(), es.end()), n);
}

// Complement on the same vertex set; may be disconnected or have isolated vertices.
inline Graph complement_graph(const Graph& g) {
  EdgeList e;
  for (int i = 0; i < g.vertex_count; ++i)
    for (int j = i + 1; j < g.vertex_count; ++j)
      if (!g.adjacent(i, j)) e.emplace_back(i, j);
  if (e.empty()) throw Error(ErrorCode::ComplementEmpty, "graph is complete");
  Graph h = detail::assemble(g.vertex_count, e, std::nullopt, false);
  h.labels = g.labels;
  return h;
}

}  // namespace sqw
