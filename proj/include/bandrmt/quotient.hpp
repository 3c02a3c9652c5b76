#pragma once

// Quotient multigraph of the 2l-cycle under a pair partition: vertices are the
// cycles of gamma o pi, all 2l edges of C_2l descend.  Double-tree recognition
// and a deterministic spanning tree.

#include <algorithm>
#include <queue>
#include <string>
#include <vector>

#include "bandrmt/pairings.hpp"

namespace bandrmt {

struct QuotientGraph {
  int ell = 0;
  std::vector<std::vector<int>> cycles;  // vertex i = cycle i of gamma o pi, min-first
  std::vector<int> vertex_of;            // 1-based position -> vertex index
  struct Edge {
    int id;    // edge e_j of C_2l, j = 1..2l
    int u, v;  // directed: class(j) -> class(j+1)
  };
  std::vector<Edge> edges;

  int num_vertices() const { return (int)cycles.size(); }
  int vertex_key(int vi) const { return cycles[vi][0]; }  // minimal element label
  static bool is_loop(const Edge& e) { return e.u == e.v; }
};

// Undirected simple view: one entry per unordered endpoint pair (u <= v) with
// multiplicity; u == v entries are loops.
struct SimpleGraph {
  int n = 0;
  std::vector<int> keys;  // per-vertex label (minimal element), ascending
  struct Edge {
    int u, v;  // u <= v, vertex indices
    int mult;
  };
  std::vector<Edge> edges;  // sorted by (u, v)
};

// The identification v_j ~ v_{k+1}, v_k ~ v_{j+1} for each block (j,k) has
// exactly the cycles of gamma o pi as its classes, so vertices come straight
// from cycles_gamma_pi.
inline QuotientGraph build_quotient(const PairPartition& p) {
  QuotientGraph q;
  q.ell = p.ell;
  q.cycles = cycles_gamma_pi(p);
  const int n = 2 * p.ell;
  q.vertex_of.assign(n + 1, -1);
  for (int vi = 0; vi < (int)q.cycles.size(); ++vi)
    for (int j : q.cycles[vi]) q.vertex_of[j] = vi;
  q.edges.reserve(n);
  for (int j = 1; j <= n; ++j) {
    int jn = (j == n) ? 1 : j + 1;
    q.edges.push_back({j, q.vertex_of[j], q.vertex_of[jn]});
  }
  return q;
}

inline SimpleGraph underlying_simple(const QuotientGraph& q) {
  SimpleGraph s;
  s.n = q.num_vertices();
  s.keys.resize(s.n);
  for (int i = 0; i < s.n; ++i) s.keys[i] = q.vertex_key(i);
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(q.edges.size());
  for (auto& e : q.edges) pairs.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v));
  std::sort(pairs.begin(), pairs.end());
  for (size_t i = 0; i < pairs.size();) {
    size_t j = i;
    while (j < pairs.size() && pairs[j] == pairs[i]) ++j;
    s.edges.push_back({pairs[i].first, pairs[i].second, (int)(j - i)});
    i = j;
  }
  return s;
}

// Double tree: no loops, every parallel class has multiplicity exactly 2, and
// the underlying simple graph is a tree.
inline bool is_double_tree(const QuotientGraph& q) {
  auto s = underlying_simple(q);
  int dist = 0;
  for (auto& e : s.edges) {
    if (e.u == e.v) return false;
    if (e.mult != 2) return false;
    ++dist;
  }
  if (dist != s.n - 1) return false;
  // connectivity
  std::vector<char> seen(s.n, 0);
  std::queue<int> bfs;
  bfs.push(0);
  seen[0] = 1;
  int cnt = 1;
  std::vector<std::vector<int>> adj(s.n);
  for (auto& e : s.edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  while (!bfs.empty()) {
    int u = bfs.front();
    bfs.pop();
    for (int v : adj[u])
      if (!seen[v]) {
        seen[v] = 1;
        ++cnt;
        bfs.push(v);
      }
  }
  return cnt == s.n;
}

// Deterministic spanning tree: grow from the vertex with the smallest key,
// always taking the frontier edge whose (key_u, key_v) sorted pair is
// lexicographically smallest.  Loops are ignored.  Throws on disconnected input.
inline std::vector<SimpleGraph::Edge> spanning_tree(const SimpleGraph& s) {
  if (s.n == 0) return {};
  std::vector<char> in(s.n, 0);
  int start = 0;
  for (int i = 1; i < s.n; ++i)
    if (s.keys[i] < s.keys[start]) start = i;
  in[start] = 1;
  std::vector<SimpleGraph::Edge> tree;
  for (int step = 1; step < s.n; ++step) {
    int best = -1;
    std::pair<int, int> bestkey{0, 0};
    for (int i = 0; i < (int)s.edges.size(); ++i) {
      auto& e = s.edges[i];
      if (e.u == e.v) continue;
      if (in[e.u] == in[e.v]) continue;  // loop over frontier edges only
      std::pair<int, int> kk{std::min(s.keys[e.u], s.keys[e.v]), std::max(s.keys[e.u], s.keys[e.v])};
      if (best < 0 || kk < bestkey) {
        best = i;
        bestkey = kk;
      }
    }
    if (best < 0) throw std::domain_error("spanning_tree: graph is disconnected");
    tree.push_back(s.edges[best]);
    in[s.edges[best].u] = 1;
    in[s.edges[best].v] = 1;
  }
  return tree;
}

// Debug text form: one line per simple-graph entry, "src dst mult loopflag",
// endpoints printed as vertex keys.
inline std::string emit_edges(const SimpleGraph& s) {
  std::string out;
  for (auto& e : s.edges) {
    out += std::to_string(s.keys[e.u]) + " " + std::to_string(s.keys[e.v]) + " " +
           std::to_string(e.mult) + " " + (e.u == e.v ? "1" : "0") + "\n";
  }
  return out;
}

}  // namespace bandrmt
