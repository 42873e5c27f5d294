#pragma once

// Shared fixtures for the suite: seeded random graph generators and the
// independent oracles the numerical checks are frozen against. Everything
// here must stay independent of the construction paths it is used to
// check: singular values come from a symmetric eigensolve of L^T L, never
// from svd_basis().

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <dgft/graph.hpp>
#include <dgft/rng.hpp>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <queue>
#include <vector>

namespace test_support {

using dgft::CounterRng;
using dgft::DirectedGraph;
using dgft::Edge;

// Random weighted directed graph; sparsity is the edge probability.
// Weights avoid zero so every listed edge is a real edge.
inline DirectedGraph random_directed_graph(int n, double sparsity, std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (rng.next_double() < sparsity) edges.push_back({i, j, rng.uniform(0.1, 2.0)});
    }
  if (edges.empty()) edges.push_back({0, 1 % n, 1.0});
  return DirectedGraph(n, edges);
}

// Random connected undirected graph: a random spanning tree plus extra
// symmetric edges, random weights.
inline DirectedGraph random_undirected_graph(int n, double extra, std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<Edge> edges;
  auto add_pair = [&edges](int a, int b, double w) {
    edges.push_back({a, b, w});
    edges.push_back({b, a, w});
  };
  std::vector<std::vector<bool>> present(n, std::vector<bool>(n, false));
  for (int v = 1; v < n; ++v) {
    const int parent = static_cast<int>(rng.next_u64() % v);
    add_pair(parent, v, rng.uniform(0.2, 2.0));
    present[parent][v] = present[v][parent] = true;
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!present[i][j] && rng.next_double() < extra) add_pair(i, j, rng.uniform(0.2, 2.0));
  return DirectedGraph(n, edges);
}

// Random Eulerian graph: a union of weighted Hamiltonian directed cycles
// over random vertex orders. In-degree equals out-degree at every vertex by
// construction; coinciding edges accumulate weight.
inline DirectedGraph random_eulerian_graph(int n, int cycles, std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<std::vector<double>> weight(n, std::vector<double>(n, 0.0));
  for (int c = 0; c < cycles; ++c) {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (int i = n - 1; i > 0; --i)
      std::swap(order[i], order[rng.next_u64() % (i + 1)]);
    const double w = rng.uniform(0.3, 1.7);
    for (int i = 0; i < n; ++i) weight[order[i]][order[(i + 1) % n]] += w;
  }
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (weight[i][j] != 0.0) edges.push_back({i, j, weight[i][j]});
  return DirectedGraph(n, edges);
}

inline Eigen::VectorXd random_signal(int n, CounterRng& rng, double lo = -1.0, double hi = 1.0) {
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x(i) = rng.uniform(lo, hi);
  return x;
}

// Oracle: singular values from the two-sided Jacobi route, nondecreasing.
// A different algorithm from both the divide-and-conquer SVD the basis
// construction uses and the analytic circulant factorization. (The
// eigensolve of L^T L is NOT used here: squaring loses half the digits on
// small singular values.)
inline Eigen::VectorXd singular_values_oracle(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues().reverse();
}

// Oracle: strong connectivity by forward and reverse BFS from vertex 0.
inline bool strongly_connected_oracle(const DirectedGraph& g) {
  const int n = g.order();
  for (int pass = 0; pass < 2; ++pass) {
    std::vector<std::vector<int>> adj(n);
    for (const Edge& e : g.edges())
      pass == 0 ? adj[e.src].push_back(e.dst) : adj[e.dst].push_back(e.src);
    std::vector<bool> seen(n, false);
    std::queue<int> q;
    q.push(0);
    seen[0] = true;
    int count = 1;
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (int w : adj[v])
        if (!seen[w]) {
          seen[w] = true;
          ++count;
          q.push(w);
        }
    }
    if (count != n) return false;
  }
  return true;
}

}  // namespace test_support
