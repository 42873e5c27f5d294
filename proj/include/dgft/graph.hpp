#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "dgft/rng.hpp"

namespace dgft {

// Input/precondition violations (bad edges, malformed files, mismatched
// dimensions). CLI maps these to exit code 1.
class validation_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// A numerical invariant that the construction itself guarantees failed to
// hold. CLI maps these to exit code 2.
class consistency_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Edge {
  int src = 0;
  int dst = 0;
  double weight = 0.0;
};

inline bool operator==(const Edge& a, const Edge& b) {
  return a.src == b.src && a.dst == b.dst && a.weight == b.weight;
}

// Weighted directed graph without self-loops or duplicate edges. The edge
// list is kept in canonical (src, dst) order so equality and serialization
// are deterministic.
class DirectedGraph {
public:
  DirectedGraph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    if (n_ <= 0) throw validation_error("graph order must be positive");
    std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
      return a.src != b.src ? a.src < b.src : a.dst < b.dst;
    });
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const Edge& e = edges_[i];
      if (e.src < 0 || e.src >= n_ || e.dst < 0 || e.dst >= n_)
        throw validation_error("edge (" + std::to_string(e.src) + ", " + std::to_string(e.dst) +
                               ") has vertex id outside [0, " + std::to_string(n_) + ")");
      if (e.src == e.dst)
        throw validation_error("self-loop at vertex " + std::to_string(e.src));
      if (!std::isfinite(e.weight) || e.weight == 0.0)
        throw validation_error("edge (" + std::to_string(e.src) + ", " + std::to_string(e.dst) +
                               ") has non-finite or zero weight");
      if (i > 0 && edges_[i - 1].src == e.src && edges_[i - 1].dst == e.dst)
        throw validation_error("duplicate edge (" + std::to_string(e.src) + ", " +
                               std::to_string(e.dst) + ")");
    }
  }

  int order() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }

  // A(i, j) = weight of the edge j -> i; zero diagonal.
  Eigen::MatrixXd adjacency() const {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
    for (const Edge& e : edges_) a(e.dst, e.src) = e.weight;
    return a;
  }

  friend bool operator==(const DirectedGraph& a, const DirectedGraph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

private:
  int n_;
  std::vector<Edge> edges_;
};

// L = D - A with D the diagonal of in-degrees (row sums of A); L 1 = 0.
inline Eigen::MatrixXd build_laplacian(const DirectedGraph& g) {
  Eigen::MatrixXd l = -g.adjacency();
  for (int i = 0; i < g.order(); ++i) l(i, i) = -l.row(i).sum();
  return l;
}

// Weighted in-degree equals weighted out-degree at every vertex.
inline bool is_eulerian(const DirectedGraph& g) {
  const int n = g.order();
  Eigen::VectorXd in = Eigen::VectorXd::Zero(n), out = Eigen::VectorXd::Zero(n);
  for (const Edge& e : g.edges()) {
    in(e.dst) += e.weight;
    out(e.src) += e.weight;
  }
  const double scale = std::max(in.cwiseAbs().maxCoeff(), out.cwiseAbs().maxCoeff());
  return (in - out).cwiseAbs().maxCoeff() <= 1e-12 * std::max(scale, 1.0);
}

inline DirectedGraph transpose(const DirectedGraph& g) {
  std::vector<Edge> rev;
  rev.reserve(g.edges().size());
  for (const Edge& e : g.edges()) rev.push_back({e.dst, e.src, e.weight});
  return DirectedGraph(g.order(), std::move(rev));
}

// Directed circulant graph: unit-weight edges (i, i+q mod n) for q in q_set.
inline DirectedGraph circulant_graph(int n, const std::vector<int>& q_set) {
  if (q_set.empty()) throw validation_error("circulant generator set is empty");
  for (std::size_t i = 0; i < q_set.size(); ++i) {
    if (q_set[i] < 1 || q_set[i] > n - 1)
      throw validation_error("generator " + std::to_string(q_set[i]) + " outside [1, " +
                             std::to_string(n - 1) + "]");
    if (i > 0 && q_set[i] <= q_set[i - 1])
      throw validation_error("generator set must be strictly increasing");
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * q_set.size());
  for (int i = 0; i < n; ++i)
    for (int q : q_set) edges.push_back({i, (i + q) % n, 1.0});
  return DirectedGraph(n, std::move(edges));
}

// k-nearest-neighbour graph over points: every point sends an edge to each
// of its k nearest neighbours (Euclidean; distance ties broken by lower
// vertex id). Edge weights are drawn uniformly from [weight_low, weight_high]
// in (point, neighbour-rank) order, so the result is a pure function of the
// inputs and the seed.
inline DirectedGraph knn_graph(const std::vector<std::vector<double>>& coords, int k,
                               double weight_low, double weight_high, std::uint64_t seed) {
  const int n = static_cast<int>(coords.size());
  if (k < 1) throw validation_error("k must be positive");
  if (n < k + 1) throw validation_error("need at least k+1 points");
  if (weight_low > weight_high) throw validation_error("weight_low > weight_high");
  CounterRng rng(seed);
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * k);
  std::vector<std::pair<double, int>> dist(n);
  for (int p = 0; p < n; ++p) {
    if (coords[p].size() != coords[0].size())
      throw validation_error("points must share one dimension");
    for (int q = 0; q < n; ++q) {
      double d2 = 0.0;
      for (std::size_t c = 0; c < coords[p].size(); ++c) {
        const double d = coords[p][c] - coords[q][c];
        d2 += d * d;
      }
      dist[q] = {d2, q};
    }
    dist[p].first = std::numeric_limits<double>::infinity();  // exclude self
    std::sort(dist.begin(), dist.end());
    for (int j = 0; j < k; ++j)
      edges.push_back({p, dist[j].second, rng.uniform(weight_low, weight_high)});
  }
  return DirectedGraph(n, std::move(edges));
}

// Clusters of bidirectionally complete subgraphs joined by one directed
// cycle through the lowest-id vertex of each cluster. Unit weights.
inline DirectedGraph cluster_cycle_graph(int clusters, int cluster_size, std::uint64_t seed) {
  (void)seed;  // topology is fully determined; seed kept for interface stability
  if (clusters < 2) throw validation_error("need at least 2 clusters");
  if (cluster_size < 1) throw validation_error("cluster_size must be positive");
  std::vector<Edge> edges;
  for (int c = 0; c < clusters; ++c) {
    const int base = c * cluster_size;
    for (int i = 0; i < cluster_size; ++i)
      for (int j = 0; j < cluster_size; ++j)
        if (i != j) edges.push_back({base + i, base + j, 1.0});
    edges.push_back({base, ((c + 1) % clusters) * cluster_size, 1.0});
  }
  return DirectedGraph(clusters * cluster_size, std::move(edges));
}

}  // namespace dgft
