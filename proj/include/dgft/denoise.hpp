#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "dgft/gft.hpp"
#include "dgft/graph.hpp"
#include "dgft/rng.hpp"
#include "dgft/svd_basis.hpp"

namespace dgft {

// Dividing line for "perfect reconstruction": SNR values are capped here so
// reports stay free of infinities.
inline constexpr double kSnrCapDb = 300.0;

// Piecewise-constant signal: vertices are partitioned into k connected
// groups by round-robin BFS growth from seeded roots (edge direction is
// ignored for the growth), and each group takes a constant level.
inline Eigen::VectorXd piecewise_signal(const DirectedGraph& g, int k_pieces,
                                        const std::vector<double>& levels, std::uint64_t seed) {
  const int n = g.order();
  if (k_pieces < 1) throw validation_error("need at least one piece");
  if (k_pieces > n) throw validation_error("more pieces than vertices");
  if (levels.empty()) throw validation_error("levels must be nonempty");

  std::vector<std::vector<int>> nbrs(n);
  for (const Edge& e : g.edges()) {
    nbrs[e.src].push_back(e.dst);
    nbrs[e.dst].push_back(e.src);
  }

  CounterRng rng(seed);
  std::vector<int> group(n, -1);
  std::vector<std::deque<int>> frontier(k_pieces);
  for (int p = 0; p < k_pieces; ++p) {
    int root;
    do {
      root = static_cast<int>(rng.next_u64() % n);
    } while (group[root] >= 0);
    group[root] = p;
    frontier[p].push_back(root);
  }
  int assigned = k_pieces;
  while (assigned < n) {
    bool grew = false;
    for (int p = 0; p < k_pieces && assigned < n; ++p) {
      while (!frontier[p].empty()) {
        const int v = frontier[p].front();
        int next = -1;
        for (int w : nbrs[v])
          if (group[w] < 0) {
            next = w;
            break;
          }
        if (next >= 0) {
          group[next] = p;
          frontier[p].push_back(next);
          ++assigned;
          grew = true;
          break;
        }
        frontier[p].pop_front();
      }
    }
    if (!grew) {
      // disconnected remainder: sweep it into group 0
      for (int v = 0; v < n; ++v)
        if (group[v] < 0) {
          group[v] = 0;
          ++assigned;
        }
    }
  }

  Eigen::VectorXd x(n);
  for (int v = 0; v < n; ++v) x(v) = levels[group[v] % levels.size()];
  return x;
}

// Low-frequency signal synthesized from the first `components` right
// frequency components with uniform random coefficients in
// [-amplitude, amplitude].
inline Eigen::VectorXd smooth_signal(const SvdBasis& basis, int components, double amplitude,
                                     std::uint64_t seed) {
  const int n = basis.order();
  if (components < 1 || components > n)
    throw validation_error("component count outside [1, n]");
  CounterRng rng(seed);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < components; ++i)
    x += rng.uniform(-amplitude, amplitude) * basis.v.col(i);
  return x;
}

// y = x + eta with eta i.i.d. zero-mean Gaussian of the given variance.
inline Eigen::VectorXd add_noise(const Eigen::VectorXd& x, double variance, std::uint64_t seed) {
  if (variance <= 0) throw validation_error("noise variance must be positive");
  CounterRng rng(seed);
  Eigen::VectorXd y = x;
  const double sd = std::sqrt(variance);
  for (int i = 0; i < y.size(); ++i) y(i) += rng.gaussian(0.0, sd);
  return y;
}

inline double isnr(const Eigen::VectorXd& x, const Eigen::VectorXd& eta) {
  const double xn = x.norm();
  if (xn == 0) throw validation_error("signal-to-noise undefined for the zero signal");
  const double en = eta.norm();
  if (en == 0) return kSnrCapDb;
  return std::min(kSnrCapDb, -20.0 * std::log10(en / xn));
}

inline double snr(const Eigen::VectorXd& x, const Eigen::VectorXd& x_hat) {
  const double xn = x.norm();
  if (xn == 0) throw validation_error("signal-to-noise undefined for the zero signal");
  const double err = (x_hat - x).norm();
  if (err == 0) return kSnrCapDb;
  return std::min(kSnrCapDb, -20.0 * std::log10(err / xn));
}

struct GraphSpec {
  std::string generator;  // "circulant" | "knn" | "cluster_cycle"
  int n = 0;
  std::vector<int> q_set;
  int k = 0;
  double weight_low = 1.0;
  double weight_high = 1.0;
  int clusters = 0;
  int cluster_size = 0;
  std::uint64_t seed = 0;
};

// knn points are seeded uniform samples of the unit square.
inline DirectedGraph make_graph(const GraphSpec& spec) {
  if (spec.generator == "circulant") return circulant_graph(spec.n, spec.q_set);
  if (spec.generator == "cluster_cycle")
    return cluster_cycle_graph(spec.clusters, spec.cluster_size, spec.seed);
  if (spec.generator == "knn") {
    CounterRng rng(spec.seed);
    std::vector<std::vector<double>> pts(spec.n, std::vector<double>(2));
    for (auto& p : pts) {
      p[0] = rng.next_double();
      p[1] = rng.next_double();
    }
    return knn_graph(pts, spec.k, spec.weight_low, spec.weight_high, rng.next_u64());
  }
  throw validation_error("unknown graph generator '" + spec.generator + "'");
}

struct SignalSpec {
  std::string type = "smooth";  // "smooth" | "piecewise"
  int components = 10;          // smooth: number of low frequencies
  double amplitude = 30.0;      // smooth: coefficient range
  int pieces = 2;               // piecewise: group count
  std::vector<double> levels = {0.0, 1.0};
  int count = 1;  // size of the signal bank; trials cycle through it
  std::uint64_t seed = 0;
};

struct ExperimentConfig {
  GraphSpec graph;
  SignalSpec signal;
  std::vector<double> noise_variances;
  std::vector<int> m_values;
  int trials = 1;
  std::uint64_t master_seed = 0;
};

struct TrialRow {
  double variance = 0;
  int m = 0;
  int trial = 0;
  double isnr_db = 0;
  double snr_db = 0;
};

struct DenoiseCell {
  double variance = 0;
  int m = 0;
  int trials = 0;
  double mean_isnr_db = 0;
  double mean_snr_db = 0;
};

struct DenoiseReport {
  std::vector<DenoiseCell> cells;
  std::vector<TrialRow> rows;
};

// Bandlimit denoising sweep. Noise for trial j under the v-th variance is
// drawn from the stream derived as (v * trials + j), so the report is a
// pure function of the config and independent of evaluation order; the two
// M values of a given trial see the same noisy observation.
inline DenoiseReport run_experiment(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw validation_error("trial count must be positive");
  if (cfg.noise_variances.empty() || cfg.m_values.empty())
    throw validation_error("need at least one variance and one band cutoff");

  const DirectedGraph g = make_graph(cfg.graph);
  const Eigen::MatrixXd laplacian = build_laplacian(g);
  const SvdBasis basis = svd_basis(laplacian);
  const int n = basis.order();
  for (int m : cfg.m_values)
    if (m < 0 || m > n) throw validation_error("band cutoff outside [0, n]");

  std::vector<Eigen::VectorXd> bank;
  CounterRng signal_rng(cfg.signal.seed);
  for (int s = 0; s < std::max(1, cfg.signal.count); ++s) {
    if (cfg.signal.type == "smooth")
      bank.push_back(smooth_signal(basis, cfg.signal.components, cfg.signal.amplitude,
                                   signal_rng.next_u64()));
    else if (cfg.signal.type == "piecewise")
      bank.push_back(piecewise_signal(g, cfg.signal.pieces, cfg.signal.levels,
                                      signal_rng.next_u64()));
    else
      throw validation_error("unknown signal type '" + cfg.signal.type + "'");
  }

  DenoiseReport report;
  const CounterRng master(cfg.master_seed);
  for (std::size_t vi = 0; vi < cfg.noise_variances.size(); ++vi) {
    const double variance = cfg.noise_variances[vi];
    std::vector<double> isnr_sum(cfg.m_values.size(), 0.0);
    std::vector<double> snr_sum(cfg.m_values.size(), 0.0);
    for (int trial = 0; trial < cfg.trials; ++trial) {
      const Eigen::VectorXd& x = bank[trial % bank.size()];
      const std::uint64_t stream = vi * static_cast<std::uint64_t>(cfg.trials) + trial;
      const Eigen::VectorXd y =
          add_noise(x, variance, master.derive(stream).next_u64());
      const double in_db = isnr(x, y - x);
      for (std::size_t mi = 0; mi < cfg.m_values.size(); ++mi) {
        const Eigen::VectorXd x_hat = bandlimit(basis, cfg.m_values[mi], y);
        const double out_db = snr(x, x_hat);
        isnr_sum[mi] += in_db;
        snr_sum[mi] += out_db;
        report.rows.push_back({variance, cfg.m_values[mi], trial, in_db, out_db});
      }
    }
    for (std::size_t mi = 0; mi < cfg.m_values.size(); ++mi)
      report.cells.push_back({variance, cfg.m_values[mi], cfg.trials,
                              isnr_sum[mi] / cfg.trials, snr_sum[mi] / cfg.trials});
  }
  return report;
}

}  // namespace dgft
