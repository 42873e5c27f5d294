#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "dgft/gft.hpp"
#include "dgft/rng.hpp"
#include "dgft/svd_basis.hpp"

namespace dgft {

namespace detail {

inline bool laplacian_is_eulerian(const Eigen::MatrixXd& laplacian) {
  // Row sums vanish by construction; column sums vanish iff in-degree
  // equals out-degree at every vertex.
  const double scale = std::max(1.0, laplacian.diagonal().cwiseAbs().maxCoeff());
  return laplacian.colwise().sum().cwiseAbs().maxCoeff() <= 1e-12 * scale * laplacian.rows();
}

inline double simplicity_gap_tolerance(const Eigen::VectorXd& sigma) {
  return 1e-8 * (1.0 + sigma(sigma.size() - 1));
}

inline bool spectrum_is_simple(const Eigen::VectorXd& sigma) {
  const double tol = simplicity_gap_tolerance(sigma);
  for (int i = 1; i < sigma.size(); ++i)
    if (sigma(i) - sigma(i - 1) <= tol) return false;
  return true;
}

}  // namespace detail

// Interpolated Laplacian (1-t) L + t L^T; only meaningful on Eulerian
// graphs, where every member of the family is again a Laplacian.
inline Eigen::MatrixXd laplacian_t(const Eigen::MatrixXd& laplacian, double t) {
  if (t < 0.0 || t > 1.0) throw validation_error("interpolation parameter outside [0, 1]");
  if (!detail::laplacian_is_eulerian(laplacian))
    throw validation_error("interpolation family requires an Eulerian graph");
  return (1.0 - t) * laplacian + t * laplacian.transpose();
}

// Largest singular value of L - L^T; zero exactly when the graph is
// undirected.
inline double sigma_asym(const Eigen::MatrixXd& laplacian) {
  const Eigen::MatrixXd skew = laplacian - laplacian.transpose();
  return Eigen::JacobiSVD<Eigen::MatrixXd>(skew).singularValues()(0);
}

// Sign- and order-aligned spectra of L_t over a grid of interpolation
// parameters.
struct EulerianPath {
  std::vector<double> grid;
  std::vector<SvdBasis> bases;
  std::vector<bool> simple_flags;
};

namespace detail {

// Align `cur` to `prev`: within clusters of near-equal singular values,
// reorder columns by greedy maximal |inner product| of the stacked (u, v)
// vectors, then flip (u, v) pairs jointly so consecutive right components
// have nonnegative inner products.
inline void align_basis(const SvdBasis& prev, SvdBasis& cur) {
  const int n = cur.order();
  const double tol = simplicity_gap_tolerance(cur.sigma);
  int start = 0;
  while (start < n) {
    int end = start + 1;
    while (end < n && cur.sigma(end) - cur.sigma(end - 1) <= tol) ++end;
    const int width = end - start;
    if (width > 1) {
      Eigen::MatrixXd score(width, width);
      for (int a = 0; a < width; ++a)
        for (int b = 0; b < width; ++b)
          score(a, b) = std::abs(prev.u.col(start + a).dot(cur.u.col(start + b)) +
                                 prev.v.col(start + a).dot(cur.v.col(start + b)));
      std::vector<int> match(width, -1);
      std::vector<bool> used(width, false);
      for (int step = 0; step < width; ++step) {
        int best_a = -1, best_b = -1;
        double best = -1.0;
        for (int a = 0; a < width; ++a) {
          if (match[a] >= 0) continue;
          for (int b = 0; b < width; ++b) {
            if (used[b]) continue;
            if (score(a, b) > best) {
              best = score(a, b);
              best_a = a;
              best_b = b;
            }
          }
        }
        match[best_a] = best_b;
        used[best_b] = true;
      }
      Eigen::MatrixXd pu(n, width), pv(n, width);
      Eigen::VectorXd ps(width);
      for (int a = 0; a < width; ++a) {
        pu.col(a) = cur.u.col(start + match[a]);
        pv.col(a) = cur.v.col(start + match[a]);
        ps(a) = cur.sigma(start + match[a]);
      }
      cur.u.middleCols(start, width) = pu;
      cur.v.middleCols(start, width) = pv;
      cur.sigma.segment(start, width) = ps;
    }
    start = end;
  }
  for (int i = 0; i < n; ++i) {
    double s = prev.v.col(i).dot(cur.v.col(i));
    if (std::abs(s) < 1e-12) s = prev.u.col(i).dot(cur.u.col(i));
    if (s < 0) {
      cur.u.col(i) = -cur.u.col(i);
      cur.v.col(i) = -cur.v.col(i);
    }
  }
}

// Smallest aligned inner product across components; close to 1 when the
// step is well resolved.
inline double alignment_quality(const SvdBasis& prev, const SvdBasis& cur) {
  double worst = 1.0;
  for (int i = 0; i < cur.order(); ++i) {
    const double zi = 0.5 * (prev.u.col(i).dot(cur.u.col(i)) + prev.v.col(i).dot(cur.v.col(i)));
    worst = std::min(worst, zi);
  }
  return worst;
}

}  // namespace detail

// Aligned SVD path of the family L_t over the requested grid. Steps whose
// aligned components turn by more than 30 degrees are refined internally by
// halving, up to a budget of 1024 extra points; only the requested grid is
// returned.
inline EulerianPath svd_path(const Eigen::MatrixXd& laplacian, const std::vector<double>& grid) {
  if (grid.empty()) throw validation_error("interpolation grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 0.0 || grid[i] > 1.0)
      throw validation_error("grid value outside [0, 1]");
    if (i > 0 && grid[i] <= grid[i - 1])
      throw validation_error("grid must be strictly increasing");
  }
  if (!detail::laplacian_is_eulerian(laplacian))
    throw validation_error("interpolation family requires an Eulerian graph");

  constexpr double kMinQuality = 0.86602540378443864676;  // cos(30 deg)
  int budget = 1024;

  EulerianPath path;
  path.grid = grid;
  path.bases.reserve(grid.size());

  SvdBasis carrier = svd_basis(laplacian_t(laplacian, grid[0]));
  if (carrier.kernel_rank != 1)
    throw validation_error("interpolation path requires a connected graph");
  path.bases.push_back(carrier);
  double carrier_t = grid[0];

  // advance the aligned carrier to time `target`, refining as needed
  auto advance = [&](auto&& self, double target) -> void {
    SvdBasis next = svd_basis(laplacian_t(laplacian, target));
    detail::align_basis(carrier, next);
    if (detail::alignment_quality(carrier, next) < kMinQuality && budget > 0 &&
        target - carrier_t > 1e-6) {
      --budget;
      self(self, 0.5 * (carrier_t + target));
      self(self, target);
      return;
    }
    carrier = std::move(next);
    carrier_t = target;
  };

  for (std::size_t k = 1; k < grid.size(); ++k) {
    advance(advance, grid[k]);
    path.bases.push_back(carrier);
  }
  for (const SvdBasis& b : path.bases)
    path.simple_flags.push_back(detail::spectrum_is_simple(b.sigma));
  return path;
}

// d sigma_i / dt = u_i(t)^T (L^T - L) v_i(t), from differentiating
// sigma_i = u_i^T L_t v_i with unit-norm components. Requires sigma_i
// simple at this t. L is the endpoint Laplacian of the family, not L_t.
inline double d_sigma(const SvdBasis& basis_t, const Eigen::MatrixXd& laplacian, int i) {
  const int n = basis_t.order();
  if (i < 1 || i >= n) throw validation_error("component index must be in [1, n)");
  const double tol = detail::simplicity_gap_tolerance(basis_t.sigma);
  const double gap_lo = basis_t.sigma(i) - basis_t.sigma(i - 1);
  if (gap_lo <= tol)
    throw validation_error("sigma_" + std::to_string(i) + " is not simple: gap below " +
                           std::to_string(gap_lo));
  if (i + 1 < n) {
    const double gap_hi = basis_t.sigma(i + 1) - basis_t.sigma(i);
    if (gap_hi <= tol)
      throw validation_error("sigma_" + std::to_string(i) + " is not simple: gap above " +
                             std::to_string(gap_hi));
  }
  const Eigen::MatrixXd skew = laplacian.transpose() - laplacian;
  return basis_t.u.col(i).dot(skew * basis_t.v.col(i));
}

// Analytic derivatives of the frequency components, valid when the whole
// spectrum is simple and sigma_i > 0:
//   du_i/dt = sum_k (a_ik u_k^T S v_i - b_ik v_k^T S u_i) u_k
//   dv_i/dt = sum_k (b_ik u_k^T S v_i - a_ik v_k^T S u_i) v_k
// with S = L^T - L, a_ik = sigma_i/(sigma_i^2 - sigma_k^2) and
// b_ik = sigma_k/(sigma_i^2 - sigma_k^2) for k != i, and
// a_ii = -b_ii = 1/(4 sigma_i). The k = 0 terms vanish on connected
// Eulerian graphs and are excluded.
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> d_uv(const SvdBasis& basis_t,
                                                        const Eigen::MatrixXd& laplacian,
                                                        int i) {
  const int n = basis_t.order();
  if (i < 1 || i >= n) throw validation_error("component index must be in [1, n)");
  if (!detail::spectrum_is_simple(basis_t.sigma))
    throw validation_error("component derivatives require a fully simple spectrum");
  const double sigma_i = basis_t.sigma(i);
  if (sigma_i <= 0) throw validation_error("component derivative undefined at sigma = 0");

  const Eigen::MatrixXd skew = laplacian.transpose() - laplacian;
  const Eigen::VectorXd usv = basis_t.u.transpose() * (skew * basis_t.v.col(i));  // u_k^T S v_i
  const Eigen::VectorXd vsu = basis_t.v.transpose() * (skew * basis_t.u.col(i));  // v_k^T S u_i

  Eigen::VectorXd du = Eigen::VectorXd::Zero(n), dvv = Eigen::VectorXd::Zero(n);
  for (int k = 1; k < n; ++k) {
    double a, b;
    if (k == i) {
      a = 1.0 / (4.0 * sigma_i);
      b = -a;
    } else {
      const double denom = sigma_i * sigma_i - basis_t.sigma(k) * basis_t.sigma(k);
      a = sigma_i / denom;
      b = basis_t.sigma(k) / denom;
    }
    du += (a * usv(k) - b * vsu(k)) * basis_t.u.col(k);
    dvv += (b * usv(k) - a * vsu(k)) * basis_t.v.col(k);
  }
  return {du, dvv};
}

// Reflection symmetry of an aligned path on a t-grid that is symmetric
// about 1/2: U_t should match V_{1-t} columnwise, and the transform at
// 1-t should equal the transform at t with the difference block negated.
struct ReflectionReport {
  bool conclusive = false;        // hypothesis (fully simple spectra) held
  bool signs_uniform = false;     // no residual per-column sign freedom
  double max_column_residual = 0; // worst |u_i(t) -+ v_i(1-t)| over the grid
  double max_gft_residual = 0;    // worst transform reflection mismatch
};

inline ReflectionReport check_reflection(const EulerianPath& path, std::uint64_t probe_seed = 7) {
  const std::size_t m = path.grid.size();
  std::vector<int> mirror(m, -1);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b)
      if (std::abs(path.grid[a] + path.grid[b] - 1.0) <= 1e-9) mirror[a] = static_cast<int>(b);
    if (mirror[a] < 0)
      throw validation_error("reflection check requires a grid symmetric about 1/2");
  }

  ReflectionReport rep;
  for (bool f : path.simple_flags)
    if (!f) return rep;  // hypothesis violated: inconclusive, not a failure
  rep.conclusive = true;
  rep.signs_uniform = true;

  const int n = path.bases[0].order();
  CounterRng rng(probe_seed);
  Eigen::VectorXd x(n);
  for (int j = 0; j < n; ++j) x(j) = rng.uniform(-1.0, 1.0);

  for (std::size_t a = 0; a < m; ++a) {
    const SvdBasis& at_t = path.bases[a];
    const SvdBasis& at_mirror = path.bases[mirror[a]];
    for (int i = 0; i < n; ++i) {
      const double s = at_t.u.col(i).dot(at_mirror.v.col(i)) >= 0 ? 1.0 : -1.0;
      if (s < 0) rep.signs_uniform = false;
      const double res_u = (at_t.u.col(i) - s * at_mirror.v.col(i)).cwiseAbs().maxCoeff();
      const double res_v = (at_t.v.col(i) - s * at_mirror.u.col(i)).cwiseAbs().maxCoeff();
      rep.max_column_residual = std::max({rep.max_column_residual, res_u, res_v});
    }
    const GftCoefficients ct = gft(at_t, x);
    const GftCoefficients cm = gft(at_mirror, x);
    rep.max_gft_residual = std::max(
        {rep.max_gft_residual, (cm.sum_block - ct.sum_block).cwiseAbs().maxCoeff(),
         (cm.diff_block + ct.diff_block).cwiseAbs().maxCoeff()});
  }
  return rep;
}

// Necessary condition for a t-independent singular basis: (L^T)^2 = L^2.
// When the squares differ, the aligned endpoint bases must differ too.
struct NecessaryConditionReport {
  double squares_residual = 0;    // |(L^T)^2 - L^2|_max
  bool squares_equal = false;     // residual below 1e-9 (1 + |L|_2^2)
  double endpoint_distance = 0;   // basis distance between t = 0 and t = 1
  bool constant_basis_excluded = false;  // squares differ => no constant basis
};

inline NecessaryConditionReport check_necessary_condition(const Eigen::MatrixXd& laplacian) {
  NecessaryConditionReport rep;
  const Eigen::MatrixXd lt = laplacian.transpose();
  rep.squares_residual = (lt * lt - laplacian * laplacian).cwiseAbs().maxCoeff();
  const double norm2 = Eigen::JacobiSVD<Eigen::MatrixXd>(laplacian).singularValues()(0);
  rep.squares_equal = rep.squares_residual <= 1e-9 * (1.0 + norm2 * norm2);
  rep.constant_basis_excluded = !rep.squares_equal;

  std::vector<double> grid;
  for (int k = 0; k <= 10; ++k) grid.push_back(k / 10.0);
  const EulerianPath path = svd_path(laplacian, grid);
  const SvdBasis& first = path.bases.front();
  const SvdBasis& last = path.bases.back();
  for (int i = 0; i < first.order(); ++i) {
    const double du = std::min((first.u.col(i) - last.u.col(i)).cwiseAbs().maxCoeff(),
                               (first.u.col(i) + last.u.col(i)).cwiseAbs().maxCoeff());
    const double dv = std::min((first.v.col(i) - last.v.col(i)).cwiseAbs().maxCoeff(),
                               (first.v.col(i) + last.v.col(i)).cwiseAbs().maxCoeff());
    rep.endpoint_distance = std::max({rep.endpoint_distance, du, dv});
  }
  return rep;
}

}  // namespace dgft
