#pragma once

#include <Eigen/Dense>

#include <algorithm>

#include "dgft/graph.hpp"

namespace dgft {

// x^T L x, the direction-blind smoothness measure; equals x^T (L + L^T) x / 2.
inline double quadratic_variation(const Eigen::MatrixXd& laplacian, const Eigen::VectorXd& x) {
  if (x.size() != laplacian.rows()) throw validation_error("signal length does not match graph");
  return x.dot(laplacian * x);
}

// ||L x||_2; evaluates to sigma_i on the i-th right frequency component.
inline double l2_variation(const Eigen::MatrixXd& laplacian, const Eigen::VectorXd& x) {
  if (x.size() != laplacian.rows()) throw validation_error("signal length does not match graph");
  return (laplacian * x).norm();
}

// sum_{i,j} a_ji (x_i - x_j)_+  — linear directed variation.
inline double gdv(const Eigen::MatrixXd& adjacency, const Eigen::VectorXd& x) {
  const int n = static_cast<int>(adjacency.rows());
  if (x.size() != n) throw validation_error("signal length does not match graph");
  double total = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) total += adjacency(j, i) * std::max(x(i) - x(j), 0.0);
  return total;
}

// sum_{i,j} a_ji ((x_i - x_j)_+)^2  — quadratic directed variation.
inline double dv(const Eigen::MatrixXd& adjacency, const Eigen::VectorXd& x) {
  const int n = static_cast<int>(adjacency.rows());
  if (x.size() != n) throw validation_error("signal length does not match graph");
  double total = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double d = std::max(x(i) - x(j), 0.0);
      total += adjacency(j, i) * d * d;
    }
  return total;
}

}  // namespace dgft
