#pragma once

#include <Eigen/Dense>

#include <cmath>

#include "dgft/svd_basis.hpp"

namespace dgft {

// Transform coefficients: the 2n-vector split into its sum and difference
// halves, sum = (U^T + V^T) x / 2 and diff = (U^T - V^T) x / 2.
struct GftCoefficients {
  Eigen::VectorXd sum_block;
  Eigen::VectorXd diff_block;

  double norm() const {
    return std::sqrt(sum_block.squaredNorm() + diff_block.squaredNorm());
  }
};

inline GftCoefficients gft(const SvdBasis& basis, const Eigen::VectorXd& x) {
  if (x.size() != basis.order()) throw validation_error("signal length does not match basis");
  const Eigen::VectorXd ut = basis.u.transpose() * x;
  const Eigen::VectorXd vt = basis.v.transpose() * x;
  return {0.5 * (ut + vt), 0.5 * (ut - vt)};
}

// Least-squares inverse: (U (z1 + z2) + V (z1 - z2)) / 2. Composed with the
// forward transform this is the identity.
inline Eigen::VectorXd igft(const SvdBasis& basis, const Eigen::VectorXd& z1,
                            const Eigen::VectorXd& z2) {
  if (z1.size() != basis.order() || z2.size() != basis.order())
    throw validation_error("coefficient length does not match basis");
  return 0.5 * (basis.u * (z1 + z2) + basis.v * (z1 - z2));
}

inline Eigen::VectorXd igft(const SvdBasis& basis, const GftCoefficients& c) {
  return igft(basis, c.sum_block, c.diff_block);
}

// Band limiting to the first m frequencies:
//   P_m x = (sum_{i<m} <x,u_i> u_i + <x,v_i> v_i) / 2,
// equivalently the inverse transform of the coefficients masked to [0, m).
inline Eigen::VectorXd bandlimit(const SvdBasis& basis, int m, const Eigen::VectorXd& x) {
  const int n = basis.order();
  if (m < 0 || m > n) throw validation_error("band cutoff outside [0, n]");
  if (x.size() != n) throw validation_error("signal length does not match basis");
  const auto um = basis.u.leftCols(m);
  const auto vm = basis.v.leftCols(m);
  return 0.5 * (um * (um.transpose() * x) + vm * (vm.transpose() * x));
}

// Fraction of signal energy captured by the first m frequencies; equals 1
// at m = n by Parseval.
inline double energy_profile(const SvdBasis& basis, const Eigen::VectorXd& x, int m) {
  const int n = basis.order();
  if (m < 0 || m > n) throw validation_error("band cutoff outside [0, n]");
  if (x.size() != n) throw validation_error("signal length does not match basis");
  const double xn = x.norm();
  if (xn == 0.0) throw validation_error("energy profile undefined for the zero signal");
  const GftCoefficients c = gft(basis, x);
  const double captured =
      c.sum_block.head(m).squaredNorm() + c.diff_block.head(m).squaredNorm();
  return std::sqrt(captured) / xn;
}

}  // namespace dgft
