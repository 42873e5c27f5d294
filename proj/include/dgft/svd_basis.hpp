#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <string>

#include "dgft/graph.hpp"

namespace dgft {

// Ordered singular triplets (sigma_i, u_i, v_i) of a Laplacian, sigma
// nondecreasing with the zero block first. Columns of u/v are the left and
// right frequency components of the transform.
struct SvdBasis {
  Eigen::VectorXd sigma;
  Eigen::MatrixXd u;
  Eigen::MatrixXd v;
  int kernel_rank = 0;  // number of zero singular values

  int order() const { return static_cast<int>(sigma.size()); }
};

namespace detail {

// Orthonormal basis of span(block) whose first column is `first`
// (`first` must be a unit vector inside the span). Remaining columns come
// from a rank-revealing QR of the block projected against `first`.
inline Eigen::MatrixXd rebase_kernel_block(const Eigen::MatrixXd& block,
                                           const Eigen::VectorXd& first) {
  const int k = static_cast<int>(block.cols());
  Eigen::MatrixXd out(block.rows(), k);
  out.col(0) = first;
  if (k == 1) return out;
  Eigen::MatrixXd rest = block - first * (first.transpose() * block);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(rest);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(block.rows(), k - 1);
  out.rightCols(k - 1) = q;
  return out;
}

// Deterministic sign for a lone kernel vector: largest-magnitude entry
// positive, first occurrence wins ties.
inline void fix_sign_largest_entry(Eigen::Ref<Eigen::VectorXd> x) {
  int arg = 0;
  double best = -1.0;
  for (int j = 0; j < x.size(); ++j) {
    if (std::abs(x(j)) > best) {
      best = std::abs(x(j));
      arg = j;
    }
  }
  if (x(arg) < 0) x = -x;
}

}  // namespace detail

// Spectrum of the Laplacian: a full SVD re-shaped so that
//   - sigma is nondecreasing and exactly zero on the kernel block,
//   - v_0 = n^{-1/2} 1 (the constant is always in the right kernel),
//   - u_0 is the unit kernel vector of L^T with maximal mean (the
//     normalized projection of 1 when that projection is nonzero),
//   - u_i = sigma_i^{-1} L v_i outside the kernel,
//   - each nonzero pair (u_i, v_i) is jointly flipped so the
//     largest-magnitude entry of v_i is positive.
inline SvdBasis svd_basis(const Eigen::MatrixXd& laplacian) {
  const int n = static_cast<int>(laplacian.rows());
  if (n == 0 || laplacian.cols() != n) throw validation_error("laplacian must be square");
  if (!laplacian.allFinite()) throw validation_error("laplacian has non-finite entries");

  Eigen::BDCSVD<Eigen::MatrixXd> svd(laplacian, Eigen::ComputeFullU | Eigen::ComputeFullV);

  SvdBasis b;
  b.sigma.resize(n);
  b.u.resize(n, n);
  b.v.resize(n, n);
  // Eigen orders singular values nonincreasing; reverse to nondecreasing.
  for (int i = 0; i < n; ++i) {
    b.sigma(i) = svd.singularValues()(n - 1 - i);
    b.u.col(i) = svd.matrixU().col(n - 1 - i);
    b.v.col(i) = svd.matrixV().col(n - 1 - i);
  }

  const double sigma_max = b.sigma(n - 1);
  const double zero_cut = sigma_max > 0 ? 1e-10 * sigma_max : 1e-12;
  int kernel = 0;
  while (kernel < n && b.sigma(kernel) <= zero_cut) ++kernel;
  if (kernel == 0)
    throw consistency_error("laplacian has no zero singular value (row sums nonzero?)");
  b.kernel_rank = kernel;
  b.sigma.head(kernel).setZero();

  const Eigen::VectorXd ones_unit = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(double(n)));

  // Right kernel: rebase so the constant vector comes first.
  b.v.leftCols(kernel) = detail::rebase_kernel_block(b.v.leftCols(kernel), ones_unit);

  // Left kernel: u_0 maximizes the mean over unit vectors of ker(L^T),
  // i.e. the normalized projection of 1; degenerate projections fall back
  // to the first basis vector with a fixed sign.
  {
    Eigen::MatrixXd ku = b.u.leftCols(kernel);
    Eigen::VectorXd proj = ku * (ku.transpose() * (ones_unit * std::sqrt(double(n))));
    Eigen::VectorXd u0;
    if (proj.norm() > 1e-10 * std::sqrt(double(n))) {
      u0 = proj / proj.norm();
    } else {
      u0 = ku.col(0);
      detail::fix_sign_largest_entry(u0);
    }
    b.u.leftCols(kernel) = detail::rebase_kernel_block(ku, u0);
  }

  // Nonzero block: left components from the defining relation, then the
  // joint sign convention.
  for (int i = kernel; i < n; ++i) {
    b.u.col(i) = laplacian * b.v.col(i) / b.sigma(i);
    int arg = 0;
    double best = -1.0;
    for (int j = 0; j < n; ++j) {
      if (std::abs(b.v(j, i)) > best) {
        best = std::abs(b.v(j, i));
        arg = j;
      }
    }
    if (b.v(arg, i) < 0) {
      b.v.col(i) = -b.v.col(i);
      b.u.col(i) = -b.u.col(i);
    }
  }
  return b;
}

struct BasisResiduals {
  double u_orthogonality = 0;   // max |U^T U - I|
  double v_orthogonality = 0;   // max |V^T V - I|
  double reconstruction = 0;    // max |L - U diag(sigma) V^T|
};

inline BasisResiduals basis_residuals(const SvdBasis& b, const Eigen::MatrixXd& laplacian) {
  const int n = b.order();
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  BasisResiduals r;
  r.u_orthogonality = (b.u.transpose() * b.u - eye).cwiseAbs().maxCoeff();
  r.v_orthogonality = (b.v.transpose() * b.v - eye).cwiseAbs().maxCoeff();
  r.reconstruction =
      (laplacian - b.u * b.sigma.asDiagonal() * b.v.transpose()).cwiseAbs().maxCoeff();
  return r;
}

// Self-adjoint dilation [[0, L], [L^T, 0]] and the orthogonal eigenbasis
// F = 2^{-1/2} [[U, U], [V, -V]] assembled from the spectrum; the dilation
// has eigenvalues {+-sigma_i}.
struct Dilation {
  Eigen::MatrixXd s;
  Eigen::MatrixXd f;
  SvdBasis basis;
};

inline Dilation dilation(const Eigen::MatrixXd& laplacian) {
  const int n = static_cast<int>(laplacian.rows());
  Dilation d;
  d.basis = svd_basis(laplacian);
  d.s = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  d.s.topRightCorner(n, n) = laplacian;
  d.s.bottomLeftCorner(n, n) = laplacian.transpose();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  d.f.resize(2 * n, 2 * n);
  d.f.topLeftCorner(n, n) = inv_sqrt2 * d.basis.u;
  d.f.topRightCorner(n, n) = inv_sqrt2 * d.basis.u;
  d.f.bottomLeftCorner(n, n) = inv_sqrt2 * d.basis.v;
  d.f.bottomRightCorner(n, n) = -inv_sqrt2 * d.basis.v;
  return d;
}

}  // namespace dgft
