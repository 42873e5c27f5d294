#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "dgft/gft.hpp"
#include "dgft/graph.hpp"
#include "dgft/svd_basis.hpp"

namespace dgft {

using Complex = std::complex<double>;

namespace detail {
inline constexpr double kTwoPi = 6.283185307179586476925286766559;
}

// Symbol of the circulant Laplacian evaluated at the n-th roots of unity:
// values[i] = |Q| - sum_l w^(i q_l). values[0] is always 0 and the list is
// conjugate-symmetric, |values[i]| = |values[n-i]|.
struct CirculantSymbol {
  int n = 0;
  std::vector<int> q_set;
  Eigen::VectorXcd values;
};

inline CirculantSymbol symbol(int n, const std::vector<int>& q_set) {
  circulant_graph(n, q_set);  // reuse generator validation
  CirculantSymbol s;
  s.n = n;
  s.q_set = q_set;
  s.values.resize(n);
  const double l_count = static_cast<double>(q_set.size());
  for (int i = 0; i < n; ++i) {
    Complex acc(0.0, 0.0);
    for (int q : q_set) {
      const double ang = detail::kTwoPi * double(i) * double(q) / double(n);
      acc += Complex(std::cos(ang), std::sin(ang));
    }
    s.values(i) = Complex(l_count, 0.0) - acc;
  }
  s.values(0) = Complex(0.0, 0.0);  // exact: P(1) = |Q| - |Q|
  return s;
}

// Circulant Laplacian in the spectral orientation: entry (i, j) is |Q| on
// the diagonal and -1 when j - i is a generator mod n, so the DFT columns
// are its eigenvectors with eigenvalues values[i]. This is the transpose
// of build_laplacian(circulant_graph(n, Q)); both share the same singular
// values and symbol magnitudes.
inline Eigen::MatrixXd circulant_laplacian(int n, const std::vector<int>& q_set) {
  return build_laplacian(circulant_graph(n, q_set)).transpose();
}

// Unit-modulus phases of the symbol values, with exact 1 where the symbol
// vanishes (|P| <= 1e-12 n).
inline Eigen::VectorXcd phase_diagonal(const CirculantSymbol& s) {
  Eigen::VectorXcd theta(s.n);
  for (int i = 0; i < s.n; ++i) {
    const double mag = std::abs(s.values(i));
    theta(i) = mag <= 1e-12 * s.n ? Complex(1.0, 0.0) : s.values(i) / mag;
  }
  return theta;
}

// DFT matrix W = n^{-1/2} (w^{ij}).
inline Eigen::MatrixXcd dft_matrix(int n) {
  Eigen::MatrixXcd w(n, n);
  const double scale = 1.0 / std::sqrt(double(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double ang =
          detail::kTwoPi * double(static_cast<long long>(i) * j % n) / double(n);
      w(i, j) = scale * Complex(std::cos(ang), std::sin(ang));
    }
  return w;
}

// Unitary block rotation diag(1, R2, ..., R2) for odd order and
// diag(1, R2, ..., R2, 1) for even order, with R2 = 2^{-1/2} [[1, -i], [1, i]].
inline Eigen::MatrixXcd rotation_matrix(int n) {
  if (n < 1) throw validation_error("rotation order must be positive");
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(n, n);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  r(0, 0) = 1.0;
  int pos = 1;
  while (pos + 1 < n) {
    r(pos, pos) = inv_sqrt2;
    r(pos, pos + 1) = Complex(0.0, -inv_sqrt2);
    r(pos + 1, pos) = inv_sqrt2;
    r(pos + 1, pos + 1) = Complex(0.0, inv_sqrt2);
    pos += 2;
  }
  if (pos < n) r(pos, pos) = 1.0;  // even order: trailing singleton
  return r;
}

// Permutations stored as column maps: the dense matrix has e_{cols[j]} as
// its j-th column.
inline Eigen::MatrixXcd perm_dense(const std::vector<int>& cols) {
  const int n = static_cast<int>(cols.size());
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < n; ++j) p(cols[j], j) = 1.0;
  return p;
}

struct CirculantPermutations {
  std::vector<int> p0;  // [e_0, e_1, e_{n-1}, e_2, e_{n-2}, ...]
  std::vector<int> q;   // sorts |P(w^i)| nondecreasing, 0 first, pairs adjacent
  std::vector<int> p1;  // sorts the rotated block columns by magnitude
  bool q_involution = false;
};

namespace detail {

// Magnitudes with the conjugate pair (i, n-i) forced exactly equal; the
// value computed at the smaller index is used for both.
inline Eigen::VectorXd paired_magnitudes(const CirculantSymbol& s) {
  Eigen::VectorXd mags(s.n);
  for (int i = 0; i < s.n; ++i) {
    const int rep = std::min(i, (s.n - i) % s.n);
    mags(i) = std::abs(s.values(rep));
  }
  return mags;
}

// Try to orient the within-pair order of the sorting permutation so that
// it becomes an involution. The block layout (which adjacent slot pair a
// conjugate pair occupies) is fixed by the sort; only the order inside
// each pair is free. Not every layout admits an involution; returns false
// and leaves rho in its natural smaller-index-first orientation then.
inline bool make_involution(std::vector<int>& rho, const std::vector<int>& block_of_pos,
                            const std::vector<std::array<int, 2>>& blocks) {
  const int n = static_cast<int>(rho.size());
  std::vector<int> pos_of_block(blocks.size(), -1);
  for (int p = 0; p < n; ++p)
    if (block_of_pos[p] >= 0 && pos_of_block[block_of_pos[p]] < 0)
      pos_of_block[block_of_pos[p]] = p;

  std::vector<int> orient(blocks.size(), -1);  // -1 undecided, 0 natural, 1 swapped
  auto assigned = [&blocks](int b, int o, int slot) { return blocks[b][o ? 1 - slot : slot]; };

  // Force "position pos must hold index idx"; deciding a pair block's
  // orientation cascades the mirrored requirements of both its slots.
  std::vector<int> touched;
  auto require = [&](auto&& self, int pos, int idx) -> bool {
    const int b = block_of_pos[pos];
    if (b < 0) return rho[pos] == idx;  // singleton slot, assignment fixed
    const int slot = pos - pos_of_block[b];
    if (orient[b] != -1) return assigned(b, orient[b], slot) == idx;
    for (int o = 0; o < 2; ++o) {
      if (assigned(b, o, slot) != idx) continue;
      orient[b] = o;
      touched.push_back(b);
      const int base = pos_of_block[b];
      return self(self, assigned(b, o, 0), base) && self(self, assigned(b, o, 1), base + 1);
    }
    return false;
  };

  // Constraints seeded by singleton slots are unconditional.
  bool feasible = true;
  for (int p = 0; p < n && feasible; ++p)
    if (block_of_pos[p] < 0) feasible = require(require, rho[p], p);

  // Remaining components have two candidate orientations each.
  for (std::size_t b = 0; b < blocks.size() && feasible; ++b) {
    if (orient[b] != -1) continue;
    touched.clear();
    orient[b] = 0;
    touched.push_back(static_cast<int>(b));
    const int base = pos_of_block[b];
    bool ok = require(require, blocks[b][0], base) && require(require, blocks[b][1], base + 1);
    if (!ok) {
      for (int t : touched) orient[t] = -1;
      touched.clear();
      orient[b] = 1;
      touched.push_back(static_cast<int>(b));
      ok = require(require, blocks[b][1], base) && require(require, blocks[b][0], base + 1);
    }
    feasible = ok;
  }
  if (!feasible) return false;

  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const int base = pos_of_block[b];
    rho[base] = assigned(static_cast<int>(b), orient[b], 0);
    rho[base + 1] = assigned(static_cast<int>(b), orient[b], 1);
  }
  for (int p = 0; p < n; ++p)
    if (rho[rho[p]] != p) return false;
  return true;
}

}  // namespace detail

inline CirculantPermutations permutations(const CirculantSymbol& s) {
  const int n = s.n;
  CirculantPermutations out;

  out.p0.reserve(n);
  out.p0.push_back(0);
  for (int k = 1; 2 * k < n; ++k) {
    out.p0.push_back(k);
    out.p0.push_back(n - k);
  }
  if (n % 2 == 0 && n > 1) out.p0.push_back(n / 2);

  // Index blocks: {0}, conjugate pairs {i, n-i}, and {n/2} for even n,
  // placed at consecutive slots in nondecreasing magnitude order (ties by
  // smaller member index). Index 0 lands first and pairs stay adjacent.
  const Eigen::VectorXd mags = detail::paired_magnitudes(s);
  struct Block {
    double mag;
    int lo, hi;  // hi == -1 for singletons
  };
  std::vector<Block> layout;
  layout.push_back({0.0, 0, -1});
  for (int i = 1; 2 * i < n; ++i) layout.push_back({mags(i), i, n - i});
  if (n % 2 == 0 && n > 1) layout.push_back({mags(n / 2), n / 2, -1});
  std::sort(layout.begin(), layout.end(), [](const Block& a, const Block& b) {
    return a.mag != b.mag ? a.mag < b.mag : a.lo < b.lo;
  });

  std::vector<int> rho;
  std::vector<int> block_of_pos;
  std::vector<std::array<int, 2>> pair_blocks;
  for (const Block& blk : layout) {
    if (blk.hi < 0) {
      rho.push_back(blk.lo);
      block_of_pos.push_back(-1);
    } else {
      block_of_pos.push_back(static_cast<int>(pair_blocks.size()));
      block_of_pos.push_back(static_cast<int>(pair_blocks.size()));
      pair_blocks.push_back({blk.lo, blk.hi});
      rho.push_back(blk.lo);
      rho.push_back(blk.hi);
    }
  }
  out.q_involution = detail::make_involution(rho, block_of_pos, pair_blocks);
  out.q = rho;

  // Column l of P0 R is supported on one conjugate index pair; its
  // magnitude is that of pair ceil(l/2). P1 places those columns in
  // nondecreasing magnitude order (stable in l), which keeps the zero
  // column first and block partners adjacent.
  std::vector<double> block_mag(n);
  for (int l = 0; l < n; ++l) block_mag[l] = mags((l + 1) / 2);
  out.p1.resize(n);
  for (int l = 0; l < n; ++l) out.p1[l] = l;
  std::sort(out.p1.begin(), out.p1.end(), [&block_mag](int a, int b) {
    return block_mag[a] != block_mag[b] ? block_mag[a] < block_mag[b] : a < b;
  });
  return out;
}

// All factors of the real orthogonal SVD of the circulant Laplacian:
// U = W Theta P0 R P1 and V = W P0 R P1, with Sigma the nondecreasing
// rearrangement of the symbol magnitudes.
struct CirculantFactorization {
  int n = 0;
  std::vector<int> q_set;
  CirculantSymbol sym;
  Eigen::MatrixXcd w;
  Eigen::VectorXcd theta;
  Eigen::MatrixXcd r;
  CirculantPermutations perms;
  Eigen::MatrixXd laplacian;  // spectral orientation, see circulant_laplacian
  Eigen::MatrixXd u;
  Eigen::MatrixXd v;
  Eigen::VectorXd sigma;
  double max_imag = 0;              // imaginary residue before re-typing to real
  double commutation_residual = 0;  // |M P0 R P0 - P0 R P0 M|
};

inline CirculantFactorization factorized_svd(int n, const std::vector<int>& q_set) {
  CirculantFactorization f;
  f.n = n;
  f.q_set = q_set;
  f.sym = symbol(n, q_set);
  f.w = dft_matrix(n);
  f.theta = phase_diagonal(f.sym);
  f.r = rotation_matrix(n);
  f.perms = permutations(f.sym);
  f.laplacian = circulant_laplacian(n, q_set);

  const Eigen::MatrixXcd p0 = perm_dense(f.perms.p0);
  const Eigen::MatrixXcd p1 = perm_dense(f.perms.p1);
  const Eigen::MatrixXcd u_complex = f.w * f.theta.asDiagonal() * p0 * f.r * p1;
  const Eigen::MatrixXcd v_complex = f.w * p0 * f.r * p1;
  f.max_imag = std::max(u_complex.imag().cwiseAbs().maxCoeff(),
                        v_complex.imag().cwiseAbs().maxCoeff());
  if (f.max_imag > 1e-12)
    throw consistency_error("factorized singular vectors are not real, residual " +
                            std::to_string(f.max_imag));
  f.u = u_complex.real();
  f.v = v_complex.real();

  const Eigen::VectorXd mags = detail::paired_magnitudes(f.sym);
  f.sigma.resize(n);
  for (int j = 0; j < n; ++j) f.sigma(j) = mags((f.perms.p1[j] + 1) / 2);

  // Intermediate identity behind the factorization: the magnitude diagonal
  // commutes with the rotation conjugated into index space, because every
  // rotation block couples one conjugate pair and the pair magnitudes are
  // equal.
  Eigen::VectorXcd raw_mags(n);
  for (int i = 0; i < n; ++i) raw_mags(i) = std::abs(f.sym.values(i));
  const Eigen::MatrixXcd prp = p0 * f.r * p0.transpose();
  f.commutation_residual =
      (raw_mags.asDiagonal() * prp - prp * raw_mags.asDiagonal()).cwiseAbs().maxCoeff();
  if (f.commutation_residual > 1e-12)
    throw consistency_error("magnitude/rotation commutation failed, residual " +
                            std::to_string(f.commutation_residual));

  const double recon =
      (f.laplacian - f.u * f.sigma.asDiagonal() * f.v.transpose()).cwiseAbs().maxCoeff();
  if (recon > 1e-10 * (1.0 + f.sigma(n - 1)))
    throw consistency_error("factorized SVD does not reproduce the Laplacian, residual " +
                            std::to_string(recon));
  return f;
}

// Residual of the eigen identity L W = W Theta M.
inline double eigen_identity_residual(const CirculantFactorization& f) {
  Eigen::VectorXcd tm(f.n);
  for (int i = 0; i < f.n; ++i) tm(i) = f.theta(i) * std::abs(f.sym.values(i));
  return (f.laplacian.cast<Complex>() * f.w - f.w * tm.asDiagonal()).cwiseAbs().maxCoeff();
}

inline SvdBasis to_basis(const CirculantFactorization& f) {
  SvdBasis b;
  b.sigma = f.sigma;
  b.u = f.u;
  b.v = f.v;
  const double sigma_max = f.sigma(f.n - 1);
  const double cut = sigma_max > 0 ? 1e-10 * sigma_max : 1e-12;
  b.kernel_rank = 0;
  while (b.kernel_rank < f.n && f.sigma(b.kernel_rank) <= cut) ++b.kernel_rank;
  return b;
}

// Transform coefficients through the DFT route: phase adjustment, then the
// permutation/rotation chain applied to (DFT(x), DFT(x)). Agrees with
// gft() on the factorized basis.
inline GftCoefficients dft_route_gft(const CirculantFactorization& f, const Eigen::VectorXd& x) {
  if (x.size() != f.n) throw validation_error("signal length does not match graph");
  const Eigen::VectorXcd dft = f.w.adjoint() * x.cast<Complex>();
  Eigen::VectorXcd top(f.n), bottom(f.n);
  for (int i = 0; i < f.n; ++i) {
    const Complex th_conj = std::conj(f.theta(i));
    top(i) = (th_conj + 1.0) * dft(i);
    bottom(i) = (th_conj - 1.0) * dft(i);
  }
  const Eigen::MatrixXcd p0 = perm_dense(f.perms.p0);
  const Eigen::MatrixXcd p1 = perm_dense(f.perms.p1);
  const Eigen::MatrixXcd chain = (p0 * f.r * p1).adjoint();  // = P1^T R^H P0^T
  const Eigen::VectorXcd z1 = 0.5 * (chain * top);
  const Eigen::VectorXcd z2 = 0.5 * (chain * bottom);
  const double imag_residue =
      std::max(z1.imag().cwiseAbs().maxCoeff(), z2.imag().cwiseAbs().maxCoeff());
  if (imag_residue > 1e-10)
    throw consistency_error("DFT-route coefficients are not real, residual " +
                            std::to_string(imag_residue));
  return {z1.real(), z2.real()};
}

}  // namespace dgft
