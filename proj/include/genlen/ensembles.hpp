#pragma once

// Seeded samplers for every random ensemble used by the experiments.
// All draws consume the stream in a fixed order (row-major entries, real part
// before imaginary part), so a given RngSpec reproduces bit-identical output.

#include "genlen/channels.hpp"
#include "genlen/liespan.hpp"
#include "genlen/numkernel.hpp"
#include "genlen/random.hpp"
#include "genlen/tensornets.hpp"
#include "genlen/wordspan.hpp"

#include <vector>

namespace genlen {

inline CMatrix ginibre(Rng& rng, std::size_t rows, std::size_t cols) {
  CMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.complex_normal();
  return m;
}

/// n x n matrix of i.i.d. standard complex Gaussians.
inline CMatrix ginibre(std::size_t n, RngSpec spec) {
  Rng rng(spec);
  return ginibre(rng, n, n);
}

/// g independent Ginibre matrices from one stream.
inline GeneratingSystem ginibre_system(std::size_t n, std::size_t g, RngSpec spec) {
  Rng rng(spec);
  std::vector<CMatrix> mats;
  mats.reserve(g);
  for (std::size_t i = 0; i < g; ++i) mats.push_back(ginibre(rng, n, n));
  return GeneratingSystem(std::move(mats));
}

/// Thin Q factor of a tall Ginibre matrix with the positive-diagonal-R convention.
inline CMatrix haar_isometry(std::size_t rows, std::size_t cols, RngSpec spec) {
  if (rows < cols) throw DimensionError("haar_isometry: needs rows >= cols");
  Rng rng(spec);
  const Eigen::MatrixXcd z = ginibre(rng, rows, cols);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  const auto C = static_cast<Eigen::Index>(cols);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(rows), C);
  const Eigen::MatrixXcd r = qr.matrixQR().topRows(C).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < C; ++j) {
    const cplx d = r(j, j);
    const double a = std::abs(d);
    if (a > 0.0) q.col(j) *= d / a;  // Q R = (Q D)(D^* R) with D^* R having a positive diagonal
  }
  return q;
}

/// Kraus operators A_i = rows [i*n, (i+1)*n) of a Haar isometry C^n -> C^g (x) C^n.
inline KrausChannel haar_isometry_kraus(std::size_t n, std::size_t g, RngSpec spec) {
  if (g == 0 || n == 0) throw std::invalid_argument("haar_isometry_kraus: n and g must be >= 1");
  const CMatrix v = haar_isometry(n * g, n, spec);
  const auto N = static_cast<Eigen::Index>(n);
  std::vector<CMatrix> kraus;
  kraus.reserve(g);
  for (std::size_t i = 0; i < g; ++i) kraus.push_back(v.middleRows(static_cast<Eigen::Index>(i) * N, N));
  return KrausChannel(std::move(kraus));
}

/// (G - G^dagger)/2 with its trace removed: an absolutely continuous sample of su(n).
inline SuElement random_su(std::size_t n, RngSpec spec) {
  if (n < 2) throw std::invalid_argument("random_su: n must be >= 2");
  Rng rng(spec);
  const CMatrix gm = ginibre(rng, n, n);
  CMatrix x = (gm - gm.adjoint()) / 2.0;
  const cplx shift = x.trace() / static_cast<double>(n);
  x.diagonal().array() -= shift;
  return SuElement(std::move(x));
}

inline LieGeneratingSystem random_su_system(std::size_t n, std::size_t g, RngSpec spec) {
  std::vector<SuElement> elems;
  elems.reserve(g);
  for (std::size_t i = 0; i < g; ++i) elems.push_back(random_su(n, spec.substream(i)));
  return LieGeneratingSystem(std::move(elems));
}

/// All g n^4 entries i.i.d. standard complex Gaussian.
inline PepsTensor random_peps_tensor(std::size_t n, std::size_t g, RngSpec spec) {
  Rng rng(spec);
  std::vector<cplx> entries(g * n * n * n * n);
  for (auto& z : entries) z = rng.complex_normal();
  return PepsTensor(n, g, std::move(entries));
}

/// Invertible matrix U diag(s) V^dagger with s in [1, cond], U and V Haar unitaries.
inline CMatrix random_invertible(std::size_t n, double cond, RngSpec spec) {
  const CMatrix u = haar_isometry(n, n, spec.substream(0));
  const CMatrix v = haar_isometry(n, n, spec.substream(1));
  Rng rng(spec.substream(2));
  Eigen::VectorXcd s(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < s.size(); ++i) s[i] = 1.0 + (cond - 1.0) * rng.uniform();
  return u * s.asDiagonal() * v.adjoint();
}

}  // namespace genlen
