#pragma once

// Lie-length of Lie-generating systems of su(n).
//
// The Lie-Tree search expands right-nested commutators breadth first:
//   layer 1   = U
//   layer m+1 = { [u, w] : u in U, w a kept node of layer m }
// A candidate is kept only if its real coordinates are linearly independent
// of everything kept so far. Expanding kept nodes only is enough: a discarded
// node lies in the span of earlier kept nodes, whose brackets with U were
// already candidates one layer earlier.

#include "genlen/numkernel.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace genlen {

/// Traceless skew-Hermitian matrix.
class SuElement {
 public:
  SuElement() = default;

  explicit SuElement(CMatrix mat, double tol = 1e-12) : mat_(std::move(mat)) {
    if (mat_.rows() != mat_.cols() || mat_.rows() == 0) throw DimensionError("SuElement: matrix must be square");
    if (!all_finite(mat_)) throw DimensionError("SuElement: non-finite entries");
    const double scale = std::max(1.0, mat_.norm());
    if ((mat_ + mat_.adjoint()).norm() > tol * scale) {
      throw std::invalid_argument("SuElement: matrix is not skew-Hermitian");
    }
    if (std::abs(mat_.trace()) > tol * scale) throw std::invalid_argument("SuElement: matrix is not traceless");
  }

  std::size_t n() const { return static_cast<std::size_t>(mat_.rows()); }
  const CMatrix& mat() const { return mat_; }

 private:
  CMatrix mat_;
};

class LieGeneratingSystem {
 public:
  explicit LieGeneratingSystem(std::vector<SuElement> elems) : elems_(std::move(elems)) {
    if (elems_.empty()) throw DimensionError("LieGeneratingSystem: needs at least one element");
    for (const auto& e : elems_) {
      if (e.n() != elems_.front().n()) throw DimensionError("LieGeneratingSystem: mixed dimensions");
    }
  }

  std::size_t n() const { return elems_.front().n(); }
  std::size_t g() const { return elems_.size(); }
  const std::vector<SuElement>& elems() const { return elems_; }

 private:
  std::vector<SuElement> elems_;
};

/// [X, Y] = XY - YX.
inline CMatrix commutator(const CMatrix& x, const CMatrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) throw DimensionError("commutator: dimension mismatch");
  return x * y - y * x;
}

inline SuElement commutator(const SuElement& x, const SuElement& y) {
  if (x.n() != y.n()) throw DimensionError("commutator: dimension mismatch");
  // Closure is exact in real arithmetic; allow for rounding proportional to the factors.
  const double slack = 1e-12 * std::max(1.0, x.mat().norm() * y.mat().norm());
  return SuElement(commutator(x.mat(), y.mat()), slack);
}

/// Basis of su(n), 0-based indices, in this order:
///   i (E_hh - E_{h+1,h+1})            for h = 0..n-2
///   then for each j < k (lexicographic):
///     E_jk - E_kj, i (E_jk + E_kj)
struct SuBasis {
  std::size_t n = 0;
  std::vector<SuElement> basis_mats;

  std::size_t dim() const { return basis_mats.size(); }

  /// phi: R^{n^2-1} -> su(n).
  CMatrix reconstruct(const RVector& coords) const {
    if (static_cast<std::size_t>(coords.size()) != dim()) throw DimensionError("reconstruct: wrong length");
    CMatrix m = CMatrix::Zero(n, n);
    for (std::size_t i = 0; i < dim(); ++i) m += coords[static_cast<Eigen::Index>(i)] * basis_mats[i].mat();
    return m;
  }
};

inline SuBasis su_basis(std::size_t n) {
  if (n < 2) throw std::invalid_argument("su_basis: n must be >= 2");
  const auto N = static_cast<Eigen::Index>(n);
  const cplx I(0.0, 1.0);
  SuBasis b;
  b.n = n;
  b.basis_mats.reserve(n * n - 1);
  for (Eigen::Index h = 0; h + 1 < N; ++h) {
    CMatrix m = CMatrix::Zero(N, N);
    m(h, h) = I;
    m(h + 1, h + 1) = -I;
    b.basis_mats.emplace_back(m);
  }
  for (Eigen::Index j = 0; j < N; ++j) {
    for (Eigen::Index k = j + 1; k < N; ++k) {
      CMatrix re = CMatrix::Zero(N, N);
      re(j, k) = 1.0;
      re(k, j) = -1.0;
      b.basis_mats.emplace_back(re);
      CMatrix im = CMatrix::Zero(N, N);
      im(j, k) = I;
      im(k, j) = I;
      b.basis_mats.emplace_back(im);
    }
  }
  return b;
}

/// Real coordinates of a skew-Hermitian traceless matrix in su_basis(n), in closed form.
inline RVector su_coords(const CMatrix& x, std::size_t n) {
  if (static_cast<std::size_t>(x.rows()) != n || x.rows() != x.cols()) throw DimensionError("su_coords: dimension mismatch");
  const auto N = static_cast<Eigen::Index>(n);
  RVector c(N * N - 1);
  // Diagonal entries i t_h with sum t_h = 0: coefficient of the h-th diagonal generator
  // is the prefix sum t_0 + ... + t_h.
  double prefix = 0.0;
  for (Eigen::Index h = 0; h + 1 < N; ++h) {
    prefix += x(h, h).imag();
    c[h] = prefix;
  }
  Eigen::Index idx = N - 1;
  for (Eigen::Index j = 0; j < N; ++j) {
    for (Eigen::Index k = j + 1; k < N; ++k) {
      c[idx++] = x(j, k).real();
      c[idx++] = x(j, k).imag();
    }
  }
  return c;
}

inline RVector su_coords(const SuElement& x, const SuBasis& b) {
  if (x.n() != b.n) throw DimensionError("su_coords: element and basis dimensions differ");
  return su_coords(x.mat(), b.n);
}

/// Accepts a general matrix and rejects it unless it lies in su(n).
inline RVector su_coords_checked(const CMatrix& x, const SuBasis& b, double tol = 1e-10) {
  return su_coords(SuElement(x, tol), b);
}

enum class LieStatus { Found, NotGenerating };

struct LieLengthReport {
  LieStatus status = LieStatus::NotGenerating;
  std::size_t value = 0;
  std::vector<std::size_t> dims_per_depth;
  std::size_t nodes_expanded = 0;  // candidates evaluated
  std::size_t nodes_kept = 0;
  std::size_t cap = 0;

  bool finite() const { return status == LieStatus::Found; }
};

struct LieTreeNode {
  CMatrix mat;                      // normalized to unit Frobenius norm
  std::vector<std::uint32_t> path;  // [u_{p0}, [u_{p1}, ... u_{pk}]]
};

struct LieTreeResult {
  LieLengthReport report;
  std::vector<std::vector<LieTreeNode>> layers;  // kept nodes per depth
};

/// Lie-Tree breadth-first search, returning the kept nodes alongside the report.
inline LieTreeResult lie_tree(const LieGeneratingSystem& u, std::optional<std::size_t> cap = std::nullopt,
                              const Tolerance& tol = {}) {
  const std::size_t n = u.n();
  const std::size_t target = n * n - 1;
  LieTreeResult out;
  auto& rep = out.report;
  rep.cap = cap.value_or(target);
  if (rep.cap == 0) throw std::invalid_argument("lie_length: cap must be >= 1");

  // Real coordinate vectors inserted into a complex tracker: for real vectors,
  // linear independence over R and over C coincide.
  SpanTracker tracker(target, tol);
  // scale: norm bound of the bracket from its factors, |[u, w]| <= 2 |u| |w|. A bracket
  // below rank_rel * scale is cancellation noise (e.g. [X, X / |X|]) and counts as zero.
  auto try_keep = [&](CMatrix m, std::vector<std::uint32_t> path, std::vector<LieTreeNode>& layer, double scale) {
    ++rep.nodes_expanded;
    const double nrm = m.norm();
    if (nrm <= tol.rank_rel * scale || tracker.full()) return;
    m /= nrm;
    const CVector coords = su_coords(m, n).cast<cplx>();
    if (tracker.insert(coords) == InsertOutcome::Added) {
      layer.push_back({std::move(m), std::move(path)});
      ++rep.nodes_kept;
    }
  };

  std::vector<LieTreeNode> layer;
  for (std::uint32_t a = 0; a < u.g(); ++a) try_keep(u.elems()[a].mat(), {a}, layer, 0.0);
  out.layers.push_back(layer);
  rep.dims_per_depth.push_back(tracker.size());

  std::size_t depth = 1;
  while (!tracker.full()) {
    if (layer.empty() || depth >= rep.cap) {
      rep.status = LieStatus::NotGenerating;
      return out;
    }
    std::vector<LieTreeNode> next;
    for (const auto& w : layer) {
      for (std::uint32_t a = 0; a < u.g() && !tracker.full(); ++a) {
        std::vector<std::uint32_t> path{a};
        path.insert(path.end(), w.path.begin(), w.path.end());
        try_keep(commutator(u.elems()[a].mat(), w.mat), std::move(path), next, 2.0 * u.elems()[a].mat().norm());
      }
    }
    layer = std::move(next);
    out.layers.push_back(layer);
    ++depth;
    rep.dims_per_depth.push_back(tracker.size());
  }
  rep.status = LieStatus::Found;
  rep.value = depth;
  return out;
}

inline LieLengthReport lie_length(const LieGeneratingSystem& u, std::optional<std::size_t> cap = std::nullopt,
                                  const Tolerance& tol = {}) {
  return lie_tree(u, cap, tol).report;
}

/// Moebius function by trial division.
inline int mobius(std::uint64_t d) {
  if (d == 0) throw std::invalid_argument("mobius: d must be >= 1");
  int sign = 1;
  for (std::uint64_t p = 2; p * p <= d; ++p) {
    if (d % p != 0) continue;
    d /= p;
    if (d % p == 0) return 0;
    sign = -sign;
  }
  if (d > 1) sign = -sign;
  return sign;
}

class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

namespace detail {

inline std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (base != 0 && r > std::numeric_limits<std::uint64_t>::max() / base) {
      throw OverflowError("witt_dimension: " + std::to_string(base) + "^" + std::to_string(exp) +
                          " exceeds 64-bit range");
    }
    r *= base;
  }
  return r;
}

}  // namespace detail

/// Dimension of the degree-k part of the free Lie algebra on g generators.
inline std::uint64_t witt_dimension(std::uint64_t g, std::uint64_t k) {
  if (g == 0 || k == 0) throw std::invalid_argument("witt_dimension: g and k must be >= 1");
  __int128 sum = 0;
  for (std::uint64_t d = 1; d <= k; ++d) {
    if (k % d != 0) continue;
    const int mu = mobius(d);
    if (mu == 0) continue;
    sum += static_cast<__int128>(mu) * static_cast<__int128>(detail::checked_pow(g, k / d));
  }
  if (sum % static_cast<__int128>(k) != 0) throw std::logic_error("witt_dimension: inexact division");
  return static_cast<std::uint64_t>(sum / static_cast<__int128>(k));
}

/// Smallest l with sum_{k<=l} witt_dimension(g, k) >= n^2 - 1.
inline std::size_t witt_lower_bound(std::size_t g, std::size_t n) {
  if (g < 2 || n < 2) throw std::invalid_argument("witt_lower_bound: needs g >= 2 and n >= 2");
  const std::uint64_t target = static_cast<std::uint64_t>(n) * n - 1;
  std::uint64_t cumulative = 0;
  for (std::size_t l = 1;; ++l) {
    cumulative += witt_dimension(g, l);
    if (cumulative >= target) return l;
  }
}

}  // namespace genlen
