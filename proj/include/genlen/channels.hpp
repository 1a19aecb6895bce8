#pragma once

// Quantum channels in Kraus form, E(X) = sum_i A_i X A_i^dagger.
//
// Transfer matrix convention: T vectorize(X) = vectorize(E(X)) with the
// row-major vectorization of numkernel.hpp, so T = sum_i A_i (x) conj(A_i).
// The Hilbert-Schmidt adjoint E* has transfer matrix T^dagger.

#include "genlen/numkernel.hpp"
#include "genlen/random.hpp"
#include "genlen/wordspan.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace genlen {

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

class KrausChannel {
 public:
  static constexpr double kTpTolerance = 1e-8;

  explicit KrausChannel(std::vector<CMatrix> kraus) : ops_(std::move(kraus)) {
    const std::size_t n = ops_.n();
    CMatrix sum = CMatrix::Zero(n, n);
    for (const auto& a : ops_.mats()) sum += a.adjoint() * a;
    tp_residual_ = (sum - CMatrix::Identity(n, n)).norm();
    if (!(tp_residual_ <= kTpTolerance)) {
      throw std::invalid_argument("KrausChannel: not trace preserving, residual " + std::to_string(tp_residual_));
    }
  }

  /// Rescales sum A_i^dagger A_i to the identity: A_i -> A_i S^{-1/2}.
  static KrausChannel normalized(std::vector<CMatrix> kraus) {
    if (kraus.empty()) throw DimensionError("KrausChannel: needs at least one operator");
    const auto n = kraus.front().rows();
    CMatrix sum = CMatrix::Zero(n, n);
    for (const auto& a : kraus) sum += a.adjoint() * a;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sum);
    if (es.eigenvalues().minCoeff() <= 0.0) {
      throw std::invalid_argument("KrausChannel::normalized: sum of A^dagger A is singular");
    }
    const Eigen::MatrixXcd inv_sqrt = es.operatorInverseSqrt();
    for (auto& a : kraus) a = a * inv_sqrt;
    return KrausChannel(std::move(kraus));
  }

  std::size_t n() const { return ops_.n(); }
  std::size_t g() const { return ops_.g(); }
  const std::vector<CMatrix>& kraus() const { return ops_.mats(); }
  const GeneratingSystem& as_system() const { return ops_; }
  double tp_residual() const { return tp_residual_; }

 private:
  GeneratingSystem ops_;
  double tp_residual_ = 0.0;
};

inline CMatrix apply_channel(const KrausChannel& e, const CMatrix& x) {
  const auto n = static_cast<Eigen::Index>(e.n());
  if (x.rows() != n || x.cols() != n) throw DimensionError("apply_channel: input is not n x n");
  CMatrix out = CMatrix::Zero(n, n);
  for (const auto& a : e.kraus()) out += a * x * a.adjoint();
  return out;
}

inline CMatrix transfer_matrix(const KrausChannel& e) {
  const auto n2 = static_cast<Eigen::Index>(e.n() * e.n());
  CMatrix t = CMatrix::Zero(n2, n2);
  for (const auto& a : e.kraus()) t += kron(a, a.conjugate());
  return t;
}

/// Choi matrix sum_{ij} |i><j| (x) T(|i><j|) recovered from a transfer matrix.
inline CMatrix choi_from_transfer(const CMatrix& t, std::size_t n) {
  const auto N = static_cast<Eigen::Index>(n);
  if (t.rows() != N * N || t.cols() != N * N) throw DimensionError("choi_from_transfer: wrong shape");
  CMatrix c(N * N, N * N);
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index a = 0; a < N; ++a)
      for (Eigen::Index j = 0; j < N; ++j)
        for (Eigen::Index b = 0; b < N; ++b) c(i * N + a, j * N + b) = t(a * N + b, i * N + j);
  return c;
}

/// (id (x) E)(Omega), Omega = sum_{ij} |ii><jj| (unnormalized).
inline CMatrix choi(const KrausChannel& e) { return choi_from_transfer(transfer_matrix(e), e.n()); }

inline std::size_t kraus_rank(const KrausChannel& e, const Tolerance& tol = {}) {
  return matrix_rank(choi(e), tol);
}

/// Kraus rank of E^m, composing transfer matrices.
inline std::size_t kraus_rank_of_power(const KrausChannel& e, std::size_t m, const Tolerance& tol = {}) {
  if (m == 0) throw std::invalid_argument("kraus_rank_of_power: m must be >= 1");
  const CMatrix t = transfer_matrix(e);
  CMatrix p = t;
  for (std::size_t i = 1; i < m; ++i) p = p * t;
  return matrix_rank(choi_from_transfer(p, e.n()), tol);
}

/// Index of eventual full Kraus rank, i.e. the Wie-length of the Kraus tuple.
/// status NotGenerating means the channel is not primitive.
inline LengthReport full_kraus_rank_index(const KrausChannel& e, const Tolerance& tol = {}) {
  return wie_length(e.as_system(), std::nullopt, tol);
}

struct FixedPoint {
  CMatrix state;          // Hermitian, unit trace
  std::size_t rank = 0;   // eigenvalues above 1e-8 relative to the largest
  double min_eigenvalue = 0.0;
};

namespace detail {

inline CMatrix hermitize_unit_trace(CMatrix m) {
  const cplx tr = m.trace();
  if (std::abs(tr) > 0.0) m /= tr;
  return (m + m.adjoint()) / 2.0;
}

inline FixedPoint describe_fixed_point(CMatrix rho) {
  FixedPoint fp;
  fp.state = hermitize_unit_trace(std::move(rho));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(fp.state);
  const RVector ev = es.eigenvalues();
  const double top = std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
  fp.min_eigenvalue = ev.minCoeff();
  fp.rank = static_cast<std::size_t>((ev.array() > 1e-8 * top).count());
  return fp;
}

}  // namespace detail

/// Fixed point of maximal support: the spectral projection of I/n onto ker(T - 1).
///
/// The eigenvalue 1 of a channel is semisimple, so C^{n^2} = ker(T-1) (+) range(T-1);
/// decomposing vec(I/n) along that sum picks the fixed state with the largest support.
inline FixedPoint maximal_fixed_point(const KrausChannel& e, const Tolerance& tol = {}) {
  const auto n = static_cast<Eigen::Index>(e.n());
  const CMatrix shifted = transfer_matrix(e) - CMatrix::Identity(n * n, n * n);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(shifted, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RVector& s = svd.singularValues();
  const double cut = 10.0 * tol.eig_rel * std::max(1.0, s.size() ? s[0] : 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) rank += (s[i] > cut) ? 1 : 0;
  const Eigen::Index kdim = n * n - rank;
  if (kdim == 0) throw NumericalError("maximal_fixed_point: transfer matrix has no eigenvalue 1");

  Eigen::MatrixXcd split(n * n, n * n);
  split.leftCols(kdim) = svd.matrixV().rightCols(kdim);
  split.rightCols(rank) = svd.matrixU().leftCols(rank);
  const CVector target = vectorize(CMatrix::Identity(n, n) / static_cast<double>(n));
  const CVector coeffs = split.colPivHouseholderQr().solve(target);
  const CVector fixed = split.leftCols(kdim) * coeffs.head(kdim);
  return detail::describe_fixed_point(unvectorize(fixed, n, n));
}

struct PeripheralSpectrum {
  std::size_t modulus_one_count = 0;
  std::optional<cplx> eigenvalue;        // set when exactly one eigenvalue has modulus 1
  std::optional<FixedPoint> eigenvector; // its reshaped, Hermitized eigenvector
};

inline PeripheralSpectrum peripheral_spectrum(const KrausChannel& e, const Tolerance& tol = {}) {
  const auto n = static_cast<Eigen::Index>(e.n());
  const auto pairs = eig_full(transfer_matrix(e), tol);
  PeripheralSpectrum ps;
  const EigenPair* unique = nullptr;
  for (const auto& p : pairs) {
    if (std::abs(std::abs(p.value) - 1.0) <= 10.0 * tol.eig_rel) {
      ++ps.modulus_one_count;
      unique = &p;
    }
  }
  if (ps.modulus_one_count == 1) {
    ps.eigenvalue = unique->value;
    ps.eigenvector = detail::describe_fixed_point(unvectorize(unique->vector, n, n));
  }
  return ps;
}

/// Unique, simple eigenvalue of modulus one with a positive definite eigenvector.
inline bool strong_irreducibility(const KrausChannel& e, const Tolerance& tol = {}) {
  const auto ps = peripheral_spectrum(e, tol);
  if (ps.modulus_one_count != 1) return false;
  return ps.eigenvector->min_eigenvalue > 1e-8;
}

struct PositivityWitness {
  CVector phi;
  CVector psi;
  std::size_t level = 0;
  double residual = 0.0;  // <psi| E^level(|phi><phi|) |psi>
};

struct PrimitivityBounds {
  std::size_t upper = 0;            // i(A) >= q(E)
  std::size_t certified_lower = 0;  // q(E) >= certified_lower
  std::optional<PositivityWitness> witness;
};

namespace detail {

inline CVector min_eigenvector(const CMatrix& h, double* value) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es((h + h.adjoint()) / 2.0);
  *value = es.eigenvalues()[0];
  return es.eigenvectors().col(0);
}

inline CVector random_unit(Rng& rng, Eigen::Index n) {
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.complex_normal();
  return v / v.norm();
}

}  // namespace detail

/// Alternating minimization of sum_{|w| = level} |<psi|A_w phi>|^2 over unit vectors.
///
/// The sum equals <psi| E^level(|phi><phi|) |psi>, so each half-step is a smallest
/// eigenvector of E^level(|phi><phi|) or of E*^level(|psi><psi|). Returns the best
/// pair found; it is a witness of non-positivity when its residual is below 1e-10.
inline PositivityWitness search_positivity_witness(const KrausChannel& e, std::size_t level, std::size_t iters,
                                                   RngSpec spec, std::size_t restarts = 20) {
  if (level == 0) throw std::invalid_argument("search_positivity_witness: level must be >= 1");
  const auto n = static_cast<Eigen::Index>(e.n());
  const CMatrix t = transfer_matrix(e);
  CMatrix p = t;
  for (std::size_t i = 1; i < level; ++i) p = p * t;
  const CMatrix p_adj = p.adjoint();

  PositivityWitness best;
  best.level = level;
  best.residual = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < restarts; ++r) {
    Rng rng(spec.substream(r));
    CVector phi = detail::random_unit(rng, n);
    CVector psi = phi;
    double value = std::numeric_limits<double>::infinity();
    for (std::size_t it = 0; it < std::max<std::size_t>(iters, 1); ++it) {
      const CMatrix out = unvectorize(p * vectorize(phi * phi.adjoint()), n, n);
      psi = detail::min_eigenvector(out, &value);
      if (value < 1e-10) break;
      const CMatrix back = unvectorize(p_adj * vectorize(psi * psi.adjoint()), n, n);
      phi = detail::min_eigenvector(back, &value);
      if (value < 1e-10) break;
    }
    const CMatrix out = unvectorize(p * vectorize(phi * phi.adjoint()), n, n);
    const double residual = std::max(0.0, (psi.adjoint() * out * psi)(0, 0).real());
    if (residual < best.residual) {
      best.phi = phi;
      best.psi = psi;
      best.residual = residual;
    }
    if (best.residual < 1e-10) break;
  }
  return best;
}

/// Bounds on the primitivity index q(E): certified_lower <= q(E) <= i(A) = upper.
inline PrimitivityBounds primitivity_bounds(const KrausChannel& e, std::size_t heuristic_iters,
                                            RngSpec spec = {}, const Tolerance& tol = {}) {
  const LengthReport idx = full_kraus_rank_index(e, tol);
  if (!idx.finite()) throw NotGeneratingError("primitivity_bounds: channel is not primitive");
  PrimitivityBounds b;
  b.upper = idx.value;
  b.certified_lower = b.upper;
  for (std::size_t level = 1; level < b.upper; ++level) {
    auto w = search_positivity_witness(e, level, heuristic_iters, spec.substream(level));
    if (w.residual >= 1e-10) {
      b.certified_lower = level;
      return b;
    }
    b.witness = std::move(w);
  }
  return b;
}

enum class Dichotomy { CapacityAtLeastOne, CapacityZeroAtIndex, Inapplicable };

inline const char* to_string(Dichotomy d) {
  switch (d) {
    case Dichotomy::CapacityAtLeastOne: return "capacity-at-least-one";
    case Dichotomy::CapacityZeroAtIndex: return "capacity-zero-at-index";
    case Dichotomy::Inapplicable: return "inapplicable";
  }
  return "?";
}

struct DichotomyResult {
  Dichotomy kind = Dichotomy::Inapplicable;
  std::optional<std::size_t> q_upper;  // block length with zero one-shot capacity
  std::size_t fixed_point_rank = 0;
};

/// Zero-error capacity dichotomy for channels with a full-rank fixed point.
inline DichotomyResult zero_error_dichotomy(const KrausChannel& e, const Tolerance& tol = {}) {
  DichotomyResult r;
  r.fixed_point_rank = maximal_fixed_point(e, tol).rank;
  if (r.fixed_point_rank < e.n()) return r;
  const LengthReport idx = full_kraus_rank_index(e, tol);
  if (idx.finite()) {
    r.kind = Dichotomy::CapacityZeroAtIndex;
    r.q_upper = idx.value;
  } else {
    r.kind = Dichotomy::CapacityAtLeastOne;
  }
  return r;
}

struct ChannelReport {
  std::optional<std::size_t> kraus_rank_index;  // nullopt: not primitive
  std::optional<std::size_t> wie_len;
  bool strongly_irreducible = false;
  std::size_t fixed_point_rank = 0;
  DichotomyResult dichotomy;
  std::size_t kraus_rank = 0;
};

inline ChannelReport analyze_channel(const KrausChannel& e, const Tolerance& tol = {}) {
  ChannelReport rep;
  rep.kraus_rank_index = full_kraus_rank_index(e, tol).maybe();
  rep.wie_len = wie_length(e.as_system(), std::nullopt, tol).maybe();
  rep.strongly_irreducible = strong_irreducibility(e, tol);
  rep.dichotomy = zero_error_dichotomy(e, tol);
  rep.fixed_point_rank = rep.dichotomy.fixed_point_rank;
  rep.kraus_rank = kraus_rank(e, tol);
  return rep;
}

}  // namespace genlen
