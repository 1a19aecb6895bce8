#pragma once

// Dense complex linear algebra shared by every length computation.
//
// Vectorization convention: row-major stacking, vectorize(M)[r * cols + c] = M(r, c).
// All modules (span tracking, transfer matrices, Choi matrices, Gamma maps)
// use this single isomorphism.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace genlen {

using cplx = std::complex<double>;
using CMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Raised when an input violates a documented shape or value contract.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an iterative routine fails or a post-condition check fails.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Explicit thresholds replacing exact arithmetic over C.
struct Tolerance {
  double rank_rel = 1e-9;  // relative residual for accepting a new direction
  double ortho = 1e-10;    // basis orthonormality acceptance
  double eig_rel = 1e-10;  // eigenvalue modulus comparisons

  void validate() const {
    for (double v : {rank_rel, ortho, eig_rel}) {
      if (!(v > 0.0 && v < 1.0)) {
        throw std::invalid_argument("tolerance fields must lie in (0, 1)");
      }
    }
  }
};

inline bool all_finite(const CMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const cplx z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

inline bool all_finite(const CVector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) return false;
  }
  return true;
}

/// Row-major stacking of a matrix into a vector of length rows * cols.
inline CVector vectorize(const CMatrix& m) {
  // CMatrix is row-major, so its storage order is exactly the stacking order.
  return Eigen::Map<const CVector>(m.data(), m.size());
}

/// Inverse of vectorize for a given shape.
inline CMatrix unvectorize(const CVector& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols) {
    throw DimensionError("unvectorize: length " + std::to_string(v.size()) + " does not match " +
                         std::to_string(rows) + "x" + std::to_string(cols));
  }
  CMatrix m(rows, cols);
  std::copy(v.data(), v.data() + v.size(), m.data());
  return m;
}

/// Matrix unit |r><c| (0-based) of size n x n.
inline CMatrix matrix_unit(Eigen::Index n, Eigen::Index r, Eigen::Index c) {
  CMatrix m = CMatrix::Zero(n, n);
  m(r, c) = 1.0;
  return m;
}

enum class InsertOutcome { Added, AlreadyInSpan };

/// Incremental orthonormal basis of a subspace of C^ambient_dim.
///
/// Insertion runs modified Gram-Schmidt twice; a direction is accepted only
/// when the residual after both passes exceeds rank_rel * |v|.
class SpanTracker {
 public:
  explicit SpanTracker(std::size_t ambient_dim, Tolerance tol = {})
      : ambient_dim_(ambient_dim), tol_(tol) {
    if (ambient_dim == 0) throw DimensionError("SpanTracker: ambient dimension must be positive");
    tol_.validate();
  }

  std::size_t ambient_dim() const { return ambient_dim_; }
  std::size_t size() const { return basis_.size(); }
  bool full() const { return basis_.size() == ambient_dim_; }
  const std::vector<CVector>& basis() const { return basis_; }
  const Tolerance& tolerance() const { return tol_; }

  InsertOutcome insert(const CVector& v) {
    if (static_cast<std::size_t>(v.size()) != ambient_dim_) {
      throw DimensionError("span_insert: vector length " + std::to_string(v.size()) +
                           " != ambient dimension " + std::to_string(ambient_dim_));
    }
    if (!all_finite(v)) throw DimensionError("span_insert: non-finite vector");
    const double vnorm = v.norm();
    if (vnorm == 0.0 || full()) return InsertOutcome::AlreadyInSpan;

    CVector r = v / vnorm;
    for (int pass = 0; pass < 2; ++pass) {
      project_out(r);
      if (r.norm() <= tol_.rank_rel) return InsertOutcome::AlreadyInSpan;
    }
    r /= r.norm();
    // A third pass only when the twice-projected direction still leaks into the basis.
    if (max_overlap(r) > tol_.ortho) {
      project_out(r);
      const double rn = r.norm();
      if (rn <= tol_.rank_rel) return InsertOutcome::AlreadyInSpan;
      r /= rn;
    }
    basis_.push_back(std::move(r));
    return InsertOutcome::Added;
  }

  /// Norm of the component of v orthogonal to the current span, relative to |v|.
  double relative_residual(const CVector& v) const {
    const double vnorm = v.norm();
    if (vnorm == 0.0) return 0.0;
    CVector r = v / vnorm;
    project_out(r);
    project_out(r);
    return r.norm();
  }

  /// Largest deviation of the Gram matrix of the basis from the identity.
  double orthonormality_defect() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      for (std::size_t j = i; j < basis_.size(); ++j) {
        const cplx ip = basis_[i].dot(basis_[j]);
        const double target = (i == j) ? 1.0 : 0.0;
        worst = std::max(worst, std::abs(ip - target));
      }
    }
    return worst;
  }

 private:
  void project_out(CVector& r) const {
    for (const auto& q : basis_) r -= q.dot(r) * q;
  }

  double max_overlap(const CVector& r) const {
    double m = 0.0;
    for (const auto& q : basis_) m = std::max(m, std::abs(q.dot(r)));
    return m;
  }

  std::size_t ambient_dim_;
  Tolerance tol_;
  std::vector<CVector> basis_;
};

inline InsertOutcome span_insert(SpanTracker& tracker, const CVector& v) { return tracker.insert(v); }

inline RVector singular_values(const CMatrix& m) {
  if (m.size() == 0) return RVector();
  if (std::min(m.rows(), m.cols()) > 64) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues();
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues();
}

/// Number of singular values above rank_rel times the largest one.
inline std::size_t matrix_rank(const CMatrix& m, const Tolerance& tol = {}) {
  const RVector s = singular_values(m);
  if (s.size() == 0 || s[0] == 0.0) return 0;
  const double cut = tol.rank_rel * s[0];
  return static_cast<std::size_t>((s.array() > cut).count());
}

/// Rank together with the gap to the threshold, so borderline decisions can be reported.
struct RankDiagnostics {
  std::size_t rank = 0;
  double largest = 0.0;
  double smallest_kept = 0.0;     // relative to largest
  double largest_dropped = 0.0;   // relative to largest
  bool borderline = false;        // a singular value sits within a factor 100 of the cut
};

inline RankDiagnostics rank_diagnostics(const CMatrix& m, const Tolerance& tol = {}) {
  RankDiagnostics d;
  const RVector s = singular_values(m);
  if (s.size() == 0 || s[0] == 0.0) return d;
  d.largest = s[0];
  const double cut = tol.rank_rel;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double rel = s[i] / s[0];
    if (rel > cut) {
      ++d.rank;
      d.smallest_kept = rel;
    } else if (d.largest_dropped == 0.0) {
      d.largest_dropped = rel;
    }
  }
  d.borderline = (d.smallest_kept > 0.0 && d.smallest_kept < 100.0 * cut) ||
                 (d.largest_dropped > cut / 100.0);
  return d;
}

struct EigenPair {
  cplx value;
  CVector vector;  // unit 2-norm
};

/// Full eigendecomposition of a square matrix; every pair is residual-checked.
inline std::vector<EigenPair> eig_full(const CMatrix& m, const Tolerance& tol = {}) {
  if (m.rows() != m.cols()) throw DimensionError("eig_full: matrix is not square");
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eig_full: eigensolver did not converge");
  }
  const double mnorm = m.norm();
  std::vector<EigenPair> out;
  out.reserve(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index k = 0; k < m.rows(); ++k) {
    EigenPair p{solver.eigenvalues()[k], solver.eigenvectors().col(k)};
    const double vn = p.vector.norm();
    if (vn > 0.0) p.vector /= vn;
    const double residual = (m * p.vector - p.value * p.vector).norm();
    if (residual > 10.0 * tol.eig_rel * std::max(mnorm, 1.0)) {
      throw NumericalError("eig_full: residual " + std::to_string(residual) + " exceeds bound");
    }
    out.push_back(std::move(p));
  }
  return out;
}

/// Orthonormal basis for the kernel of m (columns), via SVD with the rank threshold.
inline Eigen::MatrixXcd null_space(const CMatrix& m, double rel_cut) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
  const RVector& s = svd.singularValues();
  const double top = s.size() ? s[0] : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > rel_cut * std::max(top, 1.0)) ++rank;
  }
  return svd.matrixV().rightCols(m.cols() - rank);
}

inline double frobenius(const CMatrix& m) { return m.norm(); }

}  // namespace genlen
