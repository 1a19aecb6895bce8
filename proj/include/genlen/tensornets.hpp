#pragma once

// Injectivity of the boundary-to-physical maps Gamma_L for translation
// invariant MPS and 2-D PEPS.
//
// PEPS site tensor layout: entries[((((p * n + u) * n + d) * n + l) * n + r)]
// with physical index p and bond legs up, down, left, right.
//
// The PEPS Gamma_L matrix has one row per physical configuration of the
// L x L patch (sites in row-major order, first site most significant) and one
// column per boundary configuration, ordered as
//   (top edge left->right, bottom edge left->right, left edge top->bottom,
//    right edge top->bottom), top-left leg most significant.
// Bonds inside the patch are contracted; the 4L boundary legs stay open.

#include "genlen/numkernel.hpp"
#include "genlen/random.hpp"
#include "genlen/wordspan.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace genlen {

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Translation-invariant MPS tensor: g matrices of bond dimension n.
struct MpsTensor {
  GeneratingSystem mats;

  std::size_t n() const { return mats.n(); }
  std::size_t g() const { return mats.g(); }
};

namespace detail {

inline std::uint64_t ipow(std::uint64_t base, std::uint64_t exp, std::uint64_t limit) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (r > limit / std::max<std::uint64_t>(base, 1)) return limit + 1;
    r *= base;
  }
  return r;
}

}  // namespace detail

inline constexpr std::uint64_t kMpsRowBudget = std::uint64_t{1} << 20;

/// Matrix of X -> (tr[X A_w])_w for all words w of length L; columns index X = E_ab at a*n + b.
inline CMatrix mps_gamma_matrix(const MpsTensor& t, std::size_t length) {
  if (length == 0) throw std::invalid_argument("mps_gamma_matrix: L must be >= 1");
  const std::uint64_t rows = detail::ipow(t.g(), length, kMpsRowBudget);
  if (rows > kMpsRowBudget) {
    throw BudgetExceeded("mps_gamma_matrix: g^L = " + std::to_string(t.g()) + "^" + std::to_string(length) +
                         " exceeds 2^20 rows");
  }
  const auto n = static_cast<Eigen::Index>(t.n());
  CMatrix gamma(static_cast<Eigen::Index>(rows), n * n);
  // Depth-first over prefixes; leaves arrive in lexicographic order.
  std::vector<CMatrix> prefix(length + 1);
  prefix[0] = CMatrix::Identity(n, n);
  std::vector<std::size_t> digits(length, 0);
  Eigen::Index row = 0;
  std::size_t depth = 0;
  while (true) {
    while (depth < length) {
      prefix[depth + 1] = prefix[depth] * t.mats[digits[depth]];
      ++depth;
    }
    // tr[E_ab W] = W(b, a)
    const CMatrix& w = prefix[length];
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = 0; b < n; ++b) gamma(row, a * n + b) = w(b, a);
    ++row;
    // Increment the word like an odometer.
    std::size_t pos = length;
    while (pos > 0 && digits[pos - 1] + 1 == t.g()) {
      digits[pos - 1] = 0;
      --pos;
    }
    if (pos == 0) break;
    ++digits[pos - 1];
    depth = pos - 1;
  }
  return gamma;
}

struct MpsInjectivity {
  LengthReport wie;                                       // index = wie.value when finite
  std::vector<std::pair<std::size_t, std::size_t>> gamma_ranks;  // (L, rank of Gamma_L)
  bool consistent = true;  // rank n^2 exactly for L >= index among the checked L

  bool never_injective() const { return !wie.finite(); }
};

/// Injectivity index of an MPS (the Wie-length of its matrices), cross-checked against
/// explicit Gamma_L ranks for L in {index-1, index, index+1} that fit the row budget.
inline MpsInjectivity mps_injectivity_index(const MpsTensor& t, const Tolerance& tol = {}) {
  MpsInjectivity out;
  out.wie = wie_length(t.mats, std::nullopt, tol);
  const std::size_t n2 = t.n() * t.n();
  std::vector<std::size_t> probe;
  if (out.wie.finite()) {
    const std::size_t k = out.wie.value;
    if (k > 1) probe.push_back(k - 1);
    probe.push_back(k);
    probe.push_back(k + 1);
  } else {
    probe = {1, 2};
  }
  for (std::size_t len : probe) {
    if (detail::ipow(t.g(), len, kMpsRowBudget) > kMpsRowBudget) continue;
    const std::size_t r = matrix_rank(mps_gamma_matrix(t, len), tol);
    out.gamma_ranks.emplace_back(len, r);
    const bool injective = (r == n2);
    const bool expected = out.wie.finite() && len >= out.wie.value;
    if (injective != expected) out.consistent = false;
  }
  return out;
}

class PepsTensor {
 public:
  PepsTensor(std::size_t n, std::size_t g, std::vector<cplx> entries) : n_(n), g_(g), entries_(std::move(entries)) {
    if (n == 0 || g == 0) throw DimensionError("PepsTensor: n and g must be positive");
    if (entries_.size() != g * n * n * n * n) {
      throw DimensionError("PepsTensor: expected g*n^4 = " + std::to_string(g * n * n * n * n) + " entries, got " +
                           std::to_string(entries_.size()));
    }
  }

  std::size_t n() const { return n_; }
  std::size_t g() const { return g_; }
  const std::vector<cplx>& entries() const { return entries_; }

  cplx operator()(std::size_t p, std::size_t u, std::size_t d, std::size_t l, std::size_t r) const {
    return entries_[index(p, u, d, l, r)];
  }
  std::size_t index(std::size_t p, std::size_t u, std::size_t d, std::size_t l, std::size_t r) const {
    return (((p * n_ + u) * n_ + d) * n_ + l) * n_ + r;
  }

  /// String-bond factors (vertical, horizontal) of the leading physical levels.
  const std::vector<std::pair<CMatrix, CMatrix>>& factorized() const { return factors_; }
  void set_factorized(std::vector<std::pair<CMatrix, CMatrix>> f) { factors_ = std::move(f); }

  /// Largest entrywise deviation between the entries and the reassembled factors.
  double factorization_defect() const {
    double worst = 0.0;
    for (std::size_t k = 0; k < factors_.size(); ++k) {
      const auto& [v, h] = factors_[k];
      for (std::size_t u = 0; u < n_; ++u)
        for (std::size_t d = 0; d < n_; ++d)
          for (std::size_t l = 0; l < n_; ++l)
            for (std::size_t r = 0; r < n_; ++r) {
              const cplx want = v(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(d)) *
                                h(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(r));
              worst = std::max(worst, std::abs(want - (*this)(k, u, d, l, r)));
            }
    }
    return worst;
  }

 private:
  std::size_t n_;
  std::size_t g_;
  std::vector<cplx> entries_;
  std::vector<std::pair<CMatrix, CMatrix>> factors_;
};

/// String-bond tensor A_k = B_i (x) Bt_j with the bijection k = i * d + j (0-based).
inline PepsTensor string_bond_tensor(std::size_t n, std::size_t d, const GeneratingSystem& b,
                                     const GeneratingSystem& bt) {
  if (b.g() != d || bt.g() != d) throw DimensionError("string_bond_tensor: seeds must each hold d matrices");
  if (b.n() != n || bt.n() != n) throw DimensionError("string_bond_tensor: seed matrices must be n x n");
  const std::size_t g = d * d;
  std::vector<cplx> entries(g * n * n * n * n);
  std::vector<std::pair<CMatrix, CMatrix>> factors;
  factors.reserve(g);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const std::size_t k = i * d + j;
      factors.emplace_back(b[i], bt[j]);
      for (std::size_t u = 0; u < n; ++u)
        for (std::size_t dn = 0; dn < n; ++dn)
          for (std::size_t l = 0; l < n; ++l)
            for (std::size_t r = 0; r < n; ++r) {
              entries[(((k * n + u) * n + dn) * n + l) * n + r] =
                  b[i](static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(dn)) *
                  bt[j](static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(r));
            }
    }
  }
  PepsTensor t(n, g, std::move(entries));
  t.set_factorized(std::move(factors));
  return t;
}

/// Appends independent standard complex Gaussian physical levels up to g in total.
inline PepsTensor extend_physical(const PepsTensor& t, std::size_t g, RngSpec spec) {
  if (g < t.g()) throw DimensionError("extend_physical: cannot shrink the physical dimension");
  const std::size_t n = t.n();
  std::vector<cplx> entries = t.entries();
  Rng rng(spec);
  entries.reserve(g * n * n * n * n);
  for (std::size_t i = t.g() * n * n * n * n; i < g * n * n * n * n; ++i) entries.push_back(rng.complex_normal());
  PepsTensor out(n, g, std::move(entries));
  out.set_factorized(t.factorized());
  return out;
}

/// Simultaneous gauge on the bond legs: vertical A^v -> P A^v P^{-1}, horizontal A^h -> Q A^h Q^{-1}.
inline PepsTensor gauge_transform(const PepsTensor& t, const CMatrix& p, const CMatrix& q) {
  const std::size_t n = t.n();
  const auto N = static_cast<Eigen::Index>(n);
  if (p.rows() != N || q.rows() != N) throw DimensionError("gauge_transform: gauge size mismatch");
  const CMatrix p_inv = p.inverse();
  const CMatrix q_inv = q.inverse();
  std::vector<cplx> out(t.entries().size());
  for (std::size_t k = 0; k < t.g(); ++k) {
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t d = 0; d < n; ++d)
        for (std::size_t l = 0; l < n; ++l)
          for (std::size_t r = 0; r < n; ++r) {
            cplx acc = 0.0;
            for (std::size_t u2 = 0; u2 < n; ++u2)
              for (std::size_t d2 = 0; d2 < n; ++d2)
                for (std::size_t l2 = 0; l2 < n; ++l2)
                  for (std::size_t r2 = 0; r2 < n; ++r2) {
                    acc += p(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(u2)) *
                           p_inv(static_cast<Eigen::Index>(d2), static_cast<Eigen::Index>(d)) *
                           q(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(l2)) *
                           q_inv(static_cast<Eigen::Index>(r2), static_cast<Eigen::Index>(r)) *
                           t(k, u2, d2, l2, r2);
                  }
            out[t.index(k, u, d, l, r)] = acc;
          }
  }
  return PepsTensor(n, t.g(), std::move(out));
}

inline constexpr std::uint64_t kPepsColumnBudget = std::uint64_t{1} << 10;
inline constexpr std::uint64_t kPepsRowBudget = std::uint64_t{1} << 20;
inline constexpr std::uint64_t kPepsEntryBudget = std::uint64_t{1} << 24;

struct PepsShape {
  std::uint64_t rows = 0;  // g^{L^2}
  std::uint64_t cols = 0;  // n^{4L}
};

inline PepsShape peps_shape(std::size_t n, std::size_t g, std::size_t length) {
  constexpr std::uint64_t big = std::uint64_t{1} << 40;
  return {detail::ipow(g, length * length, big), detail::ipow(n, 4 * length, big)};
}

inline void check_peps_budget(std::size_t n, std::size_t g, std::size_t length) {
  if (length == 0) throw std::invalid_argument("peps: L must be >= 1");
  const PepsShape s = peps_shape(n, g, length);
  if (s.cols > kPepsColumnBudget || s.rows > kPepsRowBudget || s.rows * s.cols > kPepsEntryBudget) {
    throw BudgetExceeded("peps_gamma_matrix: " + std::to_string(s.rows) + " x " + std::to_string(s.cols) +
                         " exceeds the desk-scale budget (n^{4L} <= 2^10, g^{L^2} <= 2^20, entries <= 2^24)");
  }
}

namespace detail {

// Row object for one row of L sites: R[u][d][l][r], u and d are L-digit base-n strings.
inline std::vector<cplx> contract_row(const PepsTensor& t, const std::vector<std::size_t>& phys) {
  const std::size_t n = t.n();
  std::size_t ud = 1;  // n^c after c sites
  std::vector<cplx> cur;
  for (std::size_t c = 0; c < phys.size(); ++c) {
    const std::size_t p = phys[c];
    if (c == 0) {
      cur.assign(n * n * n * n, 0.0);
      for (std::size_t u = 0; u < n; ++u)
        for (std::size_t d = 0; d < n; ++d)
          for (std::size_t l = 0; l < n; ++l)
            for (std::size_t r = 0; r < n; ++r) cur[((u * n + d) * n + l) * n + r] = t(p, u, d, l, r);
      ud = n;
      continue;
    }
    const std::size_t ud2 = ud * n;
    std::vector<cplx> next(ud2 * ud2 * n * n, 0.0);
    for (std::size_t u = 0; u < ud; ++u)
      for (std::size_t d = 0; d < ud; ++d)
        for (std::size_t l = 0; l < n; ++l)
          for (std::size_t m = 0; m < n; ++m) {
            const cplx left = cur[((u * ud + d) * n + l) * n + m];
            if (left == cplx(0.0)) continue;
            for (std::size_t un = 0; un < n; ++un)
              for (std::size_t dn = 0; dn < n; ++dn)
                for (std::size_t r = 0; r < n; ++r) {
                  next[(((u * n + un) * ud2 + (d * n + dn)) * n + l) * n + r] += left * t(p, un, dn, m, r);
                }
          }
    cur = std::move(next);
    ud = ud2;
  }
  return cur;
}

}  // namespace detail

/// Exact contraction of the L x L patch for every physical configuration.
inline CMatrix peps_gamma_matrix(const PepsTensor& t, std::size_t length) {
  check_peps_budget(t.n(), t.g(), length);
  const std::size_t n = t.n();
  const std::size_t g = t.g();
  const PepsShape shape = peps_shape(n, g, length);
  const std::size_t edge = static_cast<std::size_t>(detail::ipow(n, length, kPepsColumnBudget));  // n^L
  const std::size_t row_configs = static_cast<std::size_t>(detail::ipow(g, length, kPepsRowBudget));

  std::vector<std::vector<cplx>> rows(row_configs);
  for (std::size_t rc = 0; rc < row_configs; ++rc) {
    std::vector<std::size_t> phys(length);
    std::size_t x = rc;
    for (std::size_t c = length; c-- > 0;) {
      phys[c] = x % g;
      x /= g;
    }
    rows[rc] = detail::contract_row(t, phys);
  }

  CMatrix gamma(static_cast<Eigen::Index>(shape.rows), static_cast<Eigen::Index>(shape.cols));
  std::vector<std::size_t> row_digits(length, 0);  // row-config index of each patch row
  for (std::uint64_t cfg = 0; cfg < shape.rows; ++cfg) {
    std::uint64_t x = cfg;
    for (std::size_t r = length; r-- > 0;) {
      row_digits[r] = static_cast<std::size_t>(x % row_configs);
      x /= row_configs;
    }
    // acc[top][bottom][lefts][rights], lefts/rights grow by one digit per stacked row.
    std::vector<cplx> acc = rows[row_digits[0]];
    std::size_t side = n;  // n^{rows stacked}
    for (std::size_t r = 1; r < length; ++r) {
      const std::vector<cplx>& row = rows[row_digits[r]];
      const std::size_t side2 = side * n;
      std::vector<cplx> next(edge * edge * side2 * side2, 0.0);
      for (std::size_t top = 0; top < edge; ++top)
        for (std::size_t mid = 0; mid < edge; ++mid)
          for (std::size_t lf = 0; lf < side; ++lf)
            for (std::size_t rt = 0; rt < side; ++rt) {
              const cplx a = acc[((top * edge + mid) * side + lf) * side + rt];
              if (a == cplx(0.0)) continue;
              for (std::size_t bot = 0; bot < edge; ++bot)
                for (std::size_t l = 0; l < n; ++l)
                  for (std::size_t rr = 0; rr < n; ++rr) {
                    next[((top * edge + bot) * side2 + (lf * n + l)) * side2 + (rt * n + rr)] +=
                        a * row[((mid * edge + bot) * n + l) * n + rr];
                  }
            }
      acc = std::move(next);
      side = side2;
    }
    for (std::size_t c = 0; c < acc.size(); ++c) {
      gamma(static_cast<Eigen::Index>(cfg), static_cast<Eigen::Index>(c)) = acc[c];
    }
  }
  return gamma;
}

struct InjectivityReport {
  bool injective = false;
  std::size_t gamma_rank = 0;
  std::size_t full_rank_target = 0;
  std::size_t region_side = 0;
  bool excluded_by_counting = false;  // g^{L^2} < n^{4L}
};

inline InjectivityReport peps_injective(const PepsTensor& t, std::size_t length, const Tolerance& tol = {}) {
  InjectivityReport rep;
  const PepsShape shape = peps_shape(t.n(), t.g(), length);
  rep.region_side = length;
  rep.full_rank_target = static_cast<std::size_t>(shape.cols);
  rep.excluded_by_counting = shape.rows < shape.cols;
  rep.gamma_rank = matrix_rank(peps_gamma_matrix(t, length), tol);
  rep.injective = rep.gamma_rank == rep.full_rank_target;
  return rep;
}

/// Largest b with b^m <= g.
inline std::size_t integer_root(std::size_t g, std::size_t m) {
  std::size_t b = 1;
  while (detail::ipow(b + 1, m, g) <= g) ++b;
  return b;
}

/// 2 ceil(log_{floor(g^{1/m})} n): generic injectivity index bound on m-dimensional grids.
inline std::size_t generic_injectivity_bound(std::size_t n, std::size_t g, std::size_t m) {
  if (m == 0) throw std::invalid_argument("generic_injectivity_bound: m must be >= 1");
  if (n < 2) throw std::invalid_argument("generic_injectivity_bound: n must be >= 2");
  const std::size_t base = integer_root(g, m);
  if (base < 2) throw std::invalid_argument("generic_injectivity_bound: g must be >= 2^m");
  return 2 * ceil_log(base, n);
}

/// Smallest L with g^{L^2} >= n^{4L} (rows can reach the column count).
inline std::size_t peps_counting_lower_bound(std::size_t n, std::size_t g) {
  for (std::size_t len = 1;; ++len) {
    const PepsShape s = peps_shape(n, g, len);
    if (s.rows >= s.cols) return len;
    if (len > 64) throw std::invalid_argument("peps_counting_lower_bound: no L found");
  }
}

}  // namespace genlen
