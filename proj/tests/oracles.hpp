#pragma once

// Reference computations for the test suite. None of these reuse SpanTracker,
// the exact-length chain or the Lie-Tree: spans are rebuilt from scratch at
// every length and ranks come straight from an Eigen SVD or LU.

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstdint>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;  // column-major on purpose: independent of the library layout

inline std::size_t svd_rank(const Mat& m, double rel = 1e-9) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) r += (s[i] > rel * s[0]) ? 1 : 0;
  return r;
}

/// Rank of the vectorized (column-major), individually normalized matrices.
inline std::size_t span_dim(const std::vector<Mat>& mats) {
  if (mats.empty()) return 0;
  const auto n2 = mats.front().size();
  Mat stack(n2, static_cast<Eigen::Index>(mats.size()));
  for (std::size_t j = 0; j < mats.size(); ++j) {
    Mat m = mats[j];
    const double nrm = m.norm();
    if (nrm > 0.0) m /= nrm;
    stack.col(static_cast<Eigen::Index>(j)) = Eigen::Map<const Eigen::VectorXcd>(m.data(), n2);
  }
  return svd_rank(stack);
}

/// Every word of length exactly k, as a matrix product, enumerated as base-g digits.
inline std::vector<Mat> all_words(const std::vector<Mat>& s, std::size_t k) {
  const std::size_t g = s.size();
  const auto n = s.front().rows();
  std::size_t count = 1;
  for (std::size_t i = 0; i < k; ++i) count *= g;
  std::vector<Mat> out;
  out.reserve(count);
  for (std::size_t code = 0; code < count; ++code) {
    Mat m = Mat::Identity(n, n);
    std::size_t c = code;
    for (std::size_t i = 0; i < k; ++i) {
      m = m * s[c % g];
      c /= g;
    }
    out.push_back(m);
  }
  return out;
}

/// Smallest k <= kmax with span{words of length k} = M_n.
inline std::optional<std::size_t> brute_wie_length(const std::vector<Mat>& s, std::size_t kmax) {
  const auto n2 = static_cast<std::size_t>(s.front().size());
  for (std::size_t k = 1; k <= kmax; ++k) {
    if (span_dim(all_words(s, k)) == n2) return k;
  }
  return std::nullopt;
}

/// Smallest l <= lmax with span{words of length <= l} = M_n (empty word included).
inline std::optional<std::size_t> brute_length(const std::vector<Mat>& s, std::size_t lmax) {
  const auto n2 = static_cast<std::size_t>(s.front().size());
  std::vector<Mat> words{Mat::Identity(s.front().rows(), s.front().rows())};
  if (n2 == 1) return 1;
  for (std::size_t l = 1; l <= lmax; ++l) {
    for (auto& w : all_words(s, l)) words.push_back(std::move(w));
    if (span_dim(words) == n2) return l;
  }
  return std::nullopt;
}

using IntMat = std::vector<long long>;  // row-major n x n

inline IntMat int_mul(const IntMat& a, const IntMat& b, std::size_t n) {
  IntMat c(n * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      if (a[i * n + k] != 0)
        for (std::size_t j = 0; j < n; ++j) c[i * n + j] += a[i * n + k] * b[k * n + j];
  return c;
}

/// Exact dimension of span{words of length k} for integer generators: the set of
/// distinct word matrices at each length is kept exactly, and its rank is taken
/// from scratch with full-pivot LU (entries are small integers).
inline std::vector<std::size_t> exact_word_dims(const std::vector<IntMat>& s, std::size_t n, std::size_t kmax) {
  std::vector<std::size_t> dims;
  std::set<IntMat> words(s.begin(), s.end());
  for (std::size_t k = 1; k <= kmax; ++k) {
    if (k > 1) {
      std::set<IntMat> next;
      for (const auto& a : s)
        for (const auto& w : words) next.insert(int_mul(a, w, n));
      words = std::move(next);
    }
    Eigen::MatrixXd stack(static_cast<Eigen::Index>(n * n), static_cast<Eigen::Index>(words.size()));
    Eigen::Index j = 0;
    for (const auto& w : words) {
      for (std::size_t e = 0; e < n * n; ++e) stack(static_cast<Eigen::Index>(e), j) = static_cast<double>(w[e]);
      ++j;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(stack);
    dims.push_back(static_cast<std::size_t>(lu.rank()));
  }
  return dims;
}

/// The cyclic shift / rank-one pair built independently: A|i> = |i+1 mod n>, B = |2><n|.
inline std::vector<IntMat> shift_pair(std::size_t n) {
  IntMat a(n * n, 0), b(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) a[((i + 1) % n) * n + i] = 1;
  b[1 * n + (n - 1)] = 1;
  return {a, b};
}

inline std::optional<std::size_t> exact_wie_length(const std::vector<IntMat>& s, std::size_t n, std::size_t kmax) {
  const auto dims = exact_word_dims(s, n, kmax);
  for (std::size_t k = 0; k < dims.size(); ++k)
    if (dims[k] == n * n) return k + 1;
  return std::nullopt;
}

/// Lyndon words over g letters by length, up to kmax, via Duval's generation algorithm.
inline std::vector<std::uint64_t> lyndon_counts(std::size_t g, std::size_t kmax) {
  std::vector<std::uint64_t> counts(kmax + 1, 0);
  std::vector<std::size_t> w{0};
  while (!w.empty()) {
    counts[w.size()] += 1;
    const std::size_t m = w.size();
    while (w.size() < kmax) w.push_back(w[w.size() - m]);
    while (!w.empty() && w.back() == g - 1) w.pop_back();
    if (!w.empty()) ++w.back();
  }
  return counts;
}

/// Moebius function as the sum of primitive d-th roots of unity.
inline int mobius_by_roots(std::uint64_t d) {
  cplx sum = 0.0;
  for (std::uint64_t k = 1; k <= d; ++k) {
    if (std::gcd(k, d) != 1) continue;
    const double t = 2.0 * 3.14159265358979323846 * static_cast<double>(k) / static_cast<double>(d);
    sum += cplx(std::cos(t), std::sin(t));
  }
  return static_cast<int>(std::lround(sum.real()));
}

/// Real dimension of span{right-nested brackets of depth <= depth}, no pruning.
/// Coordinates are the real and imaginary parts of all entries.
inline std::size_t bracket_span_dim(const std::vector<Mat>& u, std::size_t depth) {
  std::vector<Mat> all, layer = u;
  for (std::size_t d = 1; d <= depth; ++d) {
    all.insert(all.end(), layer.begin(), layer.end());
    if (d == depth) break;
    std::vector<Mat> next;
    for (const auto& a : u)
      for (const auto& w : layer) next.push_back(a * w - w * a);
    layer = std::move(next);
  }
  const auto n2 = all.front().size();
  Eigen::MatrixXd stack(2 * n2, static_cast<Eigen::Index>(all.size()));
  for (std::size_t j = 0; j < all.size(); ++j) {
    Mat m = all[j];
    const double nrm = m.norm();
    if (nrm > 1e-12) m /= nrm;
    else m.setZero();
    for (Eigen::Index e = 0; e < n2; ++e) {
      stack(e, static_cast<Eigen::Index>(j)) = m.data()[e].real();
      stack(n2 + e, static_cast<Eigen::Index>(j)) = m.data()[e].imag();
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(stack);
  const auto& s = svd.singularValues();
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) r += (s[i] > 1e-9 * s[0]) ? 1 : 0;
  return r;
}

/// Choi matrix straight from the Kraus operators:
/// C[(i, a), (j, b)] = sum_k A_k(a, i) conj(A_k(b, j)).
inline Mat choi_from_kraus(const std::vector<Mat>& kraus) {
  const auto n = kraus.front().rows();
  Mat c = Mat::Zero(n * n, n * n);
  for (const auto& a : kraus)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index x = 0; x < n; ++x)
        for (Eigen::Index j = 0; j < n; ++j)
          for (Eigen::Index y = 0; y < n; ++y) c(i * n + x, j * n + y) += a(x, i) * std::conj(a(y, j));
  return c;
}

/// Determinant by Gaussian elimination with partial pivoting.
inline cplx determinant(Mat m) {
  const auto n = m.rows();
  cplx det = 1.0;
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index p = c;
    for (Eigen::Index r = c + 1; r < n; ++r)
      if (std::abs(m(r, c)) > std::abs(m(p, c))) p = r;
    if (m(p, c) == 0.0) return 0.0;
    if (p != c) {
      m.row(p).swap(m.row(c));
      det = -det;
    }
    det *= m(c, c);
    for (Eigen::Index r = c + 1; r < n; ++r) m.row(r) -= (m(r, c) / m(c, c)) * m.row(c);
  }
  return det;
}

/// Minimal CSV reader: CRLF records, comma separated, double-quoted fields allowed.
inline std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> rec;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      rec.push_back(field);
      field.clear();
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      rec.push_back(field);
      field.clear();
      records.push_back(rec);
      rec.clear();
      ++i;
    } else {
      field += c;
    }
  }
  if (!field.empty() || !rec.empty()) {
    rec.push_back(field);
    records.push_back(rec);
  }
  return records;
}

}  // namespace oracle
