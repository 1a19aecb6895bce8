#pragma once

// Length and Wie-length of generating systems of M_n(C).
//
// length:      smallest l such that words of length <= l (identity allowed as
//              a letter) span M_n(C).
// wie_length:  smallest k such that words of length exactly k span M_n(C).
//
// Both chains propagate at most n^2 stored basis representatives per step
// (actual words, normalized to unit Frobenius norm), never all g^k words.

#include "genlen/numkernel.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace genlen {

using Word = std::vector<std::uint32_t>;

class NotGeneratingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GeneratingSystem {
 public:
  GeneratingSystem() = default;

  explicit GeneratingSystem(std::vector<CMatrix> mats) : mats_(std::move(mats)) {
    if (mats_.empty()) throw DimensionError("GeneratingSystem: needs at least one matrix");
    n_ = static_cast<std::size_t>(mats_.front().rows());
    if (n_ == 0) throw DimensionError("GeneratingSystem: matrices must be non-empty");
    for (std::size_t i = 0; i < mats_.size(); ++i) {
      const auto& m = mats_[i];
      if (static_cast<std::size_t>(m.rows()) != n_ || static_cast<std::size_t>(m.cols()) != n_) {
        throw DimensionError("GeneratingSystem: matrix " + std::to_string(i) + " is " +
                             std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                             ", expected " + std::to_string(n_) + "x" + std::to_string(n_));
      }
      if (!all_finite(m)) {
        throw DimensionError("GeneratingSystem: matrix " + std::to_string(i) + " has non-finite entries");
      }
    }
  }

  std::size_t n() const { return n_; }
  std::size_t g() const { return mats_.size(); }
  const std::vector<CMatrix>& mats() const { return mats_; }
  const CMatrix& operator[](std::size_t i) const { return mats_[i]; }

  /// Index pairs (i, j), i < j, of exactly equal generators.
  std::vector<std::pair<std::size_t, std::size_t>> duplicates() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < mats_.size(); ++i) {
      for (std::size_t j = i + 1; j < mats_.size(); ++j) {
        if (mats_[i] == mats_[j]) out.emplace_back(i, j);
      }
    }
    return out;
  }

 private:
  std::size_t n_ = 0;
  std::vector<CMatrix> mats_;
};

enum class LengthKind { Length, WieLength };
enum class LengthStatus { Found, NotGenerating, CapExceeded };

inline const char* to_string(LengthStatus s) {
  switch (s) {
    case LengthStatus::Found: return "found";
    case LengthStatus::NotGenerating: return "not-generating";
    case LengthStatus::CapExceeded: return "cap-exceeded";
  }
  return "?";
}

struct LengthReport {
  LengthKind kind = LengthKind::Length;
  LengthStatus status = LengthStatus::NotGenerating;
  std::size_t value = 0;  // meaningful only when status == Found
  std::vector<std::size_t> dims_per_step;
  std::size_t search_cap = 0;
  std::optional<std::vector<Word>> witness_words;
  std::vector<std::pair<std::size_t, std::size_t>> duplicate_generators;

  bool finite() const { return status == LengthStatus::Found; }
  std::optional<std::size_t> maybe() const {
    return finite() ? std::optional<std::size_t>(value) : std::nullopt;
  }
};

/// Product A_{w[0]} A_{w[1]} ... A_{w[L-1]}; the empty word is the identity.
inline CMatrix evaluate_word(const GeneratingSystem& s, const Word& w) {
  CMatrix acc = CMatrix::Identity(s.n(), s.n());
  for (auto idx : w) {
    if (idx >= s.g()) {
      throw DimensionError("word index " + std::to_string(idx) + " out of range for g = " +
                           std::to_string(s.g()));
    }
    acc = acc * s[idx];
  }
  return acc;
}

namespace detail {

/// Scales m to unit Frobenius norm. Returns false when m is zero, or when it is below
/// floor: a product A * M with |A * M| <= rank_rel |A| |M| is rounding noise from an
/// exact cancellation and is treated as the zero matrix.
inline bool normalize_in_place(CMatrix& m, double floor = 0.0) {
  const double nrm = m.norm();
  if (nrm == 0.0 || nrm <= floor || !std::isfinite(nrm)) return false;
  m /= nrm;
  return true;
}

}  // namespace detail

/// Spans of words of exactly length k, advanced one letter at a time.
class ExactLengthChain {
 public:
  ExactLengthChain(const GeneratingSystem& s, Tolerance tol)
      : sys_(&s), tol_(tol), tracker_(s.n() * s.n(), tol) {
    for (const auto& a : s.mats()) norms_.push_back(a.norm());
    for (std::uint32_t a = 0; a < s.g(); ++a) offer(s[a], Word{a}, tracker_, reps_, words_);
    length_ = 1;
  }

  std::size_t length() const { return length_; }
  std::size_t dim() const { return tracker_.size(); }
  bool full() const { return tracker_.full(); }
  const SpanTracker& tracker() const { return tracker_; }
  const std::vector<Word>& words() const { return words_; }

  /// V_{k+1} = span{ A * M : A in S, M in reps(V_k) }.
  void advance() {
    SpanTracker next(sys_->n() * sys_->n(), tol_);
    std::vector<CMatrix> reps;
    std::vector<Word> words;
    for (std::size_t m = 0; m < reps_.size() && !next.full(); ++m) {
      for (std::uint32_t a = 0; a < sys_->g() && !next.full(); ++a) {
        Word w;
        w.reserve(words_[m].size() + 1);
        w.push_back(a);
        w.insert(w.end(), words_[m].begin(), words_[m].end());
        offer((*sys_)[a] * reps_[m], std::move(w), next, reps, words, tol_.rank_rel * norms_[a]);
      }
    }
    tracker_ = std::move(next);
    reps_ = std::move(reps);
    words_ = std::move(words);
    ++length_;
  }

 private:
  static void offer(CMatrix cand, Word w, SpanTracker& t, std::vector<CMatrix>& reps,
                    std::vector<Word>& words, double floor = 0.0) {
    if (!detail::normalize_in_place(cand, floor)) return;
    if (t.insert(vectorize(cand)) == InsertOutcome::Added) {
      reps.push_back(std::move(cand));
      words.push_back(std::move(w));
    }
  }

  const GeneratingSystem* sys_;
  Tolerance tol_;
  std::vector<double> norms_;
  SpanTracker tracker_;
  std::vector<CMatrix> reps_;
  std::vector<Word> words_;
  std::size_t length_ = 0;
};

struct ExactSpan {
  std::size_t dim;
  SpanTracker tracker;
};

inline ExactSpan span_at_exact_length(const GeneratingSystem& s, std::size_t k, const Tolerance& tol = {}) {
  if (k == 0) throw std::invalid_argument("span_at_exact_length: k must be >= 1");
  ExactLengthChain chain(s, tol);
  while (chain.length() < k) chain.advance();
  return {chain.dim(), chain.tracker()};
}

/// Length via the cumulative chain W_0 = span{1}, W_{l+1} = W_l + S * W_l.
inline LengthReport length(const GeneratingSystem& s, const Tolerance& tol = {}) {
  LengthReport rep;
  rep.kind = LengthKind::Length;
  rep.duplicate_generators = s.duplicates();
  const std::size_t n = s.n();
  const std::size_t target = n * n;
  rep.search_cap = target;  // each productive step adds at least one dimension

  SpanTracker tracker(target, tol);
  std::vector<CMatrix> frontier;  // basis representatives added in the last step
  CMatrix id = CMatrix::Identity(n, n);
  detail::normalize_in_place(id);
  tracker.insert(vectorize(id));
  frontier.push_back(id);
  rep.dims_per_step.push_back(tracker.size());

  std::size_t steps = 0;
  while (!tracker.full()) {
    std::vector<CMatrix> added;
    for (const auto& m : frontier) {
      for (std::size_t a = 0; a < s.g() && !tracker.full(); ++a) {
        CMatrix cand = s[a] * m;
        if (!detail::normalize_in_place(cand, tol.rank_rel * s[a].norm())) continue;
        if (tracker.insert(vectorize(cand)) == InsertOutcome::Added) added.push_back(std::move(cand));
      }
    }
    ++steps;
    rep.dims_per_step.push_back(tracker.size());
    if (added.empty()) {
      rep.status = LengthStatus::NotGenerating;
      return rep;
    }
    frontier = std::move(added);
  }
  rep.status = LengthStatus::Found;
  rep.value = std::max<std::size_t>(steps, 1);
  return rep;
}

/// Wie-length, searching k = 1..cap with cap = (n^2 + n) * length(S) by default.
inline LengthReport wie_length(const GeneratingSystem& s, std::optional<std::size_t> cap = std::nullopt,
                               const Tolerance& tol = {}) {
  LengthReport rep;
  rep.kind = LengthKind::WieLength;
  rep.duplicate_generators = s.duplicates();
  const std::size_t n = s.n();

  const LengthReport len = length(s, tol);
  bool all_zero = true;
  for (const auto& m : s.mats()) all_zero = all_zero && m.isZero(0.0);
  if (!len.finite() || all_zero) {
    rep.status = LengthStatus::NotGenerating;
    return rep;
  }
  rep.search_cap = cap.value_or((n * n + n) * len.value);
  if (rep.search_cap == 0) throw std::invalid_argument("wie_length: cap must be >= 1");

  ExactLengthChain chain(s, tol);
  while (true) {
    rep.dims_per_step.push_back(chain.dim());
    if (chain.full()) {
      rep.status = LengthStatus::Found;
      rep.value = chain.length();
      rep.witness_words = chain.words();
      return rep;
    }
    if (chain.length() >= rep.search_cap || chain.dim() == 0) break;
    chain.advance();
  }
  rep.status = LengthStatus::CapExceeded;
  return rep;
}

/// True iff words of every length k+1..k+extra still span M_n(C), k = Wie-length.
inline bool check_stabilization(const GeneratingSystem& s, std::size_t extra, const Tolerance& tol = {}) {
  const LengthReport wie = wie_length(s, std::nullopt, tol);
  if (!wie.finite()) throw NotGeneratingError("check_stabilization: system does not Wie-generate");
  ExactLengthChain chain(s, tol);
  while (chain.length() < wie.value) chain.advance();
  for (std::size_t m = 1; m <= extra; ++m) {
    chain.advance();
    if (!chain.full()) return false;
  }
  return true;
}

struct SandwichCheck {
  bool lo_ok = false;
  bool hi_ok = false;
  std::size_t length = 0;
  std::size_t wie_length = 0;
};

/// Checks length <= Wie-length <= (n^2 + n) * length.
inline SandwichCheck check_sandwich(const GeneratingSystem& s, const Tolerance& tol = {}) {
  const LengthReport len = length(s, tol);
  if (!len.finite()) throw NotGeneratingError("check_sandwich: system does not generate");
  // The cap is set past the bound so that a violation is observable rather than truncated.
  const std::size_t n = s.n();
  const LengthReport wie = wie_length(s, 2 * (n * n + n) * len.value, tol);
  if (!wie.finite()) throw NotGeneratingError("check_sandwich: Wie-length search exhausted");
  return {len.value <= wie.value, wie.value <= (n * n + n) * len.value, len.value, wie.value};
}

enum class WorstCaseVariant {
  Cyclic,     // A = sum_i |i+1 mod n><i|
  Nilpotent,  // A = sum_{i<n} |i+1><i|
};

/// The shift / rank-one pair {A, B = |2><n|} (1-based kets).
inline GeneratingSystem worst_case_pair(std::size_t n, WorstCaseVariant variant = WorstCaseVariant::Cyclic) {
  if (n < 2) throw std::invalid_argument("worst_case_pair: n must be >= 2");
  const auto N = static_cast<Eigen::Index>(n);
  CMatrix a = CMatrix::Zero(N, N);
  for (Eigen::Index i = 0; i + 1 < N; ++i) a(i + 1, i) = 1.0;
  if (variant == WorstCaseVariant::Cyclic) a(0, N - 1) = 1.0;
  CMatrix b = matrix_unit(N, 1, N - 1);
  return GeneratingSystem({a, b});
}

/// Certificate check: the n^2 given words, vectorized, form a full-rank n^2 x n^2 matrix.
inline bool verify_spanning_words(const GeneratingSystem& s, const std::vector<Word>& words,
                                  const Tolerance& tol = {}) {
  const std::size_t n2 = s.n() * s.n();
  if (words.size() != n2) {
    throw DimensionError("verify_spanning_words: expected " + std::to_string(n2) + " words, got " +
                         std::to_string(words.size()));
  }
  CMatrix w(static_cast<Eigen::Index>(n2), static_cast<Eigen::Index>(n2));
  for (std::size_t r = 0; r < words.size(); ++r) {
    if (words[r].size() != words.front().size()) {
      throw DimensionError("verify_spanning_words: word " + std::to_string(r) + " has a different length");
    }
    CMatrix m = evaluate_word(s, words[r]);
    const double nrm = m.norm();
    if (nrm > 0.0) m /= nrm;
    w.row(static_cast<Eigen::Index>(r)) = vectorize(m).transpose();
  }
  return matrix_rank(w, tol) == n2;
}

/// ceil(log_base(x)) for integers, exact (no floating point).
inline std::size_t ceil_log(std::size_t base, std::size_t x) {
  if (base < 2) throw std::invalid_argument("ceil_log: base must be >= 2");
  std::size_t k = 0;
  unsigned __int128 p = 1;
  while (p < x) {
    p *= base;
    ++k;
  }
  return k;
}

/// Counting lower bound: g^k >= n^2 words are needed.
inline std::size_t counting_lower_bound(std::size_t n, std::size_t g) { return ceil_log(g, n * n); }

/// Generic upper bound 2 ceil(log_g n).
inline std::size_t generic_wie_bound(std::size_t n, std::size_t g) { return 2 * ceil_log(g, n); }

}  // namespace genlen
