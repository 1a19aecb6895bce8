#pragma once

// Experiment harness: seeded trials over (n, g) grids, one row per trial.

#include "genlen/ensembles.hpp"
#include "genlen/lab/matrix_io.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <future>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

namespace genlen::lab {

enum class ExperimentKind { WieScaling, LieScaling, ChannelScaling, PepsGeneric, WorstCase };

inline const char* to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::WieScaling: return "wie-scaling";
    case ExperimentKind::LieScaling: return "lie-scaling";
    case ExperimentKind::ChannelScaling: return "channel-scaling";
    case ExperimentKind::PepsGeneric: return "peps-generic";
    case ExperimentKind::WorstCase: return "worst-case";
  }
  return "?";
}

inline ExperimentKind parse_kind(const std::string& s) {
  for (auto k : {ExperimentKind::WieScaling, ExperimentKind::LieScaling, ExperimentKind::ChannelScaling,
                 ExperimentKind::PepsGeneric, ExperimentKind::WorstCase}) {
    if (s == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown experiment kind '" + s + "'");
}

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::WieScaling;
  std::vector<std::size_t> n_range;
  std::vector<std::size_t> g_range;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::optional<Tolerance> tolerance;
};

struct RunOptions {
  std::size_t workers = 1;
  std::chrono::milliseconds row_budget{60'000};
  bool record_timing = false;  // wall_ms stays 0 otherwise, keeping output byte-reproducible
};

enum class Outcome { Value, NotGenerating, Timeout, BudgetExceeded, Failed };

struct ExperimentRow {
  std::size_t n = 0;
  std::size_t g = 0;
  std::size_t trial = 0;
  Outcome outcome = Outcome::Failed;
  std::size_t observed = 0;  // meaningful when outcome == Value
  std::size_t lower_bound = 0;
  std::size_t upper_bound_generic = 0;
  std::uint64_t wall_ms = 0;

  bool operator==(const ExperimentRow&) const = default;
};

inline void validate(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("experiment: trials must be >= 1");
  if (cfg.n_range.empty() || cfg.g_range.empty()) throw std::invalid_argument("experiment: empty n or g range");
  if (cfg.tolerance) cfg.tolerance->validate();
  for (auto n : cfg.n_range) {
    for (auto g : cfg.g_range) {
      if (n < 1 || g < 1) throw std::invalid_argument("experiment: n and g must be positive");
      switch (cfg.kind) {
        case ExperimentKind::WieScaling:
        case ExperimentKind::ChannelScaling:
          if (g < 2 || n < 2) throw std::invalid_argument("experiment: scaling kinds need n >= 2 and g >= 2");
          if (n > 32) throw std::invalid_argument("experiment: n > 32 is beyond the desk-scale budget");
          break;
        case ExperimentKind::LieScaling:
          if (g < 2 || n < 2) throw std::invalid_argument("experiment: lie-scaling needs n >= 2 and g >= 2");
          if (n > 32) throw std::invalid_argument("experiment: n > 32 is beyond the desk-scale budget");
          break;
        case ExperimentKind::PepsGeneric: {
          const std::size_t bound = generic_injectivity_bound(n, g, 2);
          check_peps_budget(n, g, bound);
          break;
        }
        case ExperimentKind::WorstCase:
          if (g != 2) throw std::invalid_argument("experiment: worst-case rows are pairs, g must be 2");
          if (n < 2 || n > 12) throw std::invalid_argument("experiment: worst-case needs 2 <= n <= 12");
          break;
      }
    }
  }
}

/// Substream of a row; depends only on (kind, n, g, trial), never on scheduling.
inline RngSpec row_stream(const ExperimentConfig& cfg, std::size_t n, std::size_t g, std::size_t trial) {
  RngSpec base{cfg.seed, static_cast<std::uint64_t>(cfg.kind)};
  return base.substream(n).substream(g).substream(trial);
}

/// (counting lower bound, generic upper bound) recorded with each row.
inline std::pair<std::size_t, std::size_t> row_bounds(ExperimentKind kind, std::size_t n, std::size_t g) {
  switch (kind) {
    case ExperimentKind::LieScaling: return {witt_lower_bound(g, n), n * n - 1};
    case ExperimentKind::PepsGeneric: return {peps_counting_lower_bound(n, g), generic_injectivity_bound(n, g, 2)};
    default: return {counting_lower_bound(n, g), generic_wie_bound(n, g)};
  }
}

/// Computes one row; does not time it.
inline ExperimentRow compute_row(const ExperimentConfig& cfg, std::size_t n, std::size_t g, std::size_t trial) {
  const Tolerance tol = cfg.tolerance.value_or(Tolerance{});
  const RngSpec spec = row_stream(cfg, n, g, trial);
  ExperimentRow row{n, g, trial};
  std::tie(row.lower_bound, row.upper_bound_generic) = row_bounds(cfg.kind, n, g);
  auto set_length = [&row](const LengthReport& r) {
    row.outcome = r.finite() ? Outcome::Value
                             : (r.status == LengthStatus::NotGenerating ? Outcome::NotGenerating : Outcome::Failed);
    row.observed = r.value;
  };
  switch (cfg.kind) {
    case ExperimentKind::WieScaling:
      set_length(wie_length(ginibre_system(n, g, spec), std::nullopt, tol));
      break;
    case ExperimentKind::ChannelScaling:
      set_length(full_kraus_rank_index(haar_isometry_kraus(n, g, spec), tol));
      break;
    case ExperimentKind::LieScaling: {
      const auto rep = lie_length(random_su_system(n, g, spec), std::nullopt, tol);
      row.outcome = rep.finite() ? Outcome::Value : Outcome::NotGenerating;
      row.observed = rep.value;
      break;
    }
    case ExperimentKind::PepsGeneric: {
      const PepsTensor t = random_peps_tensor(n, g, spec);
      row.outcome = Outcome::NotGenerating;
      for (std::size_t len = 1; len <= row.upper_bound_generic; ++len) {
        if (peps_shape(n, g, len).rows < peps_shape(n, g, len).cols) continue;  // excluded by counting
        if (peps_injective(t, len, tol).injective) {
          row.outcome = Outcome::Value;
          row.observed = len;
          break;
        }
      }
      break;
    }
    case ExperimentKind::WorstCase:
      set_length(wie_length(worst_case_pair(n), std::nullopt, tol));
      break;
  }
  return row;
}

namespace detail {

struct PendingRow {
  std::size_t n, g, trial;
  std::future<ExperimentRow> result;
  std::chrono::steady_clock::time_point start;
};

inline PendingRow launch_row(const ExperimentConfig& cfg, std::size_t n, std::size_t g, std::size_t trial) {
  auto task = std::make_shared<std::packaged_task<ExperimentRow()>>(
      [cfg, n, g, trial] { return compute_row(cfg, n, g, trial); });
  PendingRow p{n, g, trial, task->get_future(), std::chrono::steady_clock::now()};
  // Detached: a row that overruns its budget is abandoned, not joined.
  std::thread([task] { (*task)(); }).detach();
  return p;
}

inline ExperimentRow collect_row(PendingRow& p, const ExperimentConfig& cfg, const RunOptions& opt) {
  ExperimentRow row{p.n, p.g, p.trial};
  if (p.result.wait_until(p.start + opt.row_budget) != std::future_status::ready) {
    row.outcome = Outcome::Timeout;
  } else {
    try {
      row = p.result.get();
    } catch (const BudgetExceeded&) {
      row.outcome = Outcome::BudgetExceeded;
    } catch (const std::exception&) {
      row.outcome = Outcome::Failed;
    }
  }
  if (row.outcome == Outcome::Timeout || row.outcome == Outcome::BudgetExceeded || row.outcome == Outcome::Failed) {
    try {
      std::tie(row.lower_bound, row.upper_bound_generic) = row_bounds(cfg.kind, p.n, p.g);
    } catch (const std::exception&) {
    }
  }
  if (opt.record_timing) {
    row.wall_ms = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - p.start).count());
  }
  return row;
}

}  // namespace detail

/// Rows ordered by (n, g, trial) as listed in the config, independent of completion order.
inline std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg, const RunOptions& opt = {}) {
  validate(cfg);
  struct Key {
    std::size_t n, g, trial;
  };
  std::vector<Key> keys;
  for (auto n : cfg.n_range)
    for (auto g : cfg.g_range)
      for (std::size_t t = 0; t < cfg.trials; ++t) keys.push_back({n, g, t});

  std::vector<ExperimentRow> rows;
  rows.reserve(keys.size());
  const std::size_t workers = std::max<std::size_t>(opt.workers, 1);
  for (std::size_t begin = 0; begin < keys.size(); begin += workers) {
    const std::size_t end = std::min(keys.size(), begin + workers);
    std::vector<detail::PendingRow> batch;
    for (std::size_t i = begin; i < end; ++i) batch.push_back(detail::launch_row(cfg, keys[i].n, keys[i].g, keys[i].trial));
    for (auto& p : batch) rows.push_back(detail::collect_row(p, cfg, opt));
  }
  return rows;
}

/// Rows of generic kinds must satisfy lower <= observed <= upper; worst-case rows are
/// reference data that exceed the generic bound by construction.
inline bool row_violates_bounds(ExperimentKind kind, const ExperimentRow& r) {
  if (kind == ExperimentKind::WorstCase) return r.outcome != Outcome::Value;
  if (r.outcome != Outcome::Value) return true;
  return r.observed < r.lower_bound || r.observed > r.upper_bound_generic;
}

struct ExperimentSummary {
  std::size_t rows = 0;
  std::size_t violations = 0;
  bool ok() const { return violations == 0; }
};

inline ExperimentSummary summarize(ExperimentKind kind, const std::vector<ExperimentRow>& rows) {
  ExperimentSummary s;
  s.rows = rows.size();
  for (const auto& r : rows) s.violations += row_violates_bounds(kind, r) ? 1 : 0;
  return s;
}

}  // namespace genlen::lab
