#pragma once

// RFC-4180 CSV for experiment rows (CRLF line ends). The observed column holds
// an integer, or one of: inf (not generating / never injective), timeout,
// budget, error.

#include "genlen/lab/experiment.hpp"
#include "genlen/lab/matrix_io.hpp"

#include <string>
#include <vector>

namespace genlen::lab {

inline constexpr const char* kCsvHeader = "n,g,trial,observed,lower_bound,upper_bound_generic,wall_ms";

inline std::string observed_field(const ExperimentRow& r) {
  switch (r.outcome) {
    case Outcome::Value: return std::to_string(r.observed);
    case Outcome::NotGenerating: return "inf";
    case Outcome::Timeout: return "timeout";
    case Outcome::BudgetExceeded: return "budget";
    case Outcome::Failed: return "error";
  }
  return "error";
}

inline std::string to_csv(const std::vector<ExperimentRow>& rows) {
  std::string out = std::string(kCsvHeader) + "\r\n";
  for (const auto& r : rows) {
    out += std::to_string(r.n) + ',' + std::to_string(r.g) + ',' + std::to_string(r.trial) + ',' + observed_field(r) +
           ',' + std::to_string(r.lower_bound) + ',' + std::to_string(r.upper_bound_generic) + ',' +
           std::to_string(r.wall_ms) + "\r\n";
  }
  return out;
}

inline void emit_csv(const std::vector<ExperimentRow>& rows, const std::string& path) { write_file(path, to_csv(rows)); }

}  // namespace genlen::lab
