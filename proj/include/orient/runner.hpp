#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "orient/config.hpp"

namespace orient {

struct RunSummary {
  /// <cos theta> at t_f.
  double fidelity = 0.0;
  double terminal = 0.0;
  /// Time-averaged allowed-subspace population over [0, t_f].
  double subspace_average = 0.0;
  double final_forbidden_population = 0.0;
  /// Width of the first field-free revival peak, in rotational periods.
  std::optional<double> fwhm_periods;
  double final_time = 0.0;
  double final_time_periods = 0.0;
  int iterations = 0;
  bool converged = false;
  bool monotonic = true;
};

struct RunOutcome {
  OptimizationResult result;
  RunSummary summary;
};

/// Runs one optimization and writes iterations.csv, field.csv,
/// orientation.csv and summary.json (plus target.csv and trajectory.csv when
/// relevant) into `out_dir`. Progress goes to `log` when non-null.
RunOutcome run(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream* log = nullptr);

struct SweepRow {
  double value = 0.0;
  std::optional<RunSummary> summary;
  double final_j = 0.0;
  /// "ok" or the error message of a failed run.
  std::string status;
};

/// Copy of `base` with the numeric key `param` set to `value`; the result is
/// validated like a parsed file.
RunConfig with_parameter(const RunConfig& base, const std::string& param, double value);

/// One run per value in `out_dir/<param>=<value>/`, at most `jobs` at a time,
/// and an aggregate sweep.csv. Failed runs are recorded, not fatal.
std::vector<SweepRow> sweep(const RunConfig& base, const std::string& param, const std::vector<double>& values,
                            const std::filesystem::path& out_dir, int jobs, std::ostream* log = nullptr);

}  // namespace orient
