#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "orient/optimizers.hpp"

namespace orient {

enum class Mode { kStandard, kSdc, kTimeOpt };
enum class ObjectiveKind { kCosTheta, kTarget };

/// Rejected configuration; the message names the offending key.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& key, const std::string& what)
      : std::invalid_argument(key + ": " + what), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// Experiment description in physical units, as written in the JSON file.
///
/// Times are fractions of the rotational period unless the key says
/// otherwise. `epsilon` is in rotational periods per hartree: the time
/// update moves t_f by epsilon * T_per * (gradient in a.u.).
struct RunConfig {
  Mode mode = Mode::kStandard;

  double rotational_constant_cm = 1.9312;
  double dipole_au = 0.044;
  int j_max = 15;

  double final_time_periods = 1.0;
  int steps_per_period = 4096;

  double guess_fwhm_fs = 144.0;
  double guess_center_periods = 0.2;
  double guess_amplitude_au = 1e-4;

  ObjectiveKind objective = ObjectiveKind::kCosTheta;
  std::optional<int> j_opt;

  double lambda = 20.0;
  /// Exactly one of these may be given; mu_times_final_time is mu * t_f.
  std::optional<double> mu_au;
  std::optional<double> mu_times_final_time;
  double epsilon = 1000.0;

  int max_iterations = 500;
  double tolerance = 1e-8;
  int patience = 5;
  bool backtrack_time_step = true;

  double free_evolution_periods = 1.5;
  std::string output_dir = "out";
  int verbosity = 1;

  bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& config);

/// Values the run will use, in atomic units.
struct ResolvedConfig {
  RotorModel model;
  double period;
  double final_time;
  int steps;
  double guess_fwhm;
  double guess_center;
  double mu;
  double epsilon;
};

ResolvedConfig resolve(const RunConfig& config);

/// Human-readable JSON echo of the resolved atomic-unit values.
std::string resolved_echo(const RunConfig& config);

/// Assembles the optimizer input for a run.
OptimizationConfig build_optimization_config(const RunConfig& config);

const char* to_string(Mode mode);

}  // namespace orient
