#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "orient/fields.hpp"
#include "orient/functionals.hpp"
#include "orient/propagation.hpp"
#include "orient/rotor_model.hpp"
#include "orient/targets.hpp"

namespace orient {

struct IterationRecord {
  int iteration = 0;
  CostBreakdown cost;
  /// Time-averaged population of the allowed subspace; NaN without a subspace.
  double subspace_average = 0.0;
  double final_time = 0.0;
};

struct OptimizationConfig {
  RotorModel model;
  /// E_0. Its grid fixes t_f (initial t_f for time optimization) and the
  /// number of steps.
  ControlField guess;
  StateVector initial;
  TerminalObjective objective;

  double lambda = 20.0;
  /// Weight of mu int <psi|P|psi> dt, units 1/time.
  double mu = 0.0;
  /// Step of the time update, t_f += epsilon * gradient; a.u. (time/energy).
  double epsilon = 0.0;
  std::optional<SubspaceSpec> subspace{};

  int max_iterations = 500;
  /// Stop after `patience` consecutive iterations with Delta J < tolerance.
  double tolerance = 1e-8;
  int patience = 5;

  /// Halve the time step until the time substep does not decrease J.
  bool backtrack_time_step = true;
  /// Floor for t_f in units of the rotational period.
  double min_final_time_periods = 0.01;

  /// Called after every recorded iteration (including iteration 0).
  std::function<void(const IterationRecord&)> observer{};
};

struct OptimizationResult {
  std::vector<IterationRecord> iterations;
  ControlField field;
  Trajectory trajectory;
  bool converged = false;

  const IterationRecord& last() const { return iterations.back(); }
  double final_time() const { return last().final_time; }
};

/// E_k + S / (2 lambda) Im <chi|H1|psi>, H1 = -mu0 cos(theta).
double field_update(const StateVector& chi, const StateVector& psi, double field, double envelope,
                    double lambda, const RotorModel& model);

/// Sequential update with E_ref = E_k: forward psi_k, backward chi_k from the
/// terminal costate, then psi_{k+1} forward while updating the field node by
/// node. Mu is ignored.
OptimizationResult krotov_standard(const OptimizationConfig& config);

/// As krotov_standard, with chi_k solving the inhomogeneous equation with
/// source mu P psi_k(t). Requires config.subspace.
OptimizationResult krotov_sdc(const OptimizationConfig& config);

/// New control duration from the field-fixed substep:
///   t_f + epsilon (int_0^1 Im<chi'|H0 + E_next H1|psi'> ds - lambda int_0^1 (E_next - E_prev)^2 ds)
/// with trajectories indexed by the rescaled node s_k = k / n. Throws
/// TimeCollapsed when the result is below `floor`.
double time_update(const Trajectory& chi, const Trajectory& psi, const ControlField& next,
                   const ControlField& previous, double t_f, double lambda, double epsilon,
                   const RotorModel& model, double floor);

/// Alternates one standard field iteration at fixed t_f with one time update
/// at fixed field, on a grid whose node count is fixed and whose duration
/// follows t_f^{(k)}. Requires a state-overlap objective.
OptimizationResult optimize_time(const OptimizationConfig& config);

}  // namespace orient
