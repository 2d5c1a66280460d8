#pragma once

#include <Eigen/Dense>
#include <iosfwd>

#include "orient/fields.hpp"
#include "orient/propagation.hpp"
#include "orient/rotor_model.hpp"

namespace orient {

struct CostBreakdown {
  double terminal = 0.0;
  double penalty = 0.0;
  double constraint = 0.0;
  double total = 0.0;

  static CostBreakdown make(double terminal, double penalty, double constraint) {
    return {terminal, penalty, constraint, terminal - penalty + constraint};
  }
};

/// What the final state is scored against: population of a target state,
/// |<phi_f|psi>|^2, or the expectation value of a real symmetric observable.
class TerminalObjective {
 public:
  enum class Kind { kStateOverlap, kObservable };

  static TerminalObjective state_overlap(const StateVector& target);
  static TerminalObjective observable(const Eigen::MatrixXd& op);

  Kind kind() const { return kind_; }
  const StateVector& target() const { return target_; }
  const Eigen::MatrixXd& op() const { return op_; }
  int dimension() const;

 private:
  TerminalObjective(Kind kind, StateVector target, Eigen::MatrixXd op)
      : kind_(kind), target_(std::move(target)), op_(std::move(op)) {}

  Kind kind_;
  StateVector target_;
  Eigen::MatrixXd op_;
};

double terminal_value(const StateVector& psi_final, const TerminalObjective& objective);

/// chi(t_f): |phi_f><phi_f|psi> for a target state, O|psi> for an observable.
StateVector terminal_costate(const StateVector& psi_final, const TerminalObjective& objective);

/// lambda * int (E - E_ref)^2 / S dt by the trapezoid rule. Nodes where the
/// envelope vanishes contribute nothing (E = E_ref is enforced there).
double fluence_penalty(const ControlField& field, double lambda);

/// int_0^t_f <psi|P|psi> dt by the trapezoid rule.
double subspace_integral(const Trajectory& traj, const Eigen::VectorXd& projector);

/// Time-averaged population of the subspace, (1/t_f) int <psi|P|psi> dt.
double subspace_average(const Trajectory& traj, const Eigen::VectorXd& projector);

/// <psi|P|psi> for a diagonal projector.
double subspace_population(const StateVector& psi, const Eigen::VectorXd& projector);

/// <cos theta>(t_k) at every node.
Eigen::VectorXd orientation_trace(const Trajectory& traj, const RotorModel& model);

/// Width of the highest peak of `trace` inside [window_begin, window_end],
/// in units of `period`. Crossings of half the peak value are located by
/// linear interpolation between nodes. Throws PeakNotResolved when either
/// crossing falls outside the window or the peak is not positive.
double orientation_fwhm(const Eigen::VectorXd& trace, const TimeGrid& grid, double window_begin,
                        double window_end, double period);

/// CSV "t_au,cos_theta".
void write_trace_csv(std::ostream& out, const Eigen::VectorXd& trace, const TimeGrid& grid);

}  // namespace orient
