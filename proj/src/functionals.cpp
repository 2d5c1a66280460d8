#include "orient/functionals.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

#include "orient/error.hpp"

namespace orient {

TerminalObjective TerminalObjective::state_overlap(const StateVector& target) {
  if (std::abs(target.norm() - 1.0) > 1e-10) {
    throw std::invalid_argument("state-overlap target must be normalized");
  }
  return TerminalObjective(Kind::kStateOverlap, target, {});
}

TerminalObjective TerminalObjective::observable(const Eigen::MatrixXd& op) {
  if (op.rows() != op.cols() || op.rows() == 0) {
    throw std::invalid_argument("observable must be a non-empty square matrix");
  }
  if ((op - op.transpose()).cwiseAbs().maxCoeff() > 0.0) {
    throw std::invalid_argument("observable must be symmetric");
  }
  return TerminalObjective(Kind::kObservable, {}, op);
}

int TerminalObjective::dimension() const {
  return static_cast<int>(kind_ == Kind::kStateOverlap ? target_.size() : op_.rows());
}

namespace {

void check_dimension(const StateVector& psi, const TerminalObjective& objective) {
  if (psi.size() != objective.dimension()) {
    throw std::invalid_argument("terminal objective: dimension mismatch");
  }
}

}  // namespace

double terminal_value(const StateVector& psi_final, const TerminalObjective& objective) {
  check_dimension(psi_final, objective);
  if (objective.kind() == TerminalObjective::Kind::kStateOverlap) {
    return std::norm(objective.target().dot(psi_final));
  }
  return expectation(psi_final, objective.op());
}

StateVector terminal_costate(const StateVector& psi_final, const TerminalObjective& objective) {
  check_dimension(psi_final, objective);
  if (objective.kind() == TerminalObjective::Kind::kStateOverlap) {
    return objective.target() * objective.target().dot(psi_final);
  }
  return objective.op() * psi_final;
}

double fluence_penalty(const ControlField& field, double lambda) {
  double sum = 0.0;
  // Endpoints carry half weight but S vanishes there; interior nodes weigh dt.
  for (int k = 1; k < field.grid.steps(); ++k) {
    const double s = field.envelope[k];
    if (s <= 0.0) continue;
    const double d = field.samples[k] - field.reference[k];
    sum += d * d / s;
  }
  return lambda * field.grid.dt() * sum;
}

double subspace_population(const StateVector& psi, const Eigen::VectorXd& projector) {
  return (projector.array() * psi.cwiseAbs2().array()).sum();
}

double subspace_integral(const Trajectory& traj, const Eigen::VectorXd& projector) {
  const int n = traj.size() - 1;
  double sum = 0.5 * (subspace_population(traj[0], projector) + subspace_population(traj[n], projector));
  for (int k = 1; k < n; ++k) sum += subspace_population(traj[k], projector);
  return traj.grid.dt() * sum;
}

double subspace_average(const Trajectory& traj, const Eigen::VectorXd& projector) {
  return subspace_integral(traj, projector) / traj.grid.final_time();
}

Eigen::VectorXd orientation_trace(const Trajectory& traj, const RotorModel& model) {
  Eigen::VectorXd trace(traj.size());
  const Eigen::MatrixXd& c = model.cos_theta();
  for (int k = 0; k < traj.size(); ++k) trace[k] = expectation(traj[k], c);
  return trace;
}

double orientation_fwhm(const Eigen::VectorXd& trace, const TimeGrid& grid, double window_begin,
                        double window_end, double period) {
  if (trace.size() != grid.nodes()) throw std::invalid_argument("orientation_fwhm: trace/grid size mismatch");
  if (!(window_end > window_begin)) throw std::invalid_argument("orientation_fwhm: empty window");
  const double dt = grid.dt();
  const int lo = std::max(0, static_cast<int>(std::ceil(window_begin / dt - 1e-9)));
  const int hi = std::min(grid.steps(), static_cast<int>(std::floor(window_end / dt + 1e-9)));
  if (hi - lo < 2) throw PeakNotResolved("orientation_fwhm: window holds fewer than three nodes");

  int peak = lo;
  for (int k = lo; k <= hi; ++k) {
    if (trace[k] > trace[peak]) peak = k;
  }
  const double top = trace[peak];
  if (!(top > 0.0)) throw PeakNotResolved("orientation_fwhm: no positive peak in window");
  const double half = 0.5 * top;

  int left = peak;
  while (left > lo && trace[left - 1] >= half) --left;
  if (left == lo) throw PeakNotResolved("orientation_fwhm: left half-maximum crossing not in window");
  int right = peak;
  while (right < hi && trace[right + 1] >= half) ++right;
  if (right == hi) throw PeakNotResolved("orientation_fwhm: right half-maximum crossing not in window");

  // Crossings between (left-1, left) and (right, right+1).
  const double tl = grid.time(left - 1) + dt * (half - trace[left - 1]) / (trace[left] - trace[left - 1]);
  const double tr = grid.time(right) + dt * (trace[right] - half) / (trace[right] - trace[right + 1]);
  return (tr - tl) / period;
}

void write_trace_csv(std::ostream& out, const Eigen::VectorXd& trace, const TimeGrid& grid) {
  out << "t_au,cos_theta\n" << std::setprecision(17);
  for (int k = 0; k < trace.size(); ++k) out << grid.time(k) << ',' << trace[k] << '\n';
}

}  // namespace orient
