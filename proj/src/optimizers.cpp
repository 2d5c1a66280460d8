#include "orient/optimizers.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "orient/error.hpp"

namespace orient {

namespace {

struct Iterate {
  ControlField field;
  FieldPropagator propagator;
  Trajectory psi;
};

void validate(const OptimizationConfig& config) {
  if (!(config.lambda > 0.0)) throw std::invalid_argument("optimization: lambda must be > 0");
  if (!(config.mu >= 0.0)) throw std::invalid_argument("optimization: mu must be >= 0");
  if (!(config.epsilon >= 0.0)) throw std::invalid_argument("optimization: epsilon must be >= 0");
  if (config.max_iterations < 1) throw std::invalid_argument("optimization: max_iterations must be >= 1");
  if (config.guess.grid.steps() < TimeGrid::kMinSteps) {
    throw std::invalid_argument("optimization: need at least " + std::to_string(TimeGrid::kMinSteps) + " steps");
  }
  if (config.patience < 1) throw std::invalid_argument("optimization: patience must be >= 1");
  const int dim = config.model.dimension();
  if (config.initial.size() != dim || config.objective.dimension() != dim) {
    throw std::invalid_argument("optimization: state/objective dimension does not match model");
  }
  if (std::abs(config.initial.norm() - 1.0) > 1e-10) {
    throw std::invalid_argument("optimization: initial state is not normalized");
  }
}

Iterate start(const OptimizationConfig& config) {
  ControlField field(config.guess.grid, config.guess.samples, config.guess.samples,
                     config.guess.envelope);
  FieldPropagator propagator(config.model, field);
  Trajectory psi = propagator.forward(config.initial);
  return {std::move(field), std::move(propagator), std::move(psi)};
}

// Steps 3-4 of one sequential iteration: backward costate with E_k, then the
// forward sweep that builds E_{k+1} node by node from chi_k(t_n) and the live
// psi_{k+1}(t_n), each new sample applied over [t_n, t_{n+1}].
Iterate sequential_update(const OptimizationConfig& config, const Iterate& current, double mu,
                          const Eigen::VectorXd* projector) {
  const StateVector chi_final = terminal_costate(current.psi.back(), config.objective);
  const Trajectory chi = (mu > 0.0 && projector != nullptr)
                             ? current.propagator.backward(chi_final, mu, *projector, current.psi)
                             : current.propagator.backward(chi_final);

  const TimeGrid& grid = current.field.grid;
  const Eigen::VectorXd& old_samples = current.field.samples;
  const Eigen::VectorXd& envelope = current.field.envelope;
  const double dt = grid.dt();

  Eigen::VectorXd samples(grid.nodes());
  std::vector<SpectralStep> steps;
  steps.reserve(static_cast<std::size_t>(grid.steps()));
  Trajectory psi{grid, Direction::kForward, {}};
  psi.states.reserve(static_cast<std::size_t>(grid.nodes()));
  psi.states.push_back(config.initial);

  for (int k = 0; k < grid.steps(); ++k) {
    samples[k] = field_update(chi[k], psi.back(), old_samples[k], envelope[k], config.lambda, config.model);
    steps.emplace_back(config.model.hamiltonian(samples[k]));
    psi.states.push_back(steps.back().evolve(psi.back(), dt));
  }
  const int n = grid.steps();
  samples[n] = field_update(chi[n], psi.back(), old_samples[n], envelope[n], config.lambda, config.model);
  if (!samples.allFinite()) throw Error("field update produced a non-finite sample");

  ControlField next(grid, std::move(samples), old_samples, envelope);
  return {std::move(next), FieldPropagator(grid, std::move(steps)), std::move(psi)};
}

IterationRecord evaluate(const OptimizationConfig& config, const Iterate& it, int k, double mu,
                         const Eigen::VectorXd* projector) {
  IterationRecord rec;
  rec.iteration = k;
  const double terminal = terminal_value(it.psi.back(), config.objective);
  const double penalty = fluence_penalty(it.field, config.lambda);
  const double constraint = (mu > 0.0 && projector != nullptr) ? mu * subspace_integral(it.psi, *projector) : 0.0;
  rec.cost = CostBreakdown::make(terminal, penalty, constraint);
  rec.subspace_average = projector != nullptr ? subspace_average(it.psi, *projector)
                                              : std::numeric_limits<double>::quiet_NaN();
  rec.final_time = it.field.grid.final_time();
  return rec;
}

OptimizationResult run_fixed_time(const OptimizationConfig& config, bool with_source) {
  validate(config);
  std::optional<Eigen::VectorXd> proj;
  if (config.subspace) proj = projector(*config.subspace, config.model.basis());
  const Eigen::VectorXd* p = proj ? &*proj : nullptr;
  const double mu = with_source ? config.mu : 0.0;

  OptimizationResult result{{}, config.guess, Trajectory{config.guess.grid, Direction::kForward, {}}, false};
  Iterate current = start(config);
  result.iterations.push_back(evaluate(config, current, 0, mu, p));
  if (config.observer) config.observer(result.iterations.back());

  int stalled = 0;
  for (int k = 1; k <= config.max_iterations; ++k) {
    Iterate next = [&] {
      try {
        return sequential_update(config, current, mu, p);
      } catch (const std::exception& e) {
        throw IterationError(k, e.what());
      }
    }();
    const bool fixed_point = next.field.samples == current.field.samples;
    current = std::move(next);
    result.iterations.push_back(evaluate(config, current, k, mu, p));
    if (config.observer) config.observer(result.iterations.back());

    const double gain = result.iterations[k].cost.total - result.iterations[k - 1].cost.total;
    stalled = gain < config.tolerance ? stalled + 1 : 0;
    if (fixed_point || stalled >= config.patience) {
      result.converged = true;
      break;
    }
  }
  result.field = std::move(current.field);
  result.trajectory = std::move(current.psi);
  return result;
}

}  // namespace

double field_update(const StateVector& chi, const StateVector& psi, double field, double envelope,
                    double lambda, const RotorModel& model) {
  const Complex overlap = chi.dot(model.interaction() * psi);
  return field + envelope / (2.0 * lambda) * overlap.imag();
}

OptimizationResult krotov_standard(const OptimizationConfig& config) {
  return run_fixed_time(config, false);
}

OptimizationResult krotov_sdc(const OptimizationConfig& config) {
  if (!config.subspace) throw std::invalid_argument("krotov_sdc: allowed subspace is required");
  return run_fixed_time(config, true);
}

double time_update(const Trajectory& chi, const Trajectory& psi, const ControlField& next,
                   const ControlField& previous, double t_f, double lambda, double epsilon,
                   const RotorModel& model, double floor) {
  const int n = next.grid.steps();
  if (chi.size() != n + 1 || psi.size() != n + 1 || previous.grid.steps() != n) {
    throw std::invalid_argument("time_update: trajectories and fields must share the node count");
  }
  if (!(epsilon >= 0.0)) throw std::invalid_argument("time_update: epsilon must be >= 0");

  // Step-wise sums over the rescaled grid: the Hamiltonian of step k pairs
  // with the states at node k, which is the exact derivative of the
  // discretized final state with respect to t_f.
  double drive = 0.0;
  double change = 0.0;
  const Eigen::VectorXd& h0 = model.free_energies();
  const Eigen::MatrixXd& h1 = model.interaction();
  for (int k = 0; k < n; ++k) {
    StateVector h_psi = h1 * psi[k] * next.samples[k];
    h_psi.array() += h0.array().cast<Complex>() * psi[k].array();
    drive += chi[k].dot(h_psi).imag();
    const double d = next.samples[k] - previous.samples[k];
    change += d * d;
  }
  const double ds = 1.0 / n;
  const double t_next = t_f + epsilon * (drive * ds - lambda * change * ds);
  if (!(t_next >= floor) || !std::isfinite(t_next)) {
    throw TimeCollapsed("time update gave t_f = " + std::to_string(t_next) + " a.u., below the floor " +
                        std::to_string(floor));
  }
  return t_next;
}

OptimizationResult optimize_time(const OptimizationConfig& config) {
  validate(config);
  if (config.objective.kind() != TerminalObjective::Kind::kStateOverlap) {
    throw std::invalid_argument("optimize_time: objective must be a target state");
  }
  const double period = config.model.rotational_period();
  const double floor = config.min_final_time_periods * period;
  std::optional<Eigen::VectorXd> proj;
  if (config.subspace) proj = projector(*config.subspace, config.model.basis());
  const Eigen::VectorXd* p = proj ? &*proj : nullptr;

  OptimizationResult result{{}, config.guess, Trajectory{config.guess.grid, Direction::kForward, {}}, false};
  Iterate current = start(config);
  result.iterations.push_back(evaluate(config, current, 0, 0.0, p));
  if (config.observer) config.observer(result.iterations.back());

  int stalled = 0;
  for (int k = 1; k <= config.max_iterations; ++k) {
    const double t_f = current.field.grid.final_time();
    Iterate next = [&] {
      try {
        // Substep 1: field iteration at fixed t_f.
        Iterate moved = sequential_update(config, current, 0.0, nullptr);
        // Substep 2: costate of the new field, then the time update.
        const Trajectory chi = moved.propagator.backward(terminal_costate(moved.psi.back(), config.objective));
        double t_next = time_update(chi, moved.psi, moved.field, current.field, t_f, config.lambda,
                                    config.epsilon, config.model, floor);
        if (t_next == t_f) return moved;

        const double before = terminal_value(moved.psi.back(), config.objective) -
                              fluence_penalty(moved.field, config.lambda);
        for (int halving = 0; halving < 40; ++halving) {
          FieldPropagator retimed = moved.propagator.retimed(t_next);
          ControlField field = rescale_from_unit_interval(moved.field, t_next);
          Trajectory psi = retimed.forward(config.initial);
          const double after = terminal_value(psi.back(), config.objective) - fluence_penalty(field, config.lambda);
          if (!config.backtrack_time_step || after >= before) {
            return Iterate{std::move(field), std::move(retimed), std::move(psi)};
          }
          t_next = t_f + 0.5 * (t_next - t_f);
        }
        return moved;
      } catch (const TimeCollapsed&) {
        throw;
      } catch (const std::exception& e) {
        throw IterationError(k, e.what());
      }
    }();
    const bool fixed_point = next.field.samples == current.field.samples &&
                             next.field.grid.final_time() == t_f;
    const double step = std::abs(next.field.grid.final_time() - t_f);
    current = std::move(next);
    result.iterations.push_back(evaluate(config, current, k, 0.0, p));
    if (config.observer) config.observer(result.iterations.back());

    const double gain = result.iterations[k].cost.total - result.iterations[k - 1].cost.total;
    stalled = (gain < config.tolerance && step < config.tolerance * period) ? stalled + 1 : 0;
    if (fixed_point || stalled >= config.patience) {
      result.converged = true;
      break;
    }
  }
  result.field = std::move(current.field);
  result.trajectory = std::move(current.psi);
  return result;
}

}  // namespace orient
