#include "orient/propagation.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace orient {

namespace {

constexpr Complex kI{0.0, 1.0};

// (exp(i x) - 1) / (i x) written without cancellation: sin(x)/x + i 2 sin^2(x/2)/x.
Complex phase_integral(double x) {
  if (x == 0.0) return {1.0, 0.0};
  const double h = std::sin(0.5 * x);
  return {std::sin(x) / x, 2.0 * h * h / x};
}

}  // namespace

HermitianOperator::HermitianOperator(Eigen::MatrixXcd matrix, double tolerance)
    : m_(std::move(matrix)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) {
    throw std::invalid_argument("HermitianOperator: matrix must be square and non-empty");
  }
  const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
  if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > tolerance * scale) {
    throw std::invalid_argument("HermitianOperator: matrix is not Hermitian");
  }
}

HermitianOperator::HermitianOperator(const Eigen::MatrixXd& real_symmetric)
    : HermitianOperator(Eigen::MatrixXcd(real_symmetric.cast<Complex>())) {}

StateVector step_homogeneous(const StateVector& state, const HermitianOperator& h, double dt) {
  if (state.size() != h.dimension()) {
    throw std::invalid_argument("step_homogeneous: dimension mismatch");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h.matrix());
  if (eig.info() != Eigen::Success) throw std::runtime_error("step_homogeneous: eigensolver failed");
  const Eigen::MatrixXcd& v = eig.eigenvectors();
  Eigen::VectorXcd coeffs = v.adjoint() * state;
  for (Eigen::Index a = 0; a < coeffs.size(); ++a) {
    coeffs[a] *= std::exp(-kI * eig.eigenvalues()[a] * dt);
  }
  return v * coeffs;
}

SpectralStep::SpectralStep(const Eigen::MatrixXd& hamiltonian) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hamiltonian);
  if (eig.info() != Eigen::Success) throw std::runtime_error("SpectralStep: eigensolver failed");
  vectors = eig.eigenvectors();
  energies = eig.eigenvalues();
}

StateVector SpectralStep::evolve(const StateVector& psi, double dt) const {
  StateVector coeffs = vectors.transpose() * psi;
  for (Eigen::Index a = 0; a < coeffs.size(); ++a) {
    const double phase = energies[a] * dt;
    coeffs[a] *= Complex(std::cos(phase), -std::sin(phase));
  }
  return vectors * coeffs;
}

StateVector SpectralStep::source_integral(const StateVector& psi,
                                          const Eigen::VectorXd& projector, double dt) const {
  const Eigen::Index n = energies.size();
  // P in the eigenbasis of H.
  const Eigen::MatrixXd p_eigen = vectors.transpose() * projector.asDiagonal() * vectors;
  const StateVector coeffs = vectors.transpose() * psi;
  StateVector out = StateVector::Zero(n);
  for (Eigen::Index a = 0; a < n; ++a) {
    Complex acc{0.0, 0.0};
    for (Eigen::Index b = 0; b < n; ++b) {
      acc += p_eigen(a, b) * phase_integral((energies[a] - energies[b]) * dt) * coeffs[b];
    }
    out[a] = dt * acc;
  }
  return vectors * out;
}

FieldPropagator::FieldPropagator(const RotorModel& model, const ControlField& field)
    : grid_(field.grid) {
  steps_.reserve(static_cast<std::size_t>(grid_.steps()));
  for (int k = 0; k < grid_.steps(); ++k) {
    steps_.emplace_back(model.hamiltonian(field.samples[k]));
  }
}

FieldPropagator::FieldPropagator(const TimeGrid& grid, std::vector<SpectralStep> steps)
    : grid_(grid), steps_(std::move(steps)) {
  if (static_cast<int>(steps_.size()) != grid_.steps()) {
    throw std::invalid_argument("FieldPropagator: step count does not match grid");
  }
}

FieldPropagator FieldPropagator::retimed(double t_f) const {
  return FieldPropagator(grid_.with_final_time(t_f), steps_);
}

Trajectory FieldPropagator::forward(const StateVector& initial) const {
  Trajectory traj{grid_, Direction::kForward, {}};
  traj.states.reserve(static_cast<std::size_t>(grid_.nodes()));
  traj.states.push_back(initial);
  const double dt = grid_.dt();
  for (int k = 0; k < grid_.steps(); ++k) {
    traj.states.push_back(step(k).evolve(traj.states.back(), dt));
  }
  return traj;
}

Trajectory FieldPropagator::backward(const StateVector& final_costate) const {
  Trajectory traj{grid_, Direction::kBackward, std::vector<StateVector>(static_cast<std::size_t>(grid_.nodes()))};
  const double dt = grid_.dt();
  traj.states.back() = final_costate;
  for (int k = grid_.steps() - 1; k >= 0; --k) {
    traj.states[k] = step(k).evolve(traj.states[k + 1], -dt);
  }
  return traj;
}

Trajectory FieldPropagator::backward(const StateVector& final_costate, double mu,
                                     const Eigen::VectorXd& projector,
                                     const Trajectory& source) const {
  if (!source.grid.same_nodes(grid_) || source.grid.final_time() != grid_.final_time() ||
      source.size() != grid_.nodes()) {
    throw std::invalid_argument("inhomogeneous propagation: source trajectory grid mismatch");
  }
  if (!(mu >= 0.0)) throw std::invalid_argument("inhomogeneous propagation: mu must be >= 0");
  if (projector.size() != final_costate.size()) {
    throw std::invalid_argument("inhomogeneous propagation: projector dimension mismatch");
  }
  if (mu == 0.0) return backward(final_costate);

  Trajectory traj{grid_, Direction::kBackward, std::vector<StateVector>(static_cast<std::size_t>(grid_.nodes()))};
  const double dt = grid_.dt();
  traj.states.back() = final_costate;
  for (int k = grid_.steps() - 1; k >= 0; --k) {
    const SpectralStep& s = step(k);
    traj.states[k] = s.evolve(traj.states[k + 1], -dt) + mu * s.source_integral(source[k], projector, dt);
  }
  return traj;
}

Trajectory propagate_forward(const StateVector& initial, const ControlField& field,
                             const RotorModel& model) {
  if (initial.size() != model.dimension()) {
    throw std::invalid_argument("propagate_forward: state dimension mismatch");
  }
  if (std::abs(initial.norm() - 1.0) > 1e-10) {
    throw std::invalid_argument("propagate_forward: initial state is not normalized");
  }
  return FieldPropagator(model, field).forward(initial);
}

Trajectory propagate_backward_homogeneous(const StateVector& final_costate,
                                          const ControlField& field, const RotorModel& model) {
  if (final_costate.size() != model.dimension()) {
    throw std::invalid_argument("propagate_backward_homogeneous: dimension mismatch");
  }
  return FieldPropagator(model, field).backward(final_costate);
}

Trajectory propagate_backward_inhomogeneous(const StateVector& final_costate,
                                            const ControlField& field, const RotorModel& model,
                                            double mu, const Eigen::VectorXd& projector,
                                            const Trajectory& source) {
  if (final_costate.size() != model.dimension()) {
    throw std::invalid_argument("propagate_backward_inhomogeneous: dimension mismatch");
  }
  return FieldPropagator(model, field).backward(final_costate, mu, projector, source);
}

Trajectory propagate_field_free(const StateVector& initial, const RotorModel& model,
                                const TimeGrid& grid) {
  Trajectory traj{grid, Direction::kForward, {}};
  traj.states.reserve(static_cast<std::size_t>(grid.nodes()));
  const Eigen::VectorXd& h0 = model.free_energies();
  for (int k = 0; k < grid.nodes(); ++k) {
    const double t = grid.time(k);
    StateVector psi = initial;
    for (Eigen::Index j = 0; j < psi.size(); ++j) {
      const double phase = h0[j] * t;
      psi[j] *= Complex(std::cos(phase), -std::sin(phase));
    }
    traj.states.push_back(std::move(psi));
  }
  return traj;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  const Eigen::Index dim = trajectory.front().size();
  out << "t_au";
  for (Eigen::Index j = 0; j < dim; ++j) out << ",re_" << j << ",im_" << j;
  out << '\n' << std::setprecision(17);
  for (int k = 0; k < trajectory.size(); ++k) {
    out << trajectory.grid.time(k);
    for (Eigen::Index j = 0; j < dim; ++j) {
      out << ',' << trajectory[k][j].real() << ',' << trajectory[k][j].imag();
    }
    out << '\n';
  }
}

}  // namespace orient
