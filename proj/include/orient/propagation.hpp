#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

#include "orient/fields.hpp"
#include "orient/rotor_model.hpp"

namespace orient {

/// Complex Hermitian matrix; construction rejects anything else.
class HermitianOperator {
 public:
  explicit HermitianOperator(Eigen::MatrixXcd matrix, double tolerance = 1e-12);
  explicit HermitianOperator(const Eigen::MatrixXd& real_symmetric);

  const Eigen::MatrixXcd& matrix() const { return m_; }
  int dimension() const { return static_cast<int>(m_.rows()); }

 private:
  Eigen::MatrixXcd m_;
};

/// exp(-i H dt) state. Negative dt steps backward.
StateVector step_homogeneous(const StateVector& state, const HermitianOperator& h, double dt);

enum class Direction { kForward, kBackward };

/// One state per grid node, stored in time order (states[k] is the state at
/// t_k) regardless of the direction it was computed in.
struct Trajectory {
  TimeGrid grid;
  Direction direction;
  std::vector<StateVector> states;

  const StateVector& front() const { return states.front(); }
  const StateVector& back() const { return states.back(); }
  const StateVector& operator[](int k) const { return states[static_cast<std::size_t>(k)]; }
  int size() const { return static_cast<int>(states.size()); }
};

/// Eigensystem of a real symmetric step Hamiltonian, H = V diag(w) V^T.
struct SpectralStep {
  Eigen::MatrixXd vectors;
  Eigen::VectorXd energies;

  explicit SpectralStep(const Eigen::MatrixXd& hamiltonian);

  /// exp(-i H dt) psi.
  StateVector evolve(const StateVector& psi, double dt) const;

  /// int_0^dt exp(iH tau) P exp(-iH tau) dtau * psi for a diagonal 0/1
  /// projector P; exact variation-of-constants source integral over a step.
  StateVector source_integral(const StateVector& psi, const Eigen::VectorXd& projector,
                              double dt) const;
};

/// Step exponentials of H0 + E_k H1 for every step of a field. The sample at
/// node k is held over [t_k, t_{k+1}].
class FieldPropagator {
 public:
  FieldPropagator(const RotorModel& model, const ControlField& field);
  FieldPropagator(const TimeGrid& grid, std::vector<SpectralStep> steps);

  /// Same step Hamiltonians on a grid of different duration.
  FieldPropagator retimed(double t_f) const;

  const TimeGrid& grid() const { return grid_; }
  const SpectralStep& step(int k) const { return steps_[static_cast<std::size_t>(k)]; }

  Trajectory forward(const StateVector& initial) const;
  Trajectory backward(const StateVector& final_costate) const;
  /// Solves d/dt chi = -i H chi - mu P psi(t) backward from t_f, i.e.
  /// chi(t) = U(t, t_f) chi(t_f) + mu int_t^t_f U(t, t') P psi(t') dt'.
  /// Within each step psi is evolved exactly from its left node, so the
  /// source trajectory must have been generated by this same field.
  Trajectory backward(const StateVector& final_costate, double mu,
                      const Eigen::VectorXd& projector, const Trajectory& source) const;

 private:
  TimeGrid grid_;
  std::vector<SpectralStep> steps_;
};

Trajectory propagate_forward(const StateVector& initial, const ControlField& field,
                             const RotorModel& model);

Trajectory propagate_backward_homogeneous(const StateVector& final_costate,
                                          const ControlField& field, const RotorModel& model);

Trajectory propagate_backward_inhomogeneous(const StateVector& final_costate,
                                            const ControlField& field, const RotorModel& model,
                                            double mu, const Eigen::VectorXd& projector,
                                            const Trajectory& source);

/// Field-free evolution: exp(-i H0 t_k) psi on a uniform grid.
Trajectory propagate_field_free(const StateVector& initial, const RotorModel& model,
                                const TimeGrid& grid);

/// CSV: t_au, then re_j, im_j for each basis index j.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

}  // namespace orient
