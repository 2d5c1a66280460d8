#include "orient/rotor_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace orient {

RotorBasis::RotorBasis(int j_max) : j_max_(j_max) {
  if (j_max < 1) {
    throw std::invalid_argument("RotorBasis: j_max must be >= 1, got " + std::to_string(j_max));
  }
}

Eigen::VectorXd build_free_hamiltonian(const RotorBasis& basis, double rotational_constant) {
  if (!(rotational_constant > 0.0)) {
    throw std::invalid_argument("build_free_hamiltonian: B must be positive");
  }
  Eigen::VectorXd h0(basis.dimension());
  for (int j = 0; j < basis.dimension(); ++j) {
    h0[j] = rotational_constant * static_cast<double>(j * (j + 1));
  }
  return h0;
}

Eigen::MatrixXd build_cos_theta(const RotorBasis& basis) {
  const int n = basis.dimension();
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j + 1 < n; ++j) {
    const double jd = j;
    const double element = (jd + 1.0) / std::sqrt((2.0 * jd + 1.0) * (2.0 * jd + 3.0));
    c(j, j + 1) = element;
    c(j + 1, j) = element;
  }
  return c;
}

double rotational_period(double rotational_constant) {
  if (!(rotational_constant > 0.0)) {
    throw std::invalid_argument("rotational_period: B must be positive");
  }
  return std::numbers::pi / rotational_constant;
}

RotorModel::RotorModel(double rotational_constant, double dipole, const RotorBasis& basis)
    : b_(rotational_constant),
      mu0_(dipole),
      basis_(basis),
      h0_(build_free_hamiltonian(basis, rotational_constant)),
      cos_theta_(build_cos_theta(basis)),
      h1_(-dipole * cos_theta_) {
  if (!std::isfinite(dipole)) {
    throw std::invalid_argument("RotorModel: dipole must be finite");
  }
}

RotorModel RotorModel::carbon_monoxide(int j_max) {
  return RotorModel(wavenumber_to_atomic(1.9312), 0.044, RotorBasis(j_max));
}

Eigen::MatrixXd RotorModel::hamiltonian(double field) const {
  Eigen::MatrixXd h = field * h1_;
  h.diagonal() += h0_;
  return h;
}

RotorModel RotorModel::scaled(double factor) const {
  return RotorModel(b_ * factor, mu0_ * factor, basis_);
}

StateVector ground_state(const RotorBasis& basis) {
  StateVector psi = StateVector::Zero(basis.dimension());
  psi[0] = 1.0;
  return psi;
}

double expectation(const StateVector& state, const Eigen::MatrixXd& op) {
  return state.dot(op.cast<Complex>() * state).real();
}

}  // namespace orient
