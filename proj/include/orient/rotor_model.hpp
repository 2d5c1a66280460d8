#pragma once

#include <Eigen/Dense>
#include <complex>

#include "orient/units.hpp"

namespace orient {

using Complex = std::complex<double>;
using StateVector = Eigen::VectorXcd;

using units::wavenumber_to_atomic;

/// Truncated {|j, m=0>} basis. Index i is the state |j=i, 0>.
class RotorBasis {
 public:
  explicit RotorBasis(int j_max);

  int j_max() const { return j_max_; }
  int dimension() const { return j_max_ + 1; }

 private:
  int j_max_;
};

/// Diagonal of B J^2 in the m=0 basis: entry i is B i (i+1).
Eigen::VectorXd build_free_hamiltonian(const RotorBasis& basis, double rotational_constant);

/// Dense symmetric tridiagonal matrix of cos(theta) in the m=0 basis.
///
/// <j|cos|j+1> = (j+1) / sqrt((2j+1)(2j+3)), diagonal zero.
Eigen::MatrixXd build_cos_theta(const RotorBasis& basis);

/// Revival period pi / B of any m=0 wavepacket (j(j+1) is always even).
double rotational_period(double rotational_constant);

/// Linear rigid rotor in a linearly polarized field,
/// H(t) = B J^2 - E(t) mu0 cos(theta), in atomic units.
///
/// Immutable after construction. `scaled(f)` yields the model whose
/// Hamiltonian is f * H, which is how propagation on the rescaled time
/// s = t / t_f is expressed.
class RotorModel {
 public:
  RotorModel(double rotational_constant, double dipole, const RotorBasis& basis);

  /// CO: B = 1.9312 cm^-1, mu0 = 0.044 a.u.
  static RotorModel carbon_monoxide(int j_max = 15);

  double rotational_constant() const { return b_; }
  double dipole() const { return mu0_; }
  const RotorBasis& basis() const { return basis_; }
  int dimension() const { return basis_.dimension(); }

  const Eigen::VectorXd& free_energies() const { return h0_; }
  const Eigen::MatrixXd& cos_theta() const { return cos_theta_; }
  /// H1 = -mu0 cos(theta).
  const Eigen::MatrixXd& interaction() const { return h1_; }

  /// H0 + field * H1 as a dense real symmetric matrix.
  Eigen::MatrixXd hamiltonian(double field) const;

  double rotational_period() const { return orient::rotational_period(b_); }

  RotorModel scaled(double factor) const;

 private:
  double b_;
  double mu0_;
  RotorBasis basis_;
  Eigen::VectorXd h0_;
  Eigen::MatrixXd cos_theta_;
  Eigen::MatrixXd h1_;
};

/// |j=0, m=0>.
StateVector ground_state(const RotorBasis& basis);

/// <a|op|a> for a real symmetric operator.
double expectation(const StateVector& state, const Eigen::MatrixXd& op);

}  // namespace orient
