#include "orient/targets.hpp"

#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>

namespace orient {

namespace {

void validate(const SubspaceSpec& spec, const RotorBasis& basis) {
  if (spec.j_opt <= 0 || spec.j_opt >= basis.j_max()) {
    throw std::invalid_argument("SubspaceSpec: need 0 < j_opt < j_max, got j_opt=" +
                                std::to_string(spec.j_opt));
  }
}

}  // namespace

Eigen::VectorXd projector(const SubspaceSpec& spec, const RotorBasis& basis) {
  validate(spec, basis);
  Eigen::VectorXd p = Eigen::VectorXd::Zero(basis.dimension());
  p.head(spec.j_opt + 1).setOnes();
  return p;
}

StateVector optimal_orientation_target(const SubspaceSpec& spec, const RotorModel& model) {
  validate(spec, model.basis());
  const int n = spec.j_opt + 1;
  const Eigen::MatrixXd block = model.cos_theta().topLeftCorner(n, n);

  // Symmetric tridiagonal with positive off-diagonals: the top eigenvector is
  // of one sign (Perron-Frobenius on block + I).
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(block);
  Eigen::VectorXd top = eig.eigenvectors().col(n - 1);
  if (top.sum() < 0.0) top = -top;
  top = top.cwiseMax(0.0);
  top.normalize();

  StateVector target = StateVector::Zero(model.dimension());
  target.head(n) = top.cast<Complex>();
  return target;
}

void write_target_csv(std::ostream& out, const StateVector& target) {
  out << "j,coefficient_re,coefficient_im\n" << std::setprecision(17);
  for (Eigen::Index j = 0; j < target.size(); ++j) {
    out << j << ',' << target[j].real() << ',' << target[j].imag() << '\n';
  }
}

}  // namespace orient
