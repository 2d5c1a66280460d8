#pragma once

#include <Eigen/Dense>
#include <iosfwd>

#include "orient/rotor_model.hpp"

namespace orient {

/// Allowed subspace span{|j,0> : j <= j_opt}.
struct SubspaceSpec {
  int j_opt = 4;
};

/// Diagonal of the projector onto the allowed subspace (1 for j <= j_opt).
Eigen::VectorXd projector(const SubspaceSpec& spec, const RotorBasis& basis);

/// Maximizer of <cos theta> over states supported on j <= j_opt: the
/// principal eigenvector of the restricted cos(theta) block, with real
/// non-negative coefficients.
StateVector optimal_orientation_target(const SubspaceSpec& spec, const RotorModel& model);

/// CSV "j,coefficient_re,coefficient_im".
void write_target_csv(std::ostream& out, const StateVector& target);

}  // namespace orient
