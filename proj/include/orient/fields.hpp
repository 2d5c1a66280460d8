#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>

namespace orient {

/// Uniform grid t_k = k * dt, k = 0..n_steps, dt = t_f / n_steps.
class TimeGrid {
 public:
  /// Smallest step count accepted by the optimizers and run configs. The
  /// grid itself allows coarser grids for small propagation checks.
  static constexpr int kMinSteps = 100;

  TimeGrid(double t_f, int n_steps);

  double final_time() const { return t_f_; }
  int steps() const { return n_steps_; }
  int nodes() const { return n_steps_ + 1; }
  double dt() const { return t_f_ / n_steps_; }
  double time(int k) const { return k * dt(); }

  /// Same node count, new duration.
  TimeGrid with_final_time(double t_f) const { return TimeGrid(t_f, n_steps_); }

  bool same_nodes(const TimeGrid& other) const { return n_steps_ == other.n_steps_; }

 private:
  double t_f_;
  int n_steps_;
};

/// sin^2(pi t / t_f). Exactly zero at both endpoints.
double envelope_sin2(double t, double t_f);

/// sin^2 envelope on grid nodes, S_k = sin^2(pi min(k, n-k) / n), so it is
/// exactly zero at k = 0, n and exactly symmetric.
Eigen::VectorXd envelope_sin2(const TimeGrid& grid);

/// Real control field sampled on grid nodes.
///
/// The value `samples[k]` is held constant over the step [t_k, t_{k+1}];
/// the last sample is never applied by the propagator but is kept so that
/// the field is defined on every node.
struct ControlField {
  TimeGrid grid;
  Eigen::VectorXd samples;
  Eigen::VectorXd reference;
  Eigen::VectorXd envelope;

  /// Samples given, reference = samples, sin^2 envelope.
  ControlField(const TimeGrid& grid, Eigen::VectorXd samples);
  ControlField(const TimeGrid& grid, Eigen::VectorXd samples, Eigen::VectorXd reference,
               Eigen::VectorXd envelope);

  static ControlField zero(const TimeGrid& grid);

  /// Fluence-like integral of E(t)^2 by the trapezoid rule.
  double integral_of_square() const;
};

/// amplitude * exp(-4 ln2 (t - t0)^2 / fwhm^2).
ControlField gaussian_guess(const TimeGrid& grid, double center, double fwhm, double amplitude);

/// Re-label the grid to s in [0, 1]; samples untouched.
ControlField rescale_to_unit_interval(const ControlField& field);
/// Inverse of rescale_to_unit_interval.
ControlField rescale_from_unit_interval(const ControlField& field, double t_f);

/// Two-column CSV, header "t_au,field_au".
void write_field_csv(std::ostream& out, const ControlField& field);
void write_field_csv(const std::string& path, const ControlField& field);
/// Reads a field written by write_field_csv. Reference is set to the samples.
ControlField read_field_csv(std::istream& in);

}  // namespace orient
