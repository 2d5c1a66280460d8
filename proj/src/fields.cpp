#include "orient/fields.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace orient {

TimeGrid::TimeGrid(double t_f, int n_steps) : t_f_(t_f), n_steps_(n_steps) {
  if (!(t_f > 0.0) || !std::isfinite(t_f)) {
    throw std::invalid_argument("TimeGrid: t_f must be positive and finite");
  }
  if (n_steps < 1) {
    throw std::invalid_argument("TimeGrid: n_steps must be >= 1");
  }
}

double envelope_sin2(double t, double t_f) {
  if (!(t >= 0.0 && t <= t_f)) {
    throw std::out_of_range("envelope_sin2: t outside [0, t_f]");
  }
  if (t == 0.0 || t == t_f) return 0.0;
  const double s = std::sin(std::numbers::pi * t / t_f);
  return s * s;
}

Eigen::VectorXd envelope_sin2(const TimeGrid& grid) {
  const int n = grid.steps();
  Eigen::VectorXd env(grid.nodes());
  for (int k = 0; k <= n; ++k) {
    const int m = std::min(k, n - k);
    const double s = std::sin(std::numbers::pi * m / n);
    env[k] = m == 0 ? 0.0 : s * s;
  }
  return env;
}

ControlField::ControlField(const TimeGrid& g, Eigen::VectorXd s)
    : grid(g), samples(std::move(s)), reference(samples), envelope(envelope_sin2(g)) {
  if (samples.size() != grid.nodes()) {
    throw std::invalid_argument("ControlField: sample count does not match grid");
  }
  if (!samples.allFinite()) throw std::invalid_argument("ControlField: non-finite sample");
}

ControlField::ControlField(const TimeGrid& g, Eigen::VectorXd s, Eigen::VectorXd r,
                           Eigen::VectorXd e)
    : grid(g), samples(std::move(s)), reference(std::move(r)), envelope(std::move(e)) {
  if (samples.size() != grid.nodes() || reference.size() != grid.nodes() ||
      envelope.size() != grid.nodes()) {
    throw std::invalid_argument("ControlField: vector length does not match grid");
  }
  if (!samples.allFinite() || !reference.allFinite() || !envelope.allFinite()) {
    throw std::invalid_argument("ControlField: non-finite value");
  }
}

ControlField ControlField::zero(const TimeGrid& grid) {
  return ControlField(grid, Eigen::VectorXd::Zero(grid.nodes()));
}

double ControlField::integral_of_square() const {
  const Eigen::ArrayXd sq = samples.array().square();
  const int n = grid.steps();
  return grid.dt() * (sq.sum() - 0.5 * (sq[0] + sq[n]));
}

ControlField gaussian_guess(const TimeGrid& grid, double center, double fwhm, double amplitude) {
  if (!(fwhm > 0.0)) throw std::invalid_argument("gaussian_guess: fwhm must be positive");
  if (!(center >= 0.0 && center <= grid.final_time())) {
    throw std::invalid_argument("gaussian_guess: center outside [0, t_f]");
  }
  const double rate = 4.0 * std::numbers::ln2 / (fwhm * fwhm);
  Eigen::VectorXd samples(grid.nodes());
  for (int k = 0; k < grid.nodes(); ++k) {
    const double x = grid.time(k) - center;
    samples[k] = amplitude * std::exp(-rate * x * x);
  }
  return ControlField(grid, std::move(samples));
}

ControlField rescale_to_unit_interval(const ControlField& field) {
  return ControlField(field.grid.with_final_time(1.0), field.samples, field.reference,
                      field.envelope);
}

ControlField rescale_from_unit_interval(const ControlField& field, double t_f) {
  return ControlField(field.grid.with_final_time(t_f), field.samples, field.reference,
                      field.envelope);
}

void write_field_csv(std::ostream& out, const ControlField& field) {
  out << "t_au,field_au\n" << std::setprecision(17);
  for (int k = 0; k < field.grid.nodes(); ++k) {
    out << field.grid.time(k) << ',' << field.samples[k] << '\n';
  }
}

void write_field_csv(const std::string& path, const ControlField& field) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_field_csv(out, field);
}

ControlField read_field_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("field CSV: missing header");
  std::vector<double> times;
  std::vector<double> values;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::invalid_argument("field CSV line " + std::to_string(line_no) + ": expected 2 columns");
    }
    try {
      times.push_back(std::stod(line.substr(0, comma)));
      values.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw std::invalid_argument("field CSV line " + std::to_string(line_no) + ": not a number");
    }
  }
  if (times.size() < 2) throw std::invalid_argument("field CSV: too few rows");
  const int n = static_cast<int>(times.size()) - 1;
  const TimeGrid grid(times.back(), n);
  for (int k = 0; k <= n; ++k) {
    if (std::abs(times[k] - grid.time(k)) > 1e-9 * grid.final_time()) {
      throw std::invalid_argument("field CSV: time column is not a uniform grid from 0");
    }
  }
  return ControlField(grid, Eigen::Map<Eigen::VectorXd>(values.data(), n + 1));
}

}  // namespace orient
