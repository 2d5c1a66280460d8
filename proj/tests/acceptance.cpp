// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "oracles.hpp"
#include "orient/config.hpp"
#include "orient/error.hpp"
#include "orient/runner.hpp"

using namespace orient;
namespace fs = std::filesystem;

namespace {

// Tolerances and thresholds.
constexpr double kMonotoneSlack = 1e-9;
constexpr double kOracleTol = 1e-8;
constexpr double kNormTol = 1e-10;
constexpr double kRevivalTol = 1e-9;
constexpr double kStandardFidelity = 0.90;
constexpr double kSdcFidelity = 0.85;
constexpr double kForbiddenRatio = 50.0;
constexpr double kFwhmRatioLo = 1.2, kFwhmRatioHi = 2.1;
constexpr double kFwhmStandard = 0.086, kFwhmSdc = 0.136, kFwhmRel = 0.30;
constexpr double kBasinLow = 0.31, kBasinHigh = 0.77, kBasinTol = 0.06, kBasinTerminalGap = 0.05;
constexpr double kTargetTol = 1e-12;
constexpr double kReductionTol = 1e-10;
constexpr double kRuntimeBudgetSeconds = 600.0;

const fs::path kConfigs = fs::path(ORIENT_SOURCE_DIR) / "configs";
const fs::path kOut = fs::path(ORIENT_BINARY_DIR) / "acceptance_out";

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("criterion %2d: %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. Monotonicity over randomized configurations of every algorithm.
void monotonicity() {
  const RotorModel model = RotorModel::carbon_monoxide();
  const double period = model.rotational_period();
  const StateVector target = optimal_orientation_target(SubspaceSpec{4}, model);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> log_lambda(0.0, 2.0), t_frac(0.2, 1.2), log_amp(-3.0, -1.5), u01(0, 1);

  int runs = 0, violations = 0, errors = 0;
  double worst = 0.0;
  std::string first_error;
  for (Mode mode : {Mode::kStandard, Mode::kSdc, Mode::kTimeOpt}) {
    for (int i = 0; i < 20; ++i) {
      const double t_f = t_frac(rng) * period;
      const TimeGrid grid(t_f, std::max(TimeGrid::kMinSteps, static_cast<int>(1024 * t_f / period)));
      OptimizationConfig c{.model = model,
                           .guess = gaussian_guess(grid, u01(rng) * t_f, units::femtoseconds_to_atomic(144.0),
                                                   std::pow(10.0, log_amp(rng))),
                           .initial = ground_state(model.basis()),
                           .objective = TerminalObjective::state_overlap(target)};
      c.lambda = std::pow(10.0, log_lambda(rng));
      c.subspace = SubspaceSpec{4};
      c.mu = mode == Mode::kSdc ? 50.0 * u01(rng) / t_f : 0.0;
      c.epsilon = mode == Mode::kTimeOpt ? 5000.0 * period : 0.0;
      c.max_iterations = 8;
      c.tolerance = 0.0;
      ++runs;
      try {
        const OptimizationResult r = mode == Mode::kStandard ? krotov_standard(c)
                                     : mode == Mode::kSdc    ? krotov_sdc(c)
                                                             : optimize_time(c);
        for (std::size_t k = 1; k < r.iterations.size(); ++k) {
          const double drop = r.iterations[k - 1].cost.total - r.iterations[k].cost.total;
          worst = std::max(worst, drop);
          if (drop > kMonotoneSlack) ++violations;
        }
      } catch (const std::exception& e) {
        ++errors;
        if (first_error.empty()) first_error = e.what();
      }
    }
  }
  report(1, violations == 0 && errors == 0,
         fmt("%d runs x 8 iterations, %d violations, largest decrease %.2e, %d errors %s", runs, violations, worst,
             errors, first_error.c_str()));
}

// 2. Propagators against the RK4 step-halving oracle, and norm conservation.
void propagator_oracle() {
  const RotorModel small = RotorModel::carbon_monoxide(3);
  const double period = small.rotational_period();
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  const Eigen::VectorXd p = projector(SubspaceSpec{1}, small.basis());
  double err_f = 0.0, err_b = 0.0, err_i = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const TimeGrid grid(period, 50);
    Eigen::VectorXd v(grid.nodes());
    for (auto& x : v) x = u(rng);
    const ControlField f(grid, v);
    std::vector<Eigen::MatrixXd> hams;
    for (int k = 0; k < grid.steps(); ++k) hams.push_back(small.hamiltonian(f.samples[k]));

    const StateVector psi0 = oracle::random_state(rng, 4, 4);
    const StateVector chi_f = oracle::random_state(rng, 4, 4);
    const double mu = 10.0 / grid.final_time();
    const auto psi = propagate_forward(psi0, f, small);
    const auto chi = propagate_backward_homogeneous(chi_f, f, small);
    const auto chi_src = propagate_backward_inhomogeneous(chi_f, f, small, mu, p, psi);
    const auto ref_f = oracle::forward(hams, psi0, grid.dt());
    const auto ref_b = oracle::backward(hams, chi_f, grid.dt());
    const auto ref_i = oracle::backward_with_source(hams, chi_f, ref_f, mu, p, grid.dt());
    for (int k = 0; k < grid.nodes(); ++k) {
      err_f = std::max(err_f, (psi[k] - ref_f[k]).cwiseAbs().maxCoeff());
      err_b = std::max(err_b, (chi[k] - ref_b[k]).cwiseAbs().maxCoeff());
      err_i = std::max(err_i, (chi_src[k] - ref_i[k]).cwiseAbs().maxCoeff());
    }
  }

  const RotorModel co = RotorModel::carbon_monoxide();
  const TimeGrid grid(co.rotational_period(), 4096);
  Eigen::VectorXd v(grid.nodes());
  for (auto& x : v) x = u(rng);
  const auto traj = propagate_forward(ground_state(co.basis()), ControlField(grid, v), co);
  double norm_err = 0.0;
  for (int k = 0; k < traj.size(); ++k) norm_err = std::max(norm_err, std::abs(traj[k].norm() - 1.0));

  report(2, err_f <= kOracleTol && err_b <= kOracleTol && err_i <= kOracleTol && norm_err <= kNormTol,
         fmt("max error forward %.1e, backward %.1e, inhomogeneous %.1e; norm drift %.1e", err_f, err_b, err_i,
             norm_err));
}

// 3. Field-free revival of <cos theta>.
void revival() {
  const RotorModel co = RotorModel::carbon_monoxide();
  const double period = co.rotational_period();
  std::mt19937_64 rng(91);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const auto traj = propagate_field_free(oracle::random_state(rng, 16, 16), co, TimeGrid(2.0 * period, 2048));
    const auto trace = orientation_trace(traj, co);
    for (int k = 0; k <= 1024; ++k) worst = std::max(worst, std::abs(trace[k + 1024] - trace[k]));
  }
  report(3, worst <= kRevivalTol, fmt("10 states, max |<cos>(t+T) - <cos>(t)| = %.1e", worst));
}

// 8. Optimal target against random subspace states and the Legendre-root oracle.
void target_optimality() {
  const RotorModel co = RotorModel::carbon_monoxide();
  const StateVector phi = optimal_orientation_target(SubspaceSpec{4}, co);
  const double best = expectation(phi, co.cos_theta());
  std::mt19937_64 rng(5);
  double best_random = -1.0;
  for (int i = 0; i < 10000; ++i) {
    best_random = std::max(best_random, expectation(oracle::random_state(rng, 16, 5), co.cos_theta()));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> dense(co.cos_theta().topLeftCorner(5, 5));
  const double dense_max = dense.eigenvalues().maxCoeff();
  const double root = oracle::best_orientation(4);
  const bool ok = best_random <= best + kTargetTol && std::abs(best - dense_max) <= kTargetTol &&
                  std::abs(best - root) <= kTargetTol;
  report(8, ok,
         fmt("<cos> target %.15f, dense eigensolver %.15f, Legendre root %.15f, best of 1e4 random %.6f", best,
             dense_max, root, best_random));
}

// 9. sdc(mu=0) == standard, and time optimization with epsilon=0 == standard.
void reductions() {
  const RotorModel co = RotorModel::carbon_monoxide();
  const double period = co.rotational_period();
  const TimeGrid grid(0.6 * period, 2458);
  OptimizationConfig c{.model = co,
                       .guess = gaussian_guess(grid, 0.2 * period, units::femtoseconds_to_atomic(144.0), 5e-3),
                       .initial = ground_state(co.basis()),
                       .objective = TerminalObjective::state_overlap(optimal_orientation_target({4}, co))};
  c.lambda = 5.0;
  c.subspace = SubspaceSpec{4};
  c.max_iterations = 20;
  c.tolerance = 0.0;
  const auto standard = krotov_standard(c);
  const auto sdc = krotov_sdc(c);
  const auto timed = optimize_time(c);
  double d_sdc = 0.0, d_time = 0.0;
  bool same_length = standard.iterations.size() == sdc.iterations.size() &&
                     standard.iterations.size() == timed.iterations.size();
  for (std::size_t k = 0; same_length && k < standard.iterations.size(); ++k) {
    d_sdc = std::max(d_sdc, std::abs(standard.iterations[k].cost.total - sdc.iterations[k].cost.total));
    d_time = std::max(d_time, std::abs(standard.iterations[k].cost.total - timed.iterations[k].cost.total));
  }
  const double field_diff = (standard.field.samples - timed.field.samples).cwiseAbs().maxCoeff();
  report(9, same_length && d_sdc <= kReductionTol && d_time <= kReductionTol && field_diff <= kReductionTol,
         fmt("max per-iteration |dJ|: sdc(mu=0) %.1e, time(eps=0) %.1e; field difference %.1e", d_sdc, d_time,
             field_diff));
}

// 4, 5, 6, 10: the two preset runs.
void preset_runs() {
  const RunConfig standard_cfg = load_config((kConfigs / "fig1_standard.json").string());
  const RunConfig sdc_cfg = load_config((kConfigs / "fig1_sdc.json").string());

  auto t0 = std::chrono::steady_clock::now();
  const RunOutcome standard = run(standard_cfg, kOut / "fig1_standard");
  const double t_standard = seconds_since(t0);
  const RunSummary& s = standard.summary;
  report(4, s.fidelity >= kStandardFidelity && t_standard < kRuntimeBudgetSeconds,
         fmt("fidelity %.4f (>= %.2f) after %d iterations in %.0f s, monotonic %s", s.fidelity, kStandardFidelity,
             s.iterations, t_standard, s.monotonic ? "yes" : "no"));

  t0 = std::chrono::steady_clock::now();
  const RunOutcome sdc = run(sdc_cfg, kOut / "fig1_sdc");
  const double t_sdc = seconds_since(t0);
  const RunSummary& d = sdc.summary;
  const double ratio = s.final_forbidden_population / d.final_forbidden_population;
  report(5, d.fidelity >= kSdcFidelity && ratio >= kForbiddenRatio && t_sdc < kRuntimeBudgetSeconds,
         fmt("fidelity %.4f (>= %.2f); forbidden population %.2e vs %.2e, ratio %.0f (>= %.0f); %.0f s",
             d.fidelity, kSdcFidelity, d.final_forbidden_population, s.final_forbidden_population, ratio,
             kForbiddenRatio, t_sdc));

  if (s.fwhm_periods && d.fwhm_periods) {
    const double a = *s.fwhm_periods, b = *d.fwhm_periods, r = b / a;
    const bool ok = b > a && r >= kFwhmRatioLo && r <= kFwhmRatioHi &&
                    std::abs(a - kFwhmStandard) <= kFwhmRel * kFwhmStandard &&
                    std::abs(b - kFwhmSdc) <= kFwhmRel * kFwhmSdc;
    report(6, ok, fmt("FWHM standard %.4f, constrained %.4f (T_per), ratio %.2f", a, b, r));
  } else {
    report(6, false, "revival peak not resolved");
  }

  run(sdc_cfg, kOut / "fig1_sdc_repeat");
  bool identical = true;
  std::string differing;
  for (const char* f : {"iterations.csv", "field.csv", "orientation.csv"}) {
    if (read_file(kOut / "fig1_sdc" / f) != read_file(kOut / "fig1_sdc_repeat" / f)) {
      identical = false;
      differing += std::string(" ") + f;
    }
  }
  report(10, identical, identical ? "two runs of fig1_sdc.json: all CSVs byte-identical" : "differs:" + differing);
}

// 7. Two attraction points of the time optimization.
void attraction_points() {
  const RunConfig cfg = load_config((kConfigs / "fig2_sweep.json").string());
  const std::vector<double> low{0.25, 0.3, 0.35, 0.4, 0.45, 0.5, 0.55, 0.6};
  const std::vector<double> high{0.75, 0.8, 0.85, 0.9};
  std::vector<double> values = low;
  values.insert(values.end(), high.begin(), high.end());
  const int jobs = std::max(1u, std::thread::hardware_concurrency());
  const auto t0 = std::chrono::steady_clock::now();
  const auto rows = sweep(cfg, "final_time_periods", values, kOut / "fig2_sweep", jobs);

  bool ok = true;
  double lo_min = 9, lo_max = -9, hi_min = 9, hi_max = -9, lo_term = 0, hi_term = 0;
  std::string detail;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].summary) {
      ok = false;
      detail += fmt(" [%.2f failed: %s]", rows[i].value, rows[i].status.c_str());
      continue;
    }
    const double t = rows[i].summary->final_time_periods;
    const bool is_low = i < low.size();
    const double centre = is_low ? kBasinLow : kBasinHigh;
    if (std::abs(t - centre) > kBasinTol) ok = false;
    if (!rows[i].summary->monotonic) ok = false;
    (is_low ? lo_term : hi_term) += rows[i].summary->terminal / (is_low ? low.size() : high.size());
    if (is_low) lo_min = std::min(lo_min, t), lo_max = std::max(lo_max, t);
    else hi_min = std::min(hi_min, t), hi_max = std::max(hi_max, t);
  }
  if (std::abs(lo_term - hi_term) > kBasinTerminalGap) ok = false;
  // Starts 0.30, 0.35, 0.40 sit at indices 1..3; reported, not graded.
  double spread = 0.0;
  if (rows[1].summary && rows[2].summary && rows[3].summary) {
    const double a = rows[1].summary->final_time_periods, b = rows[2].summary->final_time_periods,
                 c = rows[3].summary->final_time_periods;
    spread = std::max({a, b, c}) - std::min({a, b, c});
  }
  report(7, ok,
         fmt("final t_f/T_per: starts 0.25-0.6 -> [%.3f, %.3f], starts 0.75-0.9 -> [%.3f, %.3f]; "
             "mean terminal %.4f vs %.4f; spread for starts 0.30-0.40 %.3f; %.0f s",
             lo_min, lo_max, hi_min, hi_max, lo_term, hi_term, spread, seconds_since(t0)) +
             detail);
}

void guarded(const std::function<void()>& check, std::initializer_list<int> ids) {
  try {
    check();
  } catch (const std::exception& e) {
    for (int id : ids) report(id, false, std::string("error: ") + e.what());
  }
}

}  // namespace

int main() {
  fs::remove_all(kOut);
  guarded(propagator_oracle, {2});
  guarded(revival, {3});
  guarded(target_optimality, {8});
  guarded(reductions, {9});
  guarded(monotonicity, {1});
  guarded(preset_runs, {4, 5, 6, 10});
  guarded(attraction_points, {7});
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
