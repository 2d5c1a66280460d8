#include "orient/runner.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "orient/error.hpp"

namespace orient {

namespace {

using nlohmann::json;

// Needed so that the written CSV bytes depend only on the values.
std::ofstream open_csv(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << std::setprecision(17);
  return out;
}

bool is_monotonic(const std::vector<IterationRecord>& records) {
  for (std::size_t k = 1; k < records.size(); ++k) {
    if (records[k].cost.total < records[k - 1].cost.total - 1e-9) return false;
  }
  return true;
}

void write_iterations(const std::filesystem::path& path, const std::vector<IterationRecord>& records,
                      double period) {
  std::ofstream out = open_csv(path);
  out << "iteration,J_total,terminal,penalty,constraint,subspace_average,final_time_au,final_time_periods\n";
  for (const auto& r : records) {
    out << r.iteration << ',' << r.cost.total << ',' << r.cost.terminal << ',' << r.cost.penalty << ','
        << r.cost.constraint << ',' << r.subspace_average << ',' << r.final_time << ',' << r.final_time / period
        << '\n';
  }
}

}  // namespace

RunOutcome run(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream* log) {
  const ResolvedConfig resolved = resolve(config);
  OptimizationConfig oc = build_optimization_config(config);
  const double period = resolved.period;
  if (log != nullptr && config.verbosity >= 1) {
    oc.observer = [log, period](const IterationRecord& r) {
      *log << "iter " << r.iteration << "  J=" << std::setprecision(10) << r.cost.total
           << "  t_f/T=" << r.final_time / period << '\n';
    };
  }

  OptimizationResult result = [&] {
    switch (config.mode) {
      case Mode::kSdc: return krotov_sdc(oc);
      case Mode::kTimeOpt: return optimize_time(oc);
      case Mode::kStandard: break;
    }
    return krotov_standard(oc);
  }();

  // Diagnostics always use an allowed subspace, j <= 4 unless configured.
  const SubspaceSpec diag{config.j_opt.value_or(std::min(4, config.j_max - 1))};
  const Eigen::VectorXd proj = projector(diag, resolved.model.basis());

  RunSummary s;
  const StateVector& psi_final = result.trajectory.back();
  s.fidelity = expectation(psi_final, resolved.model.cos_theta());
  s.terminal = result.last().cost.terminal;
  s.subspace_average = subspace_average(result.trajectory, proj);
  s.final_forbidden_population = 1.0 - subspace_population(psi_final, proj);
  s.final_time = result.final_time();
  s.final_time_periods = s.final_time / period;
  s.iterations = static_cast<int>(result.iterations.size()) - 1;
  s.converged = result.converged;
  s.monotonic = is_monotonic(result.iterations);

  // Field-free continuation past t_f on the same step density.
  const Eigen::VectorXd controlled = orientation_trace(result.trajectory, resolved.model);
  std::optional<Trajectory> free_traj;
  Eigen::VectorXd free_trace;
  if (config.free_evolution_periods > 0.0) {
    const double free_len = config.free_evolution_periods * period;
    const int free_steps =
        std::max(TimeGrid::kMinSteps,
                 static_cast<int>(std::lround(config.free_evolution_periods * config.steps_per_period)));
    free_traj = propagate_field_free(psi_final, resolved.model, TimeGrid(free_len, free_steps));
    free_trace = orientation_trace(*free_traj, resolved.model);
    if (config.free_evolution_periods >= 1.0) {
      try {
        s.fwhm_periods = orientation_fwhm(free_trace, free_traj->grid, 0.5 * period,
                                          std::min(1.5 * period, free_len), period);
      } catch (const PeakNotResolved& e) {
        if (log != nullptr) *log << "fwhm: " << e.what() << '\n';
      }
    }
  }

  std::filesystem::create_directories(out_dir);
  write_iterations(out_dir / "iterations.csv", result.iterations, period);
  {
    std::ofstream out = open_csv(out_dir / "field.csv");
    write_field_csv(out, result.field);
  }
  {
    std::ofstream out = open_csv(out_dir / "orientation.csv");
    out << "t_au,t_periods,cos_theta,forbidden_population\n";
    const TimeGrid& g = result.trajectory.grid;
    for (int k = 0; k < g.nodes(); ++k) {
      const double t = g.time(k);
      out << t << ',' << t / period << ',' << controlled[k] << ','
          << 1.0 - subspace_population(result.trajectory[k], proj) << '\n';
    }
    if (free_traj) {
      for (int k = 1; k < free_traj->size(); ++k) {
        const double t = s.final_time + free_traj->grid.time(k);
        out << t << ',' << t / period << ',' << free_trace[k] << ','
            << 1.0 - subspace_population((*free_traj)[k], proj) << '\n';
      }
    }
  }
  if (config.objective == ObjectiveKind::kTarget) {
    std::ofstream out = open_csv(out_dir / "target.csv");
    write_target_csv(out, oc.objective.target());
  }
  if (config.verbosity >= 2) {
    std::ofstream out = open_csv(out_dir / "trajectory.csv");
    write_trajectory_csv(out, result.trajectory);
  }

  json summary = {
      {"mode", to_string(config.mode)},
      {"fidelity", s.fidelity},
      {"terminal", s.terminal},
      {"J_total", result.last().cost.total},
      {"subspace_average", s.subspace_average},
      {"final_forbidden_population", s.final_forbidden_population},
      {"fwhm_periods", s.fwhm_periods ? json(*s.fwhm_periods) : json(nullptr)},
      {"final_time_au", s.final_time},
      {"final_time_periods", s.final_time_periods},
      {"iterations", s.iterations},
      {"converged", s.converged},
      {"monotonic", s.monotonic},
      {"config", json::parse(serialize_config(config))},
      {"resolved", json::parse(resolved_echo(config))},
  };
  std::ofstream out(out_dir / "summary.json", std::ios::binary);
  if (!out) throw Error("cannot write " + (out_dir / "summary.json").string());
  out << summary.dump(2) << '\n';

  return {std::move(result), s};
}

namespace {

bool optional_key(const std::string& param) {
  return param == "j_opt" || param == "mu_au" || param == "mu_times_final_time";
}

json numeric_slot(const json& doc, const std::string& param) {
  if (!doc.contains(param) && !optional_key(param)) throw ConfigError(param, "not a configuration key");
  const json current = doc.contains(param) ? doc[param] : (param == "j_opt" ? json(0) : json(0.0));
  if (!current.is_number()) throw ConfigError(param, "not a numeric key");
  return current;
}

}  // namespace

RunConfig with_parameter(const RunConfig& base, const std::string& param, double value) {
  json doc = json::parse(serialize_config(base));
  if (numeric_slot(doc, param).is_number_integer()) {
    if (value != std::round(value)) throw ConfigError(param, "expects an integer value");
    doc[param] = static_cast<long long>(std::lround(value));
  } else {
    doc[param] = value;
  }
  if (param == "mu_au") doc.erase("mu_times_final_time");
  if (param == "mu_times_final_time") doc.erase("mu_au");
  return parse_config(doc.dump());
}

std::vector<SweepRow> sweep(const RunConfig& base, const std::string& param, const std::vector<double>& values,
                            const std::filesystem::path& out_dir, int jobs, std::ostream* log) {
  if (values.empty()) throw ConfigError("values", "sweep needs at least one value");
  if (jobs < 1) throw ConfigError("jobs", "must be >= 1");
  // A bad parameter name fails the whole sweep; bad values fail single runs.
  numeric_slot(json::parse(serialize_config(base)), param);

  std::vector<SweepRow> rows(values.size());
  std::vector<std::string> dirs(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::ostringstream name;
    name << param << '=' << values[i];
    dirs[i] = name.str();
  }

  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < values.size(); i = next++) {
      SweepRow& row = rows[i];
      row.value = values[i];
      try {
        RunConfig c = with_parameter(base, param, values[i]);
        RunOutcome outcome = run(c, out_dir / dirs[i], nullptr);
        row.final_j = outcome.result.last().cost.total;
        row.summary = outcome.summary;
        row.status = "ok";
      } catch (const std::exception& e) {
        row.status = e.what();
      }
      if (log != nullptr) {
        std::lock_guard lock(log_mutex);
        *log << dirs[i] << ": " << row.status;
        if (row.summary) *log << "  t_f/T=" << row.summary->final_time_periods;
        *log << '\n';
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const int n = std::min<int>(jobs, static_cast<int>(values.size()));
    for (int w = 0; w < n; ++w) pool.emplace_back(worker);
  }

  std::filesystem::create_directories(out_dir);
  std::ofstream out = open_csv(out_dir / "sweep.csv");
  out << "value,final_time_au,final_time_periods,final_J,terminal,status\n";
  for (const auto& row : rows) {
    out << row.value << ',';
    if (row.summary) {
      out << row.summary->final_time << ',' << row.summary->final_time_periods << ',' << row.final_j << ','
          << row.summary->terminal << ",ok\n";
    } else {
      // Keep the message on one CSV field.
      std::string msg = row.status;
      for (char& ch : msg) {
        if (ch == ',' || ch == '\n' || ch == '"') ch = ';';
      }
      out << ",,,," << msg << '\n';
    }
  }
  return rows;
}

}  // namespace orient
