#include "orient/config.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "orient/units.hpp"

namespace orient {

using nlohmann::json;

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "mode",           "rotational_constant_cm", "dipole_au",          "j_max",
      "final_time_periods", "steps_per_period",   "guess_fwhm_fs",      "guess_center_periods",
      "guess_amplitude_au", "objective",          "j_opt",              "lambda",
      "mu_au",          "mu_times_final_time",    "epsilon",            "max_iterations",
      "tolerance",      "patience",               "backtrack_time_step", "free_evolution_periods",
      "output_dir",     "verbosity"};
  return keys;
}

double get_number(const json& doc, const std::string& key) {
  const json& v = doc.at(key);
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(key, "must be finite");
  return x;
}

int get_int(const json& doc, const std::string& key) {
  const json& v = doc.at(key);
  if (!v.is_number_integer()) throw ConfigError(key, "expected an integer");
  return v.get<int>();
}

std::string get_string(const json& doc, const std::string& key) {
  const json& v = doc.at(key);
  if (!v.is_string()) throw ConfigError(key, "expected a string");
  return v.get<std::string>();
}

template <typename T, typename Getter>
void read_optional(const json& doc, const std::string& key, T& out, Getter get) {
  if (doc.contains(key)) out = get(doc, key);
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key, what);
}

void validate(const RunConfig& c) {
  require(c.rotational_constant_cm > 0.0, "rotational_constant_cm", "must be > 0");
  require(c.j_max >= 1, "j_max", "must be >= 1");
  require(c.final_time_periods > 0.0, "final_time_periods", "t_f must be > 0");
  require(c.steps_per_period > 0, "steps_per_period", "must be > 0");
  require(c.guess_fwhm_fs > 0.0, "guess_fwhm_fs", "must be > 0");
  require(c.guess_center_periods >= 0.0 && c.guess_center_periods <= c.final_time_periods,
          "guess_center_periods", "must lie in [0, final_time_periods]");
  require(c.lambda > 0.0, "lambda", "must be > 0");
  require(!(c.mu_au && c.mu_times_final_time), "mu_au", "give either mu_au or mu_times_final_time, not both");
  if (c.mu_au) require(*c.mu_au >= 0.0, "mu_au", "must be >= 0");
  if (c.mu_times_final_time) require(*c.mu_times_final_time >= 0.0, "mu_times_final_time", "must be >= 0");
  require(c.epsilon >= 0.0, "epsilon", "must be >= 0");
  require(c.max_iterations >= 1, "max_iterations", "must be >= 1");
  require(c.tolerance >= 0.0, "tolerance", "must be >= 0");
  require(c.patience >= 1, "patience", "must be >= 1");
  require(c.free_evolution_periods >= 0.0, "free_evolution_periods", "must be >= 0");
  require(c.verbosity >= 0 && c.verbosity <= 2, "verbosity", "must be 0, 1 or 2");
  if (c.j_opt) require(*c.j_opt > 0 && *c.j_opt < c.j_max, "j_opt", "need 0 < j_opt < j_max");

  if (c.mode == Mode::kSdc) {
    require(c.j_opt.has_value(), "j_opt", "required for mode sdc");
    require(c.mu_au || c.mu_times_final_time, "mu_au", "mode sdc needs mu_au or mu_times_final_time");
  }
  if (c.objective == ObjectiveKind::kTarget) require(c.j_opt.has_value(), "j_opt", "required for objective target");
  if (c.mode == Mode::kTimeOpt) {
    require(c.objective == ObjectiveKind::kTarget, "objective", "mode time-opt needs objective \"target\"");
  }
}

}  // namespace

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::kStandard: return "standard";
    case Mode::kSdc: return "sdc";
    case Mode::kTimeOpt: return "time-opt";
  }
  return "?";
}

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("json", e.what());
  }
  if (!doc.is_object()) throw ConfigError("json", "top level must be an object");
  for (const auto& [key, value] : doc.items()) {
    if (!known_keys().contains(key)) throw ConfigError(key, "unknown key");
  }
  for (const char* key : {"mode", "lambda", "final_time_periods"}) {
    if (!doc.contains(key)) throw ConfigError(key, "missing required key");
  }

  RunConfig c;
  const std::string mode = get_string(doc, "mode");
  if (mode == "standard") c.mode = Mode::kStandard;
  else if (mode == "sdc") c.mode = Mode::kSdc;
  else if (mode == "time-opt") c.mode = Mode::kTimeOpt;
  else throw ConfigError("mode", "expected standard, sdc or time-opt, got \"" + mode + "\"");

  c.objective = c.mode == Mode::kTimeOpt ? ObjectiveKind::kTarget : ObjectiveKind::kCosTheta;
  if (doc.contains("objective")) {
    const std::string obj = get_string(doc, "objective");
    if (obj == "cos_theta") c.objective = ObjectiveKind::kCosTheta;
    else if (obj == "target") c.objective = ObjectiveKind::kTarget;
    else throw ConfigError("objective", "expected cos_theta or target, got \"" + obj + "\"");
  }

  c.lambda = get_number(doc, "lambda");
  c.final_time_periods = get_number(doc, "final_time_periods");
  read_optional(doc, "rotational_constant_cm", c.rotational_constant_cm, get_number);
  read_optional(doc, "dipole_au", c.dipole_au, get_number);
  read_optional(doc, "j_max", c.j_max, get_int);
  read_optional(doc, "steps_per_period", c.steps_per_period, get_int);
  read_optional(doc, "guess_fwhm_fs", c.guess_fwhm_fs, get_number);
  read_optional(doc, "guess_center_periods", c.guess_center_periods, get_number);
  read_optional(doc, "guess_amplitude_au", c.guess_amplitude_au, get_number);
  if (doc.contains("j_opt")) c.j_opt = get_int(doc, "j_opt");
  if (doc.contains("mu_au")) c.mu_au = get_number(doc, "mu_au");
  if (doc.contains("mu_times_final_time")) c.mu_times_final_time = get_number(doc, "mu_times_final_time");
  read_optional(doc, "epsilon", c.epsilon, get_number);
  read_optional(doc, "max_iterations", c.max_iterations, get_int);
  read_optional(doc, "tolerance", c.tolerance, get_number);
  read_optional(doc, "patience", c.patience, get_int);
  if (doc.contains("backtrack_time_step")) {
    if (!doc["backtrack_time_step"].is_boolean()) throw ConfigError("backtrack_time_step", "expected true or false");
    c.backtrack_time_step = doc["backtrack_time_step"].get<bool>();
  }
  read_optional(doc, "free_evolution_periods", c.free_evolution_periods, get_number);
  read_optional(doc, "output_dir", c.output_dir, get_string);
  read_optional(doc, "verbosity", c.verbosity, get_int);

  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("path", "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
  json doc = {
      {"mode", to_string(c.mode)},
      {"rotational_constant_cm", c.rotational_constant_cm},
      {"dipole_au", c.dipole_au},
      {"j_max", c.j_max},
      {"final_time_periods", c.final_time_periods},
      {"steps_per_period", c.steps_per_period},
      {"guess_fwhm_fs", c.guess_fwhm_fs},
      {"guess_center_periods", c.guess_center_periods},
      {"guess_amplitude_au", c.guess_amplitude_au},
      {"objective", c.objective == ObjectiveKind::kTarget ? "target" : "cos_theta"},
      {"lambda", c.lambda},
      {"epsilon", c.epsilon},
      {"max_iterations", c.max_iterations},
      {"tolerance", c.tolerance},
      {"patience", c.patience},
      {"backtrack_time_step", c.backtrack_time_step},
      {"free_evolution_periods", c.free_evolution_periods},
      {"output_dir", c.output_dir},
      {"verbosity", c.verbosity},
  };
  if (c.j_opt) doc["j_opt"] = *c.j_opt;
  if (c.mu_au) doc["mu_au"] = *c.mu_au;
  if (c.mu_times_final_time) doc["mu_times_final_time"] = *c.mu_times_final_time;
  return doc.dump(2);
}

ResolvedConfig resolve(const RunConfig& c) {
  RotorModel model(wavenumber_to_atomic(c.rotational_constant_cm), c.dipole_au, RotorBasis(c.j_max));
  const double period = model.rotational_period();
  const double t_f = c.final_time_periods * period;
  const int steps = std::max(TimeGrid::kMinSteps,
                             static_cast<int>(std::lround(c.steps_per_period * c.final_time_periods)));
  double mu = 0.0;
  if (c.mu_au) mu = *c.mu_au;
  if (c.mu_times_final_time) mu = *c.mu_times_final_time / t_f;
  return {std::move(model),
          period,
          t_f,
          steps,
          units::femtoseconds_to_atomic(c.guess_fwhm_fs),
          c.guess_center_periods * period,
          mu,
          c.epsilon * period};
}

std::string resolved_echo(const RunConfig& c) {
  const ResolvedConfig r = resolve(c);
  json doc = {
      {"rotational_constant_au", r.model.rotational_constant()},
      {"dipole_au", r.model.dipole()},
      {"basis_dimension", r.model.dimension()},
      {"rotational_period_au", r.period},
      {"final_time_au", r.final_time},
      {"steps", r.steps},
      {"dt_au", r.final_time / r.steps},
      {"guess_fwhm_au", r.guess_fwhm},
      {"guess_center_au", r.guess_center},
      {"guess_amplitude_au", c.guess_amplitude_au},
      {"lambda", c.lambda},
      {"mu_au", r.mu},
      {"epsilon_au", r.epsilon},
  };
  return doc.dump(2);
}

OptimizationConfig build_optimization_config(const RunConfig& c) {
  ResolvedConfig r = resolve(c);
  const TimeGrid grid(r.final_time, r.steps);
  ControlField guess = gaussian_guess(grid, r.guess_center, r.guess_fwhm, c.guess_amplitude_au);
  std::optional<SubspaceSpec> subspace;
  if (c.j_opt) subspace = SubspaceSpec{*c.j_opt};
  TerminalObjective objective =
      c.objective == ObjectiveKind::kTarget
          ? TerminalObjective::state_overlap(optimal_orientation_target(*subspace, r.model))
          : TerminalObjective::observable(r.model.cos_theta());

  OptimizationConfig oc{.model = r.model,
                        .guess = std::move(guess),
                        .initial = ground_state(r.model.basis()),
                        .objective = std::move(objective)};
  oc.lambda = c.lambda;
  oc.mu = r.mu;
  oc.epsilon = c.mode == Mode::kTimeOpt ? r.epsilon : 0.0;
  oc.subspace = subspace;
  oc.max_iterations = c.max_iterations;
  oc.tolerance = c.tolerance;
  oc.patience = c.patience;
  oc.backtrack_time_step = c.backtrack_time_step;
  return oc;
}

}  // namespace orient
