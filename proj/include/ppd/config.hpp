#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ppd/errors.hpp"
#include "ppd/params.hpp"

// Run configuration for the batch front-end.
//
// The document is a flat JSON object. Recognised keys:
//
//   mode                "train" | "laser" | "sweep" | "curves" (optional; must
//                       agree with the subcommand)
//   g, kappa, T         system constants (required unless swept)
//   n_max               Fock truncation (default 1 for train, 30 otherwise)
//   initial             {"dot": "excited"|"ground"|"semi_excited", "n": int}
//   n_cycles            pump events to simulate (train, default 40)
//   samples_per_cycle   samples per pump interval T/2 (train, default 1000)
//   average_from_cycle  first pump cycle of the mean_n average (train, default 10)
//   tol                 evolve tolerance (default 1e-10)
//   fixed_point_tol     power-iteration tolerance (default 1e-10)
//   max_iter            power-iteration cap (default 100000)
//   tail_threshold      truncation tail limit (default 1e-8)
//   trap_threshold      tail mass for trapping detection (default 1e-2)
//   formats             subset of ["csv", "json"] for trajectory output
//   workers             sweep worker threads (default 1; --workers overrides)
//   sweep               [{"name": "g"|"kappa"|"T", "min", "max", "steps",
//                         "scale": "linear"|"log"}]   (sweep mode only)
//   curves              {"t_max", "points", "tau_max"}  (curves mode only)

namespace ppd {

enum class Mode { train, laser, sweep, curves };

inline std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::train: return "train";
    case Mode::laser: return "laser";
    case Mode::sweep: return "sweep";
    case Mode::curves: return "curves";
  }
  return "unknown";
}

inline std::optional<Mode> mode_from_string(std::string_view s) {
  if (s == "train") return Mode::train;
  if (s == "laser") return Mode::laser;
  if (s == "sweep") return Mode::sweep;
  if (s == "curves") return Mode::curves;
  return std::nullopt;
}

struct SweepAxis {
  std::string name;  ///< g, kappa or T
  double min = 0.0;
  double max = 0.0;
  int steps = 1;
  bool log = false;

  std::vector<double> values() const {
    std::vector<double> v(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) {
      const double f = steps == 1 ? 0.0 : static_cast<double>(i) / (steps - 1);
      v[static_cast<std::size_t>(i)] =
          log ? std::exp(std::log(min) + f * (std::log(max) - std::log(min))) : min + f * (max - min);
    }
    v.front() = min;
    if (steps > 1) v.back() = max;
    return v;
  }
};

/// Default microlaser grid: kappa in {1e-3, 1e-2}, g (T/2) from 0.1 to 2 pi
/// in 200 steps at g = 1.
inline std::vector<SweepAxis> default_sweep_axes() {
  return {SweepAxis{"kappa", 1e-3, 1e-2, 2, true}, SweepAxis{"T", 0.2, 4.0 * std::numbers::pi, 200, false}};
}

struct CurveSpec {
  double t_max = 0.0;  ///< 0: three periods
  int points = 1001;
  double tau_max = 0.0;  ///< 0: 10 / kappa (or 10 / g when kappa = 0)
};

struct RunConfig {
  Mode mode = Mode::train;
  SystemParams params;
  DotLevel initial_dot = DotLevel::Excited;
  int initial_n = 0;
  int n_cycles = 40;
  int samples_per_cycle = 1000;
  int average_from_cycle = 10;
  double tol = 1e-10;
  double fixed_point_tol = 1e-10;
  int max_iter = 100000;
  double tail_threshold = 1e-8;
  double trap_threshold = 1e-2;
  bool write_csv = true;
  bool write_json = true;
  int workers = 1;
  std::vector<SweepAxis> sweep;
  CurveSpec curves;
};

namespace detail {

using json = nlohmann::json;

inline double get_number(const json& j, const std::string& key) {
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(key, "must be finite");
  return x;
}

inline int get_int(const json& j, const std::string& key) {
  const auto& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(key, "expected an integer");
  return v.get<int>();
}

inline std::string get_string(const json& j, const std::string& key) {
  const auto& v = j.at(key);
  if (!v.is_string()) throw ConfigError(key, "expected a string");
  return v.get<std::string>();
}

inline void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& prefix) {
  for (const auto& [k, _] : j.items()) {
    if (!allowed.contains(k)) throw ConfigError(prefix + k, "unknown key");
  }
}

inline void require_positive(double x, const std::string& key) {
  if (!(x > 0.0)) throw ConfigError(key, "must be > 0");
}

}  // namespace detail

/// Parses and validates a configuration document for `mode`.
inline RunConfig parse_config(std::string_view text, Mode mode) {
  using detail::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed document: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("", "document must be a JSON object");

  static const std::set<std::string> allowed{
      "mode",     "g",        "kappa",          "T",       "n_max",   "initial",        "n_cycles",
      "samples_per_cycle",    "average_from_cycle",        "tol",     "fixed_point_tol", "max_iter",
      "tail_threshold",       "trap_threshold", "formats", "workers", "sweep",          "curves"};
  detail::reject_unknown(j, allowed, "");

  RunConfig c;
  c.mode = mode;
  if (j.contains("mode")) {
    const auto m = mode_from_string(detail::get_string(j, "mode"));
    if (!m) throw ConfigError("mode", "must be one of train, laser, sweep, curves");
    if (*m != mode) throw ConfigError("mode", "does not match the requested subcommand");
  }

  if (j.contains("sweep") && mode != Mode::sweep) throw ConfigError("sweep", "only valid in sweep mode");
  if (j.contains("curves") && mode != Mode::curves) throw ConfigError("curves", "only valid in curves mode");

  // Sweep axes first: swept constants need no base value.
  std::set<std::string> swept;
  if (mode == Mode::sweep) {
    if (j.contains("sweep")) {
      const auto& axes = j.at("sweep");
      if (!axes.is_array() || axes.empty()) throw ConfigError("sweep", "expected a non-empty array of axes");
      for (std::size_t i = 0; i < axes.size(); ++i) {
        const auto& a = axes[i];
        const std::string prefix = "sweep[" + std::to_string(i) + "].";
        if (!a.is_object()) throw ConfigError("sweep[" + std::to_string(i) + "]", "expected an object");
        detail::reject_unknown(a, {"name", "min", "max", "steps", "scale"}, prefix);
        for (const char* k : {"name", "min", "max", "steps"})
          if (!a.contains(k)) throw ConfigError(prefix + k, "missing");
        SweepAxis axis;
        axis.name = detail::get_string(a, "name");
        if (axis.name != "g" && axis.name != "kappa" && axis.name != "T")
          throw ConfigError(prefix + "name", "must be one of g, kappa, T");
        if (swept.contains(axis.name)) throw ConfigError(prefix + "name", "axis listed twice");
        try {
          axis.min = detail::get_number(a, "min");
          axis.max = detail::get_number(a, "max");
          axis.steps = detail::get_int(a, "steps");
        } catch (const ConfigError& e) {
          throw ConfigError(prefix + e.key(), "expected a finite number");
        }
        if (axis.steps < 1) throw ConfigError(prefix + "steps", "must be >= 1");
        if (axis.max < axis.min) throw ConfigError(prefix + "max", "must be >= min");
        if (a.contains("scale")) {
          const auto s = a.at("scale").is_string() ? a.at("scale").get<std::string>() : std::string{};
          if (s == "log")
            axis.log = true;
          else if (s != "linear")
            throw ConfigError(prefix + "scale", "must be linear or log");
        }
        if (axis.log && !(axis.min > 0.0)) throw ConfigError(prefix + "min", "log axis needs min > 0");
        swept.insert(axis.name);
        c.sweep.push_back(axis);
      }
    } else {
      // Default grid runs at g = 1 unless g is given explicitly.
      c.sweep = default_sweep_axes();
      for (const auto& a : c.sweep) swept.insert(a.name);
      swept.insert("g");
      c.params.g = 1.0;
    }
  }

  for (const char* key : {"g", "kappa", "T"}) {
    if (j.contains(key)) continue;
    if (!swept.contains(key)) throw ConfigError(key, "missing required key");
  }
  if (j.contains("g")) c.params.g = detail::get_number(j, "g");
  if (j.contains("kappa")) c.params.kappa = detail::get_number(j, "kappa");
  if (j.contains("T")) c.params.T = detail::get_number(j, "T");
  // The photon-train closed forms need g > 0.
  const bool needs_coupling = mode == Mode::train || mode == Mode::curves;
  if (c.params.g < 0.0 || (needs_coupling && c.params.g <= 0.0))
    throw ConfigError("g", needs_coupling ? "must be > 0" : "must be >= 0");
  if (c.params.kappa < 0.0) throw ConfigError("kappa", "must be >= 0");
  detail::require_positive(c.params.T, "T");
  for (const auto& a : c.sweep) {
    if (a.name == "g" && a.min < 0.0) throw ConfigError("sweep.g", "must be >= 0");
    if (a.name == "kappa" && a.min < 0.0) throw ConfigError("sweep.kappa", "must be >= 0");
    if (a.name == "T" && !(a.min > 0.0)) throw ConfigError("sweep.T", "must be > 0");
  }

  c.params.n_max = mode == Mode::train ? 1 : 30;
  if (j.contains("n_max")) c.params.n_max = detail::get_int(j, "n_max");
  if (c.params.n_max < 1) throw ConfigError("n_max", "must be >= 1");

  if (mode == Mode::laser || mode == Mode::sweep) c.initial_dot = DotLevel::Ground;
  if (j.contains("initial")) {
    const auto& init = j.at("initial");
    if (!init.is_object()) throw ConfigError("initial", "expected an object");
    detail::reject_unknown(init, {"dot", "n"}, "initial.");
    if (init.contains("dot")) {
      try {
        c.initial_dot = dot_level_from_string(detail::get_string(init, "dot"));
      } catch (const DomainError&) {
        throw ConfigError("initial.dot", "must be excited, ground or semi_excited");
      }
    }
    if (init.contains("n")) c.initial_n = detail::get_int(init, "n");
  }
  if (c.initial_n < 0 || c.initial_n > c.params.n_max) throw ConfigError("initial.n", "must lie in [0, n_max]");

  auto int_key = [&](const char* key, int& out, int min) {
    if (!j.contains(key)) return;
    out = detail::get_int(j, key);
    if (out < min) throw ConfigError(key, "must be >= " + std::to_string(min));
  };
  auto pos_key = [&](const char* key, double& out) {
    if (!j.contains(key)) return;
    out = detail::get_number(j, key);
    detail::require_positive(out, key);
  };
  int_key("n_cycles", c.n_cycles, 1);
  int_key("samples_per_cycle", c.samples_per_cycle, 1);
  int_key("average_from_cycle", c.average_from_cycle, 0);
  int_key("max_iter", c.max_iter, 1);
  int_key("workers", c.workers, 1);
  pos_key("tol", c.tol);
  pos_key("fixed_point_tol", c.fixed_point_tol);
  pos_key("tail_threshold", c.tail_threshold);
  pos_key("trap_threshold", c.trap_threshold);
  if (c.trap_threshold >= 1.0) throw ConfigError("trap_threshold", "must be < 1");
  if (mode == Mode::train && c.average_from_cycle >= c.n_cycles)
    throw ConfigError("average_from_cycle", "must be < n_cycles");

  if (j.contains("formats")) {
    const auto& f = j.at("formats");
    if (!f.is_array() || f.empty()) throw ConfigError("formats", "expected a non-empty array");
    c.write_csv = c.write_json = false;
    for (const auto& e : f) {
      const auto s = e.is_string() ? e.get<std::string>() : std::string{};
      if (s == "csv")
        c.write_csv = true;
      else if (s == "json")
        c.write_json = true;
      else
        throw ConfigError("formats", "entries must be csv or json");
    }
  }

  if (j.contains("curves")) {
    const auto& cv = j.at("curves");
    if (!cv.is_object()) throw ConfigError("curves", "expected an object");
    detail::reject_unknown(cv, {"t_max", "points", "tau_max"}, "curves.");
    if (cv.contains("t_max")) {
      c.curves.t_max = detail::get_number(cv, "t_max");
      detail::require_positive(c.curves.t_max, "curves.t_max");
    }
    if (cv.contains("tau_max")) {
      c.curves.tau_max = detail::get_number(cv, "tau_max");
      detail::require_positive(c.curves.tau_max, "curves.tau_max");
    }
    if (cv.contains("points")) {
      c.curves.points = detail::get_int(cv, "points");
      if (c.curves.points < 2) throw ConfigError("curves.points", "must be >= 2");
    }
  }
  return c;
}

}  // namespace ppd
