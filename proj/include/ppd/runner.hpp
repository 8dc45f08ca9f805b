#pragma once

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "ppd/analytic.hpp"
#include "ppd/config.hpp"
#include "ppd/dynamics.hpp"
#include "ppd/io.hpp"
#include "ppd/observables.hpp"

namespace ppd {

enum ExitCode : int { exit_ok = 0, exit_config_error = 1, exit_runtime_failure = 2 };

struct RunReport {
  int exit_code = exit_ok;
  std::vector<std::filesystem::path> files;
  std::string message;
};

/// One row of a sweep: fixed-point statistics at one grid point.
struct SweepPoint {
  std::size_t index = 0;
  SystemParams params;
  std::string status;  ///< converged | not_converged | truncation | error
  int iterations = 0;
  double residual = 0.0;
  std::optional<double> mean_n;
  std::optional<double> mandel_Q;
  std::optional<double> p_D;
  std::optional<int> n_trap;
  std::string message;
};

namespace detail {

using json = nlohmann::json;

inline json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

inline std::string optional_cell(const std::optional<double>& v) { return v ? io::format_double(*v) : std::string{}; }

class OutputDir {
 public:
  explicit OutputDir(std::filesystem::path dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }

  void write(const std::string& name, const std::string& content, RunReport& report) {
    const auto path = dir_ / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw Error("failed writing " + path.string());
    report.files.push_back(path);
  }

  /// Writes a CSV after checking its schema.
  void write_csv(const std::string& name, const std::string& content, RunReport& report,
                 std::string_view time_column = "t") {
    const auto check = io::check_csv(content, time_column);
    if (!check.ok) throw Error(name + ": schema check failed: " + check.message);
    write(name, content, report);
  }

  void write_json(const std::string& name, const json& j, RunReport& report) { write(name, j.dump(2) + "\n", report); }

 private:
  std::filesystem::path dir_;
};

inline json params_json(const SystemParams& p) {
  return {{"g", p.g}, {"kappa", p.kappa}, {"T", p.T}, {"n_max", p.n_max}};
}

inline EvolveOptions evolve_options(const RunConfig& c) {
  EvolveOptions o;
  o.tol = c.tol;
  o.tail_threshold = c.tail_threshold;
  return o;
}

inline FixedPointOptions fixed_point_options(const RunConfig& c) {
  FixedPointOptions o;
  o.tol = c.fixed_point_tol;
  o.max_iter = c.max_iter;
  o.evolve = evolve_options(c);
  return o;
}

inline RunReport run_train(const RunConfig& c, OutputDir& out) {
  RunReport report;
  const Liouvillian L(c.params);
  const auto initial = new_pure(c.initial_dot, c.initial_n, c.params.n_max);
  const auto traj = simulate(L, initial, c.n_cycles, c.samples_per_cycle, evolve_options(c));

  if (c.write_csv) out.write_csv("trajectory.csv", io::trajectory_csv(traj), report);
  if (c.write_json) out.write_json("trajectory.json", io::trajectory_json(traj), report);

  const analytic::TrainParams tp(c.params.g, c.params.kappa, c.params.T);
  io::CsvWriter overlay({"t", "mean_n", "p1", "photon_train"});
  for (const auto& s : traj.samples) {
    // Single-pulse curve on the first period only; the train column covers the rest.
    const double single = s.t < c.params.T ? analytic::p1(s.t, tp) : 0.0;
    overlay.row(std::vector<double>{s.t, s.mean_n, single, analytic::photon_train(s.t, tp)});
  }
  out.write_csv("analytic_overlay.csv", overlay.str(), report);

  const double numeric = time_average(traj, "mean_n", c.average_from_cycle, c.n_cycles);
  double max_trace_dev = 0.0;
  for (const auto& s : traj.samples) max_trace_dev = std::max(max_trace_dev, std::abs(s.trace - 1.0));
  json summary;
  summary["mode"] = "train";
  summary["params"] = params_json(c.params);
  summary["n_cycles"] = c.n_cycles;
  summary["samples_per_cycle"] = c.samples_per_cycle;
  summary["average_cycles"] = {c.average_from_cycle, c.n_cycles};
  summary["mean_n_numeric"] = numeric;
  summary["regime"] = analytic::to_string(tp.regime());
  if (c.params.kappa > 0.0) {
    const double expected = analytic::mean_photon_number(tp);
    summary["mean_n_analytic"] = expected;
    summary["mean_n_relative_error"] = std::abs(numeric - expected) / expected;
  } else {
    summary["mean_n_analytic"] = nullptr;
    summary["mean_n_relative_error"] = nullptr;
  }
  summary["max_trace_deviation"] = max_trace_dev;
  out.write_json("summary.json", summary, report);
  return report;
}

inline RunReport run_laser(const RunConfig& c, OutputDir& out) {
  RunReport report;
  const Liouvillian L(c.params);
  const auto fp_opts = fixed_point_options(c);
  const auto fp = fixed_point(L, fp_opts, new_pure(c.initial_dot, c.initial_n, c.params.n_max));
  const auto st = statistics(fp.state);

  json j;
  j["mode"] = "laser";
  j["params"] = params_json(c.params);
  j["converged"] = fp.converged;
  j["iterations"] = fp.iterations;
  j["residual"] = fp.residual;
  j["mean_n"] = st.mean_n;
  j["variance"] = st.variance;
  j["mandel_Q"] = optional_json(st.mandel_Q);
  j["classification"] = st.classification ? json(to_string(*st.classification)) : json(nullptr);
  std::optional<double> p_D;
  if (fp.converged) {
    try {
      p_D = stationary_p_D(L, fp.state, c.fixed_point_tol, fp_opts.evolve);
    } catch (const InconsistencyError& e) {
      j["p_D_error"] = e.what();
    }
  }
  j["p_D"] = optional_json(p_D);
  const auto trap = detect_trapping(st.p_n, c.trap_threshold, c.params);
  j["n_trap"] = trap ? json(*trap) : json(nullptr);
  j["state"] = io::to_json(fp.state);
  out.write_json("fixed_point.json", j, report);

  io::CsvWriter dist({"n", "p_n"});
  for (std::size_t n = 0; n < st.p_n.size(); ++n) dist.row(std::vector<double>{static_cast<double>(n), st.p_n[n]});
  out.write_csv("photon_distribution.csv", dist.str(), report, "n");

  io::CsvWriter res({"iteration", "residual"});
  for (std::size_t i = 0; i < fp.residuals.size(); ++i)
    res.row(std::vector<double>{static_cast<double>(i + 1), fp.residuals[i]});
  out.write_csv("residuals.csv", res.str(), report, "iteration");

  if (!fp.converged) {
    report.exit_code = exit_runtime_failure;
    report.message = "fixed point did not converge in " + std::to_string(fp.iterations) +
                     " iterations (residual " + io::format_double(fp.residual) + ")";
  }
  return report;
}

}  // namespace detail

/// Cartesian product of the sweep axes, first axis slowest.
inline std::vector<SystemParams> sweep_grid(const RunConfig& c) {
  std::vector<SystemParams> grid{c.params};
  for (const auto& axis : c.sweep) {
    std::vector<SystemParams> next;
    for (const auto& base : grid) {
      for (double v : axis.values()) {
        auto p = base;
        if (axis.name == "g") p.g = v;
        if (axis.name == "kappa") p.kappa = v;
        if (axis.name == "T") p.T = v;
        next.push_back(p);
      }
    }
    grid = std::move(next);
  }
  return grid;
}

/// Fixed point and statistics at one grid point. Never throws; failures are
/// recorded in `status`.
inline SweepPoint evaluate_sweep_point(std::size_t index, const SystemParams& params, const RunConfig& c) {
  SweepPoint pt;
  pt.index = index;
  pt.params = params;
  try {
    const Liouvillian L(params);
    const auto opts = detail::fixed_point_options(c);
    const auto fp = fixed_point(L, opts, new_pure(c.initial_dot, c.initial_n, params.n_max));
    pt.iterations = fp.iterations;
    pt.residual = fp.residual;
    const auto st = statistics(fp.state);
    pt.mean_n = st.mean_n;
    pt.mandel_Q = st.mandel_Q;
    pt.n_trap = detect_trapping(st.p_n, c.trap_threshold, params);
    if (fp.converged) {
      pt.status = "converged";
      try {
        pt.p_D = stationary_p_D(L, fp.state, c.fixed_point_tol, opts.evolve);
      } catch (const InconsistencyError& e) {
        pt.message = e.what();
      }
    } else {
      pt.status = "not_converged";
      pt.p_D = excitation_probability(fp.state).current;
    }
  } catch (const TruncationError& e) {
    pt.status = "truncation";
    pt.message = e.what();
  } catch (const std::exception& e) {
    pt.status = "error";
    pt.message = e.what();
  }
  return pt;
}

/// Evaluates every grid point with up to `workers` threads; the result is
/// ordered by grid index.
inline std::vector<SweepPoint> run_sweep_points(const RunConfig& c, int workers) {
  const auto grid = sweep_grid(c);
  std::vector<SweepPoint> points(grid.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) points[i] = evaluate_sweep_point(i, grid[i], c);
  };
  const auto n_threads = static_cast<std::size_t>(std::clamp(workers, 1, static_cast<int>(std::max<std::size_t>(grid.size(), 1))));
  if (n_threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(work);
  }
  return points;
}

inline std::string sweep_csv(const std::vector<SweepPoint>& points) {
  io::CsvWriter csv({"index", "g", "kappa", "T", "status", "iterations", "residual", "mean_n", "Q", "p_D", "n_trap"});
  for (const auto& p : points) {
    csv.row(std::vector<std::string>{std::to_string(p.index), io::format_double(p.params.g),
                                     io::format_double(p.params.kappa), io::format_double(p.params.T), p.status,
                                     std::to_string(p.iterations), io::format_double(p.residual),
                                     detail::optional_cell(p.mean_n), detail::optional_cell(p.mandel_Q),
                                     detail::optional_cell(p.p_D), p.n_trap ? std::to_string(*p.n_trap) : ""});
  }
  return csv.str();
}

namespace detail {

inline RunReport run_sweep(const RunConfig& c, OutputDir& out, int workers) {
  RunReport report;
  const auto points = run_sweep_points(c, workers);
  out.write_csv("sweep.csv", sweep_csv(points), report, "index");
  const auto ok = std::count_if(points.begin(), points.end(), [](const SweepPoint& p) { return p.status == "converged"; });
  json j;
  j["mode"] = "sweep";
  j["points"] = points.size();
  j["converged"] = ok;
  json failures = json::array();
  for (const auto& p : points)
    if (!p.message.empty()) failures.push_back({{"index", p.index}, {"status", p.status}, {"message", p.message}});
  j["messages"] = failures;
  out.write_json("sweep_summary.json", j, report);
  if (ok == 0) {
    report.exit_code = exit_runtime_failure;
    report.message = "no sweep point converged";
  }
  return report;
}

inline RunReport run_curves(const RunConfig& c, OutputDir& out) {
  RunReport report;
  const analytic::TrainParams tp(c.params.g, c.params.kappa, c.params.T);
  const double t_max = c.curves.t_max > 0.0 ? c.curves.t_max : 3.0 * c.params.T;
  const double tau_max =
      c.curves.tau_max > 0.0 ? c.curves.tau_max : 10.0 / (c.params.kappa > 0.0 ? c.params.kappa : c.params.g);
  const int n = c.curves.points;

  io::CsvWriter p1({"t", "value"});
  io::CsvWriter train({"t", "value"});
  io::CsvWriter g1({"t", "value"});
  for (int i = 0; i < n; ++i) {
    const double f = static_cast<double>(i) / (n - 1);
    const double t = f * t_max;
    p1.row(std::vector<double>{t, analytic::p1(t, tp)});
    train.row(std::vector<double>{t, analytic::photon_train(t, tp)});
    const double tau = -tau_max + 2.0 * f * tau_max;
    g1.row(std::vector<double>{tau, analytic::g1(tau, tp)});
  }
  out.write_csv("p1.csv", p1.str(), report);
  out.write_csv("photon_train.csv", train.str(), report);
  out.write_csv("g1.csv", g1.str(), report);

  json j;
  j["mode"] = "curves";
  j["params"] = {{"g", c.params.g}, {"kappa", c.params.kappa}, {"T", c.params.T}};
  j["regime"] = analytic::to_string(tp.regime());
  j["beta"] = tp.beta();
  j["phi"] = tp.phi();
  if (c.params.kappa > 0.0) {
    j["mean_photon_number"] = analytic::mean_photon_number(tp);
    j["long_time_rate"] = analytic::long_time_rate(tp);
  } else {
    j["mean_photon_number"] = nullptr;
    j["long_time_rate"] = nullptr;
  }
  out.write_json("curves.json", j, report);
  return report;
}

}  // namespace detail

/// Executes a validated configuration, writing into `out_dir`. Runtime errors
/// are reported through the exit code rather than thrown.
inline RunReport run(const RunConfig& config, const std::filesystem::path& out_dir, std::optional<int> workers = {}) {
  try {
    detail::OutputDir out(out_dir);
    switch (config.mode) {
      case Mode::train: return detail::run_train(config, out);
      case Mode::laser: return detail::run_laser(config, out);
      case Mode::sweep: return detail::run_sweep(config, out, workers.value_or(config.workers));
      case Mode::curves: return detail::run_curves(config, out);
    }
  } catch (const std::exception& e) {
    RunReport r;
    r.exit_code = exit_runtime_failure;
    r.message = e.what();
    return r;
  }
  return {};
}

}  // namespace ppd
