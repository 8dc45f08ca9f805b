#pragma once

#include <cstddef>
#include <iomanip>
#include <ios>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ppd/dynamics.hpp"
#include "ppd/errors.hpp"
#include "ppd/state.hpp"

namespace ppd::io {

using json = nlohmann::json;

/// 17 significant digits: enough to round-trip every double, so identical
/// runs give byte-identical files.
inline std::string format_double(double x) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17) << x;
  return os.str();
}

/// Minimal CSV writer with a fixed column set.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
    write_row_strings(header);
  }

  void row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_double(v));
    row(cells);
  }

  void row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw Error("csv: row has wrong column count");
    write_row_strings(cells);
  }

  std::string str() const { return out_.str(); }

 private:
  void write_row_strings(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

  std::size_t columns_;
  std::ostringstream out_;
};

// ---------------------------------------------------------------------------
// DensityState checkpoint
//
//   { "n_max": int,
//     "c_ee": [n_max+1], "c_gg": [n_max+1], "c_sese": [n_max+1],
//     "c_ge_re": [n_max], "c_ge_im": [n_max] }
// ---------------------------------------------------------------------------

inline json to_json(const DensityState& s) {
  json j;
  j["n_max"] = s.n_max;
  j["c_ee"] = s.c_ee;
  j["c_gg"] = s.c_gg;
  j["c_sese"] = s.c_sese;
  std::vector<double> re, im;
  for (const auto& c : s.c_ge) {
    re.push_back(c.real());
    im.push_back(c.imag());
  }
  j["c_ge_re"] = re;
  j["c_ge_im"] = im;
  return j;
}

inline DensityState state_from_json(const json& j) {
  try {
    const int n_max = j.at("n_max").get<int>();
    auto s = DensityState::zero(n_max);
    auto read = [&](const char* key, std::size_t size) {
      auto v = j.at(key).get<std::vector<double>>();
      if (v.size() != size) throw Error(std::string("state json: '") + key + "' has wrong length");
      return v;
    };
    s.c_ee = read("c_ee", s.levels());
    s.c_gg = read("c_gg", s.levels());
    s.c_sese = read("c_sese", s.levels());
    const auto re = read("c_ge_re", s.levels() - 1);
    const auto im = read("c_ge_im", s.levels() - 1);
    for (std::size_t n = 0; n < re.size(); ++n) s.c_ge[n] = Complex{re[n], im[n]};
    return s;
  } catch (const json::exception& e) {
    throw Error(std::string("state json: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Trajectory export
//
// CSV columns: t, mean_n, p_D_pre, p_D_post, p_0 .. p_{n_max}, trace
// ---------------------------------------------------------------------------

inline std::vector<std::string> trajectory_header(int n_max) {
  std::vector<std::string> h{"t", "mean_n", "p_D_pre", "p_D_post"};
  for (int n = 0; n <= n_max; ++n) h.push_back("p_" + std::to_string(n));
  h.emplace_back("trace");
  return h;
}

inline std::string trajectory_csv(const Trajectory& traj) {
  CsvWriter csv(trajectory_header(traj.params.n_max));
  for (const auto& s : traj.samples) {
    std::vector<double> row{s.t, s.mean_n, s.p_D_pre, s.p_D_post};
    row.insert(row.end(), s.p_n.begin(), s.p_n.end());
    row.push_back(s.trace);
    csv.row(row);
  }
  return csv.str();
}

inline json trajectory_json(const Trajectory& traj) {
  json j;
  j["params"] = {{"g", traj.params.g}, {"kappa", traj.params.kappa}, {"T", traj.params.T},
                 {"n_max", traj.params.n_max}};
  j["samples_per_cycle"] = traj.samples_per_cycle;
  std::vector<double> t, mean_n, pre, post, tr;
  std::vector<std::vector<double>> p_n;
  for (const auto& s : traj.samples) {
    t.push_back(s.t);
    mean_n.push_back(s.mean_n);
    pre.push_back(s.p_D_pre);
    post.push_back(s.p_D_post);
    p_n.push_back(s.p_n);
    tr.push_back(s.trace);
  }
  j["t"] = t;
  j["mean_n"] = mean_n;
  j["p_D_pre"] = pre;
  j["p_D_post"] = post;
  j["p_n"] = p_n;
  j["trace"] = tr;
  json events = json::array();
  for (const auto& e : traj.events) {
    events.push_back({{"index", e.index}, {"t", e.t}, {"before", to_json(e.before)}, {"after", to_json(e.after)}});
  }
  j["pump_events"] = events;
  return j;
}

// ---------------------------------------------------------------------------
// CSV self-check
// ---------------------------------------------------------------------------

struct CsvCheck {
  bool ok = true;
  std::size_t rows = 0;
  std::size_t columns = 0;
  std::string message;
};

/// Verifies every row has the header's column count and, if `time_column`
/// names a column, that time strictly increases.
inline CsvCheck check_csv(std::string_view text, std::string_view time_column = "t") {
  CsvCheck r;
  std::istringstream in{std::string(text)};
  std::string line;
  auto split = [](const std::string& l) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(l);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!l.empty() && l.back() == ',') cells.emplace_back();
    return cells;
  };
  if (!std::getline(in, line)) {
    r.ok = false;
    r.message = "empty file";
    return r;
  }
  const auto header = split(line);
  r.columns = header.size();
  std::ptrdiff_t time_idx = -1;
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == time_column) time_idx = static_cast<std::ptrdiff_t>(i);
  double last_t = -std::numeric_limits<double>::infinity();
  while (std::getline(in, line)) {
    ++r.rows;
    const auto cells = split(line);
    if (cells.size() != r.columns) {
      r.ok = false;
      r.message = "row " + std::to_string(r.rows) + " has " + std::to_string(cells.size()) + " columns";
      return r;
    }
    if (time_idx >= 0) {
      double t = 0.0;
      try {
        t = std::stod(cells[static_cast<std::size_t>(time_idx)]);
      } catch (const std::exception&) {
        r.ok = false;
        r.message = "row " + std::to_string(r.rows) + ": non-numeric time";
        return r;
      }
      if (!(t > last_t)) {
        r.ok = false;
        r.message = "row " + std::to_string(r.rows) + ": time not strictly increasing";
        return r;
      }
      last_t = t;
    }
  }
  return r;
}

}  // namespace ppd::io
