#pragma once

// Sweep engine: resolves parameter specifications (config file and/or CLI
// overrides) into grids of mean-field solves and emits deterministic CSV.
// Grid points are independent, so a bounded worker pool consumes them from a
// shared counter and a single writer serializes the rows in grid order;
// output is byte-identical for any worker count.

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <limits>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "jcdicke/errors.hpp"
#include "jcdicke/meanfield.hpp"
#include "jcdicke/model.hpp"
#include "jcdicke/phases.hpp"

namespace jcdicke {

// Every value is printed with 17 significant digits: doubles round-trip
// exactly and output is byte-stable across runs and worker counts.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

enum class SweepMode { point, sweep1d, sweep2d, ed, validate };

inline const char* to_string(SweepMode m) {
  switch (m) {
    case SweepMode::point: return "point";
    case SweepMode::sweep1d: return "sweep1d";
    case SweepMode::sweep2d: return "sweep2d";
    case SweepMode::ed: return "ed";
    case SweepMode::validate: return "validate";
  }
  return "?";
}

struct ParamSet {
  std::optional<double> omega_a, omega_b, eta, lambda, Omega, w;
  std::optional<long> n_atoms;
};

struct Axis {
  std::string name;  // canonical parameter name, e.g. "omega-b"
  double from = 0.0;
  double to = 1.0;
  long steps = 2;
};

struct SweepSpec {
  SweepMode mode = SweepMode::point;
  ParamSet fixed;
  std::vector<Axis> axes;
  std::string out;
  bool emit_plot_script = false;
  int jobs = 1;
  // exact-diagonalization extras
  std::optional<int> ed_n_max;
  std::optional<std::size_t> ed_dim_cap;
  std::vector<long> ed_study;
  std::string dump_matrix_path;
};

namespace detail {

inline const std::vector<std::string>& parameter_names() {
  static const std::vector<std::string> names = {
      "omega-a", "omega-b", "eta", "lambda", "omega-mw-coupling", "w"};
  return names;
}

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(errc::config_error, "cannot parse number '" + s + "' for " + what);
  }
}

inline long parse_long(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(errc::config_error, "cannot parse integer '" + s + "' for " + what);
  }
}

inline std::optional<double>* param_slot(ParamSet& ps, const std::string& name) {
  if (name == "omega-a") return &ps.omega_a;
  if (name == "omega-b") return &ps.omega_b;
  if (name == "eta") return &ps.eta;
  if (name == "lambda") return &ps.lambda;
  if (name == "omega-mw-coupling") return &ps.Omega;
  if (name == "w") return &ps.w;
  return nullptr;
}

inline const std::optional<double>* param_slot(const ParamSet& ps,
                                               const std::string& name) {
  return param_slot(const_cast<ParamSet&>(ps), name);
}

// CSV column name for an axis parameter.
inline std::string column_name(const std::string& axis_name) {
  if (axis_name == "omega-mw-coupling") return "Omega";
  std::string s = axis_name;
  std::replace(s.begin(), s.end(), '-', '_');
  return s;
}

}  // namespace detail

inline Axis parse_axis(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  if (parts.size() != 4)
    fail(errc::config_error, "axis must be name:from:to:steps, got '" + text + "'");
  Axis ax;
  ax.name = detail::trim(parts[0]);
  ax.from = detail::parse_double(detail::trim(parts[1]), "axis from");
  ax.to = detail::parse_double(detail::trim(parts[2]), "axis to");
  ax.steps = detail::parse_long(detail::trim(parts[3]), "axis steps");
  return ax;
}

inline SweepMode parse_mode(const std::string& s) {
  if (s == "point") return SweepMode::point;
  if (s == "sweep1d") return SweepMode::sweep1d;
  if (s == "sweep2d") return SweepMode::sweep2d;
  if (s == "ed") return SweepMode::ed;
  if (s == "validate") return SweepMode::validate;
  fail(errc::config_error, "unknown mode '" + s + "'");
}

// Flat key = value configuration, '#' starts a comment, 'axis' may repeat.
inline void apply_config(SweepSpec& spec, std::istream& in) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(errc::config_error,
           "line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key == "mode") {
      spec.mode = parse_mode(value);
    } else if (auto* slot = detail::param_slot(spec.fixed, key)) {
      *slot = detail::parse_double(value, key);
    } else if (key == "n-atoms") {
      spec.fixed.n_atoms = detail::parse_long(value, key);
    } else if (key == "axis") {
      spec.axes.push_back(parse_axis(value));
    } else if (key == "out") {
      spec.out = value;
    } else if (key == "plot-script") {
      if (value == "true" || value == "1") spec.emit_plot_script = true;
      else if (value == "false" || value == "0") spec.emit_plot_script = false;
      else fail(errc::config_error, "plot-script must be true or false");
    } else if (key == "jobs") {
      spec.jobs = static_cast<int>(detail::parse_long(value, key));
    } else if (key == "n-max") {
      spec.ed_n_max = static_cast<int>(detail::parse_long(value, key));
    } else if (key == "dim-cap") {
      spec.ed_dim_cap = static_cast<std::size_t>(detail::parse_long(value, key));
    } else if (key == "dump-matrix") {
      spec.dump_matrix_path = value;
    } else if (key == "study") {
      std::stringstream ss(value);
      std::string tok;
      spec.ed_study.clear();
      while (std::getline(ss, tok, ','))
        spec.ed_study.push_back(detail::parse_long(detail::trim(tok), key));
    } else {
      fail(errc::config_error,
           "unknown key '" + key + "' on line " + std::to_string(line_no));
    }
  }
}

inline SweepSpec load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io_error, "cannot open config file '" + path + "'");
  SweepSpec spec;
  apply_config(spec, in);
  return spec;
}

inline void validate_spec(const SweepSpec& spec) {
  const std::size_t want_axes = spec.mode == SweepMode::sweep1d   ? 1
                                : spec.mode == SweepMode::sweep2d ? 2
                                                                  : 0;
  if (spec.axes.size() != want_axes)
    fail(errc::config_error,
         std::string(to_string(spec.mode)) + " mode needs " +
             std::to_string(want_axes) + " axis definition(s), got " +
             std::to_string(spec.axes.size()));
  for (const auto& ax : spec.axes) {
    if (!detail::param_slot(spec.fixed, ax.name))
      fail(errc::config_error, "unknown axis parameter '" + ax.name + "'");
    if (detail::param_slot(spec.fixed, ax.name)->has_value())
      fail(errc::config_error, "axis '" + ax.name + "' is also fixed");
    if (ax.steps < 2)
      fail(errc::config_error, "axis '" + ax.name + "' needs steps >= 2");
    if (!std::isfinite(ax.from) || !std::isfinite(ax.to) || ax.from == ax.to)
      fail(errc::config_error, "axis '" + ax.name + "' is degenerate");
  }
  if (spec.axes.size() == 2 && spec.axes[0].name == spec.axes[1].name)
    fail(errc::config_error, "the two axes must vary different parameters");

  const bool triple_fixed = spec.fixed.eta && spec.fixed.lambda && spec.fixed.omega_a;
  auto is_axis = [&](const std::string& name) {
    for (const auto& ax : spec.axes)
      if (ax.name == name) return true;
    return false;
  };
  const bool triple_touched =
      (spec.fixed.eta || is_axis("eta")) && (spec.fixed.lambda || is_axis("lambda")) &&
      (spec.fixed.omega_a || is_axis("omega-a"));
  const bool w_touched = spec.fixed.w.has_value() || is_axis("w");
  if (w_touched && triple_touched) {
    if (spec.fixed.w && triple_fixed && !is_axis("w")) {
      const double derived =
          *spec.fixed.eta + *spec.fixed.lambda * *spec.fixed.lambda / *spec.fixed.omega_a;
      if (std::fabs(derived - *spec.fixed.w) > 1e-10)
        fail(errc::config_error,
             "w disagrees with eta + lambda^2/omega_a by more than 1e-10");
    } else {
      fail(errc::config_error,
           "w and (eta, lambda, omega-a) cannot both vary; fix one description");
    }
  }
  if (spec.jobs < 1) fail(errc::config_error, "jobs must be >= 1");
  if ((spec.mode == SweepMode::sweep1d || spec.mode == SweepMode::sweep2d) &&
      spec.out.empty())
    fail(errc::config_error, "sweep modes need an output path");
}

struct ResolvedPoint {
  MeanFieldProblem problem;
  std::optional<ModelParams> params;  // present when alpha is computable
};

inline ResolvedPoint resolve_point(const ParamSet& ps) {
  if (!ps.omega_b) fail(errc::config_error, "omega-b is required");
  if (!ps.Omega) fail(errc::config_error, "omega-mw-coupling is required");
  ResolvedPoint rp;
  if (ps.omega_a && ps.eta && ps.lambda) {
    ModelParams mp;
    mp.omega_a = *ps.omega_a;
    mp.omega_b = *ps.omega_b;
    mp.eta = *ps.eta;
    mp.lambda = *ps.lambda;
    mp.Omega = *ps.Omega;
    mp.N = ps.n_atoms.value_or(1);
    validate(mp);
    rp.params = mp;
    rp.problem = make_problem(mp);
  } else if (ps.w) {
    rp.problem = {*ps.omega_b, *ps.Omega, *ps.w};
    validate(rp.problem);
  } else {
    fail(errc::config_error,
         "either w or all of (omega-a, eta, lambda) must be given");
  }
  return rp;
}

// One grid point of a sweep; also the CSV row schema.
struct SweepRecord {
  std::vector<double> coordinates;
  double beta = std::numeric_limits<double>::quiet_NaN();
  double beta_squared = std::numeric_limits<double>::quiet_NaN();
  double magnetization = std::numeric_limits<double>::quiet_NaN();
  double energy = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> alpha;
  double residual = std::numeric_limits<double>::quiet_NaN();
  PhaseLabel label = PhaseLabel::Unclassified;
  std::string error;  // empty on success, error code otherwise
};

namespace detail {

inline double axis_value(const Axis& ax, long i) {
  const double t = static_cast<double>(i) / static_cast<double>(ax.steps - 1);
  return ax.from + (ax.to - ax.from) * t;
}

inline SweepRecord compute_record(const SweepSpec& spec,
                                  const std::vector<double>& coords) {
  SweepRecord rec;
  rec.coordinates = coords;
  try {
    ParamSet ps = spec.fixed;
    for (std::size_t a = 0; a < spec.axes.size(); ++a)
      *param_slot(ps, spec.axes[a].name) = coords[a];
    const ResolvedPoint rp = resolve_point(ps);
    const MeanFieldSolution sol = rp.params
                                      ? solve_model_ground_state(*rp.params)
                                      : solve_ground_state(rp.problem);
    rec.beta = sol.beta;
    rec.beta_squared = sol.beta * sol.beta;
    rec.magnetization = sol.magnetization;
    rec.energy = sol.energy;
    rec.alpha = sol.alpha;
    rec.residual = sol.residual;
    rec.label = classify(rp.problem, sol);
  } catch (const Error& e) {
    rec.error = errc_name(e.code());
  } catch (const std::exception&) {
    rec.error = "InternalError";
  }
  return rec;
}

inline void append_csv_row(std::string& out, const SweepRecord& rec) {
  for (double c : rec.coordinates) {
    out += format_double(c);
    out += ',';
  }
  out += format_double(rec.beta);
  out += ',';
  out += format_double(rec.beta_squared);
  out += ',';
  out += format_double(rec.magnetization);
  out += ',';
  out += format_double(rec.energy);
  out += ',';
  out += rec.alpha ? format_double(*rec.alpha) : "nan";
  out += ',';
  out += format_double(rec.residual);
  out += ',';
  out += to_string(rec.label);
  out += ',';
  out += rec.error;
  out += '\n';
}

}  // namespace detail

inline SweepRecord run_point(const SweepSpec& spec) {
  validate_spec(spec);
  return detail::compute_record(spec, {});
}

struct SweepSummary {
  std::size_t rows = 0;
  std::size_t failures = 0;
  std::string csv_path;
  std::string plot_path;
};

// Computes all grid records (in parallel when jobs > 1) and renders the CSV
// in row-major axis order. Pure with respect to the spec: byte-identical
// output for identical specs regardless of worker count.
inline std::string render_csv(const SweepSpec& spec, std::size_t* failures = nullptr) {
  validate_spec(spec);
  std::vector<long> shape;
  std::size_t total = 1;
  for (const auto& ax : spec.axes) {
    shape.push_back(ax.steps);
    total *= static_cast<std::size_t>(ax.steps);
  }

  std::vector<SweepRecord> records(total);
  auto compute_at = [&](std::size_t flat) {
    std::vector<double> coords(spec.axes.size());
    std::size_t rem = flat;
    for (std::size_t a = spec.axes.size(); a-- > 0;) {
      const long i = static_cast<long>(rem % static_cast<std::size_t>(shape[a]));
      rem /= static_cast<std::size_t>(shape[a]);
      coords[a] = detail::axis_value(spec.axes[a], i);
    }
    records[flat] = detail::compute_record(spec, coords);
  };

  const int jobs = std::clamp(spec.jobs, 1, 256);
  if (jobs == 1 || total < 2) {
    for (std::size_t i = 0; i < total; ++i) compute_at(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int t = 0; t < jobs; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1))
          compute_at(i);
      });
    for (auto& th : pool) th.join();
  }

  std::string out;
  out.reserve(total * 120 + 128);
  for (const auto& ax : spec.axes) {
    out += detail::column_name(ax.name);
    out += ',';
  }
  out += "beta,beta_squared,magnetization,energy,alpha,residual,label,error\n";
  std::size_t bad = 0;
  for (const auto& rec : records) {
    detail::append_csv_row(out, rec);
    if (!rec.error.empty()) ++bad;
  }
  if (failures) *failures = bad;
  return out;
}

// gnuplot companion script; refers to the CSV by its base name so the pair
// stays relocatable.
inline std::string render_plot_script(const SweepSpec& spec,
                                      const std::string& csv_basename) {
  std::string s;
  s += "# gnuplot script generated by jcdicke " + std::string(to_string(spec.mode)) + "\n";
  s += "set datafile separator ','\n";
  s += "set key autotitle columnhead\n";
  const std::size_t nax = spec.axes.size();
  if (nax == 1) {
    s += "set xlabel '" + detail::column_name(spec.axes[0].name) + "'\n";
    s += "set grid\n";
    s += "plot '" + csv_basename + "' using 1:2 with lines title 'beta', \\\n";
    s += "     '' using 1:4 with lines title 'magnetization', \\\n";
    s += "     '' using 1:5 with lines title 'energy'\n";
  } else if (nax == 2) {
    s += "set xlabel '" + detail::column_name(spec.axes[1].name) + "'\n";
    s += "set ylabel '" + detail::column_name(spec.axes[0].name) + "'\n";
    s += "set view map\n";
    s += "splot '" + csv_basename + "' using 2:1:3 with points pt 5 ps 0.6 palette title 'beta'\n";
  }
  return s;
}

inline SweepSummary run_sweep(const SweepSpec& spec) {
  validate_spec(spec);
  if (spec.mode != SweepMode::sweep1d && spec.mode != SweepMode::sweep2d)
    fail(errc::config_error, "run_sweep needs sweep1d or sweep2d mode");
  SweepSummary summary;
  const std::string csv = render_csv(spec, &summary.failures);
  std::size_t rows = 1;
  for (const auto& ax : spec.axes) rows *= static_cast<std::size_t>(ax.steps);
  summary.rows = rows;

  std::ofstream out(spec.out, std::ios::binary);
  if (!out) fail(errc::io_error, "cannot open output file '" + spec.out + "'");
  out << csv;
  if (!out) fail(errc::io_error, "failed writing '" + spec.out + "'");
  summary.csv_path = spec.out;

  if (spec.emit_plot_script) {
    const std::string plot_path = spec.out + ".gp";
    auto slash = spec.out.find_last_of('/');
    const std::string base =
        slash == std::string::npos ? spec.out : spec.out.substr(slash + 1);
    std::ofstream gp(plot_path, std::ios::binary);
    if (!gp) fail(errc::io_error, "cannot open plot script '" + plot_path + "'");
    gp << render_plot_script(spec, base);
    summary.plot_path = plot_path;
  }
  return summary;
}

}  // namespace jcdicke
