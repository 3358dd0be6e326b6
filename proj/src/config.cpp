#include "tcdyn/config.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

#include "tcdyn/error.hpp"

namespace tcdyn {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& raw) {
  const std::string s = trim(raw);
  const auto slash = s.find('/');
  if (slash != std::string::npos) return parse_number(s.substr(0, slash)) / parse_number(s.substr(slash + 1));
  if (s.empty()) throw std::invalid_argument("empty number");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

long parse_integer(const std::string& s) {
  const double v = parse_number(s);
  if (v != std::floor(v) || std::abs(v) > 9e15) throw std::invalid_argument("not an integer: '" + trim(s) + "'");
  return static_cast<long>(v);
}

bool parse_bool(const std::string& raw) {
  const std::string s = trim(raw);
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  throw std::invalid_argument("not a boolean: '" + s + "'");
}

template <class T, class F>
std::vector<T> parse_list(const std::string& s, F item) {
  std::vector<T> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!trim(tok).empty()) out.push_back(static_cast<T>(item(tok)));
  }
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T>
std::string fmt_list(const std::vector<T>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += fmt(static_cast<double>(v[i]));
  }
  return s;
}

RunKind parse_kind(const std::string& s) {
  for (RunKind k : {RunKind::Hydro, RunKind::Kinematic, RunKind::Sweep, RunKind::Threshold, RunKind::Nonlinear,
                    RunKind::Postproc}) {
    if (s == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown run kind '" + s + "'");
}

FlowKind parse_flow(const std::string& s) {
  for (FlowKind k : {FlowKind::Viscous, FlowKind::Modified, FlowKind::Forced}) {
    if (s == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown flow '" + s + "'");
}

struct Binding {
  std::function<void(const std::string&)> set;
  std::function<std::string()> get;
};
using Table = std::map<std::string, std::map<std::string, Binding>>;

Binding num(double& x) {
  return {[&x](const std::string& s) { x = parse_number(s); }, [&x] { return fmt(x); }};
}
template <class I>
Binding integer(I& x) {
  return {[&x](const std::string& s) { x = static_cast<I>(parse_integer(s)); }, [&x] { return std::to_string(x); }};
}

// Keys in the order they are written by to_text.
Table bindings(RunConfig& c) {
  Table t;
  auto& run = t["run"];
  run["kind"] = {[&c](const std::string& s) { c.kind = parse_kind(trim(s)); }, [&c] { return std::string(to_string(c.kind)); }};
  run["out"] = {[&c](const std::string& s) { c.out_dir = trim(s); }, [&c] { return c.out_dir; }};
  run["seed"] = integer(c.seed);
  run["snapshot_every"] = integer(c.snapshot_every);
  run["checkpoint_every"] = integer(c.checkpoint_every);
  run["workers"] = integer(c.workers);

  auto& p = t["params"];
  SimParams& sp = c.params;
  p["Re"] = num(sp.Re);
  p["Rm"] = num(sp.Rm);
  p["Omega_i"] = num(sp.Omega_i);
  p["A"] = num(sp.A);
  p["epsilon"] = num(sp.epsilon);
  p["M"] = integer(sp.M);
  p["dx"] = num(sp.dx);
  p["dt"] = num(sp.dt);
  p["Rv"] = num(sp.Rv);
  p["Zv"] = num(sp.Zv);
  p["vacuum_stretch"] = num(sp.vacuum_stretch);
  p["inner_core_rotating"] = {[&sp](const std::string& s) { sp.inner_core_rotating = parse_bool(s); },
                              [&sp] { return std::string(sp.inner_core_rotating ? "true" : "false"); }};

  t["flow"]["kind"] = {[&c](const std::string& s) { c.flow = parse_flow(trim(s)); },
                       [&c] { return std::string(to_string(c.flow)); }};

  auto& h = t["hydro"];
  h["probe_modes"] = {[&c](const std::string& s) { c.hydro.probe_modes = parse_list<int>(s, parse_integer); },
                      [&c] { return fmt_list(c.hydro.probe_modes); }};
  h["probe_horizon"] = num(c.hydro.probe_horizon);

  auto& k = t["kinematic"];
  KinematicOptions& ko = c.kinematic;
  k["m"] = integer(ko.m);
  k["dt"] = num(ko.dt);
  k["t_min"] = num(ko.t_min);
  k["t_max"] = num(ko.t_max);
  k["check_every"] = num(ko.check_every);
  k["rtol"] = num(ko.rtol);
  k["atol"] = num(ko.atol);
  k["probe_r"] = num(ko.probe_r);
  k["probe_z"] = num(ko.probe_z);

  auto& sw = t["sweep"];
  sw["epsilon"] = {[&c](const std::string& s) { c.sweep.epsilon = parse_list<double>(s, parse_number); },
                   [&c] { return fmt_list(c.sweep.epsilon); }};
  sw["Rm"] = {[&c](const std::string& s) { c.sweep.Rm = parse_list<double>(s, parse_number); },
              [&c] { return fmt_list(c.sweep.Rm); }};

  auto& th = t["threshold"];
  th["lo"] = num(c.threshold.lo);
  th["hi"] = num(c.threshold.hi);
  th["rtol"] = num(c.threshold.rtol);

  auto& nl = t["nonlinear"];
  NonlinearOptions& no = c.nonlinear;
  nl["t_end"] = num(no.t_end);
  nl["diag_every"] = integer(no.diag_every);
  nl["seed_energy"] = num(no.seed_energy);
  nl["noise_time"] = num(no.noise_time);
  nl["noise_fraction"] = num(no.noise_fraction);
  nl["probe_r"] = num(no.probe_r);
  nl["probe_theta"] = num(no.probe_theta);
  nl["probe_z"] = num(no.probe_z);

  t["postproc"]["input"] = {[&c](const std::string& s) { c.postproc_input = trim(s); }, [&c] { return c.postproc_input; }};
  return t;
}

const char* const kSectionOrder[] = {"run", "params", "flow", "hydro", "kinematic", "sweep", "threshold", "nonlinear", "postproc"};

const char* const kKeyOrder[][13] = {
    {"kind", "out", "seed", "snapshot_every", "checkpoint_every", "workers"},
    {"Re", "Rm", "Omega_i", "A", "epsilon", "M", "dx", "dt", "Rv", "Zv", "vacuum_stretch", "inner_core_rotating"},
    {"kind"},
    {"probe_modes", "probe_horizon"},
    {"m", "dt", "t_min", "t_max", "check_every", "rtol", "atol", "probe_r", "probe_z"},
    {"epsilon", "Rm"},
    {"lo", "hi", "rtol"},
    {"t_end", "diag_every", "seed_energy", "noise_time", "noise_fraction", "probe_r", "probe_theta", "probe_z"},
    {"input"},
};

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError(field + ": " + what);
}

}  // namespace

const char* to_string(RunKind k) {
  switch (k) {
    case RunKind::Hydro:
      return "hydro";
    case RunKind::Kinematic:
      return "kinematic";
    case RunKind::Sweep:
      return "sweep";
    case RunKind::Threshold:
      return "threshold";
    case RunKind::Nonlinear:
      return "nonlinear";
    case RunKind::Postproc:
      return "postproc";
  }
  return "?";
}

void RunConfig::validate() {
  params.validate();
  require(!out_dir.empty(), "out", "must not be empty");
  require(snapshot_every >= 0, "snapshot_every", "must be non-negative");
  require(checkpoint_every >= 0, "checkpoint_every", "must be non-negative");
  require(workers >= 1, "workers", "must be at least 1");
  require(kinematic.m >= 0, "kinematic.m", "must be non-negative");
  require(kinematic.dt > 0.0, "kinematic.dt", "must be positive");
  require(kinematic.t_max > kinematic.t_min && kinematic.t_min >= 0.0, "kinematic.t_max", "must exceed t_min >= 0");
  require(kinematic.check_every > 0.0, "kinematic.check_every", "must be positive");
  require(kinematic.rtol > 0.0 && kinematic.atol >= 0.0, "kinematic.rtol", "tolerances must be positive");
  for (int m : hydro.probe_modes) require(m >= 1, "hydro.probe_modes", "wavenumbers must be at least 1");
  require(hydro.probe_horizon > 0.0, "hydro.probe_horizon", "must be positive");
  for (double e : sweep.epsilon) require(e > 0.0, "sweep.epsilon", "values must be positive");
  for (double r : sweep.Rm) require(r > 0.0, "sweep.Rm", "values must be positive");
  require(threshold.lo > 0.0 && threshold.hi > threshold.lo, "threshold.hi", "must exceed lo > 0");
  require(threshold.rtol > 0.0, "threshold.rtol", "must be positive");
  require(nonlinear.t_end > 0.0, "nonlinear.t_end", "must be positive");
  require(nonlinear.diag_every >= 1, "nonlinear.diag_every", "must be at least 1");
  require(nonlinear.seed_energy > 0.0, "nonlinear.seed_energy", "must be positive");
  require(nonlinear.noise_fraction > 0.0, "nonlinear.noise_fraction", "must be positive");
  if (kind == RunKind::Nonlinear) {
    require(flow != FlowKind::Modified, "flow.kind", "nonlinear runs need a Navier-Stokes flow (viscous or forced)");
    require(params.M >= 2, "M", "nonlinear runs need at least two modes");
  }
  full_scale = params.dx <= 1.0 / 100 + 1e-15;
}

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  Table t = bindings(c);
  std::string section = "run";
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!t.count(section)) throw ConfigError(where + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    auto& keys = t[section];
    const auto it = keys.find(key);
    if (it == keys.end()) throw ConfigError(where + "unknown key '" + key + "' in [" + section + "]");
    try {
      it->second.set(line.substr(eq + 1));
    } catch (const std::exception& e) {
      throw ConfigError(where + section + "." + key + ": " + e.what());
    }
  }
  c.validate();
  return c;
}

std::string to_text(const RunConfig& cfg) {
  RunConfig c = cfg;
  Table t = bindings(c);
  std::ostringstream out;
  for (std::size_t s = 0; s < std::size(kSectionOrder); ++s) {
    out << "[" << kSectionOrder[s] << "]\n";
    for (const char* key : kKeyOrder[s]) {
      if (!key) break;
      out << key << " = " << t[kSectionOrder[s]].at(key).get() << "\n";
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace tcdyn
