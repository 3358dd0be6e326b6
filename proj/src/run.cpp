#include "tcdyn/run.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "tcdyn/checkpoint.hpp"
#include "tcdyn/diagnostics.hpp"
#include "tcdyn/error.hpp"
#include "tcdyn/output.hpp"
#include "tcdyn/symmetry.hpp"

namespace fs = std::filesystem;

namespace tcdyn {
namespace {

std::string join_path(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

double energy_of(const FourierVectorField& H) { return energy(H, Domain::Conductor); }

WallMotion walls_of(const SimParams& p) { return {p.Omega_i, p.Omega_i}; }

HydroConfig hydro_config(const RunConfig& c, FlowKind kind) {
  HydroConfig h;
  h.Re = c.params.Re;
  h.walls = walls_of(c.params);
  h.A = kind == FlowKind::Forced ? c.params.A : 0.0;
  h.dt = c.params.dt;
  return h;
}

struct Flows {
  SteadyResult steady;
  FlowSpec base;  ///< the Navier-Stokes flow (V0 or V_I)
};

Flows solve_base(const RunConfig& c, std::ostream& log) {
  const FlowKind k = c.flow == FlowKind::Forced ? FlowKind::Forced : FlowKind::Viscous;
  log << "steady " << to_string(k) << " flow at dx=" << c.params.dx << "\n";
  Flows f;
  f.steady = run_to_steady(c.params.dx, hydro_config(c, k));
  f.base = k == FlowKind::Forced ? make_forced_flow(f.steady, c.params.A, c.params.Omega_i)
                                 : make_viscous_flow(f.steady, c.params.Omega_i);
  return f;
}

FlowSpec flow_for(const RunConfig& c, const FlowSpec& base, double epsilon) {
  FlowSpec f = c.flow == FlowKind::Modified ? make_modified_flow(base, epsilon) : base;
  return c.params.inner_core_rotating ? f : with_fixed_core(f);
}

KinematicOptions kinematic_options(const RunConfig& c) {
  KinematicOptions o = c.kinematic;
  o.seed = static_cast<unsigned>(c.seed);
  return o;
}

void write_flow_snapshot(const std::string& path, const RunConfig& c, const FlowSpec& f) {
  Archive a;
  a.kind = "flow";
  put_params(a, c.params);
  a.meta["flow.kind"] = to_string(f.kind);
  a.put_double("flow.epsilon", f.epsilon);
  a.put_double("stats.V_star", f.stats.V_star);
  a.put_double("stats.Lambda", f.stats.Lambda);
  a.put("u", f.u);
  write_archive(path, a);
}

void run_hydro(const RunConfig& c, std::ostream& log) {
  const Flows f = solve_base(c, log);
  const FlowSpec flow = flow_for(c, f.base, c.params.epsilon);
  const FlowStats& s = flow.stats;
  CsvWriter(join_path(c.out_dir, "hydro.csv"),
            {"Re", "A", "Omega_i", "epsilon", "V_star", "Vp_star", "Vt_star", "Lambda", "V_max", "V_rms"})
      .row({c.params.Re, flow.A, c.params.Omega_i, flow.epsilon, s.V_star, s.Vp_star, s.Vt_star, s.Lambda, s.V_max,
            s.V_rms});
  CsvWriter res(join_path(c.out_dir, "residuals.csv"), {"iteration", "residual"});
  for (std::size_t i = 0; i < f.steady.residuals.size(); ++i) res.row({static_cast<double>(i), f.steady.residuals[i]});
  write_flow_snapshot(join_path(c.out_dir, "flow.bin"), c, flow);
  log << "V*=" << s.V_star << " Lambda=" << s.Lambda << " V_max=" << s.V_max << "\n";
  if (!c.hydro.probe_modes.empty()) {
    const auto probe = stability_probe(f.steady.state, hydro_config(c, f.base.kind), c.hydro.probe_modes,
                                       c.hydro.probe_horizon, static_cast<unsigned>(c.seed));
    CsvWriter st(join_path(c.out_dir, "stability.csv"), {"m", "sigma", "reliable"});
    for (const auto& p : probe) {
      st.row({static_cast<double>(p.m), p.sigma, p.reliable ? 1.0 : 0.0});
      log << "m=" << p.m << " sigma=" << p.sigma << "\n";
    }
  }
}

void run_kinematic_pipeline(const RunConfig& c, std::ostream& log) {
  const Flows f = solve_base(c, log);
  const FlowSpec flow = flow_for(c, f.base, c.params.epsilon);
  const KinematicResult k = run_kinematic(flow, c.params, kinematic_options(c));
  CsvWriter g(join_path(c.out_dir, "growth.csv"), {"t", "E"});
  for (std::size_t i = 0; i < k.t.size(); ++i) g.row({k.t[i], k.E[i]});
  CsvWriter(join_path(c.out_dir, "kinematic.csv"),
            {"epsilon", "Rm", "m", "sigma", "t0", "t1", "goodness", "period", "converged"})
      .row({flow.epsilon, c.params.Rm, static_cast<double>(c.kinematic.m), k.fit.sigma, k.fit.t0, k.fit.t1,
            k.fit.goodness, k.period, k.converged ? 1.0 : 0.0});
  Archive a;
  a.kind = "eigenvector";
  put_params(a, c.params);
  a.put_double("sigma", k.fit.sigma);
  a.put_double("period", k.period);
  a.put("H", k.state.H);
  a.put("phi", k.state.phi);
  write_archive(join_path(c.out_dir, "eigenvector.bin"), a);
  log << "sigma=" << k.fit.sigma << " period=" << k.period << (k.converged ? "" : " (not converged)") << "\n";
}

void run_sweep(const RunConfig& c, std::ostream& log) {
  const Flows f = solve_base(c, log);
  std::vector<double> eps = c.sweep.epsilon.empty() || c.flow != FlowKind::Modified
                                ? std::vector<double>{c.params.epsilon}
                                : c.sweep.epsilon;
  std::vector<double> rms = c.sweep.Rm.empty() ? std::vector<double>{c.params.Rm} : c.sweep.Rm;
  struct Point {
    double eps, Rm;
  };
  std::vector<Point> pts;
  for (double e : eps)
    for (double r : rms) pts.push_back({e, r});

  const std::string dir = join_path(c.out_dir, "sweep_points");
  fs::create_directories(dir);
  const std::vector<std::string> header = {"epsilon", "Rm", "sigma", "t0", "t1", "goodness", "period", "converged"};
  auto point_file = [&](std::size_t i) { return join_path(dir, "point_" + std::to_string(i) + ".csv"); };

  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  std::exception_ptr failure;
  auto worker = [&] {
    for (std::size_t i = next++; i < pts.size(); i = next++) {
      try {
        const std::string file = point_file(i);
        if (!c.resume.empty() && fs::exists(file) && read_csv(file).rows.size() == 1) continue;
        SimParams p = c.params;
        p.Rm = pts[i].Rm;
        const KinematicResult k = run_kinematic(flow_for(c, f.base, pts[i].eps), p, kinematic_options(c));
        CsvWriter(file + ".tmp", header)
            .row({pts[i].eps, pts[i].Rm, k.fit.sigma, k.fit.t0, k.fit.t1, k.fit.goodness, k.period,
                  k.converged ? 1.0 : 0.0});
        fs::rename(file + ".tmp", file);
        std::lock_guard<std::mutex> lock(log_mutex);
        log << "epsilon=" << pts[i].eps << " Rm=" << pts[i].Rm << " sigma=" << k.fit.sigma << "\n";
      } catch (...) {
        std::lock_guard<std::mutex> lock(log_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const int nw = std::min<int>(c.workers, static_cast<int>(pts.size()));
  for (int w = 1; w < nw; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  CsvWriter out(join_path(c.out_dir, "sweep.csv"), header);
  for (std::size_t i = 0; i < pts.size(); ++i) out.row(read_csv(point_file(i)).rows.at(0));
}

void run_threshold(const RunConfig& c, std::ostream& log) {
  const Flows f = solve_base(c, log);
  const FlowSpec flow = flow_for(c, f.base, c.params.epsilon);
  const ThresholdResult r =
      critical_rm(flow, c.params, kinematic_options(c), c.threshold.lo, c.threshold.hi, c.threshold.rtol);
  CsvWriter(join_path(c.out_dir, "threshold.csv"), {"epsilon", "Rm_c", "period", "evaluations"})
      .row({flow.epsilon, r.Rm_c, r.period, static_cast<double>(r.evaluations.size())});
  CsvWriter ev(join_path(c.out_dir, "threshold_evals.csv"), {"Rm", "sigma"});
  for (const auto& [rm, s] : r.evaluations) ev.row({rm, s});
  log << "Rm_c=" << r.Rm_c << " period=" << r.period << "\n";
}

// ---- nonlinear ----

std::string rng_state(const std::mt19937_64& rng) {
  std::ostringstream s;
  s << rng;
  return s.str();
}

void run_nonlinear(const RunConfig& c, std::ostream& log) {
  const NonlinearOptions& o = c.nonlinear;
  const WallMotion walls = walls_of(c.params);
  const MHDSolver sol(c.params, walls, c.params.inner_core_rotating ? c.params.Omega_i : 0.0);
  const long n_end = std::lround(o.t_end / sol.dt());
  std::mt19937_64 rng(c.seed);
  bool noise_done = o.noise_time < 0.0;
  MHDState s;

  const std::vector<std::string> files = {"energy.csv", "modal.csv", "probe.csv", "dipole.csv"};
  std::vector<std::uint64_t> sizes;
  if (!c.resume.empty()) {
    const Archive a = read_archive(c.resume);
    if (a.kind != "checkpoint") throw ConfigError(c.resume + ": not a checkpoint");
    Archive mine;
    put_params(mine, c.params);
    for (const auto& [k, v] : mine.meta) {
      if (a.at(k) != v) throw ConfigError("resume: checkpoint differs in " + k);
    }
    s = sol.zero_state();
    get_state(a, s);
    std::istringstream(a.at("rng")) >> rng;
    noise_done = a.at("noise_done") == "1";
    for (const auto& f : files) {
      const std::string p = join_path(c.out_dir, f);
      if (!fs::exists(p)) throw ConfigError("resume: missing " + p);
      fs::resize_file(p, std::stoull(a.at("bytes." + f)));
    }
    log << "resumed at t=" << s.mag.t << " step " << s.mag.steps << "\n";
  } else {
    const Flows f = solve_base(c, log);
    MagneticState seed = sol.induction().seed(1, static_cast<unsigned>(rng()), o.seed_energy);
    // start in the symmetric class so that injected noise is the only antisymmetric content
    seed.H = sym_antisym_split(seed.H).first;
    s = sol.initial(f.steady.state, seed);
  }
  const bool append = !c.resume.empty();
  CsvWriter energy(join_path(c.out_dir, "energy.csv"), {"t", "E_kin", "E_mag", "E_sym", "E_anti"}, append);
  CsvWriter modal(join_path(c.out_dir, "modal.csv"), {"t", "m", "E_kin_m", "E_mag_m"}, append);
  CsvWriter probe(join_path(c.out_dir, "probe.csv"), {"t", "value"}, append);
  CsvWriter dipole(join_path(c.out_dir, "dipole.csv"), {"t", "D_x", "D_y", "D_z"}, append);
  const std::string ck_dir = join_path(c.out_dir, "checkpoints");
  const std::string snap_dir = join_path(c.out_dir, "snapshots");
  fs::create_directories(ck_dir);

  auto diagnostics = [&] {
    const double t = s.mag.t;
    const auto [sym, anti] = sym_antisym_split(s.mag.H);
    energy.row({t, sol.kinetic_energy(s), sol.magnetic_energy(s), energy_of(sym), energy_of(anti)});
    for (const auto& r : modal_energy_table(s.flow.u, s.mag.H)) modal.row({t, static_cast<double>(r.m), r.kinetic, r.magnetic});
    probe.row({t, point_probe(s.mag.H, o.probe_r, o.probe_theta, o.probe_z, 1)});
    const DipoleMoment d = dipole_moment(s.mag.H);
    dipole.row({t, d.x, d.y, d.z});
  };
  auto checkpoint = [&] {
    Archive a;
    a.kind = "checkpoint";
    put_params(a, c.params);
    put_state(a, s);
    a.meta["rng"] = rng_state(rng);
    a.meta["noise_done"] = noise_done ? "1" : "0";
    a.meta["bytes.energy.csv"] = std::to_string(energy.bytes());
    a.meta["bytes.modal.csv"] = std::to_string(modal.bytes());
    a.meta["bytes.probe.csv"] = std::to_string(probe.bytes());
    a.meta["bytes.dipole.csv"] = std::to_string(dipole.bytes());
    write_archive(join_path(ck_dir, "ckpt_" + std::to_string(s.mag.steps) + ".bin"), a);
    // keep the two most recent
    std::vector<std::pair<long, fs::path>> all;
    for (const auto& e : fs::directory_iterator(ck_dir)) {
      const std::string n = e.path().filename().string();
      if (n.rfind("ckpt_", 0) == 0 && e.path().extension() == ".bin") all.emplace_back(std::stol(n.substr(5)), e.path());
    }
    std::sort(all.begin(), all.end());
    for (std::size_t i = 0; i + 2 < all.size(); ++i) {
      fs::remove(all[i].second);
      fs::remove(all[i].second.string() + ".txt");
    }
  };
  auto snapshot = [&](const std::string& path) {
    Archive a;
    a.kind = "snapshot";
    put_params(a, c.params);
    a.put_double("t", s.mag.t);
    a.put("u", s.flow.u);
    a.put("H", s.mag.H);
    write_archive(path, a);
  };

  if (s.mag.steps == 0) diagnostics();
  while (s.mag.steps < n_end) {
    if (!noise_done && s.mag.t >= o.noise_time) {
      inject_noise(sol.induction(), s.mag, o.noise_fraction, static_cast<unsigned>(rng()));
      noise_done = true;
      log << "noise injected at t=" << s.mag.t << "\n";
    }
    sol.step(s);
    const long n = s.mag.steps;
    if (!std::isfinite(sol.magnetic_energy(s)) || !std::isfinite(sol.kinetic_energy(s))) {
      throw SolverError("nonlinear run diverged at t=" + std::to_string(s.mag.t));
    }
    if (n % o.diag_every == 0) diagnostics();
    if (c.snapshot_every > 0 && n % c.snapshot_every == 0) {
      fs::create_directories(snap_dir);
      snapshot(join_path(snap_dir, "snap_" + std::to_string(n) + ".bin"));
    }
    if (c.checkpoint_every > 0 && n % c.checkpoint_every == 0) checkpoint();
  }
  checkpoint();
  snapshot(join_path(c.out_dir, "final.bin"));
  const ParityReport pr = parity_report(s);
  log << "t=" << s.mag.t << " E_kin=" << sol.kinetic_energy(s) << " E_mag=" << sol.magnetic_energy(s)
      << " odd-velocity fraction=" << pr.u_odd / (pr.u_even + pr.u_odd) << "\n";
}

// ---- postproc ----

void run_postproc(const RunConfig& c, std::ostream& log) {
  const std::string in = c.postproc_input.empty() ? c.out_dir : c.postproc_input;
  int made = 0;
  auto have = [&](const char* f) { return fs::exists(join_path(in, f)); };
  auto out = [&](const char* f) { return join_path(c.out_dir, f); };
  if (have("energy.csv")) {
    const CsvTable t = read_csv(join_path(in, "energy.csv"));
    const auto x = t.column("t");
    write_svg_plot(out("energy.svg"), "Energies", "t", "energy",
                   {{"E_kin", x, t.column("E_kin")}, {"E_mag", x, t.column("E_mag")}, {"E_sym", x, t.column("E_sym")},
                    {"E_anti", x, t.column("E_anti")}},
                   true);
    ++made;
  }
  if (have("modal.csv")) {
    const CsvTable t = read_csv(join_path(in, "modal.csv"));
    std::map<int, PlotSeries> by_m;
    for (const auto& r : t.rows) {
      PlotSeries& s = by_m[static_cast<int>(r[1])];
      s.label = "m=" + std::to_string(static_cast<int>(r[1]));
      s.x.push_back(r[0]);
      s.y.push_back(r[3]);
    }
    std::vector<PlotSeries> ser;
    for (auto& [m, s] : by_m) ser.push_back(std::move(s));
    write_svg_plot(out("modal.svg"), "Magnetic modal energies", "t", "energy", ser, true);
    ++made;
  }
  if (have("probe.csv")) {
    const CsvTable t = read_csv(join_path(in, "probe.csv"));
    const auto x = t.column("t"), y = t.column("value");
    write_svg_plot(out("probe.svg"), "Probe H_theta", "t", "H_theta", {{"probe", x, y}});
    CsvWriter per(out("periods.csv"), {"T", "T_mod"});
    try {
      const PeriodEstimate p = period_estimate(x, y);
      per.row({p.T, p.T_mod.value_or(std::nan(""))});
    } catch (const std::exception& e) {
      log << "probe period: " << e.what() << "\n";
    }
    ++made;
  }
  if (have("dipole.csv")) {
    const CsvTable t = read_csv(join_path(in, "dipole.csv"));
    const auto x = t.column("t");
    write_svg_plot(out("dipole.svg"), "Dipole moment", "t", "D",
                   {{"D_x", x, t.column("D_x")}, {"D_y", x, t.column("D_y")}, {"D_z", x, t.column("D_z")}});
    ++made;
  }
  if (have("growth.csv")) {
    const CsvTable t = read_csv(join_path(in, "growth.csv"));
    write_svg_plot(out("growth.svg"), "Kinematic mode energy", "t", "E", {{"E", t.column("t"), t.column("E")}}, true);
    ++made;
  }
  if (have("sweep.csv")) {
    const CsvTable t = read_csv(join_path(in, "sweep.csv"));
    write_svg_plot(out("sweep.svg"), "Growth rate", "epsilon", "sigma", {{"sigma", t.column("epsilon"), t.column("sigma")}});
    ++made;
  }
  if (made == 0) throw ConfigError("postproc: no CSV files to plot in " + in);
  log << made << " plots written\n";
}

}  // namespace

void execute(const RunConfig& cfg, std::ostream& log) {
  fs::create_directories(cfg.out_dir);
  {
    std::ofstream f(join_path(cfg.out_dir, "config.resolved"), std::ios::trunc);
    f << to_text(cfg);
  }
  if (cfg.full_scale) log << "full-scale: long runtime\n";
  switch (cfg.kind) {
    case RunKind::Hydro:
      return run_hydro(cfg, log);
    case RunKind::Kinematic:
      return run_kinematic_pipeline(cfg, log);
    case RunKind::Sweep:
      return run_sweep(cfg, log);
    case RunKind::Threshold:
      return run_threshold(cfg, log);
    case RunKind::Nonlinear:
      return run_nonlinear(cfg, log);
    case RunKind::Postproc:
      return run_postproc(cfg, log);
  }
}

int run(const RunConfig& cfg, std::ostream& log) {
  try {
    execute(cfg, log);
    return kExitOk;
  } catch (const ConfigError& e) {
    log << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NoConvergence& e) {
    log << "no convergence: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const std::exception& e) {
    log << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  }
}

}  // namespace tcdyn
