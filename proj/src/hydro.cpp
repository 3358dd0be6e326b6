#include "tcdyn/hydro.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "tcdyn/error.hpp"
#include "tcdyn/growth.hpp"

namespace tcdyn {
namespace {

using Trip = Eigen::Triplet<cplx>;

constexpr double kBdf = 1.5;

SpMat selection(const std::vector<std::size_t>& rows, std::size_t ncols) {
  std::vector<Trip> t;
  t.reserve(rows.size());
  for (std::size_t a = 0; a < rows.size(); ++a) t.emplace_back(static_cast<int>(a), static_cast<int>(rows[a]), 1.0);
  SpMat S(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(ncols));
  S.setFromTriplets(t.begin(), t.end());
  return S;
}

// Replaces row `pin` of A by the unit row e_pin.
SpMat pin_row(const SpMat& A, int pin) {
  std::vector<Trip> t;
  t.reserve(static_cast<std::size_t>(A.nonZeros()) + 1);
  for (int c = 0; c < A.outerSize(); ++c) {
    for (SpMat::InnerIterator it(A, c); it; ++it) {
      if (it.row() != pin) t.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    }
  }
  t.emplace_back(pin, pin, 1.0);
  SpMat B(A.rows(), A.cols());
  B.setFromTriplets(t.begin(), t.end());
  return B;
}

double overlap(double a, double b, double lo, double hi) { return std::max(0.0, std::min(b, hi) - std::max(a, lo)); }

}  // namespace

std::array<double, 3> body_force_eval(double r, double z, double A) {
  const double az = std::abs(z);
  if (az >= 0.8 && az <= 1.0 && r >= 1.2 && r <= 1.8) return {A / r, 0.0, 0.0};
  return {0.0, 0.0, 0.0};
}

FourierVectorField body_force_field(GridPtr g, double A, int modes, int stride) {
  FourierVectorField f(g, modes, stride, Domain::Fluid);
  if (A == 0.0) return f;
  const MeridianGrid& G = *g;
  const auto& rc = G.rc();
  const auto& zf = G.zf();
  for (int i = 1; i < G.nr(); ++i) {
    const double a = rc[i - 1], b = rc[i];
    if (!(b > 1.2 && a < 1.8)) continue;
    const double wr = (std::pow(std::min(b, 1.8), 2) - std::pow(std::max(a, 1.2), 2)) / (b * b - a * a);
    for (int j = 0; j < G.nz(); ++j) {
      const double dz = zf[j + 1] - zf[j];
      const double wz = (overlap(zf[j], zf[j + 1], 0.8, 1.0) + overlap(zf[j], zf[j + 1], -1.0, -0.8)) / dz;
      if (wz > 0.0) f.at(0, Family::R, i, j) = A / G.rf()[i] * wr * wz;
    }
  }
  return f;
}

NavierStokesSolver::NavierStokesSolver(GridPtr grid, const HydroConfig& cfg)
    : grid_(std::move(grid)), cfg_(cfg), coll_(grid_, cfg.modes) {
  if (cfg.Re <= 0.0 || cfg.dt <= 0.0 || cfg.modes < 1 || cfg.stride < 1) {
    throw ConfigError("invalid hydro configuration");
  }
  const MeridianGrid& g = *grid_;
  if (g.i_core() < 1 || g.i_wall() >= g.nr() || g.j_bottom() < 1 || g.j_top() >= g.nz()) {
    throw ConfigError("hydro grid needs a ghost layer around the fluid");
  }
  unk_ = fluid_unknowns(g);
  for (int i = g.i_core(); i < g.i_wall(); ++i) {
    for (int j = g.j_bottom(); j < g.j_top(); ++j) cells_.push_back(g.index(Family::Cell, i, j));
  }
  ghosts_ = fluid_ghosts(g, cfg.walls, true);
  force_ = body_force_field(grid_, cfg.A, cfg.modes, cfg.stride);

  const std::size_t nf = g.n_faces();
  std::vector<int> col(nf, -1);
  for (std::size_t a = 0; a < unk_.size(); ++a) col[unk_[a]] = static_cast<int>(a);
  std::vector<Trip> pt;
  for (std::size_t a = 0; a < unk_.size(); ++a) pt.emplace_back(static_cast<int>(unk_[a]), static_cast<int>(a), 1.0);
  for (const auto& e : ghosts_) {
    pt.emplace_back(static_cast<int>(e.ghost), col.at(e.mirror), -e.rho);
  }
  SpMat P(static_cast<Eigen::Index>(nf), static_cast<Eigen::Index>(unk_.size()));
  P.setFromTriplets(pt.begin(), pt.end());
  const SpMat R = selection(unk_, nf);
  const SpMat Rc = selection(cells_, g.n_cells());
  const SpMat Sc = SpMat(Rc.transpose());
  const double nu = 1.0 / cfg.Re;

  ops_.resize(static_cast<std::size_t>(cfg.modes));
  for (int k = 0; k < cfg.modes; ++k) {
    const int m = k * cfg.stride;
    ModeOps& o = ops_[static_cast<std::size_t>(k)];
    o.P = P;
    o.C1 = curl_face_to_edge(g, m);
    const SpMat D = divergence(g, m);
    const SpMat G = gradient(g, m);
    const SpMat L = SpMat(G * D) - SpMat(curl_edge_to_face(g, m) * o.C1);
    o.Lu = R * (L * P);
    o.Lg = R * (L * lift(k));
    o.Df = Rc * (D * P);
    o.Gf = R * (G * Sc);
    SpMat Q = o.Df * o.Gf;
    if (m == 0) {
      o.pin = 0;
      Q = pin_row(Q, o.pin);
    }
    o.poisson.factor(Q);
    SpMat H = -nu * o.Lu;
    SpMat I(H.rows(), H.cols());
    I.setIdentity();
    H += (kBdf / cfg.dt) * I;
    o.helm.factor(H);
  }
}

CVec NavierStokesSolver::lift(int k) const {
  CVec g = CVec::Zero(static_cast<Eigen::Index>(grid_->n_faces()));
  if (k == 0) {
    for (const auto& e : ghosts_) g(static_cast<Eigen::Index>(e.ghost)) = (1.0 + e.rho) * e.wall;
  }
  return g;
}

CVec NavierStokesSolver::restrict_faces(const CVec& full) const {
  CVec x(static_cast<Eigen::Index>(unk_.size()));
  for (std::size_t a = 0; a < unk_.size(); ++a) x(static_cast<Eigen::Index>(a)) = full(static_cast<Eigen::Index>(unk_[a]));
  return x;
}

CVec NavierStokesSolver::full_from(const CVec& x, int k) const {
  return ops_[static_cast<std::size_t>(k)].P * x + lift(k);
}

CVec NavierStokesSolver::unknowns(const FourierVectorField& u, int k) const { return restrict_faces(u.mode(k)); }

void NavierStokesSolver::set_mode(HydroState& s, int k, const CVec& x) const { s.u.mode(k) = full_from(x, k); }

HydroState NavierStokesSolver::rest_state() const {
  HydroState s;
  s.u = FourierVectorField(grid_, cfg_.modes, cfg_.stride, Domain::Fluid);
  for (int k = 0; k < cfg_.modes; ++k) s.u.mode(k) = lift(k);
  s.u_prev = s.u;
  s.n_prev = FourierVectorField(grid_, cfg_.modes, cfg_.stride, Domain::Fluid);
  s.p = FourierScalarField(grid_, cfg_.modes, cfg_.stride, Domain::Fluid);
  return s;
}

FourierVectorField NavierStokesSolver::explicit_terms(const FourierVectorField& u,
                                                      const FourierVectorField* lorentz) const {
  FourierEdgeField w(grid_, cfg_.modes, cfg_.stride, Domain::Fluid);
  for (int k = 0; k < cfg_.modes; ++k) w.mode(k) = ops_[static_cast<std::size_t>(k)].C1 * u.mode(k);
  FourierVectorField n = coll_.cross_to_face(u, w);
  n += force_;
  if (lorentz) {
    for (int k = 0; k < std::min(cfg_.modes, lorentz->num_modes()); ++k) n.mode(k) += lorentz->mode(k);
  }
  return n;
}

void NavierStokesSolver::step(HydroState& s, const FourierVectorField* lorentz) const {
  const double dt = cfg_.dt, nu = 1.0 / cfg_.Re;
  FourierVectorField n = explicit_terms(s.u, lorentz);
  if (s.steps == 0) {
    s.u_prev = s.u;
    s.n_prev = n;
  }
  FourierVectorField u_new = s.u;
  for (int k = 0; k < cfg_.modes; ++k) {
    const ModeOps& o = ops_[static_cast<std::size_t>(k)];
    CVec pk(static_cast<Eigen::Index>(cells_.size()));
    for (std::size_t a = 0; a < cells_.size(); ++a) pk(static_cast<Eigen::Index>(a)) = s.p.mode(k)(static_cast<Eigen::Index>(cells_[a]));
    const CVec rhs = restrict_faces(2.0 * s.u.mode(k) - 0.5 * s.u_prev.mode(k)) / dt +
                     restrict_faces(2.0 * n.mode(k) - s.n_prev.mode(k)) - o.Gf * pk + nu * o.Lg;
    const CVec xs = o.helm.solve(rhs);
    const CVec div = o.Df * xs;
    CVec prhs = (kBdf / dt) * div;
    if (o.pin >= 0) prhs(o.pin) = 0.0;
    const CVec phi = o.poisson.solve(prhs);
    const CVec x = xs - (dt / kBdf) * (o.Gf * phi);
    pk += phi - nu * div;
    if (k == 0) {
      // mode 0 is real; drop roundoff in the imaginary part
      for (auto& v : pk) v = v.real();
    }
    for (std::size_t a = 0; a < cells_.size(); ++a) s.p.mode(k)(static_cast<Eigen::Index>(cells_[a])) = pk(static_cast<Eigen::Index>(a));
    u_new.mode(k) = full_from(x, k);
    if (k == 0) u_new.mode(0) = u_new.mode(0).real().cast<cplx>();
  }
  s.u_prev = std::move(s.u);
  s.u = std::move(u_new);
  s.n_prev = std::move(n);
  s.t += dt;
  ++s.steps;
}

void NavierStokesSolver::project(FourierVectorField& u, int k) const {
  const ModeOps& o = ops_[static_cast<std::size_t>(k)];
  const CVec x = restrict_faces(u.mode(k));
  CVec rhs = o.Df * x;
  if (o.pin >= 0) rhs(o.pin) = 0.0;
  const CVec phi = o.poisson.solve(rhs);
  u.mode(k) = full_from(x - o.Gf * phi, k);
}

double NavierStokesSolver::max_divergence(const HydroState& s) const {
  double d = 0.0;
  for (int k = 0; k < cfg_.modes; ++k) {
    const ModeOps& o = ops_[static_cast<std::size_t>(k)];
    d = std::max(d, (o.Df * restrict_faces(s.u.mode(k))).cwiseAbs().maxCoeff());
  }
  return d;
}

double NavierStokesSolver::cfl(const HydroState& s) const {
  return flow_stats(s.u).V_max * cfg_.dt / grid_->dx();
}

double NavierStokesSolver::steady_residual(const HydroState& s) const {
  const ModeOps& o = ops_[0];
  const FourierVectorField n = explicit_terms(s.u, nullptr);
  CVec pk(static_cast<Eigen::Index>(cells_.size()));
  for (std::size_t a = 0; a < cells_.size(); ++a) pk(static_cast<Eigen::Index>(a)) = s.p.mode(0)(static_cast<Eigen::Index>(cells_[a]));
  const CVec x = restrict_faces(s.u.mode(0));
  const CVec F = restrict_faces(n.mode(0)) + (1.0 / cfg_.Re) * (o.Lu * x + o.Lg) - o.Gf * pk;
  return F.cwiseAbs().maxCoeff();
}

std::vector<double> NavierStokesSolver::newton_steady(HydroState& s, double tol, int max_iter) const {
  const MeridianGrid& g = *grid_;
  const ModeOps& o = ops_[0];
  const double nu = 1.0 / cfg_.Re;
  const auto nu_ = static_cast<Eigen::Index>(unk_.size());
  const auto np = static_cast<Eigen::Index>(cells_.size());
  const SpMat R = selection(unk_, g.n_faces());
  const CVec f0 = restrict_faces(force_.mode(0));

  CVec x = restrict_faces(s.u.mode(0));
  CVec p(np);
  for (Eigen::Index a = 0; a < np; ++a) p(a) = s.p.mode(0)(static_cast<Eigen::Index>(cells_[static_cast<std::size_t>(a)]));

  auto residual = [&](const CVec& xx, const CVec& pp) {
    const CVec u = full_from(xx, 0);
    const CVec w = o.C1 * u;
    const CVec nl = R * (cross_face_edge_to_face(g, u) * w);
    CVec F(nu_ + np);
    F.head(nu_) = nl + f0 + nu * (o.Lu * xx + o.Lg) - o.Gf * pp;
    F.tail(np) = o.Df * xx;
    F(nu_ + o.pin) = pp(o.pin);
    return F;
  };

  std::vector<double> history;
  CVec F = residual(x, p);
  double res = F.cwiseAbs().maxCoeff();
  history.push_back(res);
  for (int it = 0; it < max_iter && res > tol; ++it) {
    const CVec u = full_from(x, 0);
    const CVec w = o.C1 * u;
    const SpMat Jn = R * ((cross_face_edge_to_face(g, u) * o.C1 - cross_edge_face_to_face(g, w)) * o.P);
    const SpMat A = Jn + nu * o.Lu;
    std::vector<Trip> t;
    t.reserve(static_cast<std::size_t>(A.nonZeros() + o.Gf.nonZeros() + o.Df.nonZeros()) + 1);
    for (int c = 0; c < A.outerSize(); ++c) {
      for (SpMat::InnerIterator i(A, c); i; ++i) t.emplace_back(static_cast<int>(i.row()), static_cast<int>(i.col()), i.value());
    }
    for (int c = 0; c < o.Gf.outerSize(); ++c) {
      for (SpMat::InnerIterator i(o.Gf, c); i; ++i) {
        t.emplace_back(static_cast<int>(i.row()), static_cast<int>(nu_ + i.col()), -i.value());
      }
    }
    for (int c = 0; c < o.Df.outerSize(); ++c) {
      for (SpMat::InnerIterator i(o.Df, c); i; ++i) {
        if (i.row() == o.pin) continue;
        t.emplace_back(static_cast<int>(nu_ + i.row()), static_cast<int>(i.col()), i.value());
      }
    }
    t.emplace_back(static_cast<int>(nu_ + o.pin), static_cast<int>(nu_ + o.pin), 1.0);
    SpMat J(nu_ + np, nu_ + np);
    J.setFromTriplets(t.begin(), t.end());
    const SparseLU lu(J);
    const CVec dy = lu.solve(F);
    // damped update
    double lam = 1.0;
    bool accepted = false;
    for (int h = 0; h < 8; ++h, lam *= 0.5) {
      const CVec xn = x - lam * dy.head(nu_);
      const CVec pn = p - lam * dy.tail(np);
      const CVec Fn = residual(xn, pn);
      const double rn = Fn.cwiseAbs().maxCoeff();
      if (rn < res || h == 7) {
        x = xn.real().cast<cplx>();
        p = pn.real().cast<cplx>();
        F = Fn;
        accepted = rn < res;
        res = rn;
        break;
      }
    }
    history.push_back(res);
    if (!accepted) break;
  }
  if (!(res <= tol)) throw NoConvergence("Newton iteration for the steady flow stalled at residual " + std::to_string(res));
  s.u.mode(0) = full_from(x, 0);
  s.p.mode(0).setZero();
  for (Eigen::Index a = 0; a < np; ++a) s.p.mode(0)(static_cast<Eigen::Index>(cells_[static_cast<std::size_t>(a)])) = p(a);
  s.u_prev = s.u;
  s.n_prev = explicit_terms(s.u, nullptr);
  return history;
}

HydroState step_navier_stokes(const NavierStokesSolver& solver, HydroState s, const FourierVectorField* lorentz) {
  solver.step(s, lorentz);
  return s;
}

namespace {

double relative_change(const FourierVectorField& a, const FourierVectorField& b) {
  const double na = energy(a, Domain::Fluid);
  const double d = energy(a - b, Domain::Fluid);
  return na > 0.0 ? std::sqrt(d / na) : std::sqrt(d);
}

}  // namespace

SteadyResult run_to_steady(double dx, const HydroConfig& cfg_in, const SteadyOptions& opt) {
  HydroConfig cfg = cfg_in;
  cfg.modes = 1;
  cfg.stride = 1;
  const double vref = std::max({2.0 * std::abs(cfg.walls.omega_lids), std::abs(cfg.walls.omega_inner), 0.5});
  cfg.dt = std::min(cfg.dt, 0.4 * dx / (1.2 * vref));
  auto grid = MeridianGrid::fluid_box(dx);
  SteadyResult out;

  if (opt.use_newton) {
    // continuation in Re from a viscous-dominated state
    std::vector<double> path;
    for (double re = cfg.Re; re > 15.0; re *= 0.5) path.push_back(re);
    std::reverse(path.begin(), path.end());
    if (path.empty()) path.push_back(cfg.Re);
    HydroState s;
    bool first = true;
    for (std::size_t a = 0; a < path.size(); ++a) {
      HydroConfig c = cfg;
      c.Re = path[a];
      NavierStokesSolver sol(grid, c);
      if (first) {
        s = sol.rest_state();
        first = false;
      }
      s.steps = 0;
      auto h = sol.newton_steady(s);
      out.residuals.insert(out.residuals.end(), h.begin(), h.end());
    }
    s.t = 0.0;
    s.steps = 0;
    out.state = std::move(s);
  }
  NavierStokesSolver solver(grid, cfg);
  if (!opt.use_newton) out.state = solver.rest_state();

  const double period = 2.0 * std::numbers::pi / std::max(std::abs(cfg.walls.omega_lids), 0.1);
  const double window = opt.window > 0.0 ? opt.window : period;
  const long nstep = std::max(1L, static_cast<long>(std::lround(window / cfg.dt)));
  double budget = opt.use_newton ? window * 3.0 : opt.max_time;
  for (;;) {
    const FourierVectorField before = out.state.u;
    for (long n = 0; n < nstep; ++n) solver.step(out.state);
    out.relative_change = relative_change(out.state.u, before);
    if (!opt.use_newton) out.residuals.push_back(out.relative_change);
    if (!std::isfinite(out.relative_change)) throw SolverError("hydro run diverged");
    if (out.relative_change < opt.steady_tol) break;
    budget -= window;
    if (budget <= 0.0) {
      throw NoConvergence("flow not steady: relative change " + std::to_string(out.relative_change) +
                          " over the last window");
    }
  }
  out.stats = flow_stats(out.state.u, cfg.walls);
  return out;
}

std::vector<ProbeResult> stability_probe(const HydroState& base, const HydroConfig& cfg_in,
                                         const std::vector<int>& wavenumbers, double horizon, unsigned seed) {
  std::vector<ProbeResult> out;
  const GridPtr grid = base.u.grid_ptr();
  const double e0 = energy(base.u, Domain::Fluid);
  for (int m : wavenumbers) {
    if (m < 1) throw std::invalid_argument("probe wavenumbers must be positive");
    HydroConfig cfg = cfg_in;
    cfg.modes = 2;
    cfg.stride = m;
    const double vref = std::max({2.0 * std::abs(cfg.walls.omega_lids), std::abs(cfg.walls.omega_inner), 0.5});
    cfg.dt = std::min(cfg.dt, 0.4 * grid->dx() / (1.2 * vref));
    NavierStokesSolver sol(grid, cfg);
    HydroState s = sol.rest_state();
    s.u.mode(0) = base.u.mode(0);
    s.p.mode(0) = base.p.mode(0);
    std::mt19937_64 rng(seed + static_cast<unsigned>(m));
    std::normal_distribution<double> nd(0.0, 1.0);
    CVec x = sol.unknowns(s.u, 1);
    for (auto& v : x) v = cplx(nd(rng), nd(rng));
    sol.set_mode(s, 1, x);
    sol.project(s.u, 1);
    const double e1 = modal_energies(s.u, Domain::Fluid)[1];
    s.u.mode(1) *= std::sqrt(1e-8 * e0 / e1);
    s.u_prev = s.u;

    std::vector<double> t, E;
    const long nstep = static_cast<long>(std::ceil(horizon / cfg.dt));
    const long every = std::max(1L, nstep / 400);
    bool saturated = false;
    for (long n = 1; n <= nstep; ++n) {
      sol.step(s);
      if (n % every == 0) {
        const double em = modal_energies(s.u, Domain::Fluid)[1];
        if (em > 1e-3 * e0) {
          saturated = true;
          break;
        }
        t.push_back(s.t);
        E.push_back(em);
      }
    }
    GrowthRateEstimate g = try_growth_rate(t, E, m);
    if (saturated && !g.reliable) throw NoConvergence("perturbation reached nonlinear amplitude before the fit window");
    out.push_back({m, g.sigma, g.reliable});
  }
  return out;
}

}  // namespace tcdyn
