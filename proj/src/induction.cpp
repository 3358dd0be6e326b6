#include "tcdyn/induction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "tcdyn/error.hpp"
#include "tcdyn/extension.hpp"

namespace tcdyn {
namespace {

using Trip = Eigen::Triplet<cplx>;

SpMat selection(const std::vector<std::size_t>& rows, std::size_t n) {
  SpMat R(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(n));
  std::vector<Trip> t;
  t.reserve(rows.size());
  for (std::size_t a = 0; a < rows.size(); ++a) {
    t.emplace_back(static_cast<int>(a), static_cast<int>(rows[a]), 1.0);
  }
  R.setFromTriplets(t.begin(), t.end());
  return R;
}

double fraction(const MeridianGrid& g, Family f, int i, int j) {
  const double inf = std::numeric_limits<double>::infinity();
  auto rfrac = [&](int p) {
    const double full = g.r_moment(true, i, p, -inf, inf);
    return full > 0.0 ? g.r_moment(true, i, p, 0.0, 2.0) / full : 0.0;
  };
  auto zfrac = [&] {
    const double full = g.z_moment(true, j, 0, -inf, inf);
    return full > 0.0 ? g.z_moment(true, j, 0, -1.0, 1.0) / full : 0.0;
  };
  const double r = g.r_of(f, i), z = g.z_of(f, j);
  switch (f) {
    case Family::Er:
      return r < 2.0 ? zfrac() : 0.0;
    case Family::Et:
      return rfrac(0) * zfrac();
    case Family::Ez:
      return (z > -1.0 && z < 1.0) ? rfrac(1) : 0.0;
    default:
      return 0.0;
  }
}

// least-squares slope of y(t) over t >= from
double log_slope(const std::vector<double>& t, const std::vector<double>& y, double from) {
  double n = 0, st = 0, sy = 0, stt = 0, sty = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < from) continue;
    n += 1;
    st += t[i];
    sy += y[i];
    stt += t[i] * t[i];
    sty += t[i] * y[i];
  }
  const double d = n * stt - st * st;
  return d > 0.0 ? (n * sty - st * sy) / d : 0.0;
}

}  // namespace

InductionSolver::InductionSolver(GridPtr grid, const InductionConfig& cfg, const FourierVectorField& u)
    : grid_(std::move(grid)), cfg_(cfg), coll_(grid_, cfg.modes), u_(u) {
  if (!(cfg.Rm > 0.0) || !(cfg.dt > 0.0) || cfg.modes < 1) {
    throw std::invalid_argument("InductionSolver: Rm, dt and modes must be positive");
  }
  const MeridianGrid& g = *grid_;
  if (u_.grid_ptr() != grid_) throw std::invalid_argument("InductionSolver: velocity on a different grid");
  const int iw = g.i_wall(), jb = g.j_bottom(), jt = g.j_top();
  for (int i = 1; i <= iw; ++i)
    for (int j = jb; j < jt; ++j) closure_.push_back(g.index(Family::R, i, j));
  for (int i = 0; i < iw; ++i)
    for (int j = jb; j < jt; ++j) closure_.push_back(g.index(Family::T, i, j));
  for (int i = 0; i < iw; ++i)
    for (int j = jb; j <= jt; ++j) closure_.push_back(g.index(Family::Z, i, j));
  for (int i = 0; i < g.nr(); ++i)
    for (int j = 0; j < g.nz(); ++j)
      if (!g.in_conductor(i, j)) vacuum_.push_back(g.index(Family::Cell, i, j));

  frac_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.n_edges()));
  edge_mask_ = CVec::Zero(frac_.size());
  for (Family f : {Family::Er, Family::Et, Family::Ez}) {
    for (int i = 0; i < g.dim_r(f); ++i) {
      for (int j = 0; j < g.dim_z(f); ++j) {
        const auto e = static_cast<Eigen::Index>(g.index(f, i, j));
        frac_(e) = fraction(g, f, i, j);
        if (frac_(e) > 1e-12) edge_mask_(e) = 1.0;
      }
    }
  }
  CVec eta = CVec::Zero(frac_.size());
  for (Eigen::Index e = 0; e < frac_.size(); ++e) {
    if (edge_mask_(e) != 0.0) eta(e) = 1.0 / (cfg_.Rm * frac_(e));
  }
  const SpMat Eta = diagonal(eta);
  const SpMat Mask = diagonal(edge_mask_);
  X_ = Mask * cross_face_face_to_edge(g, u_.mode(0));

  const std::size_t nh = closure_.size(), nv = vacuum_.size(), n = nh + nv;
  std::vector<int> face_unknown(g.n_faces(), -1);
  for (std::size_t a = 0; a < nh; ++a) face_unknown[closure_[a]] = static_cast<int>(a);
  std::vector<int> cell_unknown(g.n_cells(), -1);
  for (std::size_t a = 0; a < nv; ++a) cell_unknown[vacuum_[a]] = static_cast<int>(a);
  const SpMat Rh = selection(closure_, g.n_faces());
  const SpMat Rv = selection(vacuum_, g.n_cells());

  ops_.resize(static_cast<std::size_t>(cfg_.modes));
  for (int k = 0; k < cfg_.modes; ++k) {
    if (cfg_.only_mode >= 0 && k != cfg_.only_mode) continue;
    const int m = k * cfg_.stride;
    ModeOps& op = ops_[static_cast<std::size_t>(k)];
    std::vector<Trip> t;
    for (std::size_t a = 0; a < nh; ++a) t.emplace_back(static_cast<int>(closure_[a]), static_cast<int>(a), 1.0);
    const SpMat G = gradient(g, m);
    for (int c = 0; c < G.outerSize(); ++c) {
      const int v = cell_unknown[static_cast<std::size_t>(c)];
      if (v < 0) continue;
      for (SpMat::InnerIterator it(G, c); it; ++it) {
        if (face_unknown[static_cast<std::size_t>(it.row())] >= 0) continue;
        t.emplace_back(static_cast<int>(it.row()), static_cast<int>(nh) + v, it.value());
      }
    }
    op.S.resize(static_cast<Eigen::Index>(g.n_faces()), static_cast<Eigen::Index>(n));
    op.S.setFromTriplets(t.begin(), t.end());

    op.Cfe = curl_face_to_edge(g, m);
    op.Cef = Rh * curl_edge_to_face(g, m);
    SpMat ohm = Eta * op.Cfe;
    if (cfg_.implicit_advection) ohm -= X_;
    op.F = op.Cef * ohm * op.S;
    const SpMat V = Rv * divergence(g, m) * op.S;
    op.Lv = V.rightCols(static_cast<Eigen::Index>(nv));
    op.Dv_c = V.leftCols(static_cast<Eigen::Index>(nh));

    // [1.5/dt I + F ; V]
    SpMat top = op.F;
    for (std::size_t a = 0; a < nh; ++a) top.coeffRef(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a)) += 1.5 / cfg_.dt;
    std::vector<Trip> st;
    st.reserve(static_cast<std::size_t>(top.nonZeros() + V.nonZeros()));
    for (int c = 0; c < top.outerSize(); ++c)
      for (SpMat::InnerIterator it(top, c); it; ++it) st.emplace_back(static_cast<int>(it.row()), c, it.value());
    for (int c = 0; c < V.outerSize(); ++c)
      for (SpMat::InnerIterator it(V, c); it; ++it)
        st.emplace_back(static_cast<int>(nh + static_cast<std::size_t>(it.row())), c, it.value());
    SpMat A(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    A.setFromTriplets(st.begin(), st.end());
    op.sys.factor(A);
    op.lap.factor(op.Lv);
  }
}

MagneticState InductionSolver::zero_state() const {
  MagneticState s;
  s.H = FourierVectorField(grid_, cfg_.modes, cfg_.stride, Domain::Box);
  s.H_prev = s.H;
  s.phi = FourierScalarField(grid_, cfg_.modes, cfg_.stride, Domain::Box);
  s.adv_prev = FourierEdgeField(grid_, cfg_.modes, cfg_.stride, Domain::Box);
  return s;
}

CVec InductionSolver::pack(const FourierVectorField& H, int k) const {
  const std::size_t nh = closure_.size();
  CVec x = CVec::Zero(static_cast<Eigen::Index>(nh + vacuum_.size()));
  const CVec& h = H.mode(k);
  for (std::size_t a = 0; a < nh; ++a) x(static_cast<Eigen::Index>(a)) = h(static_cast<Eigen::Index>(closure_[a]));
  return x;
}

void InductionSolver::unpack(const CVec& x, MagneticState& s, int k) const {
  const ModeOps& op = ops_[static_cast<std::size_t>(k)];
  s.H.mode(k) = op.S * x;
  CVec& p = s.phi.mode(k);
  p.setZero();
  const auto nh = static_cast<Eigen::Index>(closure_.size());
  for (std::size_t a = 0; a < vacuum_.size(); ++a) {
    p(static_cast<Eigen::Index>(vacuum_[a])) = x(nh + static_cast<Eigen::Index>(a));
  }
}

CVec InductionSolver::solve_vacuum_potential(const FourierVectorField& H, int k) const {
  const ModeOps& op = ops_.at(static_cast<std::size_t>(k));
  if (!op.lap.ready()) throw std::invalid_argument("solve_vacuum_potential: mode not active");
  const auto nh = static_cast<Eigen::Index>(closure_.size());
  const CVec h = pack(H, k).head(nh);
  return op.lap.solve(-(op.Dv_c * h));
}

void InductionSolver::complete(MagneticState& s) const {
  for (int k = 0; k < cfg_.modes; ++k) {
    if (!ops_[static_cast<std::size_t>(k)].sys.ready()) continue;
    CVec x = pack(s.H, k);
    x.tail(static_cast<Eigen::Index>(vacuum_.size())) = solve_vacuum_potential(s.H, k);
    unpack(x, s, k);
  }
}

MagneticState InductionSolver::seed(int k, unsigned seed, double energy_target) const {
  if (k < 0 || k >= cfg_.modes || !ops_[static_cast<std::size_t>(k)].sys.ready()) {
    throw std::invalid_argument("seed: mode not active");
  }
  MagneticState s = zero_state();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  CVec a = CVec::Zero(frac_.size());
  for (Eigen::Index e = 0; e < a.size(); ++e) {
    const double re = nd(rng), im = nd(rng);
    if (edge_mask_(e) != 0.0) a(e) = cplx(re, k == 0 ? 0.0 : im);
  }
  const ModeOps& op = ops_[static_cast<std::size_t>(k)];
  const CVec h = op.Cef * a;
  CVec x = CVec::Zero(static_cast<Eigen::Index>(closure_.size() + vacuum_.size()));
  x.head(h.size()) = h;
  x.tail(static_cast<Eigen::Index>(vacuum_.size())) = op.lap.solve(-(op.Dv_c * h));
  unpack(x, s, k);
  const double e = tcdyn::energy(s.H, Domain::Conductor);
  if (e > 0.0) rescale(s, std::sqrt(energy_target / e));
  s.H_prev = s.H;
  return s;
}

void InductionSolver::rescale(MagneticState& s, double c) {
  s.H *= c;
  s.H_prev *= c;
  s.phi *= c;
  s.adv_prev *= c;
}

void InductionSolver::step(MagneticState& s, const FourierVectorField* u_full) const {
  const double dt = cfg_.dt;
  const auto nh = static_cast<Eigen::Index>(closure_.size());
  const auto nv = static_cast<Eigen::Index>(vacuum_.size());
  FourierEdgeField adv;
  if (!cfg_.implicit_advection) {
    if (u_full != nullptr) {
      adv = coll_.cross_to_edge(*u_full, s.H);
      for (auto& v : adv.modes()) v = v.cwiseProduct(edge_mask_);
    } else {
      adv = FourierEdgeField(grid_, cfg_.modes, cfg_.stride, Domain::Box);
      for (int k = 0; k < cfg_.modes; ++k) adv.mode(k) = X_ * s.H.mode(k);
    }
    if (s.steps == 0) s.adv_prev = adv;
  }
  const FourierVectorField H_old = s.H;
  for (int k = 0; k < cfg_.modes; ++k) {
    const ModeOps& op = ops_[static_cast<std::size_t>(k)];
    if (!op.sys.ready()) continue;
    CVec rhs = CVec::Zero(nh + nv);
    rhs.head(nh) = (2.0 * pack(s.H, k).head(nh) - 0.5 * pack(s.H_prev, k).head(nh)) / dt;
    if (!cfg_.implicit_advection) {
      rhs.head(nh) += op.Cef * (2.0 * adv.mode(k) - s.adv_prev.mode(k));
    }
    unpack(op.sys.solve(rhs), s, k);
  }
  s.H_prev = H_old;
  if (!cfg_.implicit_advection) s.adv_prev = std::move(adv);
  s.t += dt;
  ++s.steps;
}

FourierEdgeField InductionSolver::current(const FourierVectorField& H) const {
  FourierEdgeField J(grid_, H.num_modes(), H.stride(), Domain::Conductor);
  CVec inv = CVec::Zero(frac_.size());
  for (Eigen::Index e = 0; e < frac_.size(); ++e) {
    if (edge_mask_(e) != 0.0) inv(e) = 1.0 / frac_(e);
  }
  for (int k = 0; k < H.num_modes(); ++k) {
    J.mode(k) = curl_face_to_edge(*grid_, H.wavenumber(k)) * H.mode(k);
    J.mode(k) = J.mode(k).cwiseProduct(inv);
  }
  return J;
}

FourierEdgeField InductionSolver::electric_field(const MagneticState& s) const {
  FourierEdgeField E = current(s.H);
  for (int k = 0; k < s.H.num_modes(); ++k) E.mode(k) = E.mode(k) / cfg_.Rm - X_ * s.H.mode(k);
  return E;
}

double InductionSolver::relative_divergence(const MagneticState& s) const {
  double dmax = 0.0, hmax = 0.0;
  for (int k = 0; k < s.H.num_modes(); ++k) {
    const CVec d = divergence(*grid_, s.H.wavenumber(k)) * s.H.mode(k);
    dmax = std::max(dmax, d.cwiseAbs().maxCoeff());
    hmax = std::max(hmax, s.H.mode(k).cwiseAbs().maxCoeff());
  }
  return hmax > 0.0 ? dmax * grid_->dx() / hmax : 0.0;
}

GridPtr magnetic_grid(const SimParams& p) { return MeridianGrid::make(p.dx, p.Rv, p.Zv, p.vacuum_stretch); }

double eigenmode_period(const std::vector<double>& t, const std::vector<cplx>& c, double t0, double t1) {
  std::vector<double> x, y;
  double prev = 0.0, offset = 0.0;
  bool first = true;
  for (std::size_t i = 0; i < std::min(t.size(), c.size()); ++i) {
    if (t[i] < t0 || t[i] > t1 || std::abs(c[i]) == 0.0) continue;
    double a = std::arg(c[i]);
    if (!first) {
      while (a + offset - prev > std::numbers::pi) offset -= 2.0 * std::numbers::pi;
      while (a + offset - prev < -std::numbers::pi) offset += 2.0 * std::numbers::pi;
    }
    first = false;
    prev = a + offset;
    x.push_back(t[i]);
    y.push_back(prev);
  }
  if (x.size() < 3) return std::numeric_limits<double>::infinity();
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double omega = sxx > 0 ? sxy / sxx : 0.0;
  if (std::abs(omega) * (x.back() - x.front()) < 1e-9) return std::numeric_limits<double>::infinity();
  return 2.0 * std::numbers::pi / std::abs(omega);
}

KinematicResult run_kinematic(const FlowSpec& flow, const SimParams& p, const KinematicOptions& opt,
                              const MagneticState* warm) {
  if (opt.m < 0) throw std::invalid_argument("run_kinematic: m must be >= 0");
  const GridPtr g = magnetic_grid(p);
  InductionConfig cfg;
  cfg.Rm = p.Rm;
  cfg.dt = opt.dt;
  cfg.modes = opt.m == 0 ? 1 : 2;
  cfg.stride = opt.m == 0 ? 1 : opt.m;
  cfg.only_mode = opt.m == 0 ? 0 : 1;
  const int k = cfg.only_mode;
  const FourierVectorField u = velocity_on_conductor(flow.u, g, flow.walls, flow.core_omega);
  InductionSolver solver(g, cfg, u);

  MagneticState s;
  if (warm != nullptr && warm->H.grid().n_faces() == g->n_faces() && warm->H.num_modes() == cfg.modes) {
    s = solver.zero_state();
    s.H.mode(k) = warm->H.mode(k);
    solver.complete(s);
    const double e = energy(s.H, Domain::Conductor);
    if (e > 0.0) InductionSolver::rescale(s, 1.0 / std::sqrt(e));
    s.H_prev = s.H;
  } else {
    s = solver.seed(k, opt.seed);
  }

  int ip = 0, jp = 0;
  g->locate(opt.probe_r, opt.probe_z, ip, jp);
  const auto probe = static_cast<Eigen::Index>(g->index(Family::T, ip, jp));

  KinematicResult res;
  std::vector<cplx> pc;
  double log_offset = 0.0;
  double next_check = opt.t_min;
  double prev_slope = std::numeric_limits<double>::quiet_NaN();
  int settled_checks = 0;
  const long max_steps = static_cast<long>(std::ceil(opt.t_max / opt.dt));
  for (long n = 0; n < max_steps; ++n) {
    solver.step(s);
    const double e = energy(s.H, Domain::Conductor);
    if (!(e > 0.0) || !std::isfinite(e)) throw SolverError("run_kinematic: energy lost");
    res.t.push_back(s.t);
    res.E.push_back(std::log(e) + log_offset);
    pc.push_back(s.H.mode(k)(probe));
    if (e > 1e20 || e < 1e-20) {
      InductionSolver::rescale(s, 1.0 / std::sqrt(e));
      log_offset += std::log(e);
    }
    if (s.t + 1e-9 >= next_check) {
      next_check += opt.check_every;
      // settled when the slope over the last interval repeats that of the
      // interval before
      const double slope = 0.5 * log_slope(res.t, res.E, s.t - opt.check_every);
      settled_checks = std::abs(slope - prev_slope) < opt.rtol * std::abs(slope) + opt.atol ? settled_checks + 1 : 0;
      prev_slope = slope;
      if (settled_checks >= 2) {
        res.converged = true;
        break;
      }
    }
  }
  {
    // fit over the last three check intervals
    const double from = res.t.empty() ? 0.0 : res.t.back() - 3.0 * opt.check_every;
    std::vector<double> t, E;
    const double shift = res.E.empty() ? 0.0 : res.E.back();
    for (std::size_t i = 0; i < res.t.size(); ++i) {
      if (res.t[i] < from) continue;
      t.push_back(res.t[i]);
      E.push_back(std::exp(std::max(-700.0, res.E[i] - shift)));
    }
    res.fit = try_growth_rate(t, E, opt.m);
    res.fit.reliable = res.fit.reliable && res.converged;
  }
  // stored series holds ln E; report E itself relative to the final value
  const double shift = res.E.empty() ? 0.0 : res.E.back();
  for (double& x : res.E) x = std::exp(std::max(-700.0, x - shift));
  res.period = eigenmode_period(res.t, pc, res.fit.t0, res.fit.t1);
  const double e = energy(s.H, Domain::Conductor);
  InductionSolver::rescale(s, 1.0 / std::sqrt(e));
  res.state = std::move(s);
  return res;
}

ThresholdResult find_threshold(const std::function<double(double)>& sigma, double lo, double hi, double rtol,
                               int max_eval) {
  ThresholdResult r;
  double a = lo, b = hi;
  double fa = sigma(a), fb = sigma(b);
  r.evaluations = {{a, fa}, {b, fb}};
  if (fa * fb > 0.0) throw NoConvergence("find_threshold: growth rate does not change sign in the bracket");
  // Illinois variant: the retained endpoint's value is halved when the
  // same side is kept twice, so both ends of the bracket move
  double fa_true = fa, c_prev = std::numeric_limits<double>::quiet_NaN();
  for (int it = 2; it < max_eval; ++it) {
    if (std::abs(b - a) <= rtol * 0.5 * std::abs(a + b)) break;
    const double c = (a * fb - b * fa) / (fb - fa);
    if (std::abs(c - c_prev) <= 0.25 * rtol * std::abs(c)) break;
    c_prev = c;
    const double fc = sigma(c);
    r.evaluations.emplace_back(c, fc);
    if (fc == 0.0) {
      r.Rm_c = c;
      return r;
    }
    if (fc * fb < 0.0) {
      a = b;
      fa = fa_true = fb;
    } else {
      fa *= 0.5;
    }
    b = c;
    fb = fc;
  }
  r.Rm_c = (a * fb - b * fa_true) / (fb - fa_true);
  return r;
}

ThresholdResult critical_rm(const FlowSpec& flow, SimParams p, const KinematicOptions& opt, double lo, double hi,
                            double rtol) {
  std::optional<MagneticState> warm;
  std::vector<std::pair<double, double>> periods;
  auto eval = [&](double Rm) {
    p.Rm = Rm;
    KinematicResult kr = run_kinematic(flow, p, opt, warm ? &*warm : nullptr);
    if (!kr.fit.reliable) throw NoConvergence("critical_rm: growth rate did not settle");
    periods.emplace_back(kr.fit.sigma, kr.period);
    warm = std::move(kr.state);
    return kr.fit.sigma;
  };
  ThresholdResult r = find_threshold(eval, lo, hi, rtol);
  // period of the evaluation closest to marginal
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [s, T] : periods) {
    if (std::abs(s) < best) {
      best = std::abs(s);
      r.period = T;
    }
  }
  return r;
}

std::vector<SweepRow> epsilon_sweep(const FlowSpec& V0, const std::vector<double>& eps, const SimParams& p,
                                    const KinematicOptions& opt) {
  std::vector<SweepRow> rows;
  for (double e : eps) {
    const FlowSpec f = make_modified_flow(V0, e);
    const KinematicResult kr = run_kinematic(f, p, opt);
    SweepRow row;
    row.epsilon = e;
    row.alpha = alpha_of_epsilon(e, V0.stats.Lambda);
    row.Lambda = f.stats.Lambda;
    row.V_max = f.stats.V_max;
    row.sigma = kr.fit.sigma;
    row.period = kr.period;
    row.reliable = kr.fit.reliable;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace tcdyn
