#pragma once

#include <array>
#include <optional>
#include <vector>

#include "tcdyn/collocation.hpp"
#include "tcdyn/extension.hpp"
#include "tcdyn/quadrature.hpp"
#include "tcdyn/sparse_solver.hpp"

namespace tcdyn {

/// Blade-model body force (A/r) e_r on 0.8<=|z|<=1, 1.2<=r<=1.8.
std::array<double, 3> body_force_eval(double r, double z, double A);

/// Face field of the body force; each r-face carries (A/r) times the
/// fraction of its control volume inside the forcing region.
FourierVectorField body_force_field(GridPtr g, double A, int modes = 1, int stride = 1);

/// Velocity and pressure with the two-level history of the time scheme.
/// `u` always carries wall and ghost values.
struct HydroState {
  FourierVectorField u;
  FourierVectorField u_prev;
  FourierVectorField n_prev;  ///< explicit terms of the previous step
  FourierScalarField p;
  double t = 0.0;
  long steps = 0;
};

struct HydroConfig {
  double Re = 120.0;
  WallMotion walls{1.0, 1.0};
  double A = 0.0;
  double dt = 0.005;
  int modes = 1;
  int stride = 1;
};

/// Second-order semi-implicit MAC solver on the fluid annulus: implicit
/// viscosity, explicit rotational advection (u x omega) and forcing, BDF2 in
/// time and incremental pressure projection.
class NavierStokesSolver {
 public:
  NavierStokesSolver(GridPtr grid, const HydroConfig& cfg);

  const HydroConfig& config() const { return cfg_; }
  const GridPtr& grid() const { return grid_; }
  const Collocator& collocator() const { return coll_; }
  const std::vector<GhostEntry>& ghosts() const { return ghosts_; }

  HydroState rest_state() const;
  /// Advances one step; `lorentz` is an extra face force (modes as u).
  void step(HydroState& s, const FourierVectorField* lorentz = nullptr) const;
  /// u x omega + body force + lorentz, on all faces.
  FourierVectorField explicit_terms(const FourierVectorField& u, const FourierVectorField* lorentz) const;

  /// Max over fluid cells of |div u|.
  double max_divergence(const HydroState& s) const;
  /// Advective Courant number max|u| dt / dx.
  double cfl(const HydroState& s) const;

  /// Newton iteration on the steady axisymmetric equations (mode 0 only);
  /// returns the residual history. Throws NoConvergence.
  std::vector<double> newton_steady(HydroState& s, double tol = 1e-11, int max_iter = 30) const;
  /// Norm of the steady residual of mode 0, relative to the viscous term scale.
  double steady_residual(const HydroState& s) const;

  /// Sets u from unknown values of one mode, filling ghosts.
  void set_mode(HydroState& s, int k, const CVec& x) const;
  CVec unknowns(const FourierVectorField& u, int k) const;
  /// Removes the divergent part of mode k of u by a pressure projection.
  void project(FourierVectorField& u, int k) const;

 private:
  struct ModeOps {
    SpMat P;       // unknowns -> all faces
    SpMat Lu;      // viscous operator on unknowns
    CVec Lg;       // viscous operator applied to the wall lift (mode 0)
    SpMat Df;      // unknowns -> fluid cells
    SpMat Gf;      // fluid cells -> unknowns
    SpMat C1;      // face -> edge curl, all faces
    SparseLU helm;
    SparseLU poisson;
    int pin = -1;
  };

  CVec lift(int k) const;
  CVec restrict_faces(const CVec& full) const;
  CVec full_from(const CVec& x, int k) const;

  GridPtr grid_;
  HydroConfig cfg_;
  std::vector<std::size_t> unk_;
  std::vector<std::size_t> cells_;  // fluid cell block indices
  std::vector<GhostEntry> ghosts_;
  FourierVectorField force_;
  Collocator coll_;
  std::vector<ModeOps> ops_;
};

/// Functional form of one time step.
HydroState step_navier_stokes(const NavierStokesSolver& solver, HydroState s,
                              const FourierVectorField* lorentz = nullptr);

struct SteadyOptions {
  double steady_tol = 1e-8;
  bool use_newton = true;
  double max_time = 400.0;  ///< time-stepping budget when Newton is off
  double window = -1.0;     ///< steadiness window; default one rotation period
};

struct SteadyResult {
  HydroState state;
  FlowStats stats;
  std::vector<double> residuals;  ///< Newton residuals or window changes
  double relative_change = 0.0;   ///< over the final window
};

/// Steady axisymmetric flow on the fluid grid of spacing dx.
SteadyResult run_to_steady(double dx, const HydroConfig& cfg, const SteadyOptions& opt = {});

/// Growth rates (field rate, 1/time) of small non-axisymmetric perturbations
/// of a steady base flow, one entry per requested wavenumber.
struct ProbeResult {
  int m;
  double sigma;
  bool reliable;
};
std::vector<ProbeResult> stability_probe(const HydroState& base, const HydroConfig& cfg,
                                         const std::vector<int>& wavenumbers, double horizon,
                                         unsigned seed = 1);

}  // namespace tcdyn
