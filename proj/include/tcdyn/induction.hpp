#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "tcdyn/collocation.hpp"
#include "tcdyn/flows.hpp"
#include "tcdyn/growth.hpp"
#include "tcdyn/params.hpp"
#include "tcdyn/sparse_solver.hpp"

namespace tcdyn {

/// Magnetic field on the whole box. Inside the closed conductor H holds the
/// evolved values; elsewhere it is grad(phi) of the vacuum potential.
struct MagneticState {
  FourierVectorField H;
  FourierScalarField phi;
  FourierVectorField H_prev;
  FourierEdgeField adv_prev;  ///< masked u x H of the previous step (explicit advection)
  double t = 0.0;
  long steps = 0;
};

struct InductionConfig {
  double Rm = 200.0;
  double dt = 0.05;
  int modes = 1;
  int stride = 1;
  /// Treat u x H implicitly with the axisymmetric part of the velocity.
  /// Otherwise u x H is extrapolated explicitly (SBDF2).
  bool implicit_advection = true;
  /// When >= 0 only this mode index is factored and advanced.
  int only_mode = -1;
};

/// BDF2 solver of dH/dt = curl(u x H - curl(H)/Rm) in the conductor
/// [0,2]x[-1,1], coupled at every step to a potential field in the vacuum
/// box with phi = 0 on its outer boundary.
class InductionSolver {
 public:
  /// `u` is a face velocity on `grid` (see velocity_on_conductor); only its
  /// mode 0 enters the implicit operator.
  InductionSolver(GridPtr grid, const InductionConfig& cfg, const FourierVectorField& u);

  const InductionConfig& config() const { return cfg_; }
  const GridPtr& grid() const { return grid_; }
  const Collocator& collocator() const { return coll_; }

  MagneticState zero_state() const;
  /// Random solenoidal field in mode k: the curl of a random vector
  /// potential on conductor edges, completed by its vacuum potential and
  /// scaled to conductor energy `energy`.
  MagneticState seed(int k, unsigned seed, double energy = 1.0) const;

  /// Advances one step. `u_full` supplies all velocity modes for explicit
  /// advection by collocation; without it the axisymmetric velocity is used.
  void step(MagneticState& s, const FourierVectorField* u_full = nullptr) const;

  /// Vacuum potential of mode k matching the conductor faces of H.
  CVec solve_vacuum_potential(const FourierVectorField& H, int k) const;
  /// Recomputes the vacuum part of H and phi from its conductor values.
  void complete(MagneticState& s) const;

  /// Current density on edges, divided by the conducting fraction so that
  /// interface edges carry the conductor-side value; zero outside.
  FourierEdgeField current(const FourierVectorField& H) const;
  /// Electric field E = J/Rm - u x H on conductor edges for the stored
  /// axisymmetric velocity (zero outside).
  FourierEdgeField electric_field(const MagneticState& s) const;

  /// Max |div H| over all cells, relative to max |H| / dx.
  double relative_divergence(const MagneticState& s) const;

  /// Multiplies H and its history by c.
  static void rescale(MagneticState& s, double c);

  std::size_t conductor_unknowns() const { return closure_.size(); }
  std::size_t vacuum_unknowns() const { return vacuum_.size(); }
  /// Conducting fraction of the dual face of each edge.
  const Eigen::VectorXd& edge_fraction() const { return frac_; }

 private:
  struct ModeOps {
    SpMat S;      // [h; phi] -> all faces
    SpMat F;      // Faraday operator on closure faces
    SpMat Cef;    // closure rows of curl_edge_to_face
    SpMat Cfe;    // curl_face_to_edge
    SpMat Lv;     // vacuum Laplacian
    SpMat Dv_c;   // closure values -> vacuum divergence contribution
    SparseLU sys;
    SparseLU lap;
  };
  CVec pack(const FourierVectorField& H, int k) const;
  void unpack(const CVec& x, MagneticState& s, int k) const;

  GridPtr grid_;
  InductionConfig cfg_;
  Collocator coll_;
  FourierVectorField u_;
  std::vector<std::size_t> closure_;  // face indices of conductor unknowns
  std::vector<std::size_t> vacuum_;   // cell indices of potential unknowns
  Eigen::VectorXd frac_;
  CVec edge_mask_;  // 1 on edges with a conducting fraction
  SpMat X_;         // H -> u0 x H on edges
  std::vector<ModeOps> ops_;
};

/// Magnetic grid for a parameter set (box Rv x 2Zv, vacuum stretch).
GridPtr magnetic_grid(const SimParams& p);

struct KinematicOptions {
  int m = 1;
  double dt = 0.1;
  double t_min = 30.0;
  double t_max = 3000.0;
  double check_every = 10.0;
  double rtol = 2e-3;  ///< relative change of sigma between checks
  double atol = 2e-5;  ///< absolute floor of that change
  unsigned seed = 1;
  /// Point where the phase of the mode is probed for the drift period.
  double probe_r = 1.2, probe_z = -0.5;
};

struct KinematicResult {
  GrowthRateEstimate fit;
  double period = 0.0;  ///< drift period of the pattern, +inf if steady
  bool converged = false;
  std::vector<double> t, E;
  MagneticState state;  ///< final field, normalised to unit energy
};

/// Kinematic dynamo of one azimuthal wavenumber in a steady flow: runs until
/// the growth rate settles. `warm` seeds from a previous field.
KinematicResult run_kinematic(const FlowSpec& flow, const SimParams& p, const KinematicOptions& opt,
                              const MagneticState* warm = nullptr);

/// Drift period 2 pi / |omega| from the phase of a complex probe series,
/// fitted over [t0, t1]. Returns +inf when the phase does not move.
double eigenmode_period(const std::vector<double>& t, const std::vector<cplx>& c, double t0, double t1);

struct ThresholdResult {
  double Rm_c = 0.0;
  double period = 0.0;
  std::vector<std::pair<double, double>> evaluations;  ///< (Rm, sigma)
};

/// Zero of sigma(Rm) inside [lo, hi] by Illinois regula falsi, to relative
/// bracket width `rtol`. Throws NoConvergence if the bracket has no sign
/// change.
ThresholdResult find_threshold(const std::function<double(double)>& sigma, double lo, double hi,
                               double rtol = 0.02, int max_eval = 12);

/// Critical Rm of mode opt.m for a flow, with warm starts between evaluations.
ThresholdResult critical_rm(const FlowSpec& flow, SimParams p, const KinematicOptions& opt, double lo,
                            double hi, double rtol = 0.02);

struct SweepRow {
  double epsilon = 0.0, alpha = 0.0, Lambda = 0.0, V_max = 0.0;
  double sigma = 0.0, period = 0.0;
  bool reliable = false;
};

/// Growth rates of mode opt.m in the modified flows V_eps at fixed Rm.
std::vector<SweepRow> epsilon_sweep(const FlowSpec& V0, const std::vector<double>& eps, const SimParams& p,
                                    const KinematicOptions& opt);

}  // namespace tcdyn
