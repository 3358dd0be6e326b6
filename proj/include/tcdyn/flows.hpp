#pragma once

#include <string>

#include "tcdyn/hydro.hpp"

namespace tcdyn {

enum class FlowKind { Viscous, Modified, Forced };

/// A steady axisymmetric driving flow with its wall motion and the rigid
/// rotation rate used for the solid core in induction runs.
struct FlowSpec {
  FlowKind kind = FlowKind::Viscous;
  double epsilon = 1.0;  ///< modified flows
  double A = 0.0;        ///< forced flows
  double Omega_i = 1.0;
  FourierVectorField u;  ///< on the fluid grid, with wall and ghost values
  WallMotion walls{1.0, 1.0};
  double core_omega = 1.0;
  FlowStats stats;
  std::string reference;  ///< velocity scale the flow is expressed in
};

/// Normalisation alpha(eps) = sqrt((1 + eps^2 L0^2) / (1 + L0^2)).
double alpha_of_epsilon(double epsilon, double Lambda0);
inline double lambda_of_epsilon(double epsilon, double Lambda0) { return epsilon * Lambda0; }

FlowSpec make_viscous_flow(const SteadyResult& steady, double Omega_i = 1.0);
FlowSpec make_forced_flow(const SteadyResult& steady, double A, double Omega_i);

/// V_eps = (eps/alpha) V0p + (1/alpha) V0t with alpha from the measured
/// Lambda of V0, so the rms is preserved exactly. Walls and core rotation
/// scale by 1/alpha. Throws std::invalid_argument for eps <= 0.
FlowSpec make_modified_flow(const FlowSpec& V0, double epsilon);

/// Same flow with a fixed (non-rotating) solid core.
FlowSpec with_fixed_core(FlowSpec f);

const char* to_string(FlowKind k);

}  // namespace tcdyn
