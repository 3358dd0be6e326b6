#include "tcdyn/flows.hpp"

#include <cmath>
#include <stdexcept>

namespace tcdyn {

double alpha_of_epsilon(double epsilon, double Lambda0) {
  if (!(Lambda0 > 0.0)) throw std::invalid_argument("Lambda0 must be positive");
  const double l2 = Lambda0 * Lambda0;
  return std::sqrt((1.0 + epsilon * epsilon * l2) / (1.0 + l2));
}

FlowSpec make_viscous_flow(const SteadyResult& steady, double Omega_i) {
  FlowSpec f;
  f.kind = FlowKind::Viscous;
  f.Omega_i = Omega_i;
  f.u = steady.state.u;
  f.walls = {Omega_i, Omega_i};
  f.core_omega = Omega_i;
  f.stats = flow_stats(f.u, f.walls);
  f.reference = "Omega_i R_i";
  return f;
}

FlowSpec make_forced_flow(const SteadyResult& steady, double A, double Omega_i) {
  FlowSpec f = make_viscous_flow(steady, Omega_i);
  f.kind = FlowKind::Forced;
  f.A = A;
  return f;
}

FlowSpec make_modified_flow(const FlowSpec& V0, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const double alpha = alpha_of_epsilon(epsilon, V0.stats.Lambda);
  FlowSpec f = V0;
  f.kind = FlowKind::Modified;
  f.epsilon = epsilon;
  const MeridianGrid& g = V0.u.grid();
  const auto nR = static_cast<Eigen::Index>(g.count(Family::R));
  const auto nT = static_cast<Eigen::Index>(g.count(Family::T));
  const auto nZ = static_cast<Eigen::Index>(g.count(Family::Z));
  for (int k = 0; k < f.u.num_modes(); ++k) {
    CVec& v = f.u.mode(k);
    v.segment(0, nR) *= epsilon / alpha;
    v.segment(nR, nT) /= alpha;
    v.segment(nR + nT, nZ) *= epsilon / alpha;
  }
  f.Omega_i = V0.Omega_i / alpha;
  f.walls = {V0.walls.omega_inner / alpha, V0.walls.omega_lids / alpha};
  f.core_omega = V0.core_omega / alpha;
  f.stats = flow_stats(f.u, f.walls);
  f.reference = "alpha(epsilon) Omega_i R_i";
  return f;
}

FlowSpec with_fixed_core(FlowSpec f) {
  f.core_omega = 0.0;
  return f;
}

const char* to_string(FlowKind k) {
  switch (k) {
    case FlowKind::Viscous:
      return "viscous";
    case FlowKind::Modified:
      return "modified";
    case FlowKind::Forced:
      return "forced";
  }
  return "?";
}

}  // namespace tcdyn
