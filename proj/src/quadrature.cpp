#include "tcdyn/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tcdyn/operators.hpp"

namespace tcdyn {
namespace {

void check_region(Domain support, Domain region) {
  if (static_cast<int>(region) > static_cast<int>(support)) {
    throw std::invalid_argument("field is not defined on the requested region");
  }
}

double mode_energy(const FourierVectorField& f, int k, const Eigen::VectorXd& w) {
  return 0.5 * theta_weight(k) * (w.array() * f.mode(k).array().abs2()).sum();
}

// physical value of one stored location at angle theta
double reconstruct(const std::vector<CVec>& modes, int stride, Eigen::Index idx, double theta) {
  double v = modes[0](idx).real();
  for (std::size_t k = 1; k < modes.size(); ++k) {
    const double m = static_cast<double>(k) * stride;
    v += 2.0 * (modes[k](idx) * std::polar(1.0, m * theta)).real();
  }
  return v;
}

}  // namespace

double quadrature_weight(const MeridianGrid& g, Family f, int i, int j, Domain region, int pr,
                         int pz) {
  const Extent e = extent(g, region);
  return g.r_moment(r_on_face(f), i, pr, e.r0, e.r1) * g.z_moment(z_on_face(f), j, pz, e.z0, e.z1);
}

Eigen::VectorXd quadrature_weights(const MeridianGrid& g, Staggering s, Domain region, int pr,
                                   int pz) {
  std::vector<Family> fams;
  if (s == Staggering::Cell) {
    fams = {Family::Cell};
  } else {
    for (int c = 0; c < 3; ++c) fams.push_back(component_family(s, c));
  }
  std::size_t n = 0;
  for (Family f : fams) n += g.count(f);
  Eigen::VectorXd w(static_cast<Eigen::Index>(n));
  for (Family f : fams) {
    for (int i = 0; i < g.dim_r(f); ++i) {
      for (int j = 0; j < g.dim_z(f); ++j) {
        w(static_cast<Eigen::Index>(g.index(f, i, j))) = quadrature_weight(g, f, i, j, region, pr, pz);
      }
    }
  }
  return w;
}

double fluid_volume() { return 6.0 * std::numbers::pi; }

std::vector<double> modal_energies(const FourierVectorField& f, Domain region) {
  check_region(f.support(), region);
  const Eigen::VectorXd w = quadrature_weights(f.grid(), Staggering::Face, region);
  std::vector<double> out(static_cast<std::size_t>(f.num_modes()));
  for (int k = 0; k < f.num_modes(); ++k) out[static_cast<std::size_t>(k)] = mode_energy(f, k, w);
  return out;
}

double energy(const FourierVectorField& f, Domain region) {
  double e = 0.0;
  for (double x : modal_energies(f, region)) e += x;
  return e;
}

double component_energy(const FourierVectorField& f, Domain region, int comp) {
  check_region(f.support(), region);
  const MeridianGrid& g = f.grid();
  Eigen::VectorXd w = quadrature_weights(g, Staggering::Face, region);
  const Family fam = component_family(Staggering::Face, comp);
  Eigen::VectorXd mask = Eigen::VectorXd::Zero(w.size());
  mask.segment(static_cast<Eigen::Index>(g.offset(fam)), static_cast<Eigen::Index>(g.count(fam)))
      .setOnes();
  w = w.cwiseProduct(mask);
  double e = 0.0;
  for (int k = 0; k < f.num_modes(); ++k) e += mode_energy(f, k, w);
  return e;
}

double inner_product(const FourierVectorField& f, const FourierVectorField& g, Domain region) {
  check_region(f.support(), region);
  check_region(g.support(), region);
  const Eigen::VectorXd w = quadrature_weights(f.grid(), Staggering::Face, region);
  double s = 0.0;
  const int n = std::min(f.num_modes(), g.num_modes());
  for (int k = 0; k < n; ++k) {
    s += theta_weight(k) * (w.array() * (f.mode(k).conjugate().array() * g.mode(k).array()).real()).sum();
  }
  return s;
}

FlowStats flow_stats(const FourierVectorField& u, std::optional<WallMotion> walls) {
  FlowStats s;
  const double vol = fluid_volume();
  // meridian-plane integrals of |u|^2 r dr dz over the fluid volume 6*pi
  const double to_meridian = 1.0 / (2.0 * std::numbers::pi);
  const double ep = component_energy(u, Domain::Fluid, 0) + component_energy(u, Domain::Fluid, 2);
  const double et = component_energy(u, Domain::Fluid, 1);
  s.Vp_star = std::sqrt(2.0 * ep * to_meridian / vol);
  s.Vt_star = std::sqrt(2.0 * et * to_meridian / vol);
  s.V_star = std::sqrt(2.0 * (ep + et) * to_meridian / vol);
  s.V_rms = std::sqrt(2.0 * (ep + et) / vol);
  s.Lambda = s.Vt_star > 0.0 ? s.Vp_star / s.Vt_star : 0.0;

  // peak speed at cell centres of the fluid, sampled at 3M angles
  const MeridianGrid& g = u.grid();
  const int ntheta = u.num_modes() > 1 ? 3 * u.num_modes() : 1;
  const auto& modes = u.modes();
  const int stride = u.stride();
  double vmax2 = 0.0;
  for (int i = 0; i < g.nr(); ++i) {
    for (int j = 0; j < g.nz(); ++j) {
      if (!g.in_fluid(i, j)) continue;
      const auto iR0 = static_cast<Eigen::Index>(g.index(Family::R, i, j));
      const auto iR1 = static_cast<Eigen::Index>(g.index(Family::R, i + 1, j));
      const auto iT = static_cast<Eigen::Index>(g.index(Family::T, i, j));
      const auto iZ0 = static_cast<Eigen::Index>(g.index(Family::Z, i, j));
      const auto iZ1 = static_cast<Eigen::Index>(g.index(Family::Z, i, j + 1));
      for (int l = 0; l < ntheta; ++l) {
        const double th = 2.0 * std::numbers::pi * l / ntheta;
        const double ur = 0.5 * (reconstruct(modes, stride, iR0, th) + reconstruct(modes, stride, iR1, th));
        const double ut = reconstruct(modes, stride, iT, th);
        const double uz = 0.5 * (reconstruct(modes, stride, iZ0, th) + reconstruct(modes, stride, iZ1, th));
        vmax2 = std::max(vmax2, ur * ur + ut * ut + uz * uz);
      }
    }
  }
  s.V_max = std::sqrt(vmax2);
  if (walls) {
    s.V_max = std::max({s.V_max, std::abs(walls->omega_inner), 2.0 * std::abs(walls->omega_lids)});
  }
  return s;
}

}  // namespace tcdyn
