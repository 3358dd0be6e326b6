#include "tcdyn/extension.hpp"

#include <cmath>
#include <stdexcept>

#include "tcdyn/operators.hpp"

namespace tcdyn {

std::vector<std::size_t> fluid_unknowns(const MeridianGrid& g) {
  std::vector<std::size_t> idx;
  const int i0 = g.i_core(), i1 = g.i_wall(), j0 = g.j_bottom(), j1 = g.j_top();
  for (int i = i0 + 1; i < i1; ++i) {
    for (int j = j0; j < j1; ++j) idx.push_back(g.index(Family::R, i, j));
  }
  for (int i = i0; i < i1; ++i) {
    for (int j = j0; j < j1; ++j) idx.push_back(g.index(Family::T, i, j));
  }
  for (int i = i0; i < i1; ++i) {
    for (int j = j0 + 1; j < j1; ++j) idx.push_back(g.index(Family::Z, i, j));
  }
  return idx;
}

std::vector<GhostEntry> fluid_ghosts(const MeridianGrid& g, const WallMotion& walls, bool inner_ghosts) {
  std::vector<GhostEntry> out;
  const int i0 = g.i_core(), i1 = g.i_wall(), j0 = g.j_bottom(), j1 = g.j_top();
  const auto& rf = g.rf();
  const auto& rc = g.rc();
  const auto& zf = g.zf();
  const auto& zc = g.zc();
  const bool has_lo = j0 > 0, has_hi = j1 < g.nz(), has_out = i1 < g.nr();
  // radial ratios for cell-centred ghosts
  const double rho_in = i0 > 0 ? (rf[i0] - rc[i0 - 1]) / (rc[i0] - rf[i0]) : 1.0;
  const double rho_out = has_out ? (rc[i1] - rf[i1]) / (rf[i1] - rc[i1 - 1]) : 1.0;
  const double rho_lo = has_lo ? (zf[j0] - zc[j0 - 1]) / (zc[j0] - zf[j0]) : 1.0;
  const double rho_hi = has_hi ? (zc[j1] - zf[j1]) / (zf[j1] - zc[j1 - 1]) : 1.0;
  using F = Family;
  for (int j = j0; j < j1; ++j) {
    if (inner_ghosts && i0 > 0) out.push_back({g.index(F::T, i0 - 1, j), g.index(F::T, i0, j), rho_in, walls.omega_inner * rf[i0]});
    if (has_out) out.push_back({g.index(F::T, i1, j), g.index(F::T, i1 - 1, j), rho_out, 0.0});
  }
  for (int i = i0; i < i1; ++i) {
    const double w = walls.omega_lids * rc[i];
    if (has_lo) out.push_back({g.index(F::T, i, j0 - 1), g.index(F::T, i, j0), rho_lo, w});
    if (has_hi) out.push_back({g.index(F::T, i, j1), g.index(F::T, i, j1 - 1), rho_hi, w});
  }
  for (int i = i0 + 1; i < i1; ++i) {
    if (has_lo) out.push_back({g.index(F::R, i, j0 - 1), g.index(F::R, i, j0), rho_lo, 0.0});
    if (has_hi) out.push_back({g.index(F::R, i, j1), g.index(F::R, i, j1 - 1), rho_hi, 0.0});
  }
  for (int j = j0 + 1; j < j1; ++j) {
    if (inner_ghosts && i0 > 0) out.push_back({g.index(F::Z, i0 - 1, j), g.index(F::Z, i0, j), rho_in, 0.0});
    if (has_out) out.push_back({g.index(F::Z, i1, j), g.index(F::Z, i1 - 1, j), rho_out, 0.0});
  }
  return out;
}

void apply_ghosts(FourierVectorField& u, const std::vector<GhostEntry>& ghosts) {
  const MeridianGrid& g = u.grid();
  const int i0 = g.i_core(), i1 = g.i_wall(), j0 = g.j_bottom(), j1 = g.j_top();
  for (int k = 0; k < u.num_modes(); ++k) {
    CVec& v = u.mode(k);
    for (int j = j0; j < j1; ++j) {
      v(static_cast<Eigen::Index>(g.index(Family::R, i0, j))) = 0.0;
      v(static_cast<Eigen::Index>(g.index(Family::R, i1, j))) = 0.0;
    }
    for (int i = i0; i < i1; ++i) {
      v(static_cast<Eigen::Index>(g.index(Family::Z, i, j0))) = 0.0;
      v(static_cast<Eigen::Index>(g.index(Family::Z, i, j1))) = 0.0;
    }
    for (const auto& e : ghosts) {
      const double w = k == 0 ? e.wall : 0.0;
      v(static_cast<Eigen::Index>(e.ghost)) =
          (1.0 + e.rho) * w - e.rho * v(static_cast<Eigen::Index>(e.mirror));
    }
  }
}

FourierVectorField transfer(const FourierVectorField& src, GridPtr dst, Domain region) {
  const MeridianGrid& a = src.grid();
  const MeridianGrid& b = *dst;
  if (std::abs(a.dx() - b.dx()) > 1e-14) throw std::invalid_argument("transfer needs equal conductor spacing");
  FourierVectorField out(dst, src.num_modes(), src.stride(), region);
  const Extent e = extent(b, region);
  const int dj_face = a.j_bottom() - b.j_bottom();
  const double tol = 1e-9 * b.dx();
  for (int c = 0; c < 3; ++c) {
    const Family f = component_family(Staggering::Face, c);
    for (int i = 0; i < b.dim_r(f); ++i) {
      const double r = b.r_of(f, i);
      if (r < e.r0 - tol || r > e.r1 + tol || i >= a.dim_r(f)) continue;
      for (int j = 0; j < b.dim_z(f); ++j) {
        const double z = b.z_of(f, j);
        if (z < e.z0 - tol || z > e.z1 + tol) continue;
        const int ja = j + dj_face;
        if (ja < 0 || ja >= a.dim_z(f) || std::abs(a.z_of(f, ja) - z) > tol || std::abs(a.r_of(f, i) - r) > tol) {
          throw std::invalid_argument("grids do not share the location being transferred");
        }
        for (int k = 0; k < src.num_modes(); ++k) out.at(k, f, i, j) = src.at(k, f, i, ja);
      }
    }
  }
  return out;
}

FourierVectorField velocity_on_conductor(const FourierVectorField& u, GridPtr mag, const WallMotion& walls,
                                         double core_omega) {
  FourierVectorField v = transfer(u, mag, Domain::Fluid);
  v.set_support(Domain::Conductor);
  const MeridianGrid& g = *mag;
  // solid core, including the layer just inside r=1 and the cells just
  // outside the core's own lids
  const int jlo = std::max(0, g.j_bottom() - 1), jhi = std::min(g.nz(), g.j_top() + 1);
  for (int i = 0; i < g.i_core(); ++i) {
    for (int j = jlo; j < jhi; ++j) v.at(0, Family::T, i, j) = core_omega * g.rc()[i];
  }
  apply_ghosts(v, fluid_ghosts(g, walls, false));
  return v;
}

}  // namespace tcdyn
