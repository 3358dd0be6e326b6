#pragma once

#include <cmath>
#include <random>

#include "tcdyn/grid.hpp"

#include "tcdyn/field.hpp"
#include "tcdyn/operators.hpp"

namespace testutil {

using namespace tcdyn;

// Sets mode k of a face field from fn(component, r, z).
template <class Fn>
void fill_face(FourierVectorField& f, int k, Fn fn) {
  const MeridianGrid& g = f.grid();
  for (int c = 0; c < 3; ++c) {
    const Family fam = component_family(Staggering::Face, c);
    for (int i = 0; i < g.dim_r(fam); ++i) {
      for (int j = 0; j < g.dim_z(fam); ++j) {
        f.at(k, fam, i, j) = fn(c, g.r_of(fam, i), g.z_of(fam, j));
      }
    }
  }
}

inline FourierVectorField random_field(GridPtr g, int modes, unsigned seed,
                                       Domain support = Domain::Box) {
  FourierVectorField f(std::move(g), modes, 1, support);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int k = 0; k < modes; ++k) {
    for (auto& x : f.mode(k)) x = cplx(n(rng), k == 0 ? 0.0 : n(rng));
  }
  return f;
}

// error of the discrete curl against an analytic curl at interior edges
inline double curl_error(double dx, int m) {
  auto g = MeridianGrid::make(dx, 3.0, 2.0);
  FourierVectorField f(g, m + 1);
  // smooth field with the regularity of mode m at the axis
  const double p = m == 0 ? 1.0 : static_cast<double>(m - 1);
  auto comp = [&](int c, double r, double z) -> cplx {
    const double rp = std::pow(r, p);
    switch (c) {
      case 0: return rp * std::cos(z) * (1.0 + r * r);
      case 1: return cplx(0, 1) * rp * std::sin(z) * r;
      default: return rp * r * std::cos(2.0 * z);
    }
  };
  fill_face(f, m, comp);
  const CVec J = curl_face_to_edge(*g, m) * f.mode(m);
  const double h = 1e-5;
  auto d_dr = [&](int c, double r, double z) { return (comp(c, r + h, z) - comp(c, r - h, z)) / (2 * h); };
  auto d_dz = [&](int c, double r, double z) { return (comp(c, r, z + h) - comp(c, r, z - h)) / (2 * h); };
  const cplx im(0, m);
  double err = 0.0;
  for (Family fam : {Family::Er, Family::Et, Family::Ez}) {
    for (int i = 0; i < g->dim_r(fam); ++i) {
      for (int j = 0; j < g->dim_z(fam); ++j) {
        const double r = g->r_of(fam, i), z = g->z_of(fam, j);
        if (r < 0.25 || r > 2.5 || std::abs(z) > 1.5) continue;
        cplx exact;
        if (fam == Family::Er) exact = im / r * comp(2, r, z) - d_dz(1, r, z);
        if (fam == Family::Et) exact = d_dz(0, r, z) - d_dr(2, r, z);
        if (fam == Family::Ez) {
          exact = comp(1, r, z) / r + d_dr(1, r, z) - im / r * comp(0, r, z);
        }
        err = std::max(err, std::abs(J(static_cast<Eigen::Index>(g->index(fam, i, j))) - exact));
      }
    }
  }
  return err;
}

inline double div_error(double dx, int m) {
  auto g = MeridianGrid::make(dx, 3.0, 2.0);
  FourierVectorField f(g, m + 1);
  const double p = m == 0 ? 1.0 : static_cast<double>(m - 1);
  auto comp = [&](int c, double r, double z) -> cplx {
    const double rp = std::pow(r, p);
    switch (c) {
      case 0: return rp * std::sin(z) * (2.0 + r);
      case 1: return cplx(0, 1) * rp * std::cos(z) * r;
      default: return rp * std::sin(1.5 * z) * (1.0 + r * r);
    }
  };
  fill_face(f, m, comp);
  const CVec d = divergence(*g, m) * f.mode(m);
  const double h = 1e-5;
  double err = 0.0;
  for (int i = 0; i < g->nr(); ++i) {
    for (int j = 0; j < g->nz(); ++j) {
      const double r = g->rc()[i], z = g->zc()[j];
      if (r < 0.25 || r > 2.5 || std::abs(z) > 1.5) continue;
      const cplx exact = (comp(0, r + h, z) * (r + h) - comp(0, r - h, z) * (r - h)) / (2 * h * r) +
                         cplx(0, m) / r * comp(1, r, z) +
                         (comp(2, r, z + h) - comp(2, r, z - h)) / (2 * h);
      err = std::max(err, std::abs(d(static_cast<Eigen::Index>(g->index(Family::Cell, i, j))) - exact));
    }
  }
  return err;
}

}  // namespace testutil
