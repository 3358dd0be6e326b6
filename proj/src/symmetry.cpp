#include "tcdyn/symmetry.hpp"

#include <stdexcept>

namespace tcdyn {
namespace {

template <Staggering S>
ModalField<S> reflect(const ModalField<S>& f, const Family (&fams)[3], const double (&sign)[3],
                      int ncomp) {
  const MeridianGrid& g = f.grid();
  if (!g.symmetric_in_z()) throw std::invalid_argument("grid is not symmetric under z -> -z");
  ModalField<S> out(f.grid_ptr(), f.num_modes(), f.stride(), f.support());
  for (int k = 0; k < f.num_modes(); ++k) {
    const CVec& a = f.mode(k);
    CVec& b = out.mode(k);
    for (int c = 0; c < ncomp; ++c) {
      const Family fam = fams[c];
      const int nzf = g.dim_z(fam);
      for (int i = 0; i < g.dim_r(fam); ++i) {
        for (int j = 0; j < nzf; ++j) {
          const auto dst = static_cast<Eigen::Index>(g.index(fam, i, j));
          const auto src = static_cast<Eigen::Index>(g.index(fam, i, nzf - 1 - j));
          b(dst) = sign[c] * a(src);
        }
      }
    }
  }
  return out;
}

}  // namespace

FourierVectorField apply_SZ2(const FourierVectorField& f) {
  static constexpr Family fams[3] = {Family::R, Family::T, Family::Z};
  static constexpr double sign[3] = {1.0, 1.0, -1.0};
  return reflect(f, fams, sign, 3);
}

FourierEdgeField apply_SZ2(const FourierEdgeField& f) {
  static constexpr Family fams[3] = {Family::Er, Family::Et, Family::Ez};
  static constexpr double sign[3] = {-1.0, -1.0, 1.0};
  return reflect(f, fams, sign, 3);
}

FourierScalarField apply_SZ2(const FourierScalarField& f) {
  static constexpr Family fams[3] = {Family::Cell, Family::Cell, Family::Cell};
  static constexpr double sign[3] = {1.0, 1.0, 1.0};
  return reflect(f, fams, sign, 1);
}

std::pair<FourierVectorField, FourierVectorField> sym_antisym_split(const FourierVectorField& f) {
  const FourierVectorField s = apply_SZ2(f);
  FourierVectorField sym = 0.5 * (f + s);
  FourierVectorField anti = 0.5 * (f - s);
  return {std::move(sym), std::move(anti)};
}

}  // namespace tcdyn
