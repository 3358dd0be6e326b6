#pragma once

#include <cstddef>
#include <memory>
#include <vector>

namespace tcdyn {

/// Material tag of a meridian cell.
enum class Region : unsigned char { Solid, Fluid, Vacuum };

/// Rectangular subsets of the meridian plane used for quadrature and
/// support checks. Conductor = Solid ∪ Fluid = [0,2]x[-1,1].
enum class Domain : unsigned char { Fluid, Conductor, Box };

/// Staggered location families.
///
///   R  : radial component,    at (r_face, z_center)
///   T  : azimuthal component, at (r_center, z_center)
///   Z  : axial component,     at (r_center, z_face)
///   Er : radial edge,         at (r_center, z_face)
///   Et : azimuthal edge,      at (r_face, z_face)
///   Ez : axial edge,          at (r_face, z_center)
///   Cell : scalar,            at (r_center, z_center)
///
/// Face vectors are stored as [R | T | Z], edge vectors as [Er | Et | Ez].
/// Inside each family the index is i * nz_family + j.
enum class Family : unsigned char { R, T, Z, Er, Et, Ez, Cell };

constexpr bool r_on_face(Family f) { return f == Family::R || f == Family::Et || f == Family::Ez; }
constexpr bool z_on_face(Family f) { return f == Family::Z || f == Family::Er || f == Family::Et; }
constexpr bool is_edge(Family f) { return f == Family::Er || f == Family::Et || f == Family::Ez; }

/// Tensor-product (r,z) grid over the box [0,Rv]x[-Zv,Zv].
///
/// The conductor [0,2]x[-1,1] is covered by uniform cells of width dx, so
/// r=1, r=2 and z=±1 are always cell faces. Vacuum cells outside the
/// conductor start at width dx and may grow geometrically by `stretch`.
class MeridianGrid {
 public:
  MeridianGrid(double dx, double Rv, double Zv, double stretch = 1.0);

  /// Fluid annulus plus a single layer of ghost cells on every side.
  static std::shared_ptr<const MeridianGrid> fluid_box(double dx);
  static std::shared_ptr<const MeridianGrid> make(double dx, double Rv, double Zv,
                                                  double stretch = 1.0);

  double dx() const { return dx_; }
  double Rv() const { return rf_.back(); }
  double Zv() const { return zf_.back(); }
  double stretch() const { return stretch_; }

  int nr() const { return static_cast<int>(rc_.size()); }
  int nz() const { return static_cast<int>(zc_.size()); }

  const std::vector<double>& rf() const { return rf_; }
  const std::vector<double>& zf() const { return zf_; }
  const std::vector<double>& rc() const { return rc_; }
  const std::vector<double>& zc() const { return zc_; }

  /// Face indices of r=1, r=2, z=-1, z=+1.
  int i_core() const { return i_core_; }
  int i_wall() const { return i_wall_; }
  int j_bottom() const { return j_bot_; }
  int j_top() const { return j_top_; }

  Region region(int i, int j) const;
  bool in_conductor(int i, int j) const {
    return i < i_wall_ && j >= j_bot_ && j < j_top_;
  }
  bool in_fluid(int i, int j) const {
    return i >= i_core_ && i < i_wall_ && j >= j_bot_ && j < j_top_;
  }
  bool symmetric_in_z(double tol = 1e-12) const;

  // family geometry
  int dim_r(Family f) const { return r_on_face(f) ? nr() + 1 : nr(); }
  int dim_z(Family f) const { return z_on_face(f) ? nz() + 1 : nz(); }
  std::size_t count(Family f) const {
    return static_cast<std::size_t>(dim_r(f)) * static_cast<std::size_t>(dim_z(f));
  }
  /// Offset of family f inside its block vector (faces, edges or cells).
  std::size_t offset(Family f) const;
  std::size_t index(Family f, int i, int j) const {
    return offset(f) + static_cast<std::size_t>(i) * dim_z(f) + j;
  }
  double r_of(Family f, int i) const { return r_on_face(f) ? rf_[i] : rc_[i]; }
  double z_of(Family f, int j) const { return z_on_face(f) ? zf_[j] : zc_[j]; }

  std::size_t n_faces() const { return count(Family::R) + count(Family::T) + count(Family::Z); }
  std::size_t n_edges() const { return count(Family::Er) + count(Family::Et) + count(Family::Ez); }
  std::size_t n_cells() const { return count(Family::Cell); }

  /// Index of the cell that mirrors j under z -> -z, and of the mirrored z-face.
  int mirror_center(int j) const { return nz() - 1 - j; }
  int mirror_face(int j) const { return nz() - j; }

  /// Integral of r^p over the dual interval of index i (face or center type),
  /// clipped to [lo,hi].
  double r_moment(bool on_face, int i, int p, double lo, double hi) const;
  double z_moment(bool on_face, int j, int p, double lo, double hi) const;

  /// Locate the cell containing (r,z); returns false if outside the box.
  bool locate(double r, double z, int& i, int& j) const;

 private:
  double dx_;
  double stretch_;
  std::vector<double> rf_, zf_, rc_, zc_;
  int i_core_ = 0, i_wall_ = 0, j_bot_ = 0, j_top_ = 0;
};

using GridPtr = std::shared_ptr<const MeridianGrid>;

/// r and z extent of a domain.
struct Extent {
  double r0, r1, z0, z1;
};
Extent extent(const MeridianGrid& g, Domain d);

}  // namespace tcdyn
