#include "tcdyn/grid.hpp"

#include <algorithm>
#include <cmath>

#include "tcdyn/error.hpp"

namespace tcdyn {
namespace {

int cells_per_unit(double dx) {
  const double n = 1.0 / dx;
  const long rounded = std::lround(n);
  if (rounded < 2 || std::abs(n - static_cast<double>(rounded)) > 1e-9 * n) {
    throw ConfigError("dx must be 1/n for an integer n >= 2, got " + std::to_string(dx));
  }
  return static_cast<int>(rounded);
}

// Cell widths covering a gap of length L, starting at dx and growing by s.
std::vector<double> stretched_widths(double L, double dx, double s) {
  std::vector<double> w;
  if (L <= 1e-12) return w;
  if (s <= 1.0 + 1e-12) {
    const int n = std::max(1, static_cast<int>(std::ceil(L / dx - 1e-9)));
    w.assign(n, L / n);
    return w;
  }
  double sum = 0.0, h = dx;
  while (sum < L - 1e-12) {
    w.push_back(h);
    sum += h;
    h *= s;
  }
  for (double& x : w) x *= L / sum;
  return w;
}

double moment(double a, double b, int p) {
  if (b <= a) return 0.0;
  return (std::pow(b, p + 1) - std::pow(a, p + 1)) / (p + 1);
}

}  // namespace

MeridianGrid::MeridianGrid(double dx, double Rv, double Zv, double stretch)
    : dx_(dx), stretch_(stretch) {
  const int n = cells_per_unit(dx);
  if (!(Rv > 2.0) || !(Zv > 1.0)) {
    throw ConfigError("vacuum box must satisfy Rv > 2 and Zv > 1");
  }
  if (stretch < 1.0) throw ConfigError("vacuum stretch factor must be >= 1");

  rf_.reserve(4 * n);
  for (int i = 0; i <= 2 * n; ++i) rf_.push_back(static_cast<double>(i) / n);
  for (double w : stretched_widths(Rv - 2.0, dx, stretch)) rf_.push_back(rf_.back() + w);
  rf_.back() = Rv;
  i_core_ = n;
  i_wall_ = 2 * n;

  // upper half, then mirror
  std::vector<double> upper;
  for (int j = 0; j <= n; ++j) upper.push_back(static_cast<double>(j) / n);
  for (double w : stretched_widths(Zv - 1.0, dx, stretch)) upper.push_back(upper.back() + w);
  upper.back() = Zv;
  const int nu = static_cast<int>(upper.size()) - 1;
  zf_.resize(2 * nu + 1);
  for (int j = 0; j <= nu; ++j) {
    zf_[nu + j] = upper[j];
    zf_[nu - j] = -upper[j];
  }
  j_bot_ = nu - n;
  j_top_ = nu + n;

  rc_.resize(rf_.size() - 1);
  for (std::size_t i = 0; i + 1 < rf_.size(); ++i) rc_[i] = 0.5 * (rf_[i] + rf_[i + 1]);
  zc_.resize(zf_.size() - 1);
  for (std::size_t j = 0; j + 1 < zf_.size(); ++j) zc_[j] = 0.5 * (zf_[j] + zf_[j + 1]);
}

std::shared_ptr<const MeridianGrid> MeridianGrid::fluid_box(double dx) {
  return std::make_shared<const MeridianGrid>(dx, 2.0 + dx, 1.0 + dx, 1.0);
}

std::shared_ptr<const MeridianGrid> MeridianGrid::make(double dx, double Rv, double Zv,
                                                       double stretch) {
  return std::make_shared<const MeridianGrid>(dx, Rv, Zv, stretch);
}

Region MeridianGrid::region(int i, int j) const {
  if (!in_conductor(i, j)) return Region::Vacuum;
  return i < i_core_ ? Region::Solid : Region::Fluid;
}

bool MeridianGrid::symmetric_in_z(double tol) const {
  const int n = nz();
  for (int j = 0; j <= n; ++j) {
    if (std::abs(zf_[j] + zf_[n - j]) > tol) return false;
  }
  return true;
}

std::size_t MeridianGrid::offset(Family f) const {
  switch (f) {
    case Family::R:
    case Family::Er:
    case Family::Cell:
      return 0;
    case Family::T:
      return count(Family::R);
    case Family::Z:
      return count(Family::R) + count(Family::T);
    case Family::Et:
      return count(Family::Er);
    case Family::Ez:
      return count(Family::Er) + count(Family::Et);
  }
  return 0;
}

double MeridianGrid::r_moment(bool on_face, int i, int p, double lo, double hi) const {
  double a, b;
  if (on_face) {
    a = i > 0 ? rc_[i - 1] : rf_.front();
    b = i < nr() ? rc_[i] : rf_.back();
  } else {
    a = rf_[i];
    b = rf_[i + 1];
  }
  return moment(std::max(a, lo), std::min(b, hi), p);
}

double MeridianGrid::z_moment(bool on_face, int j, int p, double lo, double hi) const {
  double a, b;
  if (on_face) {
    a = j > 0 ? zc_[j - 1] : zf_.front();
    b = j < nz() ? zc_[j] : zf_.back();
  } else {
    a = zf_[j];
    b = zf_[j + 1];
  }
  return moment(std::max(a, lo), std::min(b, hi), p);
}

bool MeridianGrid::locate(double r, double z, int& i, int& j) const {
  if (r < 0.0 || r > rf_.back() || z < zf_.front() || z > zf_.back()) return false;
  i = static_cast<int>(std::upper_bound(rf_.begin(), rf_.end(), r) - rf_.begin()) - 1;
  j = static_cast<int>(std::upper_bound(zf_.begin(), zf_.end(), z) - zf_.begin()) - 1;
  i = std::clamp(i, 0, nr() - 1);
  j = std::clamp(j, 0, nz() - 1);
  return true;
}

Extent extent(const MeridianGrid& g, Domain d) {
  switch (d) {
    case Domain::Fluid:
      return {1.0, 2.0, -1.0, 1.0};
    case Domain::Conductor:
      return {0.0, 2.0, -1.0, 1.0};
    case Domain::Box:
      break;
  }
  return {0.0, g.Rv(), -g.Zv(), g.Zv()};
}

}  // namespace tcdyn
