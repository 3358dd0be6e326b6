#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "tcdyn/field.hpp"

namespace tcdyn {

/// Magnetic dipole D = int_{conductor} R x curl(H) dx, R the position vector.
/// D_z comes from the axisymmetric mode, D_x + i D_y from wavenumber 1.
struct DipoleMoment {
  double x = 0.0, y = 0.0, z = 0.0;
  double magnitude() const { return std::sqrt(x * x + y * y + z * z); }
};
DipoleMoment dipole_moment(const FourierVectorField& H);

/// Physical value of component `comp` (0=r, 1=theta, 2=z) of a face field at
/// (r, theta, z): Fourier synthesis at theta, bilinear in the meridian plane.
/// Throws std::out_of_range for points outside the field's support.
double point_probe(const FourierVectorField& f, double r, double theta, double z, int comp);
/// Interpolated complex coefficient of mode k at (r, z).
cplx probe_mode(const FourierVectorField& f, int k, double r, double z, int comp);

struct PeriodEstimate {
  double T = 0.0;
  std::optional<double> T_mod;  ///< envelope modulation period, when prominent
};

/// Dominant period of a uniformly sampled series from the Hann-windowed
/// spectrum of the detrended data, refined by a parabolic fit of the peak.
/// The envelope (analytic-signal modulus) spectrum gives T_mod when its peak
/// stands at least 6 dB above the median spectral level.
/// Throws NoConvergence("no significant peak") for featureless data and
/// std::invalid_argument for non-uniform sampling or fewer than four periods.
PeriodEstimate period_estimate(const std::vector<double>& t, const std::vector<double>& y);

struct ModalEnergyRow {
  int m = 0;
  double kinetic = 0.0;   ///< over the fluid annulus
  double magnetic = 0.0;  ///< over the conductor
};
/// One row per stored mode of the longer of the two fields.
std::vector<ModalEnergyRow> modal_energy_table(const FourierVectorField& u, const FourierVectorField& H);

/// Sampled scalar signal with strictly increasing times.
class TimeSeries {
 public:
  explicit TimeSeries(std::string name = {}) : name_(std::move(name)) {}

  /// Throws std::invalid_argument unless `time` exceeds the last sample.
  void push(double time, double value);

  const std::string& name() const { return name_; }
  const std::vector<double>& times() const { return t_; }
  const std::vector<double>& values() const { return v_; }
  std::size_t size() const { return t_.size(); }
  /// Sample spacing constant to `rtol`.
  bool uniform(double rtol = 1e-6) const;

 private:
  std::string name_;
  std::vector<double> t_, v_;
};

}  // namespace tcdyn
