#include "tcdyn/diagnostics.hpp"

#include <fftw3.h>

#include <algorithm>
#include <numbers>
#include <stdexcept>

#include "tcdyn/collocation.hpp"
#include "tcdyn/error.hpp"
#include "tcdyn/operators.hpp"
#include "tcdyn/quadrature.hpp"

namespace tcdyn {
namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// sum over one edge family of w(r^pr z^pz, conductor) * J
cplx edge_integral(const MeridianGrid& g, const CVec& J, Family f, int pr, int pz) {
  cplx s = 0.0;
  for (int i = 0; i < g.dim_r(f); ++i) {
    for (int j = 0; j < g.dim_z(f); ++j) {
      const double w = quadrature_weight(g, f, i, j, Domain::Conductor, pr, pz);
      if (w != 0.0) s += w * J(static_cast<Eigen::Index>(g.index(f, i, j)));
    }
  }
  return s;
}

// index of the last node <= x, clamped so that [i, i+1] is a valid pair
int bracket(const std::vector<double>& nodes, double x, int n) {
  const auto it = std::upper_bound(nodes.begin(), nodes.begin() + n, x);
  const int i = static_cast<int>(it - nodes.begin()) - 1;
  return std::clamp(i, 0, n - 2);
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void detrend(std::vector<double>& y) {
  const double n = static_cast<double>(y.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double x = static_cast<double>(i);
    sx += x;
    sy += y[i];
    sxx += x * x;
    sxy += x * y[i];
  }
  const double b = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double a = (sy - b * sx) / n;
  for (std::size_t i = 0; i < y.size(); ++i) y[i] -= a + b * static_cast<double>(i);
}

struct Peak {
  double bins = 0.0;   // fractional frequency bin
  double power = 0.0;
  double median = 0.0;
  std::size_t nfft = 0;
};

// Hann-windowed, 8x zero-padded power spectrum peak of a detrended series
Peak spectral_peak(const std::vector<double>& y) {
  const std::size_t n = y.size();
  const std::size_t nfft = next_pow2(8 * n);
  std::vector<double> in(nfft, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 0.5 * (1.0 - std::cos(two_pi * static_cast<double>(i) / static_cast<double>(n - 1)));
    in[i] = w * y[i];
  }
  std::vector<fftw_complex> out(nfft / 2 + 1);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(nfft), in.data(), out.data(), FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  std::vector<double> P(out.size());
  for (std::size_t k = 0; k < out.size(); ++k) P[k] = out[k][0] * out[k][0] + out[k][1] * out[k][1];

  std::size_t kmax = 1;
  for (std::size_t k = 1; k < P.size(); ++k)
    if (P[k] > P[kmax]) kmax = k;
  Peak p;
  p.nfft = nfft;
  p.power = P[kmax];
  std::vector<double> rest(P.begin() + 1, P.end());
  std::nth_element(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(rest.size() / 2), rest.end());
  p.median = rest[rest.size() / 2];
  p.bins = static_cast<double>(kmax);
  if (kmax + 1 < P.size() && P[kmax - 1] > 0.0 && P[kmax + 1] > 0.0) {
    const double a = std::log(P[kmax - 1]), b = std::log(P[kmax]), c = std::log(P[kmax + 1]);
    const double den = a - 2.0 * b + c;
    if (den < 0.0) p.bins += 0.5 * (a - c) / den;
  }
  return p;
}

bool prominent(const Peak& p) { return p.power > 0.0 && p.power >= 4.0 * p.median; }

// modulus of the analytic signal, ignoring content below `f_cut` (cycles per
// sample) so that a residual trend does not beat against the carrier. The
// series is Hann-tapered and zero-padded so that leakage into negative
// frequencies stays negligible; the taper is divided out again where it
// exceeds one half.
std::vector<double> envelope(const std::vector<double>& y, double f_cut) {
  const std::size_t n = y.size(), nfft = next_pow2(2 * n);
  std::vector<fftw_complex> a(nfft);
  std::vector<double> w(n);
  for (std::size_t i = 0; i < nfft; ++i) {
    a[i][0] = a[i][1] = 0.0;
    if (i < n) {
      w[i] = 0.5 * (1.0 - std::cos(two_pi * static_cast<double>(i) / static_cast<double>(n - 1)));
      a[i][0] = w[i] * y[i];
    }
  }
  std::unique_lock<std::mutex> lock(fftw_planner_mutex());
  fftw_plan fwd = fftw_plan_dft_1d(static_cast<int>(nfft), a.data(), a.data(), FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_plan bwd = fftw_plan_dft_1d(static_cast<int>(nfft), a.data(), a.data(), FFTW_BACKWARD, FFTW_ESTIMATE);
  lock.unlock();
  fftw_execute(fwd);
  for (std::size_t k = 0; k < nfft; ++k) {
    const bool low = static_cast<double>(k) < f_cut * static_cast<double>(nfft);
    const double s = low ? 0.0 : (2 * k < nfft) ? 2.0 : (2 * k == nfft ? 1.0 : 0.0);
    a[k][0] *= s;
    a[k][1] *= s;
  }
  fftw_execute(bwd);
  lock.lock();
  fftw_destroy_plan(fwd);
  fftw_destroy_plan(bwd);
  lock.unlock();
  std::vector<double> e;
  for (std::size_t i = 0; i < n; ++i) {
    if (w[i] <= 0.5) continue;
    e.push_back(std::hypot(a[i][0], a[i][1]) / static_cast<double>(nfft) / w[i]);
  }
  return e;
}

}  // namespace

DipoleMoment dipole_moment(const FourierVectorField& H) {
  if (static_cast<int>(H.support()) < static_cast<int>(Domain::Conductor)) {
    throw std::invalid_argument("dipole_moment: field must cover the conductor");
  }
  const MeridianGrid& g = H.grid();
  DipoleMoment d;
  for (int k = 0; k < H.num_modes(); ++k) {
    const int m = H.wavenumber(k);
    if (m > 1) break;
    const CVec J = curl_mode(H, k);
    if (m == 0) {
      // (R x J)_z = r J_theta
      d.z = two_pi * edge_integral(g, J, Family::Et, 2, 0).real();
    } else {
      // (R x J)_r = -z J_theta, (R x J)_theta = z J_r - r J_z; only the
      // conjugate of the m=1 coefficient survives the theta integral of
      // (V_r + i V_theta) e^{i theta}
      const cplx vr = -edge_integral(g, J, Family::Et, 1, 1);
      const cplx vt = edge_integral(g, J, Family::Er, 1, 1) - edge_integral(g, J, Family::Ez, 2, 0);
      const cplx xy = two_pi * (std::conj(vr) + cplx(0.0, 1.0) * std::conj(vt));
      d.x = xy.real();
      d.y = xy.imag();
    }
  }
  return d;
}

cplx probe_mode(const FourierVectorField& f, int k, double r, double z, int comp) {
  const MeridianGrid& g = f.grid();
  const Extent e = extent(g, f.support());
  if (!(r >= e.r0 && r <= e.r1 && z >= e.z0 && z <= e.z1)) {
    throw std::out_of_range("probe point outside the field support");
  }
  const Family fam = component_family(Staggering::Face, comp);
  const std::vector<double>& rn = r_on_face(fam) ? g.rf() : g.rc();
  const std::vector<double>& zn = z_on_face(fam) ? g.zf() : g.zc();
  const int i = bracket(rn, r, g.dim_r(fam));
  const int j = bracket(zn, z, g.dim_z(fam));
  const double a = (r - rn[static_cast<std::size_t>(i)]) / (rn[static_cast<std::size_t>(i) + 1] - rn[static_cast<std::size_t>(i)]);
  const double b = (z - zn[static_cast<std::size_t>(j)]) / (zn[static_cast<std::size_t>(j) + 1] - zn[static_cast<std::size_t>(j)]);
  return (1 - a) * (1 - b) * f.at(k, fam, i, j) + a * (1 - b) * f.at(k, fam, i + 1, j) +
         (1 - a) * b * f.at(k, fam, i, j + 1) + a * b * f.at(k, fam, i + 1, j + 1);
}

double point_probe(const FourierVectorField& f, double r, double theta, double z, int comp) {
  double v = 0.0;
  for (int k = 0; k < f.num_modes(); ++k) {
    const cplx c = probe_mode(f, k, r, z, comp);
    v += k == 0 && f.wavenumber(0) == 0 ? c.real() : 2.0 * (c * std::polar(1.0, f.wavenumber(k) * theta)).real();
  }
  return v;
}

PeriodEstimate period_estimate(const std::vector<double>& t, const std::vector<double>& y) {
  const std::size_t n = t.size();
  if (n != y.size() || n < 16) throw std::invalid_argument("period_estimate: need at least 16 samples");
  const double dt = (t.back() - t.front()) / static_cast<double>(n - 1);
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs(t[i] - t[i - 1] - dt) > 1e-6 * dt) throw std::invalid_argument("period_estimate: non-uniform sampling");
  }
  std::vector<double> d = y;
  detrend(d);
  double scale = 0.0, dev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    scale = std::max(scale, std::abs(y[i]));
    dev = std::max(dev, std::abs(d[i]));
  }
  const Peak p = spectral_peak(d);
  if (dev <= 1e-12 * std::max(scale, 1e-300) || !prominent(p) || p.bins <= 0.0) {
    throw NoConvergence("no significant peak");
  }
  PeriodEstimate out;
  out.T = static_cast<double>(p.nfft) * dt / p.bins;
  if (static_cast<double>(n) * dt < 4.0 * out.T) {
    throw std::invalid_argument("period_estimate: fewer than four periods of data");
  }

  std::vector<double> mid = envelope(d, 0.5 * p.bins / static_cast<double>(p.nfft));
  double mean = 0.0;
  for (double v : mid) mean += v;
  mean /= static_cast<double>(mid.size());
  detrend(mid);
  double var = 0.0;
  for (double v : mid) var += v * v;
  const double depth = std::sqrt(var / static_cast<double>(mid.size())) / mean;
  if (mean > 0.0 && depth > 0.02) {
    const Peak q = spectral_peak(mid);
    if (prominent(q) && q.bins > 0.0) {
      const double Tm = static_cast<double>(q.nfft) * dt / q.bins;
      // at least two modulation cycles inside the untapered window
      if (2.0 * Tm <= static_cast<double>(mid.size()) * dt) out.T_mod = Tm;
    }
  }
  return out;
}

std::vector<ModalEnergyRow> modal_energy_table(const FourierVectorField& u, const FourierVectorField& H) {
  const std::vector<double> ek = modal_energies(u, Domain::Fluid);
  const std::vector<double> em = modal_energies(H, Domain::Conductor);
  const bool u_longer = u.num_modes() >= H.num_modes();
  std::vector<ModalEnergyRow> rows(std::max(ek.size(), em.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const int ki = static_cast<int>(k);
    rows[k].m = u_longer ? u.wavenumber(ki) : H.wavenumber(ki);
    if (k < ek.size()) rows[k].kinetic = ek[k];
    if (k < em.size()) rows[k].magnetic = em[k];
  }
  return rows;
}

void TimeSeries::push(double time, double value) {
  if (!t_.empty() && !(time > t_.back())) throw std::invalid_argument("TimeSeries: times must increase");
  t_.push_back(time);
  v_.push_back(value);
}

bool TimeSeries::uniform(double rtol) const {
  if (t_.size() < 3) return true;
  const double dt = (t_.back() - t_.front()) / static_cast<double>(t_.size() - 1);
  for (std::size_t i = 1; i < t_.size(); ++i)
    if (std::abs(t_[i] - t_[i - 1] - dt) > rtol * dt) return false;
  return true;
}

}  // namespace tcdyn
