#include "tcdyn/collocation.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace tcdyn {
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct AzimuthalTransform::Plans {
  fftw_plan c2r = nullptr;
  fftw_plan r2c = nullptr;
  std::vector<cplx> spec;
  std::vector<double> phys;
  Eigen::Index howmany = 0;
  ~Plans() {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    if (c2r) fftw_destroy_plan(c2r);
    if (r2c) fftw_destroy_plan(r2c);
  }
};

AzimuthalTransform::AzimuthalTransform(int modes) : modes_(modes), n_(modes > 1 ? 3 * modes : 1) {
  if (modes < 1) throw std::invalid_argument("AzimuthalTransform needs at least one mode");
}

AzimuthalTransform::~AzimuthalTransform() = default;

AzimuthalTransform::Plans& AzimuthalTransform::plans(Eigen::Index howmany) const {
  auto it = cache_.find(howmany);
  if (it != cache_.end()) return *it->second;
  auto p = std::make_unique<Plans>();
  const int nc = n_ / 2 + 1;
  p->howmany = howmany;
  p->spec.resize(static_cast<std::size_t>(howmany * nc));
  p->phys.resize(static_cast<std::size_t>(howmany * n_));
  int n = n_;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    p->c2r = fftw_plan_many_dft_c2r(1, &n, static_cast<int>(howmany), reinterpret_cast<fftw_complex*>(p->spec.data()), nullptr, 1, nc,
                                    p->phys.data(), nullptr, 1, n_, FFTW_ESTIMATE);
    p->r2c = fftw_plan_many_dft_r2c(1, &n, static_cast<int>(howmany), p->phys.data(), nullptr, 1, n_,
                                    reinterpret_cast<fftw_complex*>(p->spec.data()), nullptr, 1, nc, FFTW_ESTIMATE);
  }
  if (!p->c2r || !p->r2c) throw std::runtime_error("FFTW planning failed");
  auto& ref = *p;
  cache_.emplace(howmany, std::move(p));
  return ref;
}

void AzimuthalTransform::to_physical(const std::vector<CVec>& in, std::vector<double>& out) const {
  const Eigen::Index P = in.empty() ? 0 : in[0].size();
  out.resize(static_cast<std::size_t>(P * n_));
  if (n_ == 1) {
    for (Eigen::Index p = 0; p < P; ++p) out[static_cast<std::size_t>(p)] = in[0](p).real();
    return;
  }
  Plans& pl = plans(P);
  const int nc = n_ / 2 + 1;
  const int M = std::min<int>(modes_, static_cast<int>(in.size()));
  for (Eigen::Index p = 0; p < P; ++p) {
    cplx* s = pl.spec.data() + p * nc;
    for (int k = 0; k < nc; ++k) {
      if (k < M) {
        const cplx v = in[static_cast<std::size_t>(k)](p);
        s[k] = k == 0 ? cplx(v.real(), 0.0) : v;
      } else {
        s[k] = 0.0;
      }
    }
  }
  fftw_execute(pl.c2r);
  std::copy(pl.phys.begin(), pl.phys.end(), out.begin());
}

void AzimuthalTransform::to_modal(const std::vector<double>& in, std::vector<CVec>& out) const {
  const Eigen::Index P = static_cast<Eigen::Index>(in.size()) / n_;
  out.assign(static_cast<std::size_t>(modes_), CVec::Zero(P));
  if (n_ == 1) {
    for (Eigen::Index p = 0; p < P; ++p) out[0](p) = in[static_cast<std::size_t>(p)];
    return;
  }
  Plans& pl = plans(P);
  std::copy(in.begin(), in.end(), pl.phys.begin());
  fftw_execute(pl.r2c);
  const int nc = n_ / 2 + 1;
  const double scale = 1.0 / n_;
  for (Eigen::Index p = 0; p < P; ++p) {
    const cplx* s = pl.spec.data() + p * nc;
    out[0](p) = cplx(s[0].real() * scale, 0.0);
    for (int k = 1; k < modes_; ++k) out[static_cast<std::size_t>(k)](p) = s[k] * scale;
  }
}

Collocator::Collocator(GridPtr grid, int modes) : grid_(std::move(grid)), fft_(modes) {}

const SpMat& Collocator::interp(Family from, Family to) const {
  const auto key = std::make_pair(from, to);
  auto it = interp_.find(key);
  if (it == interp_.end()) it = interp_.emplace(key, interpolation(*grid_, from, to)).first;
  return it->second;
}

std::vector<CVec> Collocator::cross(const std::vector<CVec>& a, Staggering sa, const std::vector<CVec>& b,
                                    Staggering sb, Staggering target) const {
  const MeridianGrid& g = *grid_;
  const int M = fft_.modes();
  const std::size_t total = target == Staggering::Face ? g.n_faces() : g.n_edges();
  std::vector<CVec> out(static_cast<std::size_t>(M), CVec::Zero(static_cast<Eigen::Index>(total)));

  auto component = [&](const std::vector<CVec>& v, Staggering s, int comp, Family tf) {
    const SpMat& I = interp(component_family(s, comp), tf);
    const auto off = static_cast<Eigen::Index>(g.offset(tf));
    const auto cnt = static_cast<Eigen::Index>(g.count(tf));
    std::vector<CVec> res(static_cast<std::size_t>(M));
    for (int k = 0; k < M; ++k) {
      res[static_cast<std::size_t>(k)] =
          k < static_cast<int>(v.size()) ? CVec((I * v[static_cast<std::size_t>(k)]).segment(off, cnt))
                                         : CVec::Zero(cnt);
    }
    return res;
  };

  std::vector<double> ap, aq, bp, bq, prod;
  std::vector<CVec> modal;
  for (int c = 0; c < 3; ++c) {
    const int p = (c + 1) % 3, q = (c + 2) % 3;
    const Family tf = component_family(target, c);
    fft_.to_physical(component(a, sa, p, tf), ap);
    fft_.to_physical(component(a, sa, q, tf), aq);
    fft_.to_physical(component(b, sb, p, tf), bp);
    fft_.to_physical(component(b, sb, q, tf), bq);
    prod.resize(ap.size());
    for (std::size_t i = 0; i < ap.size(); ++i) prod[i] = ap[i] * bq[i] - aq[i] * bp[i];
    fft_.to_modal(prod, modal);
    const auto off = static_cast<Eigen::Index>(g.offset(tf));
    for (int k = 0; k < M; ++k) {
      out[static_cast<std::size_t>(k)].segment(off, modal[static_cast<std::size_t>(k)].size()) =
          modal[static_cast<std::size_t>(k)];
    }
  }
  return out;
}

FourierVectorField Collocator::cross_to_face(const FourierVectorField& a, const FourierEdgeField& b) const {
  FourierVectorField out(grid_, fft_.modes(), a.stride(), a.support());
  out.modes() = cross(a.modes(), Staggering::Face, b.modes(), Staggering::Edge, Staggering::Face);
  return out;
}

FourierVectorField Collocator::cross_to_face(const FourierEdgeField& a, const FourierVectorField& b) const {
  FourierVectorField out(grid_, fft_.modes(), b.stride(), b.support());
  out.modes() = cross(a.modes(), Staggering::Edge, b.modes(), Staggering::Face, Staggering::Face);
  return out;
}

FourierEdgeField Collocator::cross_to_edge(const FourierVectorField& a, const FourierVectorField& b) const {
  FourierEdgeField out(grid_, fft_.modes(), a.stride(), a.support());
  out.modes() = cross(a.modes(), Staggering::Face, b.modes(), Staggering::Face, Staggering::Edge);
  return out;
}

}  // namespace tcdyn
