#include "tcdyn/operators.hpp"

#include <stdexcept>

#include "tcdyn/error.hpp"

namespace tcdyn {
namespace {

using Trip = Eigen::Triplet<cplx>;
constexpr cplx I{0.0, 1.0};

SpMat assemble(std::size_t rows, std::size_t cols, const std::vector<Trip>& t) {
  SpMat A(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  A.setFromTriplets(t.begin(), t.end());
  A.makeCompressed();
  return A;
}

// 1-D interpolation between centre and face positions, as (row, col, weight).
struct W1 {
  int row, col;
  double w;
};

std::vector<W1> interp_1d(const std::vector<double>& faces, const std::vector<double>& centers,
                          bool from_face, bool to_face) {
  std::vector<W1> out;
  const int n = static_cast<int>(centers.size());
  if (from_face == to_face) {
    const int m = from_face ? n + 1 : n;
    for (int i = 0; i < m; ++i) out.push_back({i, i, 1.0});
  } else if (!from_face && to_face) {
    for (int i = 0; i <= n; ++i) {
      if (i == 0) {
        out.push_back({0, 0, 1.0});
      } else if (i == n) {
        out.push_back({n, n - 1, 1.0});
      } else {
        const double w = (faces[i] - centers[i - 1]) / (centers[i] - centers[i - 1]);
        out.push_back({i, i - 1, 1.0 - w});
        out.push_back({i, i, w});
      }
    }
  } else {
    for (int i = 0; i < n; ++i) {
      out.push_back({i, i, 0.5});
      out.push_back({i, i + 1, 0.5});
    }
  }
  return out;
}

}  // namespace

SpMat curl_face_to_edge(const MeridianGrid& g, int m) {
  const int nr = g.nr(), nz = g.nz();
  const auto& rf = g.rf();
  const auto& rc = g.rc();
  const auto& zc = g.zc();
  std::vector<Trip> t;
  t.reserve(g.n_edges() * 4);
  using F = Family;
  // J_r = (i m / r) H_z - dH_theta/dz
  for (int i = 0; i < nr; ++i) {
    for (int j = 1; j < nz; ++j) {
      const auto row = static_cast<int>(g.index(F::Er, i, j));
      const double dz = zc[j] - zc[j - 1];
      if (m != 0) t.emplace_back(row, g.index(F::Z, i, j), I * (double(m) / rc[i]));
      t.emplace_back(row, g.index(F::T, i, j), -1.0 / dz);
      t.emplace_back(row, g.index(F::T, i, j - 1), 1.0 / dz);
    }
  }
  // J_theta = dH_r/dz - dH_z/dr
  for (int i = 1; i < nr; ++i) {
    const double dr = rc[i] - rc[i - 1];
    for (int j = 1; j < nz; ++j) {
      const auto row = static_cast<int>(g.index(F::Et, i, j));
      const double dz = zc[j] - zc[j - 1];
      t.emplace_back(row, g.index(F::R, i, j), 1.0 / dz);
      t.emplace_back(row, g.index(F::R, i, j - 1), -1.0 / dz);
      t.emplace_back(row, g.index(F::Z, i, j), -1.0 / dr);
      t.emplace_back(row, g.index(F::Z, i - 1, j), 1.0 / dr);
    }
  }
  // J_z = (1/r) d(r H_theta)/dr - (i m / r) H_r ; axis: circulation over the
  // disc of radius rc[0], which only survives for m = 0.
  for (int j = 0; j < nz; ++j) {
    if (m == 0) {
      t.emplace_back(g.index(F::Ez, 0, j), g.index(F::T, 0, j), 2.0 / rc[0]);
    }
    for (int i = 1; i < nr; ++i) {
      const auto row = static_cast<int>(g.index(F::Ez, i, j));
      const double dr = rc[i] - rc[i - 1];
      t.emplace_back(row, g.index(F::T, i, j), rc[i] / (rf[i] * dr));
      t.emplace_back(row, g.index(F::T, i - 1, j), -rc[i - 1] / (rf[i] * dr));
      if (m != 0) t.emplace_back(row, g.index(F::R, i, j), -I * (double(m) / rf[i]));
    }
  }
  return assemble(g.n_edges(), g.n_faces(), t);
}

SpMat curl_edge_to_face(const MeridianGrid& g, int m) {
  const int nr = g.nr(), nz = g.nz();
  const auto& rf = g.rf();
  const auto& zf = g.zf();
  const auto& rc = g.rc();
  std::vector<Trip> t;
  t.reserve(g.n_faces() * 4);
  using F = Family;
  // (curl E)_r = (i m / r) E_z - dE_theta/dz, skipped on the axis
  for (int i = 1; i <= nr; ++i) {
    for (int j = 0; j < nz; ++j) {
      const auto row = static_cast<int>(g.index(F::R, i, j));
      const double dz = zf[j + 1] - zf[j];
      if (m != 0) t.emplace_back(row, g.index(F::Ez, i, j), I * (double(m) / rf[i]));
      t.emplace_back(row, g.index(F::Et, i, j + 1), -1.0 / dz);
      t.emplace_back(row, g.index(F::Et, i, j), 1.0 / dz);
    }
  }
  // (curl E)_theta = dE_r/dz - dE_z/dr
  for (int i = 0; i < nr; ++i) {
    const double dr = rf[i + 1] - rf[i];
    for (int j = 0; j < nz; ++j) {
      const auto row = static_cast<int>(g.index(F::T, i, j));
      const double dz = zf[j + 1] - zf[j];
      t.emplace_back(row, g.index(F::Er, i, j + 1), 1.0 / dz);
      t.emplace_back(row, g.index(F::Er, i, j), -1.0 / dz);
      t.emplace_back(row, g.index(F::Ez, i + 1, j), -1.0 / dr);
      // E_z on the axis vanishes for m != 0
      if (i > 0 || m == 0) t.emplace_back(row, g.index(F::Ez, i, j), 1.0 / dr);
    }
  }
  // (curl E)_z = (1/r) d(r E_theta)/dr - (i m / r) E_r
  for (int i = 0; i < nr; ++i) {
    const double dr = rf[i + 1] - rf[i];
    for (int j = 0; j <= nz; ++j) {
      const auto row = static_cast<int>(g.index(F::Z, i, j));
      t.emplace_back(row, g.index(F::Et, i + 1, j), rf[i + 1] / (rc[i] * dr));
      if (i > 0) t.emplace_back(row, g.index(F::Et, i, j), -rf[i] / (rc[i] * dr));
      if (m != 0) t.emplace_back(row, g.index(F::Er, i, j), -I * (double(m) / rc[i]));
    }
  }
  return assemble(g.n_faces(), g.n_edges(), t);
}

SpMat divergence(const MeridianGrid& g, int m) {
  const int nr = g.nr(), nz = g.nz();
  const auto& rf = g.rf();
  const auto& zf = g.zf();
  const auto& rc = g.rc();
  std::vector<Trip> t;
  t.reserve(g.n_cells() * 5);
  using F = Family;
  for (int i = 0; i < nr; ++i) {
    const double dr = rf[i + 1] - rf[i];
    for (int j = 0; j < nz; ++j) {
      const auto row = static_cast<int>(g.index(F::Cell, i, j));
      const double dz = zf[j + 1] - zf[j];
      t.emplace_back(row, g.index(F::R, i + 1, j), rf[i + 1] / (rc[i] * dr));
      if (i > 0) t.emplace_back(row, g.index(F::R, i, j), -rf[i] / (rc[i] * dr));
      if (m != 0) t.emplace_back(row, g.index(F::T, i, j), I * (double(m) / rc[i]));
      t.emplace_back(row, g.index(F::Z, i, j + 1), 1.0 / dz);
      t.emplace_back(row, g.index(F::Z, i, j), -1.0 / dz);
    }
  }
  return assemble(g.n_cells(), g.n_faces(), t);
}

SpMat gradient(const MeridianGrid& g, int m) {
  const int nr = g.nr(), nz = g.nz();
  const auto& rf = g.rf();
  const auto& zf = g.zf();
  const auto& rc = g.rc();
  const auto& zc = g.zc();
  std::vector<Trip> t;
  t.reserve(g.n_faces() * 2);
  using F = Family;
  for (int i = 1; i <= nr; ++i) {
    for (int j = 0; j < nz; ++j) {
      const auto row = static_cast<int>(g.index(F::R, i, j));
      if (i == nr) {
        t.emplace_back(row, g.index(F::Cell, nr - 1, j), -1.0 / (rf[nr] - rc[nr - 1]));
      } else {
        const double d = rc[i] - rc[i - 1];
        t.emplace_back(row, g.index(F::Cell, i, j), 1.0 / d);
        t.emplace_back(row, g.index(F::Cell, i - 1, j), -1.0 / d);
      }
    }
  }
  if (m != 0) {
    for (int i = 0; i < nr; ++i) {
      for (int j = 0; j < nz; ++j) {
        t.emplace_back(g.index(F::T, i, j), g.index(F::Cell, i, j), I * (double(m) / rc[i]));
      }
    }
  }
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j <= nz; ++j) {
      const auto row = static_cast<int>(g.index(F::Z, i, j));
      if (j == 0) {
        t.emplace_back(row, g.index(F::Cell, i, 0), 1.0 / (zc[0] - zf[0]));
      } else if (j == nz) {
        t.emplace_back(row, g.index(F::Cell, i, nz - 1), -1.0 / (zf[nz] - zc[nz - 1]));
      } else {
        const double d = zc[j] - zc[j - 1];
        t.emplace_back(row, g.index(F::Cell, i, j), 1.0 / d);
        t.emplace_back(row, g.index(F::Cell, i, j - 1), -1.0 / d);
      }
    }
  }
  return assemble(g.n_faces(), g.n_cells(), t);
}

SpMat interpolation(const MeridianGrid& g, Family from, Family to) {
  const auto wr = interp_1d(g.rf(), g.rc(), r_on_face(from), r_on_face(to));
  const auto wz = interp_1d(g.zf(), g.zc(), z_on_face(from), z_on_face(to));
  std::vector<Trip> t;
  t.reserve(wr.size() * wz.size());
  for (const auto& a : wr) {
    for (const auto& b : wz) {
      t.emplace_back(g.index(to, a.row, b.row), g.index(from, a.col, b.col), a.w * b.w);
    }
  }
  const bool to_edge = is_edge(to);
  const bool from_edge = is_edge(from);
  const auto block = [&](bool edge, Family f) {
    if (f == Family::Cell) return g.n_cells();
    return edge ? g.n_edges() : g.n_faces();
  };
  return assemble(block(to_edge, to), block(from_edge, from), t);
}

Family component_family(Staggering s, int comp) {
  static constexpr Family face[3] = {Family::R, Family::T, Family::Z};
  static constexpr Family edge[3] = {Family::Er, Family::Et, Family::Ez};
  if (s == Staggering::Cell) throw std::invalid_argument("scalar field has no components");
  return s == Staggering::Face ? face[comp] : edge[comp];
}

SpMat diagonal(const CVec& d) {
  SpMat D(d.size(), d.size());
  D.reserve(Eigen::VectorXi::Constant(d.size(), 1));
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (d(i) != cplx(0.0)) D.insert(i, i) = d(i);
  }
  D.makeCompressed();
  return D;
}

SpMat identity(std::size_t n) {
  SpMat A(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  A.setIdentity();
  return A;
}

SpMat mask_matrix(const std::vector<char>& mask) {
  CVec d(static_cast<Eigen::Index>(mask.size()));
  for (std::size_t i = 0; i < mask.size(); ++i) d(static_cast<Eigen::Index>(i)) = mask[i] ? 1.0 : 0.0;
  return diagonal(d);
}

namespace {

// (A x B) at target staggering, A of staggering sa fixed (diagonal), B of
// staggering sb the operand. Component c of the result is
// A_p B_q - A_q B_p with (c,p,q) cyclic.
SpMat cross_operator(const MeridianGrid& g, Staggering sa, const CVec& A, Staggering sb,
                     Staggering target) {
  SpMat out;
  bool first = true;
  for (int c = 0; c < 3; ++c) {
    const int p = (c + 1) % 3, q = (c + 2) % 3;
    const Family tf = component_family(target, c);
    const CVec Ap = interpolation(g, component_family(sa, p), tf) * A;
    const CVec Aq = interpolation(g, component_family(sa, q), tf) * A;
    const SpMat Bq = interpolation(g, component_family(sb, q), tf);
    const SpMat Bp = interpolation(g, component_family(sb, p), tf);
    SpMat term = diagonal(Ap) * Bq - diagonal(Aq) * Bp;
    if (first) {
      out = term;
      first = false;
    } else {
      out += term;
    }
  }
  out.prune(cplx(0.0));
  out.makeCompressed();
  return out;
}

}  // namespace

SpMat cross_face_face_to_edge(const MeridianGrid& g, const CVec& U) {
  return cross_operator(g, Staggering::Face, U, Staggering::Face, Staggering::Edge);
}
SpMat cross_edge_face_to_face(const MeridianGrid& g, const CVec& U) {
  return cross_operator(g, Staggering::Edge, U, Staggering::Face, Staggering::Face);
}
SpMat cross_face_edge_to_face(const MeridianGrid& g, const CVec& U) {
  return cross_operator(g, Staggering::Face, U, Staggering::Edge, Staggering::Face);
}

namespace {
void check_mode(int k, int n) {
  if (k < 0 || k >= n) {
    throw std::out_of_range("mode index " + std::to_string(k) + " outside [0," +
                            std::to_string(n) + ")");
  }
}
}  // namespace

CVec curl_mode(const FourierVectorField& f, int k) {
  check_mode(k, f.num_modes());
  return curl_face_to_edge(f.grid(), f.wavenumber(k)) * f.mode(k);
}

CVec curl_mode(const FourierEdgeField& f, int k) {
  check_mode(k, f.num_modes());
  return curl_edge_to_face(f.grid(), f.wavenumber(k)) * f.mode(k);
}

CVec divergence_mode(const FourierVectorField& f, int k) {
  check_mode(k, f.num_modes());
  return divergence(f.grid(), f.wavenumber(k)) * f.mode(k);
}

FourierEdgeField curl(const FourierVectorField& f) {
  FourierEdgeField out(f.grid_ptr(), f.num_modes(), f.stride(), f.support());
  for (int k = 0; k < f.num_modes(); ++k) out.mode(k) = curl_mode(f, k);
  return out;
}

FourierVectorField curl(const FourierEdgeField& f) {
  FourierVectorField out(f.grid_ptr(), f.num_modes(), f.stride(), f.support());
  for (int k = 0; k < f.num_modes(); ++k) out.mode(k) = curl_mode(f, k);
  return out;
}

FourierScalarField divergence(const FourierVectorField& f) {
  FourierScalarField out(f.grid_ptr(), f.num_modes(), f.stride(), f.support());
  for (int k = 0; k < f.num_modes(); ++k) out.mode(k) = divergence_mode(f, k);
  return out;
}

}  // namespace tcdyn
