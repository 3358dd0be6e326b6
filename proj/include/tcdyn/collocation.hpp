#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "tcdyn/operators.hpp"

namespace tcdyn {

/// FFTW planner calls are not thread safe; every planner call holds this lock.
std::mutex& fftw_planner_mutex();

/// Real transforms between M stored modes and N = 3M equispaced angles
/// (N = 1 for M = 1). Quadratic products formed on this grid and truncated
/// back to M modes are free of aliasing.
class AzimuthalTransform {
 public:
  explicit AzimuthalTransform(int modes);
  ~AzimuthalTransform();
  AzimuthalTransform(const AzimuthalTransform&) = delete;
  AzimuthalTransform& operator=(const AzimuthalTransform&) = delete;

  int modes() const { return modes_; }
  int points() const { return n_; }

  /// Modal coefficients (one vector per mode, length P) -> samples laid out
  /// as out[p * N + l].
  void to_physical(const std::vector<CVec>& in, std::vector<double>& out) const;
  /// Inverse of to_physical followed by truncation to M modes.
  void to_modal(const std::vector<double>& in, std::vector<CVec>& out) const;

 private:
  struct Plans;
  Plans& plans(Eigen::Index howmany) const;

  int modes_;
  int n_;
  mutable std::map<Eigen::Index, std::unique_ptr<Plans>> cache_;
};

/// Dealiased pseudo-spectral cross products of modal fields on one grid.
class Collocator {
 public:
  Collocator(GridPtr grid, int modes);

  /// (a x b) at the locations of `target`; each argument is one block
  /// vector per mode.
  std::vector<CVec> cross(const std::vector<CVec>& a, Staggering sa, const std::vector<CVec>& b,
                          Staggering sb, Staggering target) const;

  FourierVectorField cross_to_face(const FourierVectorField& a, const FourierEdgeField& b) const;
  FourierVectorField cross_to_face(const FourierEdgeField& a, const FourierVectorField& b) const;
  FourierEdgeField cross_to_edge(const FourierVectorField& a, const FourierVectorField& b) const;

  const AzimuthalTransform& transform() const { return fft_; }

 private:
  const SpMat& interp(Family from, Family to) const;

  GridPtr grid_;
  AzimuthalTransform fft_;
  mutable std::map<std::pair<Family, Family>, SpMat> interp_;
};

}  // namespace tcdyn
