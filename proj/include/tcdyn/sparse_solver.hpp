#pragma once

#include <memory>

#include "tcdyn/operators.hpp"

namespace tcdyn {

/// Sparse direct LU factorization (UMFPACK) of a complex matrix, reused for
/// many right-hand sides.
class SparseLU {
 public:
  SparseLU();
  explicit SparseLU(const SpMat& A);
  ~SparseLU();
  SparseLU(SparseLU&&) noexcept;
  SparseLU& operator=(SparseLU&&) noexcept;

  /// Throws SolverError if the matrix is singular.
  void factor(const SpMat& A);
  CVec solve(const CVec& b) const;
  bool ready() const { return impl_ != nullptr; }
  Eigen::Index rows() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace tcdyn
