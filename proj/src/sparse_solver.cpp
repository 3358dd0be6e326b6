#include "tcdyn/sparse_solver.hpp"

#include <Eigen/UmfPackSupport>

#include "tcdyn/error.hpp"

namespace tcdyn {

struct SparseLU::Impl {
  SpMat A;  // UmfPackLU keeps a reference to the factored matrix
  Eigen::UmfPackLU<SpMat> lu;
  Eigen::Index n = 0;
};

SparseLU::SparseLU() = default;
SparseLU::~SparseLU() = default;
SparseLU::SparseLU(SparseLU&&) noexcept = default;
SparseLU& SparseLU::operator=(SparseLU&&) noexcept = default;

SparseLU::SparseLU(const SpMat& A) { factor(A); }

void SparseLU::factor(const SpMat& A) {
  auto impl = std::make_unique<Impl>();
  impl->n = A.rows();
  impl->A = A;
  impl->A.makeCompressed();
  impl->lu.compute(impl->A);
  if (impl->lu.info() != Eigen::Success) {
    throw SolverError("sparse LU factorization failed (matrix of size " + std::to_string(A.rows()) + ")");
  }
  impl_ = std::move(impl);
}

CVec SparseLU::solve(const CVec& b) const {
  if (!impl_) throw SolverError("solve called before factorization");
  CVec x = impl_->lu.solve(b);
  if (impl_->lu.info() != Eigen::Success || !x.allFinite()) {
    throw SolverError("sparse LU solve failed");
  }
  return x;
}

Eigen::Index SparseLU::rows() const { return impl_ ? impl_->n : 0; }

}  // namespace tcdyn
