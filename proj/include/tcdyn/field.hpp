#pragma once

#include <complex>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "tcdyn/grid.hpp"

namespace tcdyn {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;

enum class Staggering : unsigned char { Face, Edge, Cell };

/// Azimuthal Fourier coefficients on one staggering of the meridian grid.
///
/// Mode k carries azimuthal wavenumber k * stride. The physical field is
///   f(r, theta, z) = f_0 + sum_{k>=1} (f_k e^{i m_k theta} + c.c.),
/// so mode 0 is real and the energy of mode k>=1 counts twice.
template <Staggering S>
class ModalField {
 public:
  ModalField() = default;
  ModalField(GridPtr grid, int modes, int stride = 1, Domain support = Domain::Box)
      : grid_(std::move(grid)), stride_(stride), support_(support) {
    data_.assign(static_cast<std::size_t>(modes), CVec::Zero(static_cast<Eigen::Index>(size())));
  }

  const MeridianGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  int num_modes() const { return static_cast<int>(data_.size()); }
  int stride() const { return stride_; }
  int wavenumber(int k) const { return k * stride_; }
  Domain support() const { return support_; }
  void set_support(Domain d) { support_ = d; }

  std::size_t size() const {
    if (!grid_) return 0;
    switch (S) {
      case Staggering::Face:
        return grid_->n_faces();
      case Staggering::Edge:
        return grid_->n_edges();
      case Staggering::Cell:
        return grid_->n_cells();
    }
    return 0;
  }

  CVec& mode(int k) { return data_.at(static_cast<std::size_t>(k)); }
  const CVec& mode(int k) const { return data_.at(static_cast<std::size_t>(k)); }

  cplx& at(int k, Family f, int i, int j) {
    return data_[static_cast<std::size_t>(k)](static_cast<Eigen::Index>(grid_->index(f, i, j)));
  }
  cplx at(int k, Family f, int i, int j) const {
    return data_[static_cast<std::size_t>(k)](static_cast<Eigen::Index>(grid_->index(f, i, j)));
  }

  void set_zero() {
    for (auto& v : data_) v.setZero();
  }

  ModalField& operator+=(const ModalField& o) {
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  ModalField& operator-=(const ModalField& o) {
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  ModalField& operator*=(double s) {
    for (auto& v : data_) v *= s;
    return *this;
  }
  friend ModalField operator+(ModalField a, const ModalField& b) { return a += b; }
  friend ModalField operator-(ModalField a, const ModalField& b) { return a -= b; }
  friend ModalField operator*(double s, ModalField a) { return a *= s; }

  std::vector<CVec>& modes() { return data_; }
  const std::vector<CVec>& modes() const { return data_; }

 private:
  GridPtr grid_;
  int stride_ = 1;
  Domain support_ = Domain::Box;
  std::vector<CVec> data_;
};

using FourierVectorField = ModalField<Staggering::Face>;
using FourierEdgeField = ModalField<Staggering::Edge>;
using FourierScalarField = ModalField<Staggering::Cell>;

}  // namespace tcdyn
