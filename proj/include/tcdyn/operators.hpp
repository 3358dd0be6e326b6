#pragma once

#include <Eigen/SparseCore>

#include "tcdyn/field.hpp"

namespace tcdyn {

using SpMat = Eigen::SparseMatrix<cplx>;

/// Discrete cylindrical operators for one azimuthal wavenumber m.
///
/// The discretization is a staggered finite-volume (Yee/MAC) scheme in the
/// meridian plane: vector fields live on faces, their curls on edges, scalars
/// at cell centres. div(curl_edge_to_face) vanishes identically, including the
/// azimuthal i*m/r terms. Rows that would need data outside the box (outer box
/// boundary edges, the axis r-face, the axis theta-edge) are left empty.
SpMat curl_face_to_edge(const MeridianGrid& g, int m);
SpMat curl_edge_to_face(const MeridianGrid& g, int m);
SpMat divergence(const MeridianGrid& g, int m);
/// Cell -> face gradient. Faces on the outer box boundary see a homogeneous
/// Dirichlet value; the axis r-face row is empty.
SpMat gradient(const MeridianGrid& g, int m);

/// Bilinear interpolation from one location family to another, written as a
/// block-space operator (rows in the block of `to`, columns in that of `from`).
SpMat interpolation(const MeridianGrid& g, Family from, Family to);

/// Families of the three vector components for a staggering.
Family component_family(Staggering s, int comp);

/// Operator H -> (U x H) on all edges for a fixed axisymmetric face field U.
SpMat cross_face_face_to_edge(const MeridianGrid& g, const CVec& U);
/// Operator H -> (U x H) on faces for a fixed axisymmetric edge field U.
SpMat cross_edge_face_to_face(const MeridianGrid& g, const CVec& U);
/// Operator J -> (U x J) on faces for a fixed axisymmetric face field U.
SpMat cross_face_edge_to_face(const MeridianGrid& g, const CVec& U);

SpMat diagonal(const CVec& d);
SpMat identity(std::size_t n);

/// Diagonal 0/1 mask as a sparse matrix.
SpMat mask_matrix(const std::vector<char>& mask);

/// Per-mode curl of a face field (result on edges).
CVec curl_mode(const FourierVectorField& f, int k);
/// Per-mode curl of an edge field (result on faces).
CVec curl_mode(const FourierEdgeField& f, int k);
/// Per-mode divergence (result at cell centres).
CVec divergence_mode(const FourierVectorField& f, int k);

FourierEdgeField curl(const FourierVectorField& f);
FourierVectorField curl(const FourierEdgeField& f);
FourierScalarField divergence(const FourierVectorField& f);

}  // namespace tcdyn
