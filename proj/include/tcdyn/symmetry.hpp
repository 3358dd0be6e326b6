#pragma once

#include <utility>

#include "tcdyn/field.hpp"

namespace tcdyn {

/// Equatorial reflection (f_r, f_theta, -f_z)(r, theta, -z), mode by mode.
/// Throws std::invalid_argument if the grid is not symmetric in z.
FourierVectorField apply_SZ2(const FourierVectorField& f);
/// Induced action on curls, (-J_r, -J_theta, J_z)(-z).
FourierEdgeField apply_SZ2(const FourierEdgeField& f);
/// Induced action on scalar potentials, phi(-z).
FourierScalarField apply_SZ2(const FourierScalarField& f);

/// (f + S f)/2 and (f - S f)/2.
std::pair<FourierVectorField, FourierVectorField> sym_antisym_split(const FourierVectorField& f);

}  // namespace tcdyn
