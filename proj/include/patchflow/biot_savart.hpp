#pragma once

#include <stdexcept>

#include "patchflow/spectral.hpp"

namespace patchflow {

// scalar vorticity curl u = d1 u2 - d2 u1
inline ScalarField curl(const VectorField2& u) {
    return derivative(u.y(), 0) - derivative(u.x(), 1);
}

// torus Biot-Savart: u = grad-perp psi with Laplacian psi = omega.
// Solvability requires zero total vorticity.
inline VectorField2 velocity_from_vorticity(const ScalarField& omega) {
    if (std::abs(omega.mean()) > 1e-12 * (1.0 + omega.max_abs()))
        throw std::domain_error("velocity_from_vorticity: nonzero total vorticity on torus");
    return perp_gradient(inverse_laplacian(omega));
}

} // namespace patchflow
