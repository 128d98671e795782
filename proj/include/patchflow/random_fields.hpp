#pragma once

#include <cmath>
#include <random>

#include "patchflow/littlewood_paley.hpp"
#include "patchflow/spectral.hpp"

namespace patchflow {

// Seeded field generators shared by the verify suites, the multiplier probe
// families and the tests. Everything is a deterministic function of the
// engine state.

inline ScalarField white_noise(const Grid2D& g, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    ScalarField f(g);
    for (double& v : f.values_mut()) v = gauss(rng);
    return f;
}

// mean-free random field band-limited to the 2/3 band
inline ScalarField random_band_limited(const Grid2D& g, std::mt19937_64& rng) {
    ScalarField f = dealias(white_noise(g, rng));
    f = mean_free(f);
    const double m = f.max_abs();
    if (m > 0.0) f *= 1.0 / m;
    return f;
}

// random field supported on dyadic shell j, sup-normalized
inline ScalarField shell_noise(const Grid2D& g, std::mt19937_64& rng, int j) {
    ScalarField f = lp_block(white_noise(g, rng), j);
    const double m = f.max_abs();
    if (m > 0.0) f *= 1.0 / m;
    return f;
}

// periodic Gaussian bump centered at (x0, y0)
inline ScalarField gaussian_bump(const Grid2D& g, double x0, double y0, double width) {
    const double L = g.length();
    auto pdist = [L](double a, double b) {
        double d = std::fmod(a - b + 1.5 * L, L) - 0.5 * L;
        return d;
    };
    return ScalarField::sampled(g, [&](double x, double y) {
        const double dx = pdist(x, x0), dy = pdist(y, y0);
        return std::exp(-(dx * dx + dy * dy) / (width * width));
    });
}

// divergence-free band-limited random field (perp gradient of a stream function)
inline VectorField2 random_solenoidal(const Grid2D& g, std::mt19937_64& rng) {
    return perp_gradient(random_band_limited(g, rng));
}

// Divergence-free vector field with Hoelder-eps character: stream function
// assembled shell by shell with weights 2^{-j(1+eps)}, so graph X has
// C^eps blocks of comparable weighted size across shells.
inline VectorField2 random_holder_field(const Grid2D& g, std::mt19937_64& rng, double eps,
                                        int j_lo, int j_hi) {
    ScalarField psi(g);
    for (int j = j_lo; j <= j_hi; ++j) {
        ScalarField s = shell_noise(g, rng, j);
        s *= std::pow(2.0, -(1.0 + eps) * j);
        psi += s;
    }
    return perp_gradient(psi);
}

} // namespace patchflow
