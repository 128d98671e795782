#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "patchflow/field.hpp"

namespace patchflow {

// Spectral multiplier and differential operators. All operators are pure:
// they read cached spectra and return fresh fields. Odd-order derivative
// multipliers zero the Nyquist row/column.

namespace detail {

// apply fn(k1, k2, nyq1, nyq2) -> complex multiplier to the half spectrum
template <class Fn>
inline ScalarField apply_multiplier(const ScalarField& f, Fn&& fn) {
    const Grid2D& g = f.grid();
    const std::size_t n = g.n(), nc = n / 2 + 1;
    std::vector<std::complex<double>> spec(f.spectrum());
    for (std::size_t i = 0; i < n; ++i) {
        const double k1 = g.wavenumber(i);
        const bool ny1 = g.is_nyquist(i);
        for (std::size_t j = 0; j < nc; ++j) {
            const double k2 = 2.0 * M_PI / g.length() * double(j);
            const bool ny2 = (j == n / 2);
            spec[i * nc + j] *= fn(k1, k2, ny1, ny2);
        }
    }
    return ScalarField::from_spectrum(g, std::move(spec));
}

} // namespace detail

inline ScalarField derivative(const ScalarField& f, int axis) {
    return detail::apply_multiplier(f, [axis](double k1, double k2, bool ny1, bool ny2) {
        if (axis == 0)
            return ny1 ? std::complex<double>(0.0) : std::complex<double>(0.0, k1);
        return ny2 ? std::complex<double>(0.0) : std::complex<double>(0.0, k2);
    });
}

inline VectorField2 gradient(const ScalarField& f) {
    return VectorField2(derivative(f, 0), derivative(f, 1));
}

// perp-gradient (-d2 f, d1 f); tangent to the level sets of f
inline VectorField2 perp_gradient(const ScalarField& f) {
    ScalarField d2 = derivative(f, 1);
    d2 *= -1.0;
    return VectorField2(std::move(d2), derivative(f, 0));
}

inline ScalarField divergence(const VectorField2& v) {
    return derivative(v.x(), 0) + derivative(v.y(), 1);
}

inline ScalarField laplacian(const ScalarField& f) {
    return detail::apply_multiplier(f, [](double k1, double k2, bool, bool) {
        return std::complex<double>(-(k1 * k1 + k2 * k2));
    });
}

inline ScalarField inverse_laplacian(const ScalarField& f) {
    if (std::abs(f.mean()) > 1e-10 * (1.0 + f.max_abs()))
        throw std::domain_error("inverse_laplacian: nonzero mean");
    return detail::apply_multiplier(f, [](double k1, double k2, bool, bool) {
        const double k2abs = k1 * k1 + k2 * k2;
        return std::complex<double>(k2abs == 0.0 ? 0.0 : -1.0 / k2abs);
    });
}

// Leray projection onto divergence-free fields: v - k (k.v)/|k|^2.
// Nyquist modes are left untouched; the divergence operator ignores them.
inline VectorField2 leray_project(const VectorField2& v) {
    const Grid2D& g = v.grid();
    const std::size_t n = g.n(), nc = n / 2 + 1;
    std::vector<std::complex<double>> s1(v.x().spectrum());
    std::vector<std::complex<double>> s2(v.y().spectrum());
    for (std::size_t i = 0; i < n; ++i) {
        const double k1 = g.wavenumber(i);
        const bool ny1 = g.is_nyquist(i);
        for (std::size_t j = 0; j < nc; ++j) {
            const double k2 = 2.0 * M_PI / g.length() * double(j);
            const bool ny2 = (j == n / 2);
            const double kk = k1 * k1 + k2 * k2;
            if (kk == 0.0 || ny1 || ny2) continue;
            const std::size_t idx = i * nc + j;
            const std::complex<double> kdotv = k1 * s1[idx] + k2 * s2[idx];
            s1[idx] -= k1 * kdotv / kk;
            s2[idx] -= k2 * kdotv / kk;
        }
    }
    return VectorField2(ScalarField::from_spectrum(g, std::move(s1)),
                        ScalarField::from_spectrum(g, std::move(s2)));
}

// 2/3-rule truncation: zero every mode with |m1| > n/3 or |m2| > n/3
inline ScalarField dealias(const ScalarField& f) {
    const long mlim = f.grid().dealias_mode_limit();
    return detail::apply_multiplier(f, [&f, mlim](double k1, double k2, bool, bool) {
        const double kfac = 2.0 * M_PI / f.grid().length();
        const long m1 = std::lround(std::abs(k1) / kfac);
        const long m2 = std::lround(std::abs(k2) / kfac);
        return std::complex<double>((m1 > mlim || m2 > mlim) ? 0.0 : 1.0);
    });
}

inline VectorField2 dealias(const VectorField2& v) {
    return VectorField2(dealias(v.x()), dealias(v.y()));
}

// dealiased pointwise product: inputs truncated to the 2/3 band, multiplied in
// physical space, result truncated again (alias-free for band-limited inputs)
inline ScalarField multiply_dealiased(const ScalarField& a, const ScalarField& b) {
    return dealias(dealias(a) * dealias(b));
}

// directional derivative X.grad(f), spectral derivatives, dealiased product
inline ScalarField directional_derivative(const VectorField2& X, const ScalarField& f) {
    require_same_grid(X.grid(), f.grid());
    return multiply_dealiased(X.x(), derivative(f, 0)) +
           multiply_dealiased(X.y(), derivative(f, 1));
}

inline ScalarField mean_free(const ScalarField& f) {
    ScalarField r(f);
    r += -f.mean();
    return r;
}

// translate by whole cells (periodic roll); used by translation-invariance tests
inline ScalarField translate(const ScalarField& f, long di, long dj) {
    const std::size_t n = f.n();
    ScalarField r(f.grid());
    auto& out = r.values_mut();
    const auto& in = f.values();
    auto wrap = [n](long i) { return std::size_t(((i % long(n)) + long(n)) % long(n)); };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            out[wrap(long(i) + di) * n + wrap(long(j) + dj)] = in[i * n + j];
    return r;
}

} // namespace patchflow
