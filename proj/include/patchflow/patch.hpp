#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "patchflow/contour.hpp"
#include "patchflow/smooth.hpp"
#include "patchflow/spectral.hpp"

namespace patchflow {

// Level-set description of the patch: f < 0 inside, signed-distance-like near
// the interface, smoothly saturated at +/- cap away from it (which keeps f
// periodic and makes grad-perp f compactly supported in the interface band).
struct LevelSet {
    ScalarField f;
    double band; // |f| < band is the certified nondegenerate neighborhood

    void certify_gradient(double min_grad = 0.5) const {
        const VectorField2 gf = gradient(f);
        const std::size_t n = f.n();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (std::abs(f(i, j)) >= band) continue;
                const double m = std::hypot(gf.x()(i, j), gf.y()(i, j));
                if (m < min_grad)
                    throw std::domain_error("LevelSet: gradient degenerates on the band");
            }
    }
};

enum class PatchShape { disc, ellipse, perturbed_disc };

struct PatchSpec {
    PatchShape shape = PatchShape::disc;
    double radius = 1.0;
    double eta = 0.05;       // density contrast, |eta| < 1
    double eps = 0.5;        // target Hoelder exponent in ]0,1[
    double amplitude = 0.0;  // perturbed_disc: relative radial amplitude
    int modes = 4;           // perturbed_disc: Weierstrass modes k = 2 .. modes+1
    double ellipse_ratio = 0.6;
    double center_x = -1.0;  // default: domain center
    double center_y = -1.0;
    double density_width_cells = 0.75; // tanh mollification width, in cells
};

// Weierstrass-type angular perturbation of exact C^{1,eps} class in theta
inline double weierstrass_angle(double theta, double eps, int modes) {
    double s = 0.0;
    for (int k = 2; k < 2 + modes; ++k)
        s += std::pow(2.0, -k * (1.0 + eps)) * std::cos(std::pow(2.0, k) * theta);
    return s;
}

struct Patch {
    LevelSet level_set;
    double eta;
    double eps;
    Contour contour;
    ScalarField indicator; // mollified 1_{f<0}
    double cx, cy, radius;

    ScalarField density() const {
        ScalarField rho = indicator;
        rho *= eta;
        rho += 1.0;
        return rho;
    }
};

inline ScalarField mollified_indicator(const ScalarField& f, double width) {
    ScalarField ind(f.grid());
    auto& out = ind.values_mut();
    const auto& in = f.values();
    for (std::size_t k = 0; k < in.size(); ++k)
        out[k] = 0.5 * (1.0 - std::tanh(in[k] / width));
    return ind;
}

inline Patch make_patch(const PatchSpec& spec, const Grid2D& grid) {
    if (!(std::abs(spec.eta) < 1.0))
        throw std::invalid_argument("make_patch: |eta| must be < 1");
    if (!(spec.eps > 0.0 && spec.eps < 1.0))
        throw std::invalid_argument("make_patch: eps must lie in ]0,1[");

    const double L = grid.length();
    const double cx = spec.center_x >= 0.0 ? spec.center_x : 0.5 * L;
    const double cy = spec.center_y >= 0.0 ? spec.center_y : 0.5 * L;
    const double R = spec.radius;

    // saturated signed-distance profile: slope ~1 at the interface, constant
    // +/- cap once |t| >= d
    const double d = 0.5 * R, cap = 0.25 * R;
    auto S = [d, cap](double t) {
        return cap * (2.0 * smoothstep((t + d) / (2.0 * d)) - 1.0);
    };

    // W attains its maximum at theta = 0 (all cosines aligned)
    const double wmax =
        spec.shape == PatchShape::perturbed_disc
            ? spec.amplitude * weierstrass_angle(0.0, spec.eps, spec.modes)
            : 0.0;
    const double reach = (spec.shape == PatchShape::ellipse ? R : R * (1.0 + wmax)) + d;
    if (cx - reach < 0.25 * L || cx + reach > 0.75 * L || cy - reach < 0.25 * L ||
        cy + reach > 0.75 * L)
        throw std::invalid_argument("make_patch: patch too large");

    ScalarField f = ScalarField::sampled(grid, [&](double x, double y) {
        const double dx = x - cx, dy = y - cy;
        switch (spec.shape) {
        case PatchShape::ellipse: {
            const double A = R, B = R * spec.ellipse_ratio;
            const double r = std::sqrt(dx * dx / (A * A) + dy * dy / (B * B));
            return S((r - 1.0) * std::min(A, B));
        }
        case PatchShape::perturbed_disc: {
            const double r = std::hypot(dx, dy);
            const double theta = std::atan2(dy, dx);
            const double rb =
                R * (1.0 + spec.amplitude * weierstrass_angle(theta, spec.eps, spec.modes));
            return S(r - rb);
        }
        case PatchShape::disc:
        default:
            return S(std::hypot(dx, dy) - R);
        }
    });

    Patch p{LevelSet{f, 0.5 * cap}, spec.eta, spec.eps, extract_contour(f),
            mollified_indicator(f, spec.density_width_cells * grid.spacing()),
            cx, cy, R};
    p.level_set.certify_gradient();
    return p;
}

// tangent field X0 = grad-perp f0; the saturated profile already confines it
// to the interface band, so no further cutoff is applied and div X0 stays at
// spectral roundoff
inline VectorField2 tangent_field(const Patch& p) { return perp_gradient(p.level_set.f); }

// omega0 = profile * 1_{D0}, mean-corrected by a smooth interior bump so the
// total vorticity vanishes exactly
inline ScalarField patch_vorticity(const Patch& p, const ScalarField& profile) {
    require_same_grid(p.level_set.f.grid(), profile.grid());
    ScalarField omega = profile * p.indicator;

    const Grid2D& g = profile.grid();
    ScalarField bump = ScalarField::sampled(g, [&](double x, double y) {
        const double r = std::hypot(x - p.cx, y - p.cy);
        return radial_bump(r / (0.5 * p.radius));
    });
    bump *= -omega.sum() / bump.sum();
    omega += bump;
    return omega;
}

} // namespace patchflow
