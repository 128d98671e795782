#pragma once

#include <stdexcept>

#include "patchflow/littlewood_paley.hpp"
#include "patchflow/spectral.hpp"

namespace patchflow {

// block-separation integer N0 of the paraproduct; Lemma-level estimates need
// n0 >= 2, the default follows the usual choice 4
struct ParaConfig {
    int n0 = 4;
    ParaConfig() = default;
    explicit ParaConfig(int n0_) : n0(n0_) {
        if (n0 < 2) throw std::invalid_argument("ParaConfig: n0 must be >= 2");
    }
};

namespace detail {

inline bool in_dealias_box(const Grid2D& g, std::size_t i, std::size_t j) {
    const long lim = g.dealias_mode_limit();
    return std::abs(g.signed_mode(i)) <= lim && long(j) <= lim;
}

// radial cutoff fused with the 2/3 box; one inverse transform per call
template <class Fn>
inline ScalarField band_field(const ScalarField& f, Fn&& radial) {
    const Grid2D& g = f.grid();
    const std::size_t n = g.n(), nc = n / 2 + 1;
    std::vector<std::complex<double>> spec(f.spectrum());
    for (std::size_t i = 0; i < n; ++i) {
        const double k1 = g.wavenumber(i);
        for (std::size_t j = 0; j < nc; ++j) {
            const std::size_t idx = i * nc + j;
            if (!in_dealias_box(g, i, j)) {
                spec[idx] = 0.0;
                continue;
            }
            const double k2 = 2.0 * M_PI / g.length() * double(j);
            const double w = radial(std::hypot(k1, k2));
            if (w == 0.0)
                spec[idx] = 0.0;
            else
                spec[idx] *= w;
        }
    }
    return ScalarField::from_spectrum(g, std::move(spec));
}

inline ScalarField block_dealiased(const ScalarField& f, int j) {
    return band_field(f, [j](double k) { return CutoffProfiles::phi_scaled(j, k); });
}

inline ScalarField low_dealiased(const ScalarField& f, int j) {
    return band_field(f, [j](double k) { return CutoffProfiles::chi_scaled(j, k); });
}

// accumulates truncated spectra of pointwise products; one forward transform
// per product and a single inverse at the end
class ProductAccumulator {
public:
    explicit ProductAccumulator(const Grid2D& g)
        : grid_(g), spec_(g.n() * (g.n() / 2 + 1), {0.0, 0.0}), scratch_(g.size()) {}

    void add(const ScalarField& a, const ScalarField& b, double sign = 1.0) {
        const auto& av = a.values();
        const auto& bv = b.values();
        for (std::size_t i = 0; i < scratch_.size(); ++i) scratch_[i] = av[i] * bv[i];
        std::vector<std::complex<double>> ps(spec_.size());
        FftPlans::get(grid_.n()).forward(scratch_.data(), ps.data());
        const std::size_t n = grid_.n(), nc = n / 2 + 1;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < nc; ++j)
                if (in_dealias_box(grid_, i, j)) spec_[i * nc + j] += sign * ps[i * nc + j];
    }

    ScalarField finish() { return ScalarField::from_spectrum(grid_, std::move(spec_)); }

private:
    Grid2D grid_;
    std::vector<std::complex<double>> spec_;
    std::vector<double> scratch_;
};

} // namespace detail

// paraproduct T_u v = sum_j S_{j-n0} u * Delta_j v over the resolvable shells,
// every pointwise product dealiased
inline ScalarField paraproduct(const ScalarField& u, const ScalarField& v,
                               const ParaConfig& cfg = {}) {
    require_same_grid(u.grid(), v.grid());
    const int jmin = lp_j_min(u.grid()), jmax = lp_j_max(u.grid());
    detail::ProductAccumulator acc(u.grid());
    for (int j = jmin; j <= jmax; ++j)
        acc.add(detail::low_dealiased(u, j - cfg.n0), detail::block_dealiased(v, j));
    return acc.finish();
}

// remainder R(u,v) = sum_{|j-k| <= n0} Delta_j u * Delta_k v
inline ScalarField remainder(const ScalarField& u, const ScalarField& v,
                             const ParaConfig& cfg = {}) {
    require_same_grid(u.grid(), v.grid());
    const int jmin = lp_j_min(u.grid()), jmax = lp_j_max(u.grid());
    std::vector<ScalarField> bu, bv;
    for (int j = jmin; j <= jmax; ++j) {
        bu.push_back(detail::block_dealiased(u, j));
        bv.push_back(detail::block_dealiased(v, j));
    }
    detail::ProductAccumulator acc(u.grid());
    for (int j = jmin; j <= jmax; ++j) {
        ScalarField tilde(v.grid());
        for (int k = std::max(jmin, j - cfg.n0); k <= std::min(jmax, j + cfg.n0); ++k)
            tilde += bv[std::size_t(k - jmin)];
        acc.add(bu[std::size_t(j - jmin)], tilde);
    }
    return acc.finish();
}

// The exact low-frequency correction that closes Bony's decomposition on the
// torus:  uv = T_u v + T_v u + R(u,v) + bony_low_correction(u,v)
// (uv dealiased). It collects the merged low part L = S_{j_min} and the
// partially-seen low modes of the first n0 shells, for which S_{j-n0}
// reaches below j_min.
inline ScalarField bony_low_correction(const ScalarField& u, const ScalarField& v,
                                       const ParaConfig& cfg = {}) {
    require_same_grid(u.grid(), v.grid());
    const int jmin = lp_j_min(u.grid()), jmax = lp_j_max(u.grid());
    const ScalarField lu = detail::low_dealiased(u, jmin);
    const ScalarField lv = detail::low_dealiased(v, jmin);
    detail::ProductAccumulator acc(u.grid());
    acc.add(lu, lv);
    for (int k = jmin; k <= std::min(jmax, jmin + cfg.n0 - 1); ++k) {
        acc.add(lu - detail::low_dealiased(u, k - cfg.n0), detail::block_dealiased(v, k));
        acc.add(lv - detail::low_dealiased(v, k - cfg.n0), detail::block_dealiased(u, k));
    }
    return acc.finish();
}

// para-vector field  T_X f = T_{X^k} d_k f
inline ScalarField para_vector_field(const VectorField2& X, const ScalarField& f,
                                     const ParaConfig& cfg = {}) {
    require_same_grid(X.grid(), f.grid());
    return paraproduct(X.x(), derivative(f, 0), cfg) +
           paraproduct(X.y(), derivative(f, 1), cfg);
}

inline VectorField2 para_vector_field(const VectorField2& X, const VectorField2& f,
                                      const ParaConfig& cfg = {}) {
    return VectorField2(para_vector_field(X, f.x(), cfg), para_vector_field(X, f.y(), cfg));
}

// [T_X, Laplacian] u
inline ScalarField commutator_laplacian(const VectorField2& X, const ScalarField& u,
                                        const ParaConfig& cfg = {}) {
    return para_vector_field(X, laplacian(u), cfg) - laplacian(para_vector_field(X, u, cfg));
}

// right-hand side of the tangent-field transport equation: dX/dt = -u.grad X + dX u
inline VectorField2 vector_transport_rhs(const VectorField2& X, const VectorField2& u) {
    ScalarField r1 = directional_derivative(X, u.x()) - directional_derivative(u, X.x());
    ScalarField r2 = directional_derivative(X, u.y()) - directional_derivative(u, X.y());
    return VectorField2(std::move(r1), std::move(r2));
}

// Frozen-time material commutator [T_X, D_t] u for divergence-free u,
// assembled from the R-decomposition
//   -T_{dt X^k} d_k u + d_l T_X(u^l u) - T_{d_l X}(u^l u) - u^l d_l T_X u
// with dt X supplied by the transport equation.
inline VectorField2 commutator_material(const VectorField2& X, const VectorField2& u,
                                        const ParaConfig& cfg = {}) {
    require_same_grid(X.grid(), u.grid());
    if (divergence(u).max_abs() > 1e-8 * (1.0 + u.max_norm()))
        throw std::domain_error("commutator_material: u must be divergence-free");

    const VectorField2 dtX = vector_transport_rhs(X, u);
    const VectorField2 dX0(derivative(X.x(), 0), derivative(X.y(), 0));
    const VectorField2 dX1(derivative(X.x(), 1), derivative(X.y(), 1));
    VectorField2 out(u.grid());
    for (int i = 0; i < 2; ++i) {
        const ScalarField& ui = u.component(i);
        const ScalarField TXui = para_vector_field(X, ui, cfg);
        ScalarField acc(u.grid());
        acc -= paraproduct(dtX.x(), derivative(ui, 0), cfg);
        acc -= paraproduct(dtX.y(), derivative(ui, 1), cfg);
        for (int l = 0; l < 2; ++l) {
            const ScalarField ul_ui = multiply_dealiased(u.component(l), ui);
            acc += derivative(para_vector_field(X, ul_ui, cfg), l);
            acc -= para_vector_field(l == 0 ? dX0 : dX1, ul_ui, cfg);
            acc -= multiply_dealiased(u.component(l), derivative(TXui, l));
        }
        (i == 0 ? out.x_mut() : out.y_mut()) = std::move(acc);
    }
    return out;
}

} // namespace patchflow
