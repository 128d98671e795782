#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

#include "patchflow/field.hpp"
#include "patchflow/smooth.hpp"
#include "patchflow/spectral.hpp"

namespace patchflow {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Radial dyadic cutoffs. chi == 1 on |xi| <= 1 and vanishes for |xi| >= 4/3;
// phi(xi) := chi(xi/2) - chi(xi) is supported in {1 <= |xi| <= 8/3}. The
// telescoping definition makes both partition identities
//   chi(xi) + sum_{j>=0} phi(2^-j xi) = 1,  sum_j phi(2^-j xi) = 1 (xi != 0)
// hold exactly at every sampled frequency.
struct CutoffProfiles {
    static double chi(double rho) {
        // smoothstep ramps 1 -> 0 over rho in [1, 4/3]
        return smoothstep((4.0 / 3.0 - rho) * 3.0);
    }
    static double phi(double rho) { return chi(0.5 * rho) - chi(rho); }

    static double chi_scaled(int j, double k_abs) { return chi(std::ldexp(k_abs, -j)); }
    static double phi_scaled(int j, double k_abs) { return phi(std::ldexp(k_abs, -j)); }
};

namespace detail {

template <class Fn> // fn(|k|) -> real multiplier
inline ScalarField apply_radial(const ScalarField& f, Fn&& fn) {
    const Grid2D& g = f.grid();
    const std::size_t n = g.n(), nc = n / 2 + 1;
    std::vector<std::complex<double>> spec(f.spectrum());
    for (std::size_t i = 0; i < n; ++i) {
        const double k1 = g.wavenumber(i);
        for (std::size_t j = 0; j < nc; ++j) {
            const double k2 = 2.0 * M_PI / g.length() * double(j);
            const double w = fn(std::hypot(k1, k2));
            if (w == 0.0)
                spec[i * nc + j] = 0.0;
            else
                spec[i * nc + j] *= w;
        }
    }
    return ScalarField::from_spectrum(g, std::move(spec));
}

} // namespace detail

// homogeneous truncation operators on the torus lattice
inline ScalarField lp_block(const ScalarField& f, int j) {
    return detail::apply_radial(f, [j](double k) { return CutoffProfiles::phi_scaled(j, k); });
}

inline ScalarField lp_low(const ScalarField& f, int j) {
    return detail::apply_radial(f, [j](double k) { return CutoffProfiles::chi_scaled(j, k); });
}

// smallest j whose shell can contain the lowest lattice frequency 2*pi/L
inline int lp_j_min(const Grid2D& g) {
    return int(std::ceil(std::log2(2.0 * M_PI / g.length())));
}

// largest shell needed to cover the corner frequency sqrt(2)*pi*n/L
inline int lp_j_max(const Grid2D& g) {
    const double k_corner = std::sqrt(2.0) * M_PI * double(g.n()) / g.length();
    return int(std::ceil(std::log2(k_corner))) - 1;
}

// Homogeneous dyadic decomposition: blocks j_min..j_max plus the merged
// low part S_{j_min} f. Reconstruction low + sum(blocks) is exact.
class DyadicDecomposition {
public:
    explicit DyadicDecomposition(const ScalarField& f)
        : j_min_(lp_j_min(f.grid())), j_max_(lp_j_max(f.grid())), low_(lp_low(f, j_min_)) {
        if (j_max_ - j_min_ + 1 < 4)
            throw std::domain_error("decompose: insufficient resolution");
        blocks_.reserve(std::size_t(j_max_ - j_min_ + 1));
        for (int j = j_min_; j <= j_max_; ++j) blocks_.push_back(lp_block(f, j));
    }

    int j_min() const { return j_min_; }
    int j_max() const { return j_max_; }
    std::size_t block_count() const { return blocks_.size(); }

    const ScalarField& block(int j) const {
        if (j < j_min_ || j > j_max_) throw std::out_of_range("block index");
        return blocks_[std::size_t(j - j_min_)];
    }
    const ScalarField& low_part() const { return low_; }

    ScalarField reconstruct() const {
        ScalarField r = low_;
        for (const auto& b : blocks_) r += b;
        return r;
    }

private:
    int j_min_, j_max_;
    ScalarField low_;
    std::vector<ScalarField> blocks_;
};

inline DyadicDecomposition decompose(const ScalarField& f) { return DyadicDecomposition(f); }

// Besov index (s, p, r); p and r may be infinity. s is restricted to (-2, 2),
// the range actually exercised in 2-D.
struct BesovIndex {
    double s;
    double p;
    double r;
    bool homogeneous;

    BesovIndex(double s_, double p_, double r_, bool hom = true)
        : s(s_), p(p_), r(r_), homogeneous(hom) {
        if (!(s > -2.0 && s < 2.0))
            throw std::invalid_argument("BesovIndex: s outside (-2, 2)");
        if (!(p >= 1.0) || !(r >= 1.0))
            throw std::invalid_argument("BesovIndex: p, r must lie in [1, inf]");
    }
};

namespace detail {

inline double lr_accumulate(const std::vector<double>& terms, double r) {
    if (terms.empty()) return 0.0;
    if (r == kInf) {
        double m = 0.0;
        for (double t : terms) m = std::max(m, t);
        return m;
    }
    if (r == 1.0) {
        double s = 0.0;
        for (double t : terms) s += t;
        return s;
    }
    double s = 0.0;
    for (double t : terms) s += std::pow(t, r);
    return std::pow(s, 1.0 / r);
}

} // namespace detail

// discrete Besov norm: l^r over resolvable shells of 2^{js} ||block_j||_{L^p}.
// Homogeneous norms with s <= 0 require a vanishing zero mode (S'_h surrogate).
inline double besov_norm(const ScalarField& f, const BesovIndex& idx) {
    std::vector<double> terms;
    if (idx.homogeneous) {
        if (idx.s <= 0.0 && std::abs(f.mean()) > 1e-12 * (1.0 + f.max_abs()))
            throw std::domain_error("besov_norm: not in S'_h surrogate");
        const DyadicDecomposition dec(f);
        for (int j = dec.j_min(); j <= dec.j_max(); ++j)
            terms.push_back(std::pow(2.0, idx.s * j) * dec.block(j).lp_norm(idx.p));
    } else {
        const int jmax = lp_j_max(f.grid());
        terms.push_back(std::pow(2.0, -idx.s) * lp_low(f, 0).lp_norm(idx.p));
        for (int j = 0; j <= jmax; ++j)
            terms.push_back(std::pow(2.0, idx.s * j) * lp_block(f, j).lp_norm(idx.p));
    }
    return detail::lr_accumulate(terms, idx.r);
}

// Hoelder norm realized as max(||f||_inf, sup_j 2^{j eps} ||Delta_j f||_inf)
// over the inhomogeneous blocks.
inline double holder_norm(const ScalarField& f, double eps) {
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("holder_norm: eps must lie in ]0,1[");
    double m = f.max_abs();
    const int jmax = lp_j_max(f.grid());
    for (int j = 0; j <= jmax; ++j)
        m = std::max(m, std::pow(2.0, eps * j) * lp_block(f, j).max_abs());
    return m;
}

inline double holder_norm(const VectorField2& X, double eps) {
    return std::max(holder_norm(X.x(), eps), holder_norm(X.y(), eps));
}

// homogeneous Hoelder seminorm C^s (Besov infinity,infinity); s may be negative
inline double holder_seminorm(const ScalarField& f, double s) {
    ScalarField g = (s <= 0.0) ? mean_free(f) : f;
    return besov_norm(g, BesovIndex(s, kInf, kInf, true));
}

inline double holder_seminorm(const VectorField2& X, double s) {
    return std::max(holder_seminorm(X.x(), s), holder_seminorm(X.y(), s));
}

// Probe-based lower bound for the multiplier norm ||phi||_{M(src -> dst)}:
// max over probes of |phi u|_dst / |u|_src. Products are dealiased and
// mean-corrected before a homogeneous dst norm with s <= 0 is taken.
inline double multiplier_norm_probe(const ScalarField& phi, const BesovIndex& src,
                                    const BesovIndex& dst,
                                    const std::vector<ScalarField>& probes) {
    double best = 0.0;
    bool any = false;
    for (const auto& u : probes) {
        const double denom = besov_norm(u, src);
        if (!(denom > 1e-300)) continue;
        any = true;
        ScalarField pu = multiply_dealiased(phi, u);
        if (dst.homogeneous && dst.s <= 0.0) pu = mean_free(pu);
        best = std::max(best, besov_norm(pu, dst) / denom);
    }
    if (!any) throw std::domain_error("multiplier_norm_probe: no valid probes");
    return best;
}

} // namespace patchflow
