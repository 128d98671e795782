#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "patchflow/paradiff.hpp"
#include "patchflow/random_fields.hpp"

using namespace patchflow;

namespace {

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

// mean-free random field concentrated near |k| = k_center (+/- 15%)
ScalarField annulus_noise(const Grid2D& g, std::mt19937_64& rng, double k_center) {
    ScalarField w = white_noise(g, rng);
    ScalarField f = detail::band_field(w, [k_center](double k) {
        const double t = std::abs(k / k_center - 1.0);
        return smoothstep((0.15 - t) / 0.10);
    });
    f = mean_free(f);
    const double m = f.max_abs();
    if (m > 0.0) f *= 1.0 / m;
    return f;
}

double besov_meanfree(const ScalarField& f, const BesovIndex& idx) {
    return besov_norm(idx.s <= 0.0 && idx.homogeneous ? mean_free(f) : f, idx);
}

double besov_meanfree(const VectorField2& v, const BesovIndex& idx) {
    return std::max(besov_meanfree(v.x(), idx), besov_meanfree(v.y(), idx));
}

} // namespace

TEST_CASE("paraproduct with constant factors") {
    Grid2D g(128, 8.0);
    std::mt19937_64 rng(41);
    ScalarField v = random_band_limited(g, rng);

    // constant u: S_{j-n0} u = u, so T_u v collects all shells of v
    ScalarField c(g, 2.0);
    ScalarField tv = paraproduct(c, v);
    ScalarField want = 2.0 * (dealias(v) - detail::low_dealiased(v, lp_j_min(g)));
    REQUIRE((tv - want).max_abs() < 1e-12 * (1.0 + v.max_abs()));

    // constant v: all its shells vanish
    REQUIRE(paraproduct(v, c).max_abs() < 1e-13);
}

TEST_CASE("single-mode pairs follow the block bookkeeping") {
    Grid2D g(512, 2.0 * M_PI);
    auto mode = [&](double kappa) {
        return ScalarField::sampled(g, [kappa](double x, double) { return std::cos(kappa * x); });
    };

    // shells 1 and 6 (separation 5 > n0): the paraproduct is the whole product
    {
        ScalarField u = mode(4.0), v = mode(128.0);
        ScalarField uv = multiply_dealiased(u, v);
        REQUIRE((paraproduct(u, v) - uv).max_abs() < 1e-12);
        REQUIRE(paraproduct(v, u).max_abs() < 1e-12);
        REQUIRE(remainder(u, v).max_abs() < 1e-12);
    }
    // shells 1 and 5 (separation 4 = n0): everything sits in the remainder
    {
        ScalarField u = mode(4.0), v = mode(64.0);
        ScalarField uv = multiply_dealiased(u, v);
        REQUIRE(paraproduct(u, v).max_abs() < 1e-12);
        REQUIRE(paraproduct(v, u).max_abs() < 1e-12);
        REQUIRE((remainder(u, v) - uv).max_abs() < 1e-12);
    }

    // brute-force classification of block pairs reproduces all three operators
    {
        std::mt19937_64 rng(5);
        ScalarField u = random_band_limited(g, rng);
        ScalarField v = random_band_limited(g, rng);
        const int jmin = lp_j_min(g), jmax = lp_j_max(g);
        std::vector<ScalarField> bu, bv;
        for (int j = jmin; j <= jmax; ++j) {
            bu.push_back(detail::block_dealiased(u, j));
            bv.push_back(detail::block_dealiased(v, j));
        }
        ScalarField r_oracle(g);
        for (int j = jmin; j <= jmax; ++j)
            for (int k = jmin; k <= jmax; ++k)
                if (std::abs(j - k) <= 4)
                    r_oracle += multiply_dealiased(bu[std::size_t(j - jmin)],
                                                   bv[std::size_t(k - jmin)]);
        REQUIRE((remainder(u, v) - r_oracle).max_abs() <
                1e-11 * (1.0 + u.max_abs() * v.max_abs()));
    }
}

TEST_CASE("Bony decomposition is exact with the low-frequency correction") {
    Grid2D g(256, 8.0);
    std::mt19937_64 rng(77);
    for (int rep = 0; rep < 5; ++rep) {
        ScalarField u = random_band_limited(g, rng);
        ScalarField v = random_band_limited(g, rng);
        ScalarField uv = multiply_dealiased(u, v);
        ScalarField res = uv - paraproduct(u, v) - paraproduct(v, u) - remainder(u, v) -
                          bony_low_correction(u, v);
        REQUIRE(res.max_abs() < 1e-9 * (u.max_abs() * v.max_abs()));
    }

    ScalarField z(g);
    std::mt19937_64 rng2(78);
    ScalarField v = random_band_limited(g, rng2);
    REQUIRE(remainder(z, v).max_abs() == 0.0);
    REQUIRE(remainder(v, z).max_abs() == 0.0);

    ScalarField u = random_band_limited(g, rng2);
    REQUIRE((remainder(u, v) - remainder(v, u)).max_abs() < 1e-12);
}

TEST_CASE("para-vector field basics") {
    Grid2D g(128, 8.0);
    std::mt19937_64 rng(13);
    ScalarField f = random_band_limited(g, rng);

    // constant X = e1: T_X f = d1 f minus its low part
    VectorField2 e1(ScalarField(g, 1.0), ScalarField(g));
    ScalarField tf = para_vector_field(e1, f);
    ScalarField d1 = derivative(dealias(f), 0);
    ScalarField want = d1 - detail::low_dealiased(d1, lp_j_min(g));
    REQUIRE((tf - want).max_abs() < 1e-11 * (1.0 + d1.max_abs()));

    ScalarField c(g, 4.0);
    VectorField2 X = random_solenoidal(g, rng);
    REQUIRE(para_vector_field(X, c).max_abs() < 1e-12);
}

TEST_CASE("comparison identity between dX and T_X") {
    Grid2D g(256, 8.0);
    std::mt19937_64 rng(19);
    VectorField2 X = random_solenoidal(g, rng);
    ScalarField f = random_band_limited(g, rng);

    ScalarField lhs = directional_derivative(X, f) - para_vector_field(X, f);

    ScalarField rhs = paraproduct(derivative(f, 0), X.x()) +
                      paraproduct(derivative(f, 1), X.y()) +
                      derivative(remainder(f, X.x()), 0) +
                      derivative(remainder(f, X.y()), 1) -
                      remainder(f, divergence(X));
    // torus low-frequency corrections of the products X^k d_k f
    rhs += bony_low_correction(X.x(), derivative(f, 0));
    rhs += bony_low_correction(X.y(), derivative(f, 1));

    const double scale = X.max_norm() * gradient(f).max_norm();
    REQUIRE((lhs - rhs).max_abs() < 1e-9 * scale);
}

TEST_CASE("commutator with the Laplacian") {
    Grid2D g(128, 8.0);
    std::mt19937_64 rng(23);
    ScalarField u = random_band_limited(g, rng);

    // constant X commutes with Fourier multipliers
    VectorField2 c(ScalarField(g, 1.5), ScalarField(g, -0.5));
    REQUIRE(commutator_laplacian(c, u).max_abs() < 1e-9 * laplacian(u).max_abs());

    ScalarField z(g);
    VectorField2 X = random_solenoidal(g, rng);
    REQUIRE(commutator_laplacian(X, z).max_abs() == 0.0);
}

TEST_CASE("commutator estimates are scale-uniform") {
    const double eps = 0.5, p = 3.0;
    const BesovIndex num_idx(2.0 / p + eps - 2.0, p, 1.0, true);

    // Source scales must sit a few shells above the lowest torus frequency,
    // otherwise S_{j-n0} X is empty and the paraproduct side degenerates.
    SECTION("Laplacian commutator, three source scales") {
        Grid2D g(512, 2.0 * M_PI);
        std::mt19937_64 rng(101);
        const BesovIndex grad_idx(2.0 / p, p, 1.0, true);
        VectorField2 X = random_holder_field(g, rng, eps, 0, 4);
        double dX_hold = 0.0;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                dX_hold = std::max(dX_hold,
                                   holder_seminorm(derivative(X.component(a), b), eps - 1.0));

        std::vector<double> per_scale;
        for (double kc : {36.0, 72.0, 144.0}) {
            std::vector<double> ratios;
            for (int rep = 0; rep < 5; ++rep) {
                ScalarField u = annulus_noise(g, rng, kc);
                ScalarField com = commutator_laplacian(X, u);
                const double num = besov_meanfree(com, num_idx);
                const double den = dX_hold * std::max(besov_meanfree(derivative(u, 0), grad_idx),
                                                      besov_meanfree(derivative(u, 1), grad_idx));
                if (den > 0.0) ratios.push_back(num / den);
            }
            REQUIRE(ratios.size() >= 4);
            per_scale.push_back(median(ratios));
        }
        const double lo = *std::min_element(per_scale.begin(), per_scale.end());
        const double hi = *std::max_element(per_scale.begin(), per_scale.end());
        INFO("laplacian commutator medians " << per_scale[0] << " " << per_scale[1] << " "
                                             << per_scale[2]);
        REQUIRE(hi / lo <= 4.0);
    }

    SECTION("dX - T_X difference, three source scales") {
        Grid2D g(128, 2.0 * M_PI);
        std::mt19937_64 rng(103);
        VectorField2 X = random_holder_field(g, rng, eps, 0, 4);
        const BesovIndex src_idx(2.0 / p - 1.0, p, 1.0, true);
        const double xh = holder_seminorm(X, eps);
        std::vector<double> per_scale;
        for (double kc : {8.0, 16.0, 32.0}) {
            std::vector<double> ratios;
            for (int rep = 0; rep < 17; ++rep) {
                ScalarField f = annulus_noise(g, rng, kc);
                ScalarField diff = directional_derivative(X, f) - para_vector_field(X, f);
                const double num = besov_meanfree(diff, num_idx);
                const double den = besov_meanfree(f, src_idx) * xh;
                if (den > 0.0) ratios.push_back(num / den);
            }
            per_scale.push_back(median(ratios));
        }
        const double lo = *std::min_element(per_scale.begin(), per_scale.end());
        const double hi = *std::max_element(per_scale.begin(), per_scale.end());
        INFO("dX-T_X medians " << per_scale[0] << " " << per_scale[1] << " " << per_scale[2]);
        REQUIRE(hi / lo <= 4.0);
    }
}

TEST_CASE("material commutator") {
    Grid2D g(128, 8.0);
    std::mt19937_64 rng(55);
    VectorField2 X = random_holder_field(g, rng, 0.5, 0, 3);

    VectorField2 zero(g);
    REQUIRE(commutator_material(X, zero).x().max_abs() == 0.0);

    VectorField2 u = random_solenoidal(g, rng);
    VectorField2 zx(g);
    VectorField2 czx = commutator_material(zx, u);
    REQUIRE(czx.x().max_abs() < 1e-13);
    REQUIRE(czx.y().max_abs() < 1e-13);

    // non-solenoidal input is rejected
    ScalarField q = random_band_limited(g, rng);
    VectorField2 bad = gradient(q);
    REQUIRE_THROWS_WITH(commutator_material(X, bad),
                        Catch::Matchers::ContainsSubstring("divergence-free"));
}

TEST_CASE("material commutator ratio across resolutions") {
    const double eps = 0.5, p = 3.0;
    const BesovIndex num_idx(2.0 / p + eps - 2.0, p, 1.0, true);
    std::vector<double> ratios;
    for (std::size_t n : {64u, 128u, 256u}) {
        Grid2D g(n, 8.0);
        // band-limited rigid rotation around the domain center
        ScalarField psi = ScalarField::sampled(g, [&](double x, double y) {
            const double r2 = (x - 4.0) * (x - 4.0) + (y - 4.0) * (y - 4.0);
            return -0.5 * r2 * std::exp(-r2 * r2 / 2.56);
        });
        VectorField2 u = perp_gradient(dealias(psi));
        ScalarField fb = gaussian_bump(g, 4.0, 4.0, 1.0);
        VectorField2 X = perp_gradient(fb);

        VectorField2 com = commutator_material(X, u);
        const double num = besov_meanfree(com, num_idx);
        REQUIRE(std::isfinite(num));

        const double xh = holder_seminorm(X, eps);
        const double u_hi = besov_meanfree(u, BesovIndex(2.0 / p + 1.0, p, 1.0, true));
        const double u_lo = besov_meanfree(u, BesovIndex(2.0 / p - 1.0, p, 1.0, true));
        const double u_cm1 = holder_seminorm(u.x(), -1.0);
        VectorField2 TXu = para_vector_field(X, u);
        const double txu_hi = besov_meanfree(TXu, BesovIndex(2.0 / p + eps, p, 1.0, true));
        const double txu_lo = holder_seminorm(mean_free(TXu.x()), eps - 2.0);
        const double den = xh * u_hi * u_lo + u_cm1 * txu_hi + u_hi * txu_lo;
        REQUIRE(den > 0.0);
        ratios.push_back(num / den);
    }
    const double lo = *std::min_element(ratios.begin(), ratios.end());
    const double hi = *std::max_element(ratios.begin(), ratios.end());
    INFO("material commutator ratios " << ratios[0] << " " << ratios[1] << " " << ratios[2]);
    REQUIRE(hi / lo <= 4.0);
}

TEST_CASE("paraproduct terms are frequency localized") {
    Grid2D g(256, 2.0 * M_PI);
    std::mt19937_64 rng(61);
    ScalarField u = random_band_limited(g, rng);
    ScalarField v = random_band_limited(g, rng);

    const int j = 4;
    ScalarField term = multiply_dealiased(detail::low_dealiased(u, j - 4),
                                          detail::block_dealiased(v, j));
    const auto& spec = term.spectrum();
    const std::size_t n = g.n(), nc = n / 2 + 1;
    // support arithmetic: |k| within 2^j [1 - 1/12, 8/3 + 1/12]
    const double lo = std::pow(2.0, j) * (1.0 - 1.0 / 12.0) * 0.999;
    const double hi = std::pow(2.0, j) * (8.0 / 3.0 + 1.0 / 12.0) * 1.001;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t jj = 0; jj < nc; ++jj) {
            const double kr = std::hypot(g.wavenumber(i), 2.0 * M_PI / g.length() * double(jj));
            if (kr >= lo && kr <= hi) continue;
            REQUIRE(std::abs(spec[i * nc + jj]) < 1e-12);
        }
}
