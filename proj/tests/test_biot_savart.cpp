#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "patchflow/biot_savart.hpp"
#include "patchflow/random_fields.hpp"

using namespace patchflow;

TEST_CASE("analytic sin-sin vorticity") {
    Grid2D g(128, 8.0);
    const double w = 2.0 * M_PI / g.length();
    ScalarField omega = ScalarField::sampled(g, [&](double x, double y) {
        return -2.0 * w * w * std::sin(w * x) * std::sin(w * y);
    });
    VectorField2 u = velocity_from_vorticity(omega);
    ScalarField u1 = ScalarField::sampled(g, [&](double x, double y) {
        return -w * std::sin(w * x) * std::cos(w * y);
    });
    ScalarField u2 = ScalarField::sampled(g, [&](double x, double y) {
        return w * std::cos(w * x) * std::sin(w * y);
    });
    REQUIRE((u.x() - u1).max_abs() < 1e-10 * u1.max_abs());
    REQUIRE((u.y() - u2).max_abs() < 1e-10 * u2.max_abs());
    REQUIRE(divergence(u).max_abs() < 1e-12);
    REQUIRE((curl(u) - omega).max_abs() < 1e-10 * omega.max_abs());
}

TEST_CASE("zero vorticity gives zero velocity") {
    Grid2D g(64, 4.0);
    ScalarField z(g);
    VectorField2 u = velocity_from_vorticity(z);
    REQUIRE(u.x().max_abs() == 0.0);
    REQUIRE(u.y().max_abs() == 0.0);
    REQUIRE(curl(u).max_abs() == 0.0);
}

TEST_CASE("round trip through the solenoidal part") {
    Grid2D g(128, 8.0);
    std::mt19937_64 rng(3);
    VectorField2 v(random_band_limited(g, rng), random_band_limited(g, rng));
    VectorField2 pv = leray_project(v);
    VectorField2 back = velocity_from_vorticity(curl(v));
    REQUIRE((back.x() - pv.x()).max_abs() < 1e-10 * (1.0 + pv.max_norm()));
    REQUIRE((back.y() - pv.y()).max_abs() < 1e-10 * (1.0 + pv.max_norm()));

    // curl o velocity_from_vorticity = identity on mean-free fields
    ScalarField omega = mean_free(random_band_limited(g, rng));
    ScalarField omega2 = curl(velocity_from_vorticity(omega));
    REQUIRE((omega2 - omega).max_abs() < 1e-10 * (1.0 + omega.max_abs()));
}

TEST_CASE("nonzero total vorticity is rejected") {
    Grid2D g(64, 4.0);
    ScalarField biased(g, 0.3);
    REQUIRE_THROWS_WITH(velocity_from_vorticity(biased),
                        Catch::Matchers::ContainsSubstring("nonzero total vorticity"));
}

TEST_CASE("kinetic energy identity") {
    Grid2D g(128, 8.0);
    std::mt19937_64 rng(5);
    ScalarField omega = mean_free(random_band_limited(g, rng));
    ScalarField psi = inverse_laplacian(omega);
    VectorField2 u = velocity_from_vorticity(omega);

    const double area = g.cell_area();
    double e_u = 0.0, e_po = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        e_u += (u.x().values()[k] * u.x().values()[k] +
                u.y().values()[k] * u.y().values()[k]) *
               area;
        e_po += psi.values()[k] * omega.values()[k] * area;
    }
    REQUIRE(e_u == Catch::Approx(-e_po).epsilon(1e-9));
}
