#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "patchflow/fft.hpp"
#include "patchflow/grid.hpp"

namespace patchflow {

// Real scalar samples on a Grid2D, row-major values[i*n + j] for the point
// (x_i, y_j). The Fourier coefficients (half-complex r2c layout, rows i of
// size n/2+1) are computed lazily and cached; mutating the samples
// invalidates the cache.
class ScalarField {
public:
    explicit ScalarField(const Grid2D& grid, double fill = 0.0)
        : grid_(grid), values_(grid.size(), fill) {}

    static ScalarField from_spectrum(const Grid2D& grid,
                                     std::vector<std::complex<double>> spec) {
        ScalarField f(grid);
        FftPlans::get(grid.n()).inverse(spec.data(), f.values_.data());
        f.spectrum_ = std::move(spec);
        f.spectrum_valid_ = true;
        return f;
    }

    template <class Fn> // fn(x, y) -> double
    static ScalarField sampled(const Grid2D& grid, Fn&& fn) {
        ScalarField f(grid);
        const std::size_t n = grid.n();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                f.values_[i * n + j] = fn(grid.x(i), grid.y(j));
        return f;
    }

    const Grid2D& grid() const { return grid_; }
    std::size_t n() const { return grid_.n(); }
    std::size_t spectrum_size() const { return grid_.n() * (grid_.n() / 2 + 1); }

    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values_mut() {
        invalidate();
        return values_;
    }

    double operator()(std::size_t i, std::size_t j) const {
        return values_[i * grid_.n() + j];
    }
    double& at(std::size_t i, std::size_t j) {
        invalidate();
        return values_[i * grid_.n() + j];
    }

    const std::vector<std::complex<double>>& spectrum() const {
        std::lock_guard<std::mutex> lock(cache_mu_);
        if (!spectrum_valid_) {
            spectrum_.resize(spectrum_size());
            FftPlans::get(grid_.n()).forward(values_.data(), spectrum_.data());
            spectrum_valid_ = true;
        }
        return spectrum_;
    }

    // compensated summation: mass/mean bookkeeping must not drown in rounding
    static double kahan_sum(const std::vector<double>& v) {
        double s = 0.0, c = 0.0;
        for (double x : v) {
            const double y = x - c;
            const double t = s + y;
            c = (t - s) - y;
            s = t;
        }
        return s;
    }

    double sum() const { return kahan_sum(values_); }
    double mean() const { return sum() / double(values_.size()); }

    double max_abs() const {
        double m = 0.0;
        for (double v : values_) m = std::max(m, std::abs(v));
        return m;
    }

    // grid L^p norm (Riemann sum * cell area; exact trapezoid on the torus)
    double lp_norm(double p) const {
        if (p == std::numeric_limits<double>::infinity()) return max_abs();
        double s = 0.0;
        if (p == 2.0) {
            for (double v : values_) s += v * v;
        } else if (p == 1.0) {
            for (double v : values_) s += std::abs(v);
        } else {
            for (double v : values_) s += std::pow(std::abs(v), p);
        }
        return std::pow(grid_.cell_area() * s, 1.0 / p);
    }

    double l2_norm() const { return lp_norm(2.0); }

    ScalarField& operator+=(const ScalarField& o) {
        require_same_grid(grid_, o.grid_);
        invalidate();
        for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
        return *this;
    }
    ScalarField& operator-=(const ScalarField& o) {
        require_same_grid(grid_, o.grid_);
        invalidate();
        for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
        return *this;
    }
    ScalarField& operator*=(double c) {
        invalidate();
        for (double& v : values_) v *= c;
        return *this;
    }
    ScalarField& operator+=(double c) {
        invalidate();
        for (double& v : values_) v += c;
        return *this;
    }

    friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
    friend ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
    friend ScalarField operator*(double c, ScalarField a) { return a *= c; }

    // pointwise product without dealiasing (see spectral.hpp for the dealiased form)
    friend ScalarField operator*(const ScalarField& a, const ScalarField& b) {
        require_same_grid(a.grid_, b.grid_);
        ScalarField r(a.grid_);
        for (std::size_t i = 0; i < r.values_.size(); ++i)
            r.values_[i] = a.values_[i] * b.values_[i];
        return r;
    }

    ScalarField(const ScalarField& o)
        : grid_(o.grid_), values_(o.values_) {
        std::lock_guard<std::mutex> lock(o.cache_mu_);
        spectrum_ = o.spectrum_;
        spectrum_valid_ = o.spectrum_valid_;
    }
    ScalarField& operator=(const ScalarField& o) {
        if (this != &o) {
            grid_ = o.grid_;
            values_ = o.values_;
            std::scoped_lock lock(cache_mu_, o.cache_mu_);
            spectrum_ = o.spectrum_;
            spectrum_valid_ = o.spectrum_valid_;
        }
        return *this;
    }
    ScalarField(ScalarField&& o) noexcept
        : grid_(o.grid_),
          values_(std::move(o.values_)),
          spectrum_(std::move(o.spectrum_)),
          spectrum_valid_(o.spectrum_valid_) {}
    ScalarField& operator=(ScalarField&& o) noexcept {
        grid_ = o.grid_;
        values_ = std::move(o.values_);
        spectrum_ = std::move(o.spectrum_);
        spectrum_valid_ = o.spectrum_valid_;
        return *this;
    }

private:
    void invalidate() {
        std::lock_guard<std::mutex> lock(cache_mu_);
        spectrum_valid_ = false;
    }

    Grid2D grid_;
    std::vector<double> values_;
    mutable std::mutex cache_mu_;
    mutable std::vector<std::complex<double>> spectrum_;
    mutable bool spectrum_valid_ = false;
};

// Two scalar components (u1, u2) sharing one grid.
class VectorField2 {
public:
    explicit VectorField2(const Grid2D& grid)
        : c1_(grid), c2_(grid) {}
    VectorField2(ScalarField u1, ScalarField u2)
        : c1_(std::move(u1)), c2_(std::move(u2)) {
        require_same_grid(c1_.grid(), c2_.grid());
    }

    const Grid2D& grid() const { return c1_.grid(); }
    const ScalarField& x() const { return c1_; }
    const ScalarField& y() const { return c2_; }
    ScalarField& x_mut() { return c1_; }
    ScalarField& y_mut() { return c2_; }
    const ScalarField& component(int k) const { return k == 0 ? c1_ : c2_; }

    double max_norm() const {
        double m = 0.0;
        const auto& a = c1_.values();
        const auto& b = c2_.values();
        for (std::size_t i = 0; i < a.size(); ++i)
            m = std::max(m, std::hypot(a[i], b[i]));
        return m;
    }

    double l2_norm() const {
        double s = 0.0;
        const auto& a = c1_.values();
        const auto& b = c2_.values();
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * a[i] + b[i] * b[i];
        return std::sqrt(grid().cell_area() * s);
    }

    VectorField2& operator+=(const VectorField2& o) {
        c1_ += o.c1_;
        c2_ += o.c2_;
        return *this;
    }
    VectorField2& operator-=(const VectorField2& o) {
        c1_ -= o.c1_;
        c2_ -= o.c2_;
        return *this;
    }
    VectorField2& operator*=(double c) {
        c1_ *= c;
        c2_ *= c;
        return *this;
    }
    friend VectorField2 operator+(VectorField2 a, const VectorField2& b) { return a += b; }
    friend VectorField2 operator-(VectorField2 a, const VectorField2& b) { return a -= b; }
    friend VectorField2 operator*(double c, VectorField2 a) { return a *= c; }

private:
    ScalarField c1_, c2_;
};

} // namespace patchflow
