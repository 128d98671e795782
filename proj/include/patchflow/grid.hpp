#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace patchflow {

// Uniform periodic grid on [0,L)^2, n points per axis (n a power of two).
// Fourier modes are indexed m in {0,..,n-1} with the usual signed layout;
// the physical wavenumber of mode m is (2*pi/L) * signed(m).
class Grid2D {
public:
    Grid2D(std::size_t n, double length) : n_(n), length_(length) {
        if (n < 32 || (n & (n - 1)) != 0)
            throw std::invalid_argument("Grid2D: n must be a power of two >= 32");
        if (!(length > 0.0))
            throw std::invalid_argument("Grid2D: length must be positive");
    }

    std::size_t n() const { return n_; }
    std::size_t size() const { return n_ * n_; }
    double length() const { return length_; }
    double spacing() const { return length_ / double(n_); }
    double cell_area() const { return spacing() * spacing(); }

    double x(std::size_t i) const { return spacing() * double(i); }
    double y(std::size_t j) const { return spacing() * double(j); }

    // signed integer frequency of FFT slot i (slot n/2 holds the Nyquist mode)
    long signed_mode(std::size_t i) const {
        return i <= n_ / 2 ? long(i) : long(i) - long(n_);
    }
    bool is_nyquist(std::size_t i) const { return i == n_ / 2; }

    double wavenumber(std::size_t i) const {
        return 2.0 * M_PI / length_ * double(signed_mode(i));
    }
    double nyquist_wavenumber() const { return M_PI * double(n_) / length_; }

    // 2/3-rule retention bound on |signed mode| per axis
    long dealias_mode_limit() const { return long(n_) / 3; }

    bool operator==(const Grid2D& o) const { return n_ == o.n_ && length_ == o.length_; }
    bool operator!=(const Grid2D& o) const { return !(*this == o); }

private:
    std::size_t n_;
    double length_;
};

inline void require_same_grid(const Grid2D& a, const Grid2D& b) {
    if (a != b) throw std::invalid_argument("mismatched grids");
}

} // namespace patchflow
