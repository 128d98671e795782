#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "patchflow/field.hpp"

namespace patchflow {

using Point2 = std::array<double, 2>;

// Closed boundary polyline, positively oriented, resampled to uniform
// arclength. points[i] connects to points[(i+1) % size].
struct Contour {
    std::vector<Point2> points;

    double perimeter() const {
        double s = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            const Point2& a = points[i];
            const Point2& b = points[(i + 1) % points.size()];
            s += std::hypot(b[0] - a[0], b[1] - a[1]);
        }
        return s;
    }

    // shoelace; positive for counterclockwise orientation
    double signed_area() const {
        double s = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            const Point2& a = points[i];
            const Point2& b = points[(i + 1) % points.size()];
            s += a[0] * b[1] - b[0] * a[1];
        }
        return 0.5 * s;
    }

    double area() const { return std::abs(signed_area()); }

    // O(M^2) segment-pair check; adjacent segments share only endpoints
    bool is_simple() const {
        const std::size_t m = points.size();
        auto seg = [&](std::size_t i) {
            return std::pair<Point2, Point2>(points[i], points[(i + 1) % m]);
        };
        auto cross = [](const Point2& o, const Point2& a, const Point2& b) {
            return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
        };
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 2; j < m; ++j) {
                if (i == 0 && j == m - 1) continue; // closing segment adjacency
                auto [a, b] = seg(i);
                auto [c, d] = seg(j);
                const double d1 = cross(a, b, c), d2 = cross(a, b, d);
                const double d3 = cross(c, d, a), d4 = cross(c, d, b);
                if (((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0))) return false;
            }
        return true;
    }
};

namespace detail {

// raw marching-squares loop extraction; throws if the zero level set is not a
// single closed curve
inline std::vector<Point2> marching_squares_single_loop(const ScalarField& f) {
    const Grid2D& g = f.grid();
    const std::size_t n = g.n();
    const double h = g.spacing();
    auto inside = [&](std::size_t i, std::size_t j) { return f(i % n, j % n) < 0.0; };
    auto value = [&](std::size_t i, std::size_t j) { return f(i % n, j % n); };

    // edge key: (i, j, axis) for the edge from node (i,j) toward +axis
    auto key = [n](std::size_t i, std::size_t j, int axis) {
        return (std::uint64_t(i % n) << 32) | (std::uint64_t(j % n) << 2) |
               std::uint64_t(axis);
    };
    auto crossing = [&](std::size_t i, std::size_t j, int axis) -> Point2 {
        const double fa = value(i, j);
        const double fb = axis == 0 ? value(i + 1, j) : value(i, j + 1);
        const double t = fa / (fa - fb);
        if (axis == 0) return {g.x(i % n) + t * h, g.y(j % n)};
        return {g.x(i % n), g.y(j % n) + t * h};
    };

    // segments as pairs of edge keys
    std::vector<std::pair<std::uint64_t, std::uint64_t>> segments;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const bool b00 = inside(i, j), b10 = inside(i + 1, j);
            const bool b11 = inside(i + 1, j + 1), b01 = inside(i, j + 1);
            const int c = (b00 ? 1 : 0) | (b10 ? 2 : 0) | (b11 ? 4 : 0) | (b01 ? 8 : 0);
            if (c == 0 || c == 15) continue;
            const std::uint64_t bottom = key(i, j, 0), right = key(i + 1, j, 1);
            const std::uint64_t top = key(i, j + 1, 0), left = key(i, j, 1);
            auto add = [&](std::uint64_t a, std::uint64_t b) {
                segments.emplace_back(a, b);
            };
            switch (c) {
            case 1: case 14: add(left, bottom); break;
            case 2: case 13: add(bottom, right); break;
            case 3: case 12: add(left, right); break;
            case 4: case 11: add(right, top); break;
            case 6: case 9:  add(bottom, top); break;
            case 7: case 8:  add(left, top); break;
            case 5: case 10: {
                // saddle: split by the cell-center sign
                const double mid = 0.25 * (value(i, j) + value(i + 1, j) +
                                           value(i + 1, j + 1) + value(i, j + 1));
                const bool mid_inside = mid < 0.0;
                if ((c == 5) == mid_inside) {
                    add(left, top);
                    add(bottom, right);
                } else {
                    add(left, bottom);
                    add(right, top);
                }
                break;
            }
            default: break;
            }
        }
    if (segments.empty()) throw std::domain_error("extract_contour: no zero level set");

    // stitch: adjacency via edge -> segment indices
    std::vector<bool> used(segments.size(), false);
    std::multimap<std::uint64_t, std::size_t> edge_to_seg;
    for (std::size_t s = 0; s < segments.size(); ++s) {
        edge_to_seg.emplace(segments[s].first, s);
        edge_to_seg.emplace(segments[s].second, s);
    }

    std::vector<Point2> loop;
    std::size_t cur = 0;
    used[0] = true;
    std::uint64_t enter = segments[0].first, exit = segments[0].second;
    const std::uint64_t start_edge = enter;
    auto edge_point = [&](std::uint64_t k) -> Point2 {
        const std::size_t i = std::size_t(k >> 32);
        const std::size_t j = std::size_t((k & 0xffffffffu) >> 2);
        const int axis = int(k & 3u);
        return crossing(i, j, axis);
    };
    loop.push_back(edge_point(enter));
    std::size_t guard = 0;
    while (exit != start_edge && guard++ <= segments.size()) {
        loop.push_back(edge_point(exit));
        auto [lo, hi] = edge_to_seg.equal_range(exit);
        long next = -1;
        for (auto it = lo; it != hi; ++it)
            if (!used[it->second]) next = long(it->second);
        if (next < 0) throw std::domain_error("extract_contour: open contour");
        used[std::size_t(next)] = true;
        cur = std::size_t(next);
        enter = exit;
        exit = segments[cur].first == enter ? segments[cur].second : segments[cur].first;
    }
    for (bool u : used)
        if (!u) throw std::domain_error("extract_contour: patch split");

    // drop duplicate consecutive points (crossings through grid nodes)
    std::vector<Point2> clean;
    for (const Point2& p : loop) {
        if (!clean.empty() && std::hypot(p[0] - clean.back()[0], p[1] - clean.back()[1]) < 1e-12)
            continue;
        clean.push_back(p);
    }
    if (clean.size() >= 2 &&
        std::hypot(clean.front()[0] - clean.back()[0], clean.front()[1] - clean.back()[1]) <
            1e-12)
        clean.pop_back();
    if (clean.size() < 3) throw std::domain_error("extract_contour: degenerate contour");
    return clean;
}

} // namespace detail

inline Contour resample_uniform(const std::vector<Point2>& poly, std::size_t m) {
    const std::size_t raw = poly.size();
    std::vector<double> cum(raw + 1, 0.0);
    for (std::size_t i = 0; i < raw; ++i) {
        const Point2& a = poly[i];
        const Point2& b = poly[(i + 1) % raw];
        cum[i + 1] = cum[i] + std::hypot(b[0] - a[0], b[1] - a[1]);
    }
    const double total = cum[raw];
    Contour out;
    out.points.resize(m);
    std::size_t seg = 0;
    for (std::size_t k = 0; k < m; ++k) {
        const double target = total * double(k) / double(m);
        while (seg + 1 < raw && cum[seg + 1] < target) ++seg;
        const double t = (target - cum[seg]) / std::max(cum[seg + 1] - cum[seg], 1e-300);
        const Point2& a = poly[seg];
        const Point2& b = poly[(seg + 1) % raw];
        out.points[k] = {a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
    }
    return out;
}

// marching-squares contour of {f = 0}, resampled to uniform arclength and
// positively oriented; throws "patch split" when the level set has more than
// one component
inline Contour extract_contour(const ScalarField& f, std::size_t m = 0) {
    std::vector<Point2> raw = detail::marching_squares_single_loop(f);
    if (m == 0) {
        m = 256;
        while (m < raw.size()) m *= 2;
    }
    Contour c = resample_uniform(raw, m);
    if (c.signed_area() < 0.0) std::reverse(c.points.begin(), c.points.end());
    return c;
}

// C^{0,eps} seminorm of the tangent direction as a function of arclength.
// Dyadic lags run from one sample up to perimeter/32 (larger lags only feel
// the total curvature: even a perfect circle scores h^{1-eps}/R).
inline double boundary_holder(const Contour& c, double eps) {
    const std::size_t m = c.points.size();
    if (m < 8) throw std::invalid_argument("boundary_holder: too few samples");
    const double ds = c.perimeter() / double(m);

    std::vector<double> theta(m);
    double prev = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const Point2& a = c.points[i];
        const Point2& b = c.points[(i + 1) % m];
        double t = std::atan2(b[1] - a[1], b[0] - a[0]);
        if (i > 0) {
            while (t - prev > M_PI) t -= 2.0 * M_PI;
            while (t - prev < -M_PI) t += 2.0 * M_PI;
        }
        theta[i] = t;
        prev = t;
    }

    double worst = 0.0;
    for (std::size_t lag = 1; lag <= m / 32; lag *= 2) {
        const double h = double(lag) * ds;
        const double hpow = std::pow(h, eps);
        for (std::size_t i = 0; i < m; ++i) {
            const std::size_t j = i + lag;
            const double tj = j < m ? theta[j] : theta[j - m] + 2.0 * M_PI;
            worst = std::max(worst, std::abs(tj - theta[i]) / hpow);
        }
    }
    return worst;
}

} // namespace patchflow
