#pragma once

#include <cmath>

namespace patchflow {

// C-infinity bump building blocks used for the dyadic cutoffs, level sets and
// mollifiers: b(x) = exp(-1/x) for x>0, and the step s with s=0 on (-inf,0],
// s=1 on [1,inf). Branches return exact 0/1 outside the transition.
inline double cinf_bump(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

inline double smoothstep(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = cinf_bump(t);
    const double b = cinf_bump(1.0 - t);
    return a / (a + b);
}

// compactly supported radial bump, =exp(-1/(1-r^2)) scaled to 1 at r=0
inline double radial_bump(double r) {
    if (std::abs(r) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - r * r));
}

} // namespace patchflow
