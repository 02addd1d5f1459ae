#pragma once

#include <cmath>

namespace nsk::detail {

/// Cubic Hermite value on [0, h] at local coordinate t in [0, 1].
inline double hermite(double y0, double y1, double m0, double m1, double h, double t) {
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * m0 + (-2 * t3 + 3 * t2) * y1
           + (t3 - t2) * h * m1;
}

inline double hermite_slope(double y0, double y1, double m0, double m1, double h, double t) {
    const double t2 = t * t;
    return ((6 * t2 - 6 * t) * y0 + (-6 * t2 + 6 * t) * y1) / h + (3 * t2 - 4 * t + 1) * m0
           + (3 * t2 - 2 * t) * m1;
}

/// Integral of the Hermite cubic over [0, t*h].
inline double hermite_integral(double y0, double y1, double m0, double m1, double h, double t) {
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double t4 = t3 * t;
    return h * ((t - t3 + 0.5 * t4) * y0 + (t3 - 0.5 * t4) * y1
                + h * (0.5 * t2 - 2.0 * t3 / 3.0 + 0.25 * t4) * m0
                + h * (-t3 / 3.0 + 0.25 * t4) * m1);
}

/// Fritsch-Carlson slope limiting so the cubic stays monotone on the interval.
inline void limit_monotone(double secant, double& m0, double& m1) {
    if (secant == 0.0) {
        m0 = 0.0;
        m1 = 0.0;
        return;
    }
    const double a = m0 / secant;
    const double b = m1 / secant;
    if (a < 0.0) m0 = 0.0;
    if (b < 0.0) m1 = 0.0;
    const double r2 = a * a + b * b;
    if (r2 > 9.0) {
        const double tau = 3.0 / std::sqrt(r2);
        m0 = tau * a * secant;
        m1 = tau * b * secant;
    }
}

}  // namespace nsk::detail
