#pragma once

#include <cstddef>
#include <span>

namespace nsk {

/// Uniform nodes x_j = j dx, j = 0..N, on the truncated half line [0, L].
struct Grid {
    double L = 0.0;
    std::size_t N = 0;

    Grid() = default;
    Grid(double length, std::size_t cells);

    [[nodiscard]] double dx() const { return L / static_cast<double>(N); }
    [[nodiscard]] double x(std::size_t j) const { return static_cast<double>(j) * dx(); }
    [[nodiscard]] std::size_t nodes() const { return N + 1; }
};

/// Composite trapezoid over all grid nodes.
double trapezoid(std::span<const double> values, double dx);

}  // namespace nsk
