#include "nsk/grid.hpp"

#include "nsk/error.hpp"

#include <string>

namespace nsk {

Grid::Grid(double length, std::size_t cells) : L(length), N(cells) {
    if (!(length > 0.0)) throw Error(ErrorKind::Domain, "grid length must be positive");
    if (cells < 64) {
        throw Error(ErrorKind::Domain, "grid needs N >= 64 cells, got " + std::to_string(cells));
    }
}

double trapezoid(std::span<const double> values, double dx) {
    if (values.size() < 2) return 0.0;
    double sum = 0.5 * (values.front() + values.back());
    for (std::size_t j = 1; j + 1 < values.size(); ++j) sum += values[j];
    return sum * dx;
}

}  // namespace nsk
