#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nsk {

/// Square band matrix in LAPACK general-band layout, with room for the
/// fill-in of partial pivoting.
class BandedMatrix {
public:
    BandedMatrix(std::size_t n, int lower, int upper);

    [[nodiscard]] std::size_t size() const { return n_; }
    [[nodiscard]] int lower() const { return kl_; }
    [[nodiscard]] int upper() const { return ku_; }
    [[nodiscard]] bool in_band(std::size_t row, std::size_t col) const;

    void zero();
    double& operator()(std::size_t row, std::size_t col);
    [[nodiscard]] double operator()(std::size_t row, std::size_t col) const;

    /// Solves A x = rhs in place (rhs becomes x); the matrix is overwritten
    /// by its LU factors. Returns false for a singular matrix.
    bool solve(std::span<double> rhs);

private:
    std::size_t n_;
    int kl_;
    int ku_;
    int ldab_;
    std::vector<double> ab_;
    std::vector<int> pivots_;
};

}  // namespace nsk
