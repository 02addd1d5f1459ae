#include "nsk/banded.hpp"

#include "nsk/error.hpp"

#include <algorithm>

extern "C" void dgbsv_(const int* n, const int* kl, const int* ku, const int* nrhs, double* ab,
                       const int* ldab, int* ipiv, double* b, const int* ldb, int* info);

namespace nsk {

BandedMatrix::BandedMatrix(std::size_t n, int lower, int upper)
    : n_(n), kl_(lower), ku_(upper), ldab_(2 * lower + upper + 1),
      ab_(static_cast<std::size_t>(ldab_) * n, 0.0), pivots_(n, 0) {}

bool BandedMatrix::in_band(std::size_t row, std::size_t col) const {
    const auto r = static_cast<long>(row);
    const auto c = static_cast<long>(col);
    return r - c <= kl_ && c - r <= ku_ && row < n_ && col < n_;
}

void BandedMatrix::zero() { std::fill(ab_.begin(), ab_.end(), 0.0); }

double& BandedMatrix::operator()(std::size_t row, std::size_t col) {
    if (!in_band(row, col)) throw Error(ErrorKind::Domain, "banded matrix access outside the band");
    const auto offset = static_cast<std::size_t>(kl_ + ku_ + static_cast<long>(row) - static_cast<long>(col));
    return ab_[offset + col * static_cast<std::size_t>(ldab_)];
}

double BandedMatrix::operator()(std::size_t row, std::size_t col) const {
    if (!in_band(row, col)) return 0.0;
    const auto offset = static_cast<std::size_t>(kl_ + ku_ + static_cast<long>(row) - static_cast<long>(col));
    return ab_[offset + col * static_cast<std::size_t>(ldab_)];
}

bool BandedMatrix::solve(std::span<double> rhs) {
    const int n = static_cast<int>(n_);
    const int nrhs = 1;
    int info = 0;
    dgbsv_(&n, &kl_, &ku_, &nrhs, ab_.data(), &ldab_, pivots_.data(), rhs.data(), &n, &info);
    return info == 0;
}

}  // namespace nsk
