#pragma once

// Thin RAII wrapper over long-double FFTW.  Extended precision keeps the
// absolute error of deck transforms far below the near-zero moduli that the
// phase quotient divides by.

#include <complex>
#include <cstddef>
#include <vector>

namespace qcorr::detail {

using cplx = std::complex<long double>;

enum class Direction { Forward, Backward };

/// Unnormalized DFT, sum_j x[j] exp(-+2 pi i j k / M).
std::vector<cplx> dft(const std::vector<cplx>& x, Direction dir = Direction::Forward);

/// Unnormalized forward 2-D DFT of a row-major M x M array.
std::vector<cplx> dft2(const std::vector<cplx>& x, std::size_t m);

}  // namespace qcorr::detail
