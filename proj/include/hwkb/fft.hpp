#pragma once

#include <complex>
#include <span>

#include "hwkb/grid_spectral.hpp"

namespace hwkb::detail {

// Unnormalized DFT over the grid shape. Plans are cached process-wide;
// execution is safe from concurrent threads.
void fft_forward(const Grid& grid, std::span<const Complex> in, std::span<Complex> out);
void fft_backward(const Grid& grid, std::span<const Complex> in, std::span<Complex> out);

}  // namespace hwkb::detail
