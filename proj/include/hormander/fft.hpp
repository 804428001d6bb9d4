#pragma once

#include <span>

#include "hormander/lattice.hpp"

namespace hormander {

enum class FftDirection { kForward, kInverse };

// Unitary transforms (scaled by 1/sqrt(points transformed)) backed by FFTW
// with FFTW_ESTIMATE plans, so the arithmetic is identical from run to run.
// Forward uses exp(-i xi x). Data is laid out as described on Lattice.

// All k+1 axes.
void fft_full(std::span<Complex> data, const Lattice& lattice, FftDirection dir);
// The k spatial axes, separately for every time slice.
void fft_space(std::span<Complex> data, const Lattice& lattice, FftDirection dir);
// The time axis, separately for every spatial point.
void fft_time(std::span<Complex> data, const Lattice& lattice, FftDirection dir);
// One contiguous vector of length n.
void fft_1d(std::span<Complex> data, FftDirection dir);

}  // namespace hormander
