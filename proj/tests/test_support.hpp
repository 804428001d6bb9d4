#pragma once

// Helpers shared by the unit tests: random inputs and brute-force oracles
// that deliberately avoid the library's own FFT and kernels.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "hormander/lattice.hpp"

namespace hormander::testing {

inline GridFunction random_grid(const Lattice& lat, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  GridFunction g(lat);
  for (auto& v : g.samples) v = Complex(nd(rng), nd(rng));
  return g;
}

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// Unitary DFT by direct summation over every axis, exp(-2 pi i j m / n)
// with the same index ordering as the library.
inline std::vector<Complex> naive_dft(const Lattice& lat, const std::vector<Complex>& x) {
  const std::size_t ns = lat.spatial_size();
  std::vector<Complex> out(x.size());
  const double two_pi = 2.0 * std::numbers::pi;
  const double scale = 1.0 / std::sqrt(static_cast<double>(x.size()));
  for (std::size_t fs = 0; fs < ns; ++fs) {
    const auto fm = lat.spatial_multi_index(fs);
    for (int ft = 0; ft < lat.n_t; ++ft) {
      Complex acc = 0.0;
      for (std::size_t s = 0; s < ns; ++s) {
        const auto xm = lat.spatial_multi_index(s);
        double phase = 0.0;
        for (int a = 0; a < lat.k; ++a) {
          phase += static_cast<double>(fm[a]) * xm[a] / lat.n_x;
        }
        for (int t = 0; t < lat.n_t; ++t) {
          const double ph = phase + static_cast<double>(ft) * t / lat.n_t;
          acc += x[s * lat.n_t + t] * std::polar(1.0, -two_pi * ph);
        }
      }
      out[fs * lat.n_t + ft] = acc * scale;
    }
  }
  return out;
}

// r_gamma at a flat lattice index, computed from scratch.
inline double lattice_r(const Lattice& lat, std::size_t flat, double gamma) {
  const std::size_t s = flat / lat.n_t;
  const int t = static_cast<int>(flat % lat.n_t);
  const auto mi = lat.spatial_multi_index(s);
  double acc = 1.0;
  for (int v : mi) {
    const double xi = 2.0 * std::numbers::pi * Lattice::signed_index(v, lat.n_x) / lat.L_x;
    acc += xi * xi;
  }
  const double eta = 2.0 * std::numbers::pi * Lattice::signed_index(t, lat.n_t) / lat.L_t;
  acc += std::pow(std::abs(eta), 2.0 * gamma);
  return std::sqrt(acc);
}

}  // namespace hormander::testing
