#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace hormander {

using Complex = std::complex<double>;

// Periodic space-time lattice: k spatial axes with n_x points each over the
// period L_x, and one time axis with n_t points over L_t. The time window is
// centred, t_j = (j - n_t/2) * dt, so slice n_t/2 is t = 0 and the window
// covers both signs of t. Spatial points are x_j = j * dx.
//
// Flat layout is row-major over (x_1, ..., x_k, t): time is the fastest axis.
// Frequencies use the standard DFT ordering, index j <-> m = j for j < n/2 and
// m = j - n otherwise, with xi = 2 pi m / L_x and eta = 2 pi m / L_t.
struct Lattice {
  int k = 1;
  int n_x = 8;
  int n_t = 8;
  double L_x = 1.0;
  double L_t = 1.0;

  // Throws ArgumentError unless k >= 1, n_x and n_t are powers of two and both
  // periods are positive.
  void validate() const;

  std::size_t spatial_size() const;
  std::size_t size() const { return spatial_size() * static_cast<std::size_t>(n_t); }

  double dx() const { return L_x / n_x; }
  double dt() const { return L_t / n_t; }
  int time_origin() const { return n_t / 2; }
  double time_at(int j) const { return (j - time_origin()) * dt(); }

  // Physical volume of one lattice cell, dx^k dt. Sample-space quadrature
  // weight for all norms of grid functions.
  double cell_volume() const;
  // Volume of one cell of the frequency lattice, (2 pi / L_x)^k (2 pi / L_t).
  double frequency_cell_volume() const;

  static int signed_index(int j, int n) { return j < n / 2 ? j : j - n; }
  double spatial_frequency(int j) const;
  double time_frequency(int j) const;

  // Per-axis spatial multi-index of a flat spatial index.
  std::vector<int> spatial_multi_index(std::size_t flat_spatial) const;
  // |xi|^2 for every flat spatial index.
  std::vector<double> spatial_frequency_sq() const;
  // Full frequency vector of a flat spatial index.
  std::vector<double> spatial_frequency_vector(std::size_t flat_spatial) const;

  friend bool operator==(const Lattice&, const Lattice&) = default;
};

// Complex samples of a function on the lattice.
struct GridFunction {
  Lattice lattice;
  std::vector<Complex> samples;

  GridFunction() = default;
  explicit GridFunction(const Lattice& lat);  // zero-filled
  GridFunction(const Lattice& lat, std::vector<Complex> values);

  Complex& at(std::size_t spatial, int t) { return samples[spatial * lattice.n_t + t]; }
  const Complex& at(std::size_t spatial, int t) const {
    return samples[spatial * lattice.n_t + t];
  }
};

// DFT image of a GridFunction, indexed like the samples but over (xi, eta).
struct SpectralField {
  Lattice lattice;
  std::vector<Complex> coeffs;

  SpectralField() = default;
  explicit SpectralField(const Lattice& lat);
  SpectralField(const Lattice& lat, std::vector<Complex> values);
};

}  // namespace hormander
