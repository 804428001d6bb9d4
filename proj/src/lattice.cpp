#include "hormander/lattice.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hormander/errors.hpp"

namespace hormander {

namespace {

bool is_power_of_two(int n) { return n > 0 && std::has_single_bit(static_cast<unsigned>(n)); }

}  // namespace

void Lattice::validate() const {
  std::ostringstream os;
  if (k < 1) {
    os << "lattice needs k >= 1, got " << k;
  } else if (!is_power_of_two(n_x) || n_x < 2) {
    os << "n_x must be a power of two >= 2, got " << n_x;
  } else if (!is_power_of_two(n_t) || n_t < 2) {
    os << "n_t must be a power of two >= 2, got " << n_t;
  } else if (!(L_x > 0.0) || !(L_t > 0.0) || !std::isfinite(L_x) || !std::isfinite(L_t)) {
    os << "lattice periods must be positive and finite";
  } else {
    return;
  }
  throw ArgumentError(os.str());
}

std::size_t Lattice::spatial_size() const {
  std::size_t n = 1;
  for (int i = 0; i < k; ++i) n *= static_cast<std::size_t>(n_x);
  return n;
}

double Lattice::cell_volume() const { return std::pow(dx(), k) * dt(); }

double Lattice::frequency_cell_volume() const {
  const double two_pi = 2.0 * std::numbers::pi;
  return std::pow(two_pi / L_x, k) * (two_pi / L_t);
}

double Lattice::spatial_frequency(int j) const {
  return 2.0 * std::numbers::pi * signed_index(j, n_x) / L_x;
}

double Lattice::time_frequency(int j) const {
  return 2.0 * std::numbers::pi * signed_index(j, n_t) / L_t;
}

std::vector<int> Lattice::spatial_multi_index(std::size_t flat_spatial) const {
  std::vector<int> idx(k);
  for (int axis = k - 1; axis >= 0; --axis) {
    idx[axis] = static_cast<int>(flat_spatial % n_x);
    flat_spatial /= n_x;
  }
  return idx;
}

std::vector<double> Lattice::spatial_frequency_vector(std::size_t flat_spatial) const {
  std::vector<double> xi(k);
  const auto idx = spatial_multi_index(flat_spatial);
  for (int axis = 0; axis < k; ++axis) xi[axis] = spatial_frequency(idx[axis]);
  return xi;
}

std::vector<double> Lattice::spatial_frequency_sq() const {
  const std::size_t ns = spatial_size();
  std::vector<double> out(ns);
  std::vector<double> axis_sq(n_x);
  for (int j = 0; j < n_x; ++j) axis_sq[j] = spatial_frequency(j) * spatial_frequency(j);
  for (std::size_t s = 0; s < ns; ++s) {
    std::size_t rest = s;
    double acc = 0.0;
    for (int axis = 0; axis < k; ++axis) {
      acc += axis_sq[rest % n_x];
      rest /= n_x;
    }
    out[s] = acc;
  }
  return out;
}

GridFunction::GridFunction(const Lattice& lat) : lattice(lat) {
  lattice.validate();
  samples.assign(lattice.size(), Complex{});
}

GridFunction::GridFunction(const Lattice& lat, std::vector<Complex> values)
    : lattice(lat), samples(std::move(values)) {
  lattice.validate();
  if (samples.size() != lattice.size()) {
    std::ostringstream os;
    os << "grid function has " << samples.size() << " samples, lattice expects "
       << lattice.size();
    throw ShapeError(os.str());
  }
}

SpectralField::SpectralField(const Lattice& lat) : lattice(lat) {
  lattice.validate();
  coeffs.assign(lattice.size(), Complex{});
}

SpectralField::SpectralField(const Lattice& lat, std::vector<Complex> values)
    : lattice(lat), coeffs(std::move(values)) {
  lattice.validate();
  if (coeffs.size() != lattice.size()) {
    std::ostringstream os;
    os << "spectral field has " << coeffs.size() << " coefficients, lattice expects "
       << lattice.size();
    throw ShapeError(os.str());
  }
}

}  // namespace hormander
