#include "hormander/spectra.hpp"

#include <cmath>
#include <sstream>

#include "hormander/errors.hpp"
#include "hormander/fft.hpp"

namespace hormander {

AnisotropicIndex::AnisotropicIndex(double s_, double gamma_, PhiFunction phi_)
    : s(s_), gamma(gamma_), phi(std::move(phi_)) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ArgumentError("gamma must be positive");
  if (!std::isfinite(s)) throw ArgumentError("s must be finite");
}

int AnisotropicIndex::parabolic_b() const {
  const double b = 1.0 / (2.0 * gamma);
  const double rounded = std::round(b);
  if (rounded < 1.0 || std::abs(b - rounded) > 1e-12 * rounded) {
    std::ostringstream os;
    os.precision(17);
    os << "1/(2 gamma) = " << b << " is not a positive integer";
    throw ArgumentError(os.str());
  }
  return static_cast<int>(rounded);
}

double r_gamma(std::span<const double> xi, double eta, double gamma) {
  double acc = 1.0;
  for (double v : xi) acc += v * v;
  acc += std::pow(std::abs(eta), 2.0 * gamma);
  return std::sqrt(acc);
}

double hormander_weight(const AnisotropicIndex& idx, std::span<const double> xi, double eta) {
  const double r = r_gamma(xi, eta, idx.gamma);
  return std::exp(idx.s * std::log(r) + idx.phi.log_value(r));
}

std::vector<double> weight_array(const Lattice& lattice, const AnisotropicIndex& idx) {
  std::vector<double> w(lattice.size());
  kernels::omp::fill_weights(lattice, idx.weight_spec(), w);
  return w;
}

SpectralField dft(const GridFunction& g) {
  SpectralField f(g.lattice, g.samples);
  fft_full(f.coeffs, f.lattice, FftDirection::kForward);
  return f;
}

GridFunction idft(const SpectralField& f) {
  GridFunction g(f.lattice, f.coeffs);
  fft_full(g.samples, g.lattice, FftDirection::kInverse);
  return g;
}

double hnorm(const SpectralField& f, const AnisotropicIndex& idx) {
  const auto w = weight_array(f.lattice, idx);
  return std::sqrt(kernels::omp::weighted_energy(f.coeffs, w) * f.lattice.cell_volume());
}

double hnorm(const GridFunction& g, const AnisotropicIndex& idx) { return hnorm(dft(g), idx); }

double l2_norm(const GridFunction& g) {
  std::vector<double> ones(g.samples.size(), 1.0);
  return std::sqrt(kernels::omp::weighted_energy(g.samples, ones) * g.lattice.cell_volume());
}

EmbeddingConstants embedding_constants(const AnisotropicIndex& idx0, const AnisotropicIndex& idx,
                                       const AnisotropicIndex& idx1, const Lattice& lattice) {
  if (!(idx0.s <= idx.s && idx.s <= idx1.s)) {
    throw ArgumentError("embedding_constants needs s0 <= s <= s1");
  }
  if (idx0.gamma != idx.gamma || idx.gamma != idx1.gamma) {
    throw ArgumentError("embedding_constants needs a common gamma");
  }
  lattice.validate();
  const auto w0 = weight_array(lattice, idx0);
  const auto w = weight_array(lattice, idx);
  const auto w1 = weight_array(lattice, idx1);
  return {kernels::omp::max_ratio(w, w1), kernels::omp::max_ratio(w0, w)};
}

}  // namespace hormander
