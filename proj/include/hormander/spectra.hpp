#pragma once

#include <span>
#include <utility>
#include <vector>

#include "hormander/class_m.hpp"
#include "hormander/kernels.hpp"
#include "hormander/lattice.hpp"

namespace hormander {

// Regularity index (s, gamma, phi) of the anisotropic Hormander space
// H^{s, s gamma; phi}. Parabolic use has gamma = 1/(2b) for a positive integer b.
struct AnisotropicIndex {
  double s = 0.0;
  double gamma = 0.5;
  PhiFunction phi;

  AnisotropicIndex() = default;
  AnisotropicIndex(double s_, double gamma_, PhiFunction phi_ = PhiFunction::constant_one());

  // b = 1/(2 gamma); throws ArgumentError when that is not a positive integer.
  int parabolic_b() const;

  kernels::WeightSpec weight_spec() const {
    return {s, gamma, phi.is_constant_one() ? nullptr : &phi};
  }
};

// (1 + |xi|^2 + |eta|^(2 gamma))^(1/2)
double r_gamma(std::span<const double> xi, double eta, double gamma);

// r_gamma^s * phi(r_gamma)
double hormander_weight(const AnisotropicIndex& idx, std::span<const double> xi, double eta);

// hormander_weight at every lattice point, in lattice layout.
std::vector<double> weight_array(const Lattice& lattice, const AnisotropicIndex& idx);

SpectralField dft(const GridFunction& g);
GridFunction idft(const SpectralField& f);

// Discrete Hormander norm: sqrt(sum weight^2 |dft(g)|^2 * cell_volume) with
// the physical cell volume dx^k dt, a quadrature of the continuum integral.
double hnorm(const GridFunction& g, const AnisotropicIndex& idx);
double hnorm(const SpectralField& f, const AnisotropicIndex& idx);

// Plain L2 quadrature norm of the samples: sqrt(sum |g|^2 * cell_volume).
double l2_norm(const GridFunction& g);

struct EmbeddingConstants {
  double c_low = 0.0;   // max weight(idx) / weight(idx1)
  double c_high = 0.0;  // max weight(idx0) / weight(idx)
};

// Lattice maxima certifying ||.||_idx <= c_low ||.||_idx1 and
// ||.||_idx0 <= c_high ||.||_idx. Requires idx0.s <= idx.s <= idx1.s and a
// common gamma; throws ArgumentError otherwise.
EmbeddingConstants embedding_constants(const AnisotropicIndex& idx0, const AnisotropicIndex& idx,
                                       const AnisotropicIndex& idx1, const Lattice& lattice);

}  // namespace hormander
