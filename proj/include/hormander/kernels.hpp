#pragma once

#include <span>
#include <vector>

#include "hormander/class_m.hpp"
#include "hormander/lattice.hpp"

// Data-parallel inner loops over the frequency lattice. Each kernel exists in
// two forms with identical signatures: `serial` is the straightforward
// reference loop, `omp` the OpenMP version the library calls. The OpenMP
// reductions sum fixed-size chunks and combine the partials pairwise in a
// fixed order, so their results do not depend on the thread count or the
// schedule. Serial and OpenMP results agree to rounding (about 1e-14 relative).
namespace hormander::kernels {

inline constexpr std::size_t kReductionChunk = 1024;

// Sums values[0..n) pairwise; the tree shape depends only on n.
double pairwise_sum(std::span<const double> values);

struct WeightSpec {
  double s = 0.0;
  double gamma = 0.5;
  const PhiFunction* phi = nullptr;  // nullptr means phi == 1
};

// Exponents of a frequency-domain monomial |xi^alpha|^2 |eta|^(2 beta).
struct Monomial {
  std::vector<int> alpha;  // one entry per spatial axis
  int beta = 0;
};

namespace serial {
// out[i] = r_gamma^s * phi(r_gamma) at every lattice point.
void fill_weights(const Lattice& lattice, const WeightSpec& spec, std::span<double> out);
// sum w_i^2 |c_i|^2
double weighted_energy(std::span<const Complex> coeffs, std::span<const double> weights);
// max_i num_i / den_i
double max_ratio(std::span<const double> num, std::span<const double> den);
// sum over the lattice of |xi^alpha|^2 |eta|^(2 beta) / (r^(2s) phi^2(r)).
double monomial_weight_sum(const Lattice& lattice, const WeightSpec& spec, const Monomial& mono);
}  // namespace serial

namespace omp {
void fill_weights(const Lattice& lattice, const WeightSpec& spec, std::span<double> out);
double weighted_energy(std::span<const Complex> coeffs, std::span<const double> weights);
double max_ratio(std::span<const double> num, std::span<const double> den);
double monomial_weight_sum(const Lattice& lattice, const WeightSpec& spec, const Monomial& mono);
}  // namespace omp

}  // namespace hormander::kernels
