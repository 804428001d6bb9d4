#include "hormander/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "hormander/errors.hpp"

namespace hormander::kernels {

namespace {

double log_weight(double r_sq, const WeightSpec& spec) {
  const double log_r = 0.5 * std::log(r_sq);
  double lw = spec.s * log_r;
  if (spec.phi != nullptr) lw += spec.phi->log_value(std::exp(log_r));
  return lw;
}

double r_squared(double xi_sq, double eta, double gamma) {
  return 1.0 + xi_sq + std::pow(std::abs(eta), 2.0 * gamma);
}

// |xi^alpha|^2 for one flat spatial index.
double spatial_monomial_sq(const Lattice& lattice, std::size_t spatial, const std::vector<int>& alpha) {
  double acc = 1.0;
  std::size_t rest = spatial;
  for (int axis = lattice.k - 1; axis >= 0; --axis) {
    const int j = static_cast<int>(rest % lattice.n_x);
    rest /= lattice.n_x;
    const int a = alpha[axis];
    if (a != 0) acc *= std::pow(lattice.spatial_frequency(j), 2 * a);
  }
  return acc;
}

void check_monomial(const Lattice& lattice, const Monomial& mono) {
  if (static_cast<int>(mono.alpha.size()) != lattice.k)
    throw ArgumentError("monomial alpha length must equal the spatial dimension");
  if (mono.beta < 0 || std::any_of(mono.alpha.begin(), mono.alpha.end(), [](int a) { return a < 0; }))
    throw ArgumentError("monomial exponents must be nonnegative");
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n == 0) return 0.0;
  if (n <= 8) {
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

namespace serial {

void fill_weights(const Lattice& lattice, const WeightSpec& spec, std::span<double> out) {
  if (out.size() != lattice.size()) throw ShapeError("weight buffer does not match the lattice");
  const auto xi_sq = lattice.spatial_frequency_sq();
  const int nt = lattice.n_t;
  for (std::size_t s = 0; s < xi_sq.size(); ++s) {
    for (int j = 0; j < nt; ++j) {
      const double r_sq = r_squared(xi_sq[s], lattice.time_frequency(j), spec.gamma);
      out[s * nt + j] = std::exp(log_weight(r_sq, spec));
    }
  }
}

double weighted_energy(std::span<const Complex> coeffs, std::span<const double> weights) {
  if (coeffs.size() != weights.size()) throw ShapeError("weighted_energy: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    acc += weights[i] * weights[i] * std::norm(coeffs[i]);
  }
  return acc;
}

double max_ratio(std::span<const double> num, std::span<const double> den) {
  if (num.size() != den.size()) throw ShapeError("max_ratio: size mismatch");
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < num.size(); ++i) best = std::max(best, num[i] / den[i]);
  return best;
}

double monomial_weight_sum(const Lattice& lattice, const WeightSpec& spec, const Monomial& mono) {
  check_monomial(lattice, mono);
  const auto xi_sq = lattice.spatial_frequency_sq();
  double acc = 0.0;
  for (std::size_t s = 0; s < xi_sq.size(); ++s) {
    const double xa = spatial_monomial_sq(lattice, s, mono.alpha);
    if (xa == 0.0) continue;
    for (int j = 0; j < lattice.n_t; ++j) {
      const double eta = lattice.time_frequency(j);
      const double eb = mono.beta == 0 ? 1.0 : std::pow(eta * eta, mono.beta);
      const double r_sq = r_squared(xi_sq[s], eta, spec.gamma);
      acc += xa * eb * std::exp(-2.0 * log_weight(r_sq, spec));
    }
  }
  return acc;
}

}  // namespace serial

namespace omp {

void fill_weights(const Lattice& lattice, const WeightSpec& spec, std::span<double> out) {
  if (out.size() != lattice.size()) throw ShapeError("weight buffer does not match the lattice");
  const auto xi_sq = lattice.spatial_frequency_sq();
  const int nt = lattice.n_t;
  const long long ns = static_cast<long long>(xi_sq.size());
#pragma omp parallel for schedule(static)
  for (long long s = 0; s < ns; ++s) {
    for (int j = 0; j < nt; ++j) {
      const double r_sq = r_squared(xi_sq[s], lattice.time_frequency(j), spec.gamma);
      out[s * nt + j] = std::exp(log_weight(r_sq, spec));
    }
  }
}

double weighted_energy(std::span<const Complex> coeffs, std::span<const double> weights) {
  if (coeffs.size() != weights.size()) throw ShapeError("weighted_energy: size mismatch");
  const std::size_t n = coeffs.size();
  const long long chunks = static_cast<long long>((n + kReductionChunk - 1) / kReductionChunk);
  std::vector<double> partial(chunks, 0.0);
#pragma omp parallel for schedule(static)
  for (long long c = 0; c < chunks; ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * kReductionChunk;
    const std::size_t hi = std::min(n, lo + kReductionChunk);
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += weights[i] * weights[i] * std::norm(coeffs[i]);
    partial[c] = acc;
  }
  return pairwise_sum(partial);
}

double max_ratio(std::span<const double> num, std::span<const double> den) {
  if (num.size() != den.size()) throw ShapeError("max_ratio: size mismatch");
  const long long n = static_cast<long long>(num.size());
  double best = -std::numeric_limits<double>::infinity();
#pragma omp parallel for reduction(max : best) schedule(static)
  for (long long i = 0; i < n; ++i) best = std::max(best, num[i] / den[i]);
  return best;
}

double monomial_weight_sum(const Lattice& lattice, const WeightSpec& spec, const Monomial& mono) {
  check_monomial(lattice, mono);
  const auto xi_sq = lattice.spatial_frequency_sq();
  const long long ns = static_cast<long long>(xi_sq.size());
  // One partial per spatial index keeps the combination order fixed.
  std::vector<double> partial(ns, 0.0);
#pragma omp parallel for schedule(dynamic, 16)
  for (long long s = 0; s < ns; ++s) {
    const double xa = spatial_monomial_sq(lattice, s, mono.alpha);
    if (xa == 0.0) continue;
    double acc = 0.0;
    for (int j = 0; j < lattice.n_t; ++j) {
      const double eta = lattice.time_frequency(j);
      const double eb = mono.beta == 0 ? 1.0 : std::pow(eta * eta, mono.beta);
      const double r_sq = r_squared(xi_sq[s], eta, spec.gamma);
      acc += xa * eb * std::exp(-2.0 * log_weight(r_sq, spec));
    }
    partial[s] = acc;
  }
  return pairwise_sum(partial);
}

}  // namespace omp

}  // namespace hormander::kernels
