#include <omp.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "hormander/errors.hpp"
#include "hormander/kernels.hpp"
#include "test_support.hpp"

using namespace hormander;
using hormander::testing::lattice_r;
using hormander::testing::random_grid;
using hormander::testing::rel_diff;

namespace {

const Lattice kLattice{2, 32, 64, 2 * std::numbers::pi, 3.0};

struct ThreadCount {
  explicit ThreadCount(int n) : saved(omp_get_max_threads()) { omp_set_num_threads(n); }
  ~ThreadCount() { omp_set_num_threads(saved); }
  int saved;
};

}  // namespace

TEST_CASE("pairwise_sum") {
  CHECK(kernels::pairwise_sum(std::vector<double>{}) == 0.0);
  std::vector<double> v(1000);
  std::iota(v.begin(), v.end(), 1.0);
  CHECK(kernels::pairwise_sum(v) == 500500.0);
  // Pairwise summation keeps the error of 1e6 copies of 0.1 near rounding.
  std::vector<double> tenth(1000000, 0.1);
  CHECK(std::abs(kernels::pairwise_sum(tenth) - 1e5) <= 1e-8);
}

TEST_CASE("fill_weights: serial and OpenMP agree with the direct formula") {
  const auto phi = PhiFunction::log_power({1.0, -0.5});
  for (const auto* p : {static_cast<const PhiFunction*>(nullptr), &phi}) {
    const kernels::WeightSpec spec{1.75, 0.25, p};
    std::vector<double> ws(kLattice.size()), wo(kLattice.size());
    kernels::serial::fill_weights(kLattice, spec, ws);
    kernels::omp::fill_weights(kLattice, spec, wo);
    for (std::size_t i = 0; i < ws.size(); i += 97) {
      const double r = lattice_r(kLattice, i, 0.25);
      const double want = std::pow(r, 1.75) * (p ? (*p)(r) : 1.0);
      CHECK(rel_diff(ws[i], want) <= 1e-13);
    }
    for (std::size_t i = 0; i < ws.size(); ++i) {
      if (rel_diff(ws[i], wo[i]) > 1e-13) FAIL("weights differ at " << i);
    }
  }
  std::vector<double> small(3);
  CHECK_THROWS_AS(kernels::omp::fill_weights(kLattice, {}, small), ShapeError);
}

TEST_CASE("reductions: serial and OpenMP agree") {
  const auto g = random_grid(kLattice, 3);
  std::vector<double> w(kLattice.size());
  kernels::serial::fill_weights(kLattice, {2.0, 0.5, nullptr}, w);
  const double es = kernels::serial::weighted_energy(g.samples, w);
  const double eo = kernels::omp::weighted_energy(g.samples, w);
  CHECK(rel_diff(es, eo) <= 1e-13);

  std::vector<double> num(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) num[i] = std::abs(g.samples[i]);
  CHECK(kernels::serial::max_ratio(num, w) == kernels::omp::max_ratio(num, w));

  const auto phi = PhiFunction::log_power({0.5});
  for (const auto& mono : {kernels::Monomial{{0, 0}, 0}, kernels::Monomial{{1, 0}, 0},
                           kernels::Monomial{{1, 1}, 1}}) {
    const kernels::WeightSpec spec{5.0, 0.5, &phi};
    const double ms = kernels::serial::monomial_weight_sum(kLattice, spec, mono);
    const double mo = kernels::omp::monomial_weight_sum(kLattice, spec, mono);
    CHECK(rel_diff(ms, mo) <= 1e-13);
  }
}

TEST_CASE("OpenMP reductions do not depend on the thread count") {
  const auto g = random_grid(kLattice, 5);
  std::vector<double> w(kLattice.size());
  kernels::omp::fill_weights(kLattice, {1.0, 0.5, nullptr}, w);
  const kernels::Monomial mono{{1, 0}, 0};
  double e1 = 0.0, m1 = 0.0;
  {
    ThreadCount tc(1);
    e1 = kernels::omp::weighted_energy(g.samples, w);
    m1 = kernels::omp::monomial_weight_sum(kLattice, {4.0, 0.5, nullptr}, mono);
  }
  for (int threads : {2, 3, 7}) {
    ThreadCount tc(threads);
    CHECK(kernels::omp::weighted_energy(g.samples, w) == e1);
    CHECK(kernels::omp::monomial_weight_sum(kLattice, {4.0, 0.5, nullptr}, mono) == m1);
  }
}

TEST_CASE("monomial_weight_sum by direct summation") {
  const Lattice L{2, 8, 16, 2 * std::numbers::pi, 2 * std::numbers::pi};
  const auto phi = PhiFunction::log_power({1.0});
  const kernels::Monomial mono{{1, 0}, 1};
  double want = 0.0;
  for (std::size_t flat = 0; flat < L.size(); ++flat) {
    const auto mi = L.spatial_multi_index(flat / L.n_t);
    const double xi1 = L.spatial_frequency(mi[0]);
    const double eta = L.time_frequency(static_cast<int>(flat % L.n_t));
    const double r = lattice_r(L, flat, 0.5);
    want += xi1 * xi1 * eta * eta / (std::pow(r, 8.0) * phi(r) * phi(r));
  }
  CHECK(rel_diff(kernels::omp::monomial_weight_sum(L, {4.0, 0.5, &phi}, mono), want) <= 1e-13);
  CHECK_THROWS_AS(kernels::omp::monomial_weight_sum(L, {4.0, 0.5, &phi}, {{1}, 0}), ArgumentError);
}
