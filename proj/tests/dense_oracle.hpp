#pragma once

// Dense brute-force least-norm oracle for support-constrained extensions:
// the weighted Gram matrix G = F^H diag(w^2) F dV is formed explicitly from
// the DFT matrix and the normal equations G_ff z = -G_fv u are solved with a
// full-pivot LU. Only for lattices with a few hundred points.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "hormander/lattice.hpp"
#include "test_support.hpp"

namespace hormander::testing {

inline Eigen::MatrixXcd dft_matrix(const Lattice& lat) {
  const std::size_t n = lat.size();
  Eigen::MatrixXcd f(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t row = 0; row < n; ++row) {
    const auto fm = lat.spatial_multi_index(row / lat.n_t);
    const int ft = static_cast<int>(row % lat.n_t);
    for (std::size_t col = 0; col < n; ++col) {
      const auto xm = lat.spatial_multi_index(col / lat.n_t);
      const int t = static_cast<int>(col % lat.n_t);
      double ph = static_cast<double>(ft) * t / lat.n_t;
      for (int a = 0; a < lat.k; ++a) ph += static_cast<double>(fm[a]) * xm[a] / lat.n_x;
      ph -= std::floor(ph);
      f(row, col) = std::polar(scale, -2.0 * std::numbers::pi * ph);
    }
  }
  return f;
}

struct OracleResult {
  double norm = 0.0;
  Eigen::VectorXcd w;
};

// weights: lattice weight array; fixed: V membership; zero: points forced to 0.
inline OracleResult dense_least_norm(const Lattice& lat, std::span<const double> weights,
                                     std::span<const std::uint8_t> fixed,
                                     std::span<const std::uint8_t> zero,
                                     std::span<const Complex> u_on_v) {
  const std::size_t n = lat.size();
  const Eigen::MatrixXcd f = dft_matrix(lat);
  Eigen::VectorXd w2(n);
  for (std::size_t i = 0; i < n; ++i) w2[i] = weights[i] * weights[i] * lat.cell_volume();
  const Eigen::MatrixXcd g = f.adjoint() * w2.asDiagonal() * f;

  std::vector<std::size_t> fixed_idx, free_idx;
  for (std::size_t i = 0; i < n; ++i) {
    if (fixed[i]) fixed_idx.push_back(i);
    else if (!zero[i]) free_idx.push_back(i);
  }
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(n);
  for (std::size_t j = 0; j < fixed_idx.size(); ++j) x[fixed_idx[j]] = u_on_v[j];
  if (!free_idx.empty()) {
    Eigen::MatrixXcd a(free_idx.size(), free_idx.size());
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(free_idx.size());
    for (std::size_t i = 0; i < free_idx.size(); ++i) {
      for (std::size_t j = 0; j < free_idx.size(); ++j) a(i, j) = g(free_idx[i], free_idx[j]);
      for (std::size_t j = 0; j < fixed_idx.size(); ++j) {
        rhs[i] -= g(free_idx[i], fixed_idx[j]) * x[fixed_idx[j]];
      }
    }
    const Eigen::VectorXcd z = a.fullPivLu().solve(rhs);
    for (std::size_t i = 0; i < free_idx.size(); ++i) x[free_idx[i]] = z[i];
  }
  return {std::sqrt(std::abs((x.adjoint() * g * x)(0, 0).real())), x};
}

}  // namespace hormander::testing
