#include "hormander/interpolation.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hormander/errors.hpp"
#include "hormander/fft.hpp"
#include "hormander/kernels.hpp"
#include "hormander/spectra.hpp"

namespace hormander {

DiagonalPair::DiagonalPair(const Lattice& lat, std::vector<double> m0, std::vector<double> m1)
    : lattice(lat), mu0(std::move(m0)), mu1(std::move(m1)) {
  lattice.validate();
  if (mu0.size() != lattice.size() || mu1.size() != lattice.size()) {
    throw ShapeError("pair weights do not match the lattice");
  }
  for (std::size_t i = 0; i < mu0.size(); ++i) {
    if (!(mu0[i] > 0.0) || !(mu1[i] >= mu0[i] * (1.0 - 1e-14))) {
      std::ostringstream os;
      os << "pair is not admissible at lattice point " << i << ": mu0 = " << mu0[i]
         << ", mu1 = " << mu1[i];
      throw ArgumentError(os.str());
    }
  }
}

DiagonalPair DiagonalPair::sobolev(const Lattice& lat, double s0, double s1, double gamma) {
  if (!(s0 <= s1)) throw ArgumentError("Sobolev pair needs s0 <= s1");
  return DiagonalPair(lat, weight_array(lat, AnisotropicIndex(s0, gamma)),
                      weight_array(lat, AnisotropicIndex(s1, gamma)));
}

InterpParameter::InterpParameter(double s0, double s, double s1, PhiFunction phi)
    : s0_(s0), s_(s), s1_(s1), theta_((s - s0) / (s1 - s0)), phi_(std::move(phi)) {
  if (!(s0 < s && s < s1)) {
    std::ostringstream os;
    os << "interpolation parameter needs s0 < s < s1, got (" << s0 << ", " << s << ", " << s1
       << ")";
    throw ArgumentError(os.str());
  }
}

double InterpParameter::log_at_log(double log_r) const {
  if (log_r < 0.0) return phi_.log_value_at_log(0.0);
  return theta_ * log_r + phi_.log_value_at_log(log_r / (s1_ - s0_));
}

double InterpParameter::operator()(double r) const {
  if (!(r > 0.0)) throw DomainError("psi is defined for r > 0");
  return std::exp(log_at_log(std::log(r)));
}

InterpParameter build_psi(double s0, double s, double s1, const PhiFunction& phi) {
  return InterpParameter(s0, s, s1, phi);
}

double regular_variation_index(const InterpParameter& p, std::span<const double> r_ladder) {
  if (r_ladder.size() < 3) throw ArgumentError("regular_variation_index needs >= 3 points");
  if (!std::is_sorted(r_ladder.begin(), r_ladder.end())) {
    throw ArgumentError("regular_variation_index needs an ascending ladder");
  }
  const std::size_t start = r_ladder.size() / 2;
  double acc = 0.0;
  for (std::size_t i = start; i < r_ladder.size(); ++i) {
    const double lr = std::log(r_ladder[i]);
    acc += (p.log_at_log(lr + std::log(2.0)) - p.log_at_log(lr)) / std::log(2.0);
  }
  return acc / static_cast<double>(r_ladder.size() - start);
}

std::vector<double> generating_operator(const DiagonalPair& pair) {
  std::vector<double> j(pair.mu0.size());
  for (std::size_t i = 0; i < j.size(); ++i) j[i] = pair.mu1[i] / pair.mu0[i];
  return j;
}

namespace {

std::vector<double> interp_weights(const DiagonalPair& pair, const InterpParameter& p) {
  std::vector<double> w(pair.mu0.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = pair.mu0[i] * std::exp(p.log_at_log(std::log(pair.mu1[i] / pair.mu0[i])));
  }
  return w;
}

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Gram matrix of the weighted norm sum w2 |F x|^2 restricted to the index set
// `support` of one transformed axis group (circulant kernel).
Matrix restricted_gram(std::span<const double> w2, const std::vector<int>& support) {
  const int n = static_cast<int>(w2.size());
  std::vector<Complex> kernel(w2.begin(), w2.end());
  fft_1d(kernel, FftDirection::kInverse);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  const int m = static_cast<int>(support.size());
  Matrix g(m, m);
  for (int p = 0; p < m; ++p) {
    for (int q = 0; q < m; ++q) g(p, q) = kernel[((support[p] - support[q]) % n + n) % n] * scale;
  }
  return g;
}

// sum_i psi(sqrt(lambda_i))^2 |c_i|^2 for the pencil (g1, g0), c = V^* g0 x.
double pencil_energy(const Matrix& g0, const Matrix& g1, const Vector& x, const InterpParameter& p) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> solver(g1, g0);
  if (solver.info() != Eigen::Success) throw NumericError("generalized eigensolve failed");
  const Vector c = solver.eigenvectors().adjoint() * (g0 * x);
  double acc = 0.0;
  for (int i = 0; i < c.size(); ++i) {
    const double lambda = std::max(solver.eigenvalues()(i), 1e-300);
    const double log_psi = p.log_at_log(0.5 * std::log(lambda));
    acc += std::exp(2.0 * log_psi) * std::norm(c(i));
  }
  return acc;
}

}  // namespace

double interp_norm(const GridFunction& g, const DiagonalPair& pair, const InterpParameter& p) {
  if (!(g.lattice == pair.lattice)) throw ShapeError("grid function and pair lattices differ");
  const auto f = dft(g);
  const auto w = interp_weights(pair, p);
  return std::sqrt(kernels::omp::weighted_energy(f.coeffs, w) * g.lattice.cell_volume());
}

double verify_lemma71(const GridFunction& g, double s0, double s, double s1, double gamma,
                      const PhiFunction& phi) {
  const auto p = build_psi(s0, s, s1, phi);
  const auto pair = DiagonalPair::sobolev(g.lattice, s0, s1, gamma);
  const double denom = hnorm(g, AnisotropicIndex(s, gamma, phi));
  const double num = interp_norm(g, pair, p);
  if (denom == 0.0) return num == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return num / denom;
}

NormPair interp_subspace_norm(const GridFunction& g_on_plus, const RegionMask& region, double s0,
                              double s, double s1, double gamma, const PhiFunction& phi) {
  if (!(s0 >= 0.0)) throw ArgumentError("interp_subspace_norm needs s0 >= 0");
  if (!(g_on_plus.lattice == region.lattice)) throw ShapeError("grid and region lattices differ");
  const auto p = build_psi(s0, s, s1, phi);
  const Lattice& lat = region.lattice;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    if (!region.t_nonneg_mask[i] && g_on_plus.samples[i] != Complex{}) {
      throw ArgumentError("g is not supported in t >= 0");
    }
  }

  const auto w0 = weight_array(lat, AnisotropicIndex(s0, gamma));
  const auto w1 = weight_array(lat, AnisotropicIndex(s1, gamma));
  double energy = 0.0;

  if (region.is_time_separable()) {
    const int nt = lat.n_t;
    std::vector<int> support;
    for (int j = 0; j < nt; ++j) {
      if (region.t_nonneg_mask[j]) support.push_back(j);
    }
    std::vector<Complex> x = g_on_plus.samples;
    fft_space(x, lat, FftDirection::kForward);
    const long long ns = static_cast<long long>(lat.spatial_size());
    std::vector<double> partial(ns, 0.0);
#pragma omp parallel for schedule(dynamic, 8)
    for (long long sp = 0; sp < ns; ++sp) {
      std::vector<double> a2(nt);
      std::vector<double> b2(nt);
      for (int j = 0; j < nt; ++j) {
        a2[j] = w0[sp * nt + j] * w0[sp * nt + j];
        b2[j] = w1[sp * nt + j] * w1[sp * nt + j];
      }
      Vector xv(support.size());
      for (std::size_t q = 0; q < support.size(); ++q) xv(q) = x[sp * nt + support[q]];
      if (xv.squaredNorm() == 0.0) continue;
      partial[sp] = pencil_energy(restricted_gram(a2, support), restricted_gram(b2, support), xv, p);
    }
    energy = kernels::pairwise_sum(partial);
  } else {
    // Dense route over all points with t >= 0.
    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < lat.size(); ++i) {
      if (region.t_nonneg_mask[i]) support.push_back(i);
    }
    if (support.size() > 1024) throw ArgumentError("non-separable subspace too large for the dense route");
    const int m = static_cast<int>(support.size());
    const std::size_t n = lat.size();
    Matrix g0(m, m);
    Matrix g1(m, m);
    std::vector<Complex> e(n);
    for (int q = 0; q < m; ++q) {
      for (int which = 0; which < 2; ++which) {
        std::fill(e.begin(), e.end(), Complex{});
        e[support[q]] = 1.0;
        fft_full(e, lat, FftDirection::kForward);
        const auto& w = which == 0 ? w0 : w1;
        for (std::size_t i = 0; i < n; ++i) e[i] *= w[i] * w[i];
        fft_full(e, lat, FftDirection::kInverse);
        Matrix& g = which == 0 ? g0 : g1;
        for (int pidx = 0; pidx < m; ++pidx) g(pidx, q) = e[support[pidx]];
      }
    }
    Vector xv(m);
    for (int q = 0; q < m; ++q) xv(q) = g_on_plus.samples[support[q]];
    if (xv.squaredNorm() > 0.0) energy = pencil_energy(g0, g1, xv, p);
  }

  NormPair out;
  out.lhs = std::sqrt(energy * lat.cell_volume());
  const auto u = restrict_to_v(g_on_plus, region);
  out.rhs = plus_norm(u, AnisotropicIndex(s, gamma, phi), region).norm;
  return out;
}

NormPair direct_sum_interp_check(std::span<const DiagonalPair> pairs,
                                 std::span<const GridFunction> gs, const InterpParameter& p) {
  if (pairs.size() != gs.size() || pairs.empty()) {
    throw ArgumentError("direct_sum_interp_check needs aligned, nonempty lists");
  }
  std::vector<Complex> coeffs;
  std::vector<double> weights;
  double rhs_sq = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (!(gs[i].lattice == pairs[i].lattice)) throw ShapeError("summand lattices differ");
    const double scale = std::sqrt(gs[i].lattice.cell_volume());
    const auto f = dft(gs[i]);
    const auto w = interp_weights(pairs[i], p);
    for (const auto& c : f.coeffs) coeffs.push_back(c * scale);
    weights.insert(weights.end(), w.begin(), w.end());
    const double ni = interp_norm(gs[i], pairs[i], p);
    rhs_sq += ni * ni;
  }
  return {std::sqrt(kernels::omp::weighted_energy(coeffs, weights)), std::sqrt(rhs_sq)};
}

}  // namespace hormander
