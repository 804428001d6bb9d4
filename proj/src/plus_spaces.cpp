#include "hormander/plus_spaces.hpp"

#include <Eigen/Dense>
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hormander/errors.hpp"
#include "hormander/fft.hpp"

namespace hormander {

namespace {

enum class Role : std::uint8_t { kFree, kFixed, kZero };

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct SolveStats {
  bool regularized = false;
  double min_rcond = 1.0;
};

// Solves the Hermitian positive definite system in place, falling back to a
// Tikhonov shift when the reciprocal condition estimate is too small.
Vector solve_hpd(Matrix a, const Vector& rhs, SolveStats& stats) {
  Eigen::LLT<Matrix> llt(a);
  double rcond = llt.info() == Eigen::Success ? llt.rcond() : 0.0;
  stats.min_rcond = std::min(stats.min_rcond, rcond);
  if (llt.info() == Eigen::Success && rcond >= kRcondThreshold) return llt.solve(rhs);

  const double shift = kTikhonovShift * a.diagonal().real().mean();
  a.diagonal().array() += shift;
  llt.compute(a);
  if (llt.info() != Eigen::Success) {
    std::ostringstream os;
    os << "least-norm solve failed: " << a.rows() << " unknowns, reciprocal condition "
       << rcond << ", Tikhonov shift " << shift << " did not restore positive definiteness";
    throw ConditioningError(os.str());
  }
  stats.regularized = true;
  return llt.solve(rhs);
}

std::vector<Role> roles_for(const RegionMask& region, bool support_constraint) {
  const std::size_t n = region.lattice.size();
  std::vector<Role> roles(n, Role::kFree);
  for (std::size_t i = 0; i < n; ++i) {
    if (region.v_mask[i]) {
      roles[i] = Role::kFixed;
    } else if (support_constraint && !region.t_nonneg_mask[i]) {
      roles[i] = Role::kZero;
    }
  }
  return roles;
}

// Scatters u_on_v into a zero lattice array and enforces feasibility.
std::vector<Complex> scatter(std::span<const Complex> u_on_v, const RegionMask& region,
                             bool support_constraint) {
  if (u_on_v.size() != region.v_count()) {
    std::ostringstream os;
    os << "u has " << u_on_v.size() << " values, V has " << region.v_count() << " points";
    throw ShapeError(os.str());
  }
  double scale = 0.0;
  for (const auto& v : u_on_v) scale = std::max(scale, std::abs(v));
  std::vector<Complex> x(region.lattice.size());
  std::size_t pos = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!region.v_mask[i]) continue;
    const Complex value = u_on_v[pos++];
    if (support_constraint && !region.t_nonneg_mask[i] && std::abs(value) > 1e-14 * scale) {
      std::ostringstream os;
      os << "u is nonzero at lattice point " << i
         << " of V where t < 0; no extension supported in t >= 0 exists";
      throw InfeasibleError(os.str());
    }
    x[i] = value;
  }
  return x;
}

// Circulant kernel of F^* diag(w2) F for a unitary DFT of n points along the
// transformed axes: c = ifft_unitary(w2) / sqrt(n).
void kernel_1d(std::span<const double> w2, std::span<Complex> out) {
  for (std::size_t i = 0; i < w2.size(); ++i) out[i] = w2[i];
  fft_1d(out, FftDirection::kInverse);
  const double scale = 1.0 / std::sqrt(static_cast<double>(w2.size()));
  for (auto& v : out) v *= scale;
}

ExtensionResult solve_separable(const RegionMask& region, const std::vector<Role>& roles,
                                std::vector<Complex> x, const std::vector<double>& weights) {
  const Lattice& lat = region.lattice;
  const int nt = lat.n_t;
  const long long ns = static_cast<long long>(lat.spatial_size());

  std::vector<int> free_t;
  std::vector<int> fixed_t;
  for (int j = 0; j < nt; ++j) {
    if (roles[j] == Role::kFree) free_t.push_back(j);
    if (roles[j] == Role::kFixed) fixed_t.push_back(j);
  }

  fft_space(x, lat, FftDirection::kForward);

  std::vector<double> energy(ns, 0.0);
  std::vector<SolveStats> stats(ns);
  const int nf = static_cast<int>(free_t.size());

#pragma omp parallel
  {
    std::vector<double> w2(nt);
    std::vector<Complex> kernel(nt);
    std::vector<Complex> spectrum(nt);
#pragma omp for schedule(dynamic, 8)
    for (long long s = 0; s < ns; ++s) {
      std::span<Complex> row(x.data() + s * nt, nt);
      for (int j = 0; j < nt; ++j) w2[j] = weights[s * nt + j] * weights[s * nt + j];
      if (nf > 0) {
        kernel_1d(w2, kernel);
        auto c = [&](int i, int j) { return kernel[((i - j) % nt + nt) % nt]; };
        Matrix a(nf, nf);
        Vector rhs = Vector::Zero(nf);
        for (int p = 0; p < nf; ++p) {
          for (int q = 0; q < nf; ++q) a(p, q) = c(free_t[p], free_t[q]);
          Complex acc{};
          for (int j : fixed_t) acc += c(free_t[p], j) * row[j];
          rhs(p) = -acc;
        }
        const Vector z = solve_hpd(std::move(a), rhs, stats[s]);
        for (int p = 0; p < nf; ++p) row[free_t[p]] = z(p);
      }
      std::copy(row.begin(), row.end(), spectrum.begin());
      fft_1d(spectrum, FftDirection::kForward);
      double acc = 0.0;
      for (int j = 0; j < nt; ++j) acc += w2[j] * std::norm(spectrum[j]);
      energy[s] = acc;
    }
  }

  ExtensionResult result;
  for (const auto& st : stats) {
    result.regularized = result.regularized || st.regularized;
    result.min_rcond = std::min(result.min_rcond, st.min_rcond);
  }
  fft_space(x, lat, FftDirection::kInverse);
  result.extension = GridFunction(lat, std::move(x));
  result.norm = std::sqrt(kernels::pairwise_sum(energy) * lat.cell_volume());
  return result;
}

ExtensionResult solve_dense(const RegionMask& region, const std::vector<Role>& roles,
                            std::vector<Complex> x, const std::vector<double>& weights) {
  const Lattice& lat = region.lattice;
  const std::size_t n = lat.size();
  std::vector<std::size_t> free_idx;
  for (std::size_t i = 0; i < n; ++i) {
    if (roles[i] == Role::kFree) free_idx.push_back(i);
  }
  if (free_idx.size() > kMaxDenseUnknowns) {
    std::ostringstream os;
    os << "non-separable least-norm problem has " << free_idx.size()
       << " unknowns (limit " << kMaxDenseUnknowns << ")";
    throw ArgumentError(os.str());
  }

  std::vector<double> w2(n);
  for (std::size_t i = 0; i < n; ++i) w2[i] = weights[i] * weights[i];

  ExtensionResult result;
  if (!free_idx.empty()) {
    // Multi-level circulant kernel of F^* W^2 F.
    std::vector<Complex> kernel(w2.begin(), w2.end());
    fft_full(kernel, lat, FftDirection::kInverse);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (auto& v : kernel) v *= scale;

    // G x for the fixed data, via FFT.
    std::vector<Complex> gx = x;
    fft_full(gx, lat, FftDirection::kForward);
    for (std::size_t i = 0; i < n; ++i) gx[i] *= w2[i];
    fft_full(gx, lat, FftDirection::kInverse);

    const int dims = lat.k + 1;
    auto axes_of = [&](std::size_t flat) {
      std::vector<int> a(dims);
      a[dims - 1] = static_cast<int>(flat % lat.n_t);
      std::size_t rest = flat / lat.n_t;
      for (int axis = dims - 2; axis >= 0; --axis) {
        a[axis] = static_cast<int>(rest % lat.n_x);
        rest /= lat.n_x;
      }
      return a;
    };
    const int nf = static_cast<int>(free_idx.size());
    std::vector<std::vector<int>> coords(nf);
    for (int p = 0; p < nf; ++p) coords[p] = axes_of(free_idx[p]);

    Matrix a(nf, nf);
#pragma omp parallel for schedule(static)
    for (int p = 0; p < nf; ++p) {
      for (int q = 0; q < nf; ++q) {
        std::size_t flat = 0;
        for (int axis = 0; axis < dims; ++axis) {
          const int m = axis == dims - 1 ? lat.n_t : lat.n_x;
          flat = flat * m + static_cast<std::size_t>(((coords[p][axis] - coords[q][axis]) % m + m) % m);
        }
        a(p, q) = kernel[flat];
      }
    }
    Vector rhs(nf);
    for (int p = 0; p < nf; ++p) rhs(p) = -gx[free_idx[p]];
    SolveStats stats;
    const Vector z = solve_hpd(std::move(a), rhs, stats);
    for (int p = 0; p < nf; ++p) x[free_idx[p]] = z(p);
    result.regularized = stats.regularized;
    result.min_rcond = stats.min_rcond;
  }

  std::vector<Complex> spectrum = x;
  fft_full(spectrum, lat, FftDirection::kForward);
  result.norm = std::sqrt(kernels::omp::weighted_energy(spectrum, weights) * lat.cell_volume());
  result.extension = GridFunction(lat, std::move(x));
  return result;
}

ExtensionResult least_norm(std::span<const Complex> u_on_v, const AnisotropicIndex& idx,
                           const RegionMask& region, bool support_constraint) {
  if (region.v_count() == 0) throw ArgumentError("V is empty");
  auto x = scatter(u_on_v, region, support_constraint);
  const auto roles = roles_for(region, support_constraint);
  const auto weights = weight_array(region.lattice, idx);
  if (region.is_time_separable()) {
    return solve_separable(region, roles, std::move(x), weights);
  }
  return solve_dense(region, roles, std::move(x), weights);
}

}  // namespace

RegionMask::RegionMask(const Lattice& lat, std::vector<std::uint8_t> v,
                       std::vector<std::uint8_t> t_nonneg)
    : lattice(lat), v_mask(std::move(v)), t_nonneg_mask(std::move(t_nonneg)) {
  lattice.validate();
  if (v_mask.size() != lattice.size() || t_nonneg_mask.size() != lattice.size()) {
    throw ShapeError("region masks do not match the lattice");
  }
}

RegionMask RegionMask::time_slab(const Lattice& lat, double t_lo, double t_hi) {
  lat.validate();
  const double eps = 1e-9 * lat.dt();
  std::vector<std::uint8_t> v(lat.size());
  std::vector<std::uint8_t> tn(lat.size());
  for (std::size_t s = 0; s < lat.spatial_size(); ++s) {
    for (int j = 0; j < lat.n_t; ++j) {
      const double t = lat.time_at(j);
      v[s * lat.n_t + j] = (t > t_lo + eps && t < t_hi - eps) ? 1 : 0;
      tn[s * lat.n_t + j] = t > -eps ? 1 : 0;
    }
  }
  return RegionMask(lat, std::move(v), std::move(tn));
}

RegionMask RegionMask::half_space(const Lattice& lat) {
  RegionMask r = time_slab(lat, 0.0, 0.0);
  r.v_mask = r.t_nonneg_mask;
  return r;
}

std::size_t RegionMask::v_count() const {
  return static_cast<std::size_t>(std::count_if(v_mask.begin(), v_mask.end(),
                                                [](std::uint8_t b) { return b != 0; }));
}

bool RegionMask::is_time_separable() const {
  const int nt = lattice.n_t;
  for (std::size_t s = 1; s < lattice.spatial_size(); ++s) {
    for (int j = 0; j < nt; ++j) {
      if ((v_mask[s * nt + j] != 0) != (v_mask[j] != 0)) return false;
      if ((t_nonneg_mask[s * nt + j] != 0) != (t_nonneg_mask[j] != 0)) return false;
    }
  }
  return true;
}

std::vector<Complex> restrict_to_v(const GridFunction& g, const RegionMask& region) {
  if (!(g.lattice == region.lattice)) throw ShapeError("grid function and region lattices differ");
  std::vector<Complex> out;
  out.reserve(region.v_count());
  for (std::size_t i = 0; i < g.samples.size(); ++i) {
    if (region.v_mask[i]) out.push_back(g.samples[i]);
  }
  return out;
}

ExtensionResult plus_norm(std::span<const Complex> u_on_v, const AnisotropicIndex& idx,
                          const RegionMask& region) {
  return least_norm(u_on_v, idx, region, true);
}

ExtensionResult factor_norm(std::span<const Complex> u_on_v, const AnisotropicIndex& idx,
                            const RegionMask& region) {
  return least_norm(u_on_v, idx, region, false);
}

std::vector<double> trace_defect(const GridFunction& g, double gamma, double s) {
  const double bound = s * gamma - 0.5;
  if (std::abs(bound - std::round(bound)) < 1e-12) {
    std::ostringstream os;
    os.precision(17);
    os << "s gamma - 1/2 = " << bound << " is an integer; the trace characterization excludes it";
    throw UnsupportedParameterError(os.str());
  }
  const Lattice& lat = g.lattice;
  const int nt = lat.n_t;
  const int t0 = lat.time_origin();
  std::vector<double> out;
  for (int order = 0; order < bound; ++order) {
    std::vector<Complex> d = g.samples;
    if (order > 0) {
      fft_time(d, lat, FftDirection::kForward);
      for (std::size_t sp = 0; sp < lat.spatial_size(); ++sp) {
        for (int j = 0; j < nt; ++j) {
          const double eta = lat.time_frequency(j);
          // The Nyquist mode has no consistent odd derivative.
          const bool drop = (order % 2 == 1) && j == nt / 2;
          d[sp * nt + j] *= drop ? Complex{} : std::pow(Complex(0.0, eta), order);
        }
      }
      fft_time(d, lat, FftDirection::kInverse);
    }
    double acc = 0.0;
    for (std::size_t sp = 0; sp < lat.spatial_size(); ++sp) acc += std::norm(d[sp * nt + t0]);
    out.push_back(std::sqrt(acc * std::pow(lat.dx(), lat.k)));
  }
  return out;
}

double lemma51_equivalence_ratio(const GridFunction& g, const AnisotropicIndex& idx,
                                 const RegionMask& region) {
  if (!(idx.s > 0.0)) throw ArgumentError("lemma51_equivalence_ratio needs s > 0");
  const double bound = idx.s * idx.gamma - 0.5;
  if (std::abs(bound - std::round(bound)) < 1e-12) {
    throw UnsupportedParameterError("s gamma - 1/2 is an integer");
  }
  const auto u = restrict_to_v(g, region);
  const double plus = plus_norm(u, idx, region).norm;
  const double free = factor_norm(u, idx, region).norm;
  if (free == 0.0) return plus == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return plus / free;
}

}  // namespace hormander
