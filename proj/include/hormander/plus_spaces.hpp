#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hormander/lattice.hpp"
#include "hormander/spectra.hpp"

namespace hormander {

// The open set V where a function is prescribed, and the closed half-space
// t >= 0 that an admissible extension must be supported in. Masks hold one
// byte per lattice point (nonzero = member), in lattice layout.
struct RegionMask {
  Lattice lattice;
  std::vector<std::uint8_t> v_mask;
  std::vector<std::uint8_t> t_nonneg_mask;

  RegionMask() = default;
  RegionMask(const Lattice& lat, std::vector<std::uint8_t> v, std::vector<std::uint8_t> t_nonneg);

  // V = {t_lo < t < t_hi} across all of space; t_nonneg = {t >= 0}.
  static RegionMask time_slab(const Lattice& lat, double t_lo, double t_hi);
  // V = t_nonneg = {t >= 0}.
  static RegionMask half_space(const Lattice& lat);

  std::size_t v_count() const;
  // True when both masks depend on the time index only.
  bool is_time_separable() const;
};

// Values of g at the points of V, in lattice order.
std::vector<Complex> restrict_to_v(const GridFunction& g, const RegionMask& region);

struct ExtensionResult {
  double norm = 0.0;
  GridFunction extension;    // argmin, equal to u on V
  bool regularized = false;  // Tikhonov fallback was needed
  double min_rcond = 1.0;    // smallest reciprocal condition estimate seen
};

// Least-norm problems above this many free unknowns in a non-separable region
// are refused (dense Hermitian solve).
inline constexpr std::size_t kMaxDenseUnknowns = 4096;
// Reciprocal-condition threshold below which the Tikhonov fallback engages,
// and the relative size of the diagonal shift it adds.
inline constexpr double kRcondThreshold = 1e-12;
inline constexpr double kTikhonovShift = 1e-12;

// Factor norm over extensions supported in t >= 0:
//   min ||w||_idx  subject to  w = u on V,  w = 0 where t < 0.
// Throws InfeasibleError when u is nonzero at a point of V with t < 0, and
// ConditioningError when the regularized solve still fails.
ExtensionResult plus_norm(std::span<const Complex> u_on_v, const AnisotropicIndex& idx,
                          const RegionMask& region);

// The same minimum without the support constraint: the ordinary factor norm
// of H^{s,s gamma;phi}(V).
ExtensionResult factor_norm(std::span<const Complex> u_on_v, const AnisotropicIndex& idx,
                            const RegionMask& region);

// L2-in-x norms of d^k g / dt^k on the slice t = 0 for every integer
// 0 <= k < s gamma - 1/2, using spectral time differentiation. Throws
// UnsupportedParameterError when s gamma - 1/2 is an integer.
std::vector<double> trace_defect(const GridFunction& g, double gamma, double s);

// plus_norm(g|V) / factor_norm(g|V); 1 when both vanish.
double lemma51_equivalence_ratio(const GridFunction& g, const AnisotropicIndex& idx,
                                 const RegionMask& region);

}  // namespace hormander
