#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hormander/class_m.hpp"
#include "hormander/lattice.hpp"
#include "hormander/parabolicity.hpp"

namespace hormander {

// x-periodic constant-coefficient operator, first order in time (kappa = 1):
//   a^{0,1} d_t u + sum a^{alpha,0} D^alpha u,  D = i d_x,
// principal part from `symbol`, optional lower-order x-terms (beta = 0,
// |alpha| < 2m). Per spatial mode this is d_t u + lambda(xi) u = f / a^{0,1}.
struct PeriodicParabolicOperator {
  PrincipalSymbol symbol;
  std::vector<SymbolTerm> lower_order;
  double L_x = 6.283185307179586;
  double tau = 0.25;  // f lives in [0, tau]

  // Throws UnsupportedParameterError for kappa != 1, StructuralError for bad
  // lower-order terms or a symbol failing the Petrovskii check, ShapeError when
  // the lattice does not match, ArgumentError unless 0 < tau < L_t/2.
  void validate(const Lattice& lattice) const;

  Complex lambda(std::span<const double> xi) const;
  Complex time_coefficient() const;

  // d_t - Laplacian in k space dimensions.
  static PeriodicParabolicOperator heat(int k, double L_x, double tau);
};

// Zero-Cauchy-data solution, exact for piecewise-linear f in time per mode.
// u vanishes for t <= 0. Throws ArgumentError when f is not supported in
// [0, tau], StabilityError when Re lambda < 0 on some lattice mode.
GridFunction solve_periodic(const PeriodicParabolicOperator& op, const GridFunction& f);

// Spectral in x, second-order central differences in t (periodic wrap).
GridFunction apply_operator(const PeriodicParabolicOperator& op, const GridFunction& u);

// ||apply_operator(solve_periodic(f)) - f|| / ||f|| over the slices 0 < t < tau.
double round_trip_residual(const PeriodicParabolicOperator& op, const GridFunction& f);

struct RatioBounds {
  double c1_hat = 0.0;
  double c2_hat = 0.0;
  std::vector<double> ratios;
};

// rho(f) = plus_norm(u on (0, tau)) at (sigma, 1/(2b), phi) / hnorm(f) at
// (sigma - 2m, 1/(2b), phi); min and max over the ensemble. Needs sigma > 2m
// and a nonempty ensemble of nonzero sources.
RatioBounds two_sided_ratio(const PeriodicParabolicOperator& op,
                            std::span<const GridFunction> ensemble, double sigma,
                            const PhiFunction& phi);

// Random source sum c e^{i m.x} sin(l pi t / tau) on [0, tau], |m_i| <= band,
// 1 <= l <= time_modes, complex Gaussian c.
GridFunction band_limited_source(const Lattice& lattice, double tau, int band, int time_modes,
                                 std::uint64_t seed);

// Source with spatial coefficients r^{-(s_f + k/2 + eps)} / phi(r), r = (1+|xi|^2)^{1/2},
// times the profile sin(pi t / tau) on [0, tau]. It lies in the (s_f, phi)
// class uniformly across lattices iff eps > 0.
GridFunction decaying_source(const Lattice& lattice, double tau, double s_f, const PhiFunction& phi,
                             double eps);

struct LadderEntry {
  Lattice lattice;
  double norm_f = 0.0;
  double norm_u = 0.0;
};

struct InheritanceReport {
  std::vector<LadderEntry> ladder;
  bool growth_flagged = false;
};

inline constexpr double kPersistentIncrementRatio = 0.7;

// Solves for decaying_source(s_f = sigma - 2m, eps) on every lattice and
// reports hnorm(f) and plus_norm(u on (0, tau)) at (sigma, phi). Flags
// growth when some doubling more than doubles the norm of u, or when the last
// increment of its square is at least kPersistentIncrementRatio times the one
// before. Refine space only (fixed n_t) so the time discretization does not
// mask the spatial trend; at least four lattices are needed to see it.
InheritanceReport regularity_inheritance_check(const PeriodicParabolicOperator& op, double sigma,
                                               const PhiFunction& phi, double eps,
                                               std::span<const Lattice> ladder);

}  // namespace hormander
