#pragma once

#include <span>
#include <utility>
#include <vector>

#include "hormander/class_m.hpp"
#include "hormander/lattice.hpp"
#include "hormander/plus_spaces.hpp"

namespace hormander {

// Admissible Hilbert pair [X0, X1] that is diagonal in the DFT basis:
// ||v||_{Xj}^2 = sum mu_j^2 |dft(v)|^2 * cell_volume, with mu1 >= mu0 > 0.
struct DiagonalPair {
  Lattice lattice;
  std::vector<double> mu0;
  std::vector<double> mu1;

  DiagonalPair() = default;
  DiagonalPair(const Lattice& lat, std::vector<double> m0, std::vector<double> m1);

  // mu_j = r_gamma^{s_j}; requires s0 <= s1.
  static DiagonalPair sobolev(const Lattice& lat, double s0, double s1, double gamma);
};

// psi(r) = r^theta phi(r^{1/(s1-s0)}) for r >= 1 and phi(1) for 0 < r < 1,
// theta = (s - s0)/(s1 - s0).
class InterpParameter {
 public:
  InterpParameter(double s0, double s, double s1, PhiFunction phi);

  double s0() const { return s0_; }
  double s() const { return s_; }
  double s1() const { return s1_; }
  double theta() const { return theta_; }
  const PhiFunction& phi() const { return phi_; }

  double operator()(double r) const;
  // log psi(exp(log_r)); accepts any real log_r.
  double log_at_log(double log_r) const;

 private:
  double s0_;
  double s_;
  double s1_;
  double theta_;
  PhiFunction phi_;
};

// Throws ArgumentError unless s0 < s < s1.
InterpParameter build_psi(double s0, double s, double s1, const PhiFunction& phi);

// Mean of log(psi(2r)/psi(r))/log 2 over the upper half of the ladder
// (at least 3 ascending points).
double regular_variation_index(const InterpParameter& p, std::span<const double> r_ladder);

// mu1/mu0: the diagonal of the generating operator J, ||Jv||_{X0} = ||v||_{X1}.
std::vector<double> generating_operator(const DiagonalPair& pair);

// ||psi(J) g||_{X0}.
double interp_norm(const GridFunction& g, const DiagonalPair& pair, const InterpParameter& p);

// interp_norm over the Sobolev pair (s0, s1, gamma) divided by hnorm at
// (s, gamma, phi); 1 for g = 0.
double verify_lemma71(const GridFunction& g, double s0, double s, double s1, double gamma,
                      const PhiFunction& phi);

struct NormPair {
  double lhs = 0.0;
  double rhs = 0.0;
};

// lhs: interpolation norm of g inside the subpair of functions supported in
// t >= 0 (the generating operator of the restricted inner products, computed
// by a generalized Hermitian eigensolve); rhs: plus_norm of g on V at
// (s, gamma, phi). Requires s0 >= 0 and g = 0 wherever t < 0.
NormPair interp_subspace_norm(const GridFunction& g_on_plus, const RegionMask& region, double s0,
                              double s, double s1, double gamma, const PhiFunction& phi);

// lhs: interp_norm of the direct sum of the pairs on the concatenated input;
// rhs: sqrt(sum of squared summand norms).
NormPair direct_sum_interp_check(std::span<const DiagonalPair> pairs,
                                 std::span<const GridFunction> gs, const InterpParameter& p);

}  // namespace hormander
