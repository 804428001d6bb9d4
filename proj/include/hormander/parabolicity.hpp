#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hormander/lattice.hpp"

namespace hormander {

// One coefficient a^{alpha,beta} of xi^alpha p^beta.
struct SymbolTerm {
  std::vector<int> alpha;
  int beta = 0;
  Complex coeff;
};

// Principal part of a 2b-parabolic operator of order 2m in x:
//   A(xi, p) = sum a^{alpha,beta} xi^alpha p^beta,  |alpha| + 2b beta = 2m.
struct PrincipalSymbol {
  int n = 2;
  int b = 1;
  int m = 1;
  std::vector<SymbolTerm> terms;

  int kappa() const { return m / b; }
  // Throws StructuralError on a malformed key, a duplicate key or a vanishing
  // a^{0,kappa}, ArgumentError on bad (n, b, m).
  void validate() const;
  Complex coefficient(std::span<const int> alpha, int beta) const;
};

// Principal part of a boundary operator of order m_j.
struct BoundarySymbol {
  int m_j = 0;
  std::vector<SymbolTerm> terms;

  void validate(int n, int b) const;
};

struct BoundaryFrame {
  std::vector<double> nu;      // inward unit normal
  std::vector<double> xi_tan;  // orthogonal to nu
  Complex p;                   // Re p >= 0

  // Throws ArgumentError unless |nu| = 1, <xi_tan, nu> = 0 and Re p >= 0.
  void validate() const;
};

Complex symbol_eval(const PrincipalSymbol& a, std::span<const double> xi, Complex p);
Complex boundary_eval(const BoundarySymbol& bsym, std::span<const double> xi, Complex p);

inline constexpr double kPetrovskiiThreshold = 1e-9;

struct PetrovskiiVerdict {
  bool pass = false;
  double min_abs = 0.0;  // min |A| over samples and polish
  std::vector<double> witness_xi;
  Complex witness_p;
  std::size_t witness_symbol = 0;  // index into the sampled symbol list
  std::size_t evaluations = 0;
};

// Samples |xi|^2 + |p|^2 = 1, Re p >= 0 with n_samples Halton points plus axis
// points, then polishes the smallest samples with Nelder-Mead. Passes iff the
// minimum exceeds delta_min.
PetrovskiiVerdict petrovskii_check(const PrincipalSymbol& a, int n_samples,
                                   double delta_min = kPetrovskiiThreshold);
// Frozen-coefficient form: all symbols share (n, b, m); minimum over the list.
PetrovskiiVerdict petrovskii_check(std::span<const PrincipalSymbol> samples, int n_samples,
                                   double delta_min = kPetrovskiiThreshold);

// Coefficients, lowest degree first, of zeta -> A(xi_tan + zeta nu, p).
std::vector<Complex> zeta_polynomial(const PrincipalSymbol& a, const BoundaryFrame& frame);
std::vector<Complex> zeta_polynomial(const BoundarySymbol& bsym, const BoundaryFrame& frame);

// Roots of a polynomial (lowest degree first) from the eigenvalues of the
// balanced companion matrix; roots closer than 1e-7 relative are merged to
// their mean.
std::vector<Complex> polynomial_roots(std::span<const Complex> poly);

struct RootSplit {
  std::vector<Complex> plus;   // Im > 0
  std::vector<Complex> minus;  // Im < 0
};

// Throws DegenerateFrameError for a vanishing leading coefficient or a root
// with |Im z| < 1e-9 (1 + |z|), CoveringPreconditionError when the two halves
// differ in size.
RootSplit root_split(std::span<const Complex> poly);

// Monic prod (zeta - z_j), lowest degree first. Throws ArgumentError on an
// empty list.
std::vector<Complex> plus_polynomial(std::span<const Complex> roots_plus);

std::vector<Complex> poly_multiply(std::span<const Complex> a, std::span<const Complex> b);

struct PolyDivision {
  std::vector<Complex> quotient;
  std::vector<Complex> remainder;  // degree < deg divisor, zero padded
};
// Long division by a divisor with a nonzero leading coefficient.
PolyDivision poly_divide(std::span<const Complex> num, std::span<const Complex> den);

inline constexpr double kCoveringRelTol = 1e-8;

struct CoveringVerdict {
  bool pass = false;
  double min_singular = 0.0;    // smallest over frames
  std::size_t worst_frame = 0;  // frame achieving it
  BoundaryFrame witness;
  std::size_t frames_checked = 0;
};

// Lopatinskii condition at every frame: the remainders of B_j(xi_tan + zeta nu, p)
// modulo the plus polynomial must form a full-rank m x m matrix, smallest
// singular value > rel_tol * max |entry|.
CoveringVerdict covering_check(const PrincipalSymbol& a, std::span<const BoundarySymbol> bs,
                               std::span<const BoundaryFrame> frames,
                               double rel_tol = kCoveringRelTol);

// Normalized frames |xi_tan|^2 + |p|^2 = 1 about the normal e_n: the axis
// frames (xi_tan = 0, p = 1), (xi_tan = 0, p = +-i), (xi_tan = e_1, p = 0)
// followed by `count` Halton frames.
std::vector<BoundaryFrame> default_frames(int n, int count);

// Smallest sigma >= 2m, >= m_j + 1 for all j, divisible by 2b.
int sigma0(int m, int b, std::span<const int> m_orders);

}  // namespace hormander
