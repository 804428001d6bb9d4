#pragma once

#include <span>
#include <vector>

#include "hormander/class_m.hpp"
#include "hormander/lattice.hpp"

namespace hormander {

enum class CriterionVerdict { kConverges, kDiverges };

const char* to_string(CriterionVerdict v);

// Closed-form verdict on the integral of dr / (r phi(r)^2) over [1, inf):
// phi = 1 diverges; log powers decide on the first exponent with 2 q_i != 1
// (converges iff 2 q_i > 1) and diverge when every 2 q_i = 1.
CriterionVerdict criterion_verdict(const PhiFunction& phi);

// Integral of dr / (r phi(r)^2) over [1, R], relative tolerance 1e-8.
// Throws ArgumentError for R < 1 and NumericError when quadrature fails.
double criterion_partial(const PhiFunction& phi, double R);

// The same integral up to the radius R with log^(level) R = y (level iterated
// logarithms), integrated in log space so R may lie far beyond DBL_MAX.
// level is 1..kMaxDepth + 1; y >= 0.
double criterion_partial_iterated(const PhiFunction& phi, int level, double y);

struct GrowthClassification {
  int level = 1;
  std::vector<double> ladder;    // values of log^(level) R
  std::vector<double> partials;  // criterion partial at each ladder point
  CriterionVerdict verdict = CriterionVerdict::kDiverges;
};

// Partials on the ladder 1e3, 1e6, 1e9, 1e12 of log^(level) R with level =
// max(1, depth of phi). Bounded (converges) when the last increment is below
// half the first one.
GrowthClassification classify_partial_growth(const PhiFunction& phi);

// True when the last increment of an increasing sequence is at least half the
// first one.
bool increments_persist(std::span<const double> values);

// Lattice sum of |xi^alpha|^2 |eta|^(2 beta) / (r^(2s) phi(r)^2) times the
// frequency cell volume. Requires |alpha| + 2b beta <= s - b - n/2 with
// b = 1/(2 gamma), n = lattice.k.
double derivative_weight_sum(const Lattice& lattice, double s, double gamma,
                             const PhiFunction& phi, std::span<const int> alpha, int beta);

struct RadialCheck {
  double lhs = 0.0;          // multiple integral over r_gamma <= R
  double rhs = 0.0;          // c_{alpha,beta} times the radial integral
  double relerr = 0.0;       // |lhs - rhs| / lhs
  double calibration = 0.0;  // c_{alpha,beta}
};

// Multiple integral of |xi^alpha|^2 |eta|^(2 beta) / (r^(2s) phi^2) over
// {r_gamma <= R} in dimension n = alpha.size() (2 or 3), against
// c * integral_1^R (r^2 - 1)^(s - 1 - delta) r^(1 - 2s) phi^-2 dr with
// delta = p - |alpha| - 2b beta, p = s - b - n/2. c is calibrated at phi = 1
// and R = calibration_R.
RadialCheck radial_reduction_check(double s, double gamma, const PhiFunction& phi,
                                   std::span<const int> alpha, int beta, double R,
                                   double calibration_R = 10.0);

// The two sides separately, without calibration.
double radial_lhs(double s, double gamma, const PhiFunction& phi, std::span<const int> alpha,
                  int beta, double R);
double radial_rhs(double s, double gamma, const PhiFunction& phi, std::span<const int> alpha,
                  int beta, double R);

struct SharpnessStep {
  Lattice lattice;
  double norm = 0.0;  // ||w||_{s,phi}, s = p + b + n/2
  double sup = 0.0;   // max |d^p w / dx_1^p| over the lattice
};

struct SharpnessReport {
  std::vector<SharpnessStep> ladder;
  bool norm_bounded = false;   // all norms within 5% of the first
  bool sup_increasing = false; // strictly increasing sups
};

// On each lattice builds w with w_hat = xi_1^p / (r^(2s) phi^2) normalized to
// unit norm, the extremal of the Schwarz inequality behind the criterion, so
// the sup of its p-th x_1 derivative is the square root of the lattice weight
// sum and grows without bound exactly when the criterion diverges. Throws
// ArgumentError when criterion_verdict(phi) converges. gamma = 1/(2b).
SharpnessReport sharpness_demo(const PhiFunction& phi, int p, std::span<const Lattice> ladder,
                               int b = 1);

// n_x = 8, 16, ..., with n_t = 2 (n_x/2)^(2b) and periods 2 pi.
std::vector<Lattice> sharpness_ladder(int k, int b, int steps);

}  // namespace hormander
