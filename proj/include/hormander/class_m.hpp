#pragma once

#include <span>
#include <vector>

namespace hormander {

// A function parameter from class M: positive on [1, inf), bounded with a
// bounded reciprocal on compacts, slowly varying at infinity. Only the
// constant 1 and the iterated-logarithm power family are representable:
//
//   phi(r) = (log r)^q1 (log log r)^q2 ... (log...log r)^qk,   r >= cutoff,
//
// continued below the cutoff by the constant phi(cutoff).
class PhiFunction {
 public:
  enum class Kind { kConstantOne, kLogPower };

  // Largest supported nesting depth; e^^4 already overflows a double.
  static constexpr int kMaxDepth = 3;

  static PhiFunction constant_one();
  // cutoff <= 0 selects the default e^^k (tower of k exponentials), the
  // smallest point at which every iterated log is >= 1.
  static PhiFunction log_power(std::vector<double> exponents, double cutoff = 0.0);

  PhiFunction() = default;

  Kind kind() const { return kind_; }
  const std::vector<double>& exponents() const { return exponents_; }
  double cutoff() const { return cutoff_; }
  bool is_constant_one() const { return kind_ == Kind::kConstantOne; }

  // phi(r); throws DomainError for r < 1.
  double operator()(double r) const;

  // log phi(r) without forming phi itself; valid for r up to DBL_MAX.
  double log_value(double r) const;
  // log phi(exp(log_r)); lets callers work with r far beyond DBL_MAX.
  double log_value_at_log(double log_r) const;

  friend bool operator==(const PhiFunction&, const PhiFunction&) = default;

 private:
  double formula_log_from_log(double log_r) const;

  Kind kind_ = Kind::kConstantOne;
  std::vector<double> exponents_;
  double cutoff_ = 1.0;
  double log_value_at_cutoff_ = 0.0;
};

// e^^k: e, e^e, e^(e^e) for k = 1, 2, 3 (1 for k = 0).
double exp_tower(int k);

double eval_phi(const PhiFunction& phi, double r);

// |phi(lambda r) / phi(r) - 1| at every r; throws ArgumentError on an empty
// list and DomainError when lambda * r < 1.
std::vector<double> slow_variation_defect(const PhiFunction& phi, double lambda,
                                          std::span<const double> r_values);

// Smallest c >= 1 with c^-1 r^-eps <= phi(r) <= c r^eps over a geometric
// sample of [1, r_max] (kEpsilonSamplesPerDecade points per decade, both
// endpoints and the cutoff included).
inline constexpr int kEpsilonSamplesPerDecade = 64;
double epsilon_bound_constant(const PhiFunction& phi, double eps, double r_max);

}  // namespace hormander
