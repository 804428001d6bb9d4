#include "hormander/class_m.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hormander/errors.hpp"

namespace hormander {

double exp_tower(int k) {
  double v = 1.0;
  for (int i = 0; i < k; ++i) v = std::exp(v);
  return v;
}

PhiFunction PhiFunction::constant_one() { return PhiFunction{}; }

PhiFunction PhiFunction::log_power(std::vector<double> exponents, double cutoff) {
  const int depth = static_cast<int>(exponents.size());
  if (depth < 1 || depth > kMaxDepth) {
    std::ostringstream os;
    os << "log_power needs between 1 and " << kMaxDepth << " exponents, got " << depth;
    throw ArgumentError(os.str());
  }
  for (double q : exponents) {
    if (!std::isfinite(q)) throw ArgumentError("log_power exponent is not finite");
  }
  const double floor = exp_tower(depth);
  if (cutoff <= 0.0) cutoff = floor;
  // Relative slack so a cutoff written out as a decimal literal still passes.
  if (!(cutoff >= floor * (1.0 - 1e-12)) || !std::isfinite(cutoff)) {
    std::ostringstream os;
    os.precision(17);
    os << "log_power cutoff " << cutoff << " is below e^^" << depth << " = " << floor;
    throw ArgumentError(os.str());
  }
  PhiFunction phi;
  phi.kind_ = Kind::kLogPower;
  phi.exponents_ = std::move(exponents);
  phi.cutoff_ = std::max(cutoff, floor);
  phi.log_value_at_cutoff_ = phi.formula_log_from_log(std::log(phi.cutoff_));
  return phi;
}

double PhiFunction::formula_log_from_log(double log_r) const {
  double acc = 0.0;
  double iterated = log_r;
  for (double q : exponents_) {
    acc += q * std::log(iterated);
    iterated = std::log(iterated);
  }
  return acc;
}

double PhiFunction::log_value_at_log(double log_r) const {
  if (!(log_r >= 0.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "phi is defined on [1, inf); got log r = " << log_r;
    throw DomainError(os.str());
  }
  if (kind_ == Kind::kConstantOne) return 0.0;
  if (log_r < std::log(cutoff_)) return log_value_at_cutoff_;
  return formula_log_from_log(log_r);
}

double PhiFunction::log_value(double r) const {
  if (!(r >= 1.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "phi is defined on [1, inf); got r = " << r;
    throw DomainError(os.str());
  }
  if (kind_ == Kind::kConstantOne) return 0.0;
  if (r < cutoff_) return log_value_at_cutoff_;
  return formula_log_from_log(std::log(r));
}

double PhiFunction::operator()(double r) const { return std::exp(log_value(r)); }

double eval_phi(const PhiFunction& phi, double r) { return phi(r); }

std::vector<double> slow_variation_defect(const PhiFunction& phi, double lambda,
                                          std::span<const double> r_values) {
  if (r_values.empty()) throw ArgumentError("slow_variation_defect: empty r_values");
  if (!(lambda > 0.0)) throw DomainError("slow_variation_defect: lambda must be positive");
  std::vector<double> out;
  out.reserve(r_values.size());
  for (double r : r_values) {
    // expm1 keeps the tiny defects at r ~ 1e12 accurate.
    const double d = phi.log_value(lambda * r) - phi.log_value(r);
    out.push_back(std::abs(std::expm1(d)));
  }
  return out;
}

double epsilon_bound_constant(const PhiFunction& phi, double eps, double r_max) {
  if (!(eps > 0.0)) throw DomainError("epsilon_bound_constant: eps must be positive");
  if (!(r_max >= 1.0)) throw DomainError("epsilon_bound_constant: r_max must be >= 1");
  const double decades = std::log10(r_max);
  const int n = std::max(1, static_cast<int>(std::ceil(decades * kEpsilonSamplesPerDecade)));
  std::vector<double> samples;
  samples.reserve(n + 2);
  for (int i = 0; i <= n; ++i) samples.push_back(std::pow(10.0, decades * i / n));
  samples.back() = r_max;
  if (!phi.is_constant_one() && phi.cutoff() <= r_max) samples.push_back(phi.cutoff());

  double log_c = 0.0;
  for (double r : samples) {
    const double lp = phi.log_value(r);
    const double le = eps * std::log(r);
    log_c = std::max({log_c, lp - le, -lp - le});
  }
  return std::exp(log_c);
}

}  // namespace hormander
