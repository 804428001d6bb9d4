#include "hormander/embedding.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "hormander/errors.hpp"
#include "hormander/fft.hpp"
#include "hormander/kernels.hpp"
#include "hormander/spectra.hpp"

namespace hormander {

namespace {

using boost::math::quadrature::gauss_kronrod;

constexpr double kPartialTol = 1e-8;

template <class F>
double integrate(F f, double a, double b, double rel_tol, const char* what) {
  if (!(b > a)) return 0.0;
  double err = 0.0;
  double l1 = 0.0;
  const double v = gauss_kronrod<double, 31>::integrate(f, a, b, 20, rel_tol * 1e-2, &err, &l1);
  if (!std::isfinite(v) || err > rel_tol * std::max(l1, 1e-300)) {
    std::ostringstream os;
    os << what << ": quadrature did not converge on [" << a << ", " << b << "] (error " << err
       << ")";
    throw NumericError(os.str());
  }
  return v;
}

// Adds the integrals over [a, b] split at the interior breakpoints.
template <class F>
double integrate_split(F f, double a, double b, std::vector<double> breaks, double rel_tol,
                       const char* what) {
  std::sort(breaks.begin(), breaks.end());
  double acc = 0.0;
  double lo = a;
  for (double c : breaks) {
    if (c > lo && c < b) {
      acc += integrate(f, lo, c, rel_tol, what);
      lo = c;
    }
  }
  return acc + integrate(f, lo, b, rel_tol, what);
}

// log of the integrand of dr / (r phi^2) in the variable v = log^(level) r,
// for v >= 1.
double log_iterated_integrand(const PhiFunction& phi, int level, double v) {
  // logs[i] = log^(i+1) r for i < level, from the innermost outward.
  std::vector<double> logs(level);
  logs[level - 1] = v;
  for (int i = level - 2; i >= 0; --i) logs[i] = std::exp(logs[i + 1]);
  double jac = 0.0;  // log of prod_{i<level-1} L_i, with log L_i = L_{i+1}
  for (int i = 0; i + 1 < level; ++i) jac += logs[i + 1];
  if (std::isfinite(logs[0])) return jac - 2.0 * phi.log_value_at_log(logs[0]);

  // r beyond every representable log: combine exponents term by term.
  const auto& q = phi.exponents();
  double acc = 0.0;
  for (int i = 0; i + 1 < level; ++i) {
    const double coef = 1.0 - 2.0 * (i < static_cast<int>(q.size()) ? q[i] : 0.0);
    if (coef != 0.0) acc += coef * logs[i + 1];
  }
  double log_l = std::log(v);  // log L_level
  for (int i = level - 1; i < static_cast<int>(q.size()); ++i) {
    acc -= 2.0 * q[i] * log_l;
    log_l = std::log(log_l);
  }
  return acc;
}

// log^(level-1) of log(cutoff): the cutoff expressed in the level variable, or
// NaN when it lies below the range.
double cutoff_in_level(const PhiFunction& phi, int level) {
  if (phi.is_constant_one()) return std::numeric_limits<double>::quiet_NaN();
  double c = std::log(phi.cutoff());
  for (int i = 1; i < level; ++i) {
    if (!(c > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    c = std::log(c);
  }
  return c;
}

double partial_recursive(const PhiFunction& phi, int level, double y) {
  if (level == 1) {
    // Variable u = log r: [0, min(y, 1)] directly, the rest in w = log u.
    auto direct = [&](double u) { return std::exp(-2.0 * phi.log_value_at_log(u)); };
    double acc = integrate(direct, 0.0, std::min(y, 1.0), kPartialTol, "criterion_partial");
    if (y > 1.0) {
      auto in_w = [&](double w) {
        const double u = std::exp(w);
        return std::exp(w - 2.0 * phi.log_value_at_log(u));
      };
      std::vector<double> breaks;
      const double c = cutoff_in_level(phi, 1);
      if (c > 1.0) breaks.push_back(std::log(c));
      acc += integrate_split(in_w, 0.0, std::log(y), breaks, kPartialTol, "criterion_partial");
    }
    return acc;
  }
  if (y <= 1.0) return partial_recursive(phi, level - 1, std::exp(y));
  double acc = partial_recursive(phi, level - 1, std::numbers::e);
  auto in_w = [&](double w) { return std::exp(w + log_iterated_integrand(phi, level, std::exp(w))); };
  std::vector<double> breaks;
  const double c = cutoff_in_level(phi, level);
  if (c > 1.0) breaks.push_back(std::log(c));
  acc += integrate_split(in_w, 0.0, std::log(y), breaks, kPartialTol, "criterion_partial");
  return acc;
}

void require_dimension(std::span<const int> alpha) {
  if (alpha.size() < 1 || alpha.size() > 3) {
    throw ArgumentError("radial reduction supports n = 1, 2 or 3");
  }
  for (int a : alpha) {
    if (a < 0) throw ArgumentError("negative multi-index entry");
  }
}

double log_phi_sq(const PhiFunction& phi, double r) { return 2.0 * phi.log_value(r); }

}  // namespace

const char* to_string(CriterionVerdict v) {
  return v == CriterionVerdict::kConverges ? "converges" : "diverges";
}

CriterionVerdict criterion_verdict(const PhiFunction& phi) {
  if (phi.is_constant_one()) return CriterionVerdict::kDiverges;
  for (double q : phi.exponents()) {
    if (2.0 * q > 1.0) return CriterionVerdict::kConverges;
    if (2.0 * q < 1.0) return CriterionVerdict::kDiverges;
  }
  return CriterionVerdict::kDiverges;
}

double criterion_partial(const PhiFunction& phi, double R) {
  if (!(R >= 1.0)) throw ArgumentError("criterion_partial needs R >= 1");
  return partial_recursive(phi, 1, std::log(R));
}

double criterion_partial_iterated(const PhiFunction& phi, int level, double y) {
  if (level < 1 || level > PhiFunction::kMaxDepth + 1) {
    throw ArgumentError("criterion_partial_iterated needs 1 <= level <= 4");
  }
  if (!(y >= 0.0)) throw ArgumentError("criterion_partial_iterated needs y >= 0");
  return partial_recursive(phi, level, y);
}

bool increments_persist(std::span<const double> values) {
  if (values.size() < 3) throw ArgumentError("growth classification needs at least 3 values");
  const double first = values[1] - values[0];
  const double last = values.back() - values[values.size() - 2];
  return last >= 0.5 * first;
}

GrowthClassification classify_partial_growth(const PhiFunction& phi) {
  GrowthClassification out;
  out.level = std::max<int>(1, static_cast<int>(phi.exponents().size()));
  out.ladder = {1e3, 1e6, 1e9, 1e12};
  for (double y : out.ladder) out.partials.push_back(criterion_partial_iterated(phi, out.level, y));
  out.verdict =
      increments_persist(out.partials) ? CriterionVerdict::kDiverges : CriterionVerdict::kConverges;
  return out;
}

double derivative_weight_sum(const Lattice& lattice, double s, double gamma,
                             const PhiFunction& phi, std::span<const int> alpha, int beta) {
  lattice.validate();
  if (static_cast<int>(alpha.size()) != lattice.k) throw ShapeError("multi-index length != k");
  if (!(gamma > 0.0)) throw ArgumentError("gamma must be positive");
  const double b = 1.0 / (2.0 * gamma);
  const int order = std::accumulate(alpha.begin(), alpha.end(), 0);
  if (beta < 0 || std::any_of(alpha.begin(), alpha.end(), [](int a) { return a < 0; })) {
    throw ArgumentError("negative derivative order");
  }
  const double p = s - b - 0.5 * lattice.k;
  if (order + 2.0 * b * beta > p + 1e-12) {
    std::ostringstream os;
    os << "derivative order " << order + 2.0 * b * beta << " exceeds p = " << p;
    throw ArgumentError(os.str());
  }
  const kernels::WeightSpec spec{s, gamma, phi.is_constant_one() ? nullptr : &phi};
  const kernels::Monomial mono{std::vector<int>(alpha.begin(), alpha.end()), beta};
  return kernels::omp::monomial_weight_sum(lattice, spec, mono) * lattice.frequency_cell_volume();
}

double radial_lhs(double s, double gamma, const PhiFunction& phi, std::span<const int> alpha,
                  int beta, double R) {
  require_dimension(alpha);
  if (!(R > 1.0)) throw ArgumentError("radial reduction needs R > 1");
  if (!(gamma > 0.0)) throw ArgumentError("gamma must be positive");
  const int n = static_cast<int>(alpha.size());
  const int dims = n + 1;  // (rho_eta, xi_1, ..., xi_n), rho_eta = |eta|^gamma
  const double ball = std::sqrt(R * R - 1.0);
  constexpr double kTol = 1e-8;
  // phi has a kink on the sphere r = cutoff; every level splits where its
  // coordinate leaves that sphere.
  const double kink_sq =
      phi.is_constant_one() ? -1.0 : phi.cutoff() * phi.cutoff() - 1.0;

  std::vector<double> x(dims);
  // Coordinate d runs over [0, rem] as rem * sin(theta), theta in [0, pi/2].
  std::function<double(int, double, double)> level = [&](int d, double rem,
                                                          double prev_sq) -> double {
    auto f = [&](double theta) {
      x[d] = rem * std::sin(theta);
      const double c = std::cos(theta);
      const double jac = rem * c;
      if (d + 1 < dims) return jac * level(d + 1, rem * c, prev_sq + x[d] * x[d]);
      const double r = std::sqrt(1.0 + prev_sq + x[d] * x[d]);
      const double rho = x[0];
      double mono = 1.0;
      for (int i = 0; i < n; ++i) mono *= std::pow(x[i + 1], 2 * alpha[i]);
      // |eta|^(2 beta) d eta with eta = rho^(1/gamma).
      const double eta_part =
          std::pow(rho, 2.0 * beta / gamma) / gamma * std::pow(rho, 1.0 / gamma - 1.0);
      const double log_w = -2.0 * s * std::log(r) - log_phi_sq(phi, r);
      return jac * mono * eta_part * std::exp(log_w);
    };
    std::vector<double> cuts{0.0};
    const double reach = kink_sq - prev_sq;
    if (reach > 0.0 && std::sqrt(reach) < rem) cuts.push_back(std::asin(std::sqrt(reach) / rem));
    cuts.push_back(std::numbers::pi / 2);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      double err = 0.0;
      acc += gauss_kronrod<double, 15>::integrate(f, cuts[i], cuts[i + 1], 10, kTol, &err);
    }
    return acc;
  };
  return std::ldexp(level(0, ball, 0.0), n + 1);
}

double radial_rhs(double s, double gamma, const PhiFunction& phi, std::span<const int> alpha,
                  int beta, double R) {
  require_dimension(alpha);
  if (!(R > 1.0)) throw ArgumentError("radial reduction needs R > 1");
  const int n = static_cast<int>(alpha.size());
  const double b = 1.0 / (2.0 * gamma);
  const double p = s - b - 0.5 * n;
  const double delta = p - std::accumulate(alpha.begin(), alpha.end(), 0) - 2.0 * b * beta;
  const double e = s - 1.0 - delta;
  // u = sqrt(r^2 - 1) turns (r^2 - 1)^e dr into u^(2e + 1) du / r, smooth at
  // u = 0 for the half-integer e of odd n.
  auto f = [&](double u) {
    if (u == 0.0) return 0.0;
    const double r = std::sqrt(1.0 + u * u);
    return std::exp((2.0 * e + 1.0) * std::log(u) - 2.0 * s * std::log(r) - log_phi_sq(phi, r));
  };
  std::vector<double> breaks;
  if (!phi.is_constant_one()) breaks.push_back(std::sqrt(phi.cutoff() * phi.cutoff() - 1.0));
  return integrate_split(f, 0.0, std::sqrt(R * R - 1.0), breaks, 1e-10, "radial_rhs");
}

RadialCheck radial_reduction_check(double s, double gamma, const PhiFunction& phi,
                                   std::span<const int> alpha, int beta, double R,
                                   double calibration_R) {
  const auto one = PhiFunction::constant_one();
  RadialCheck out;
  out.calibration = radial_lhs(s, gamma, one, alpha, beta, calibration_R) /
                    radial_rhs(s, gamma, one, alpha, beta, calibration_R);
  out.lhs = radial_lhs(s, gamma, phi, alpha, beta, R);
  out.rhs = out.calibration * radial_rhs(s, gamma, phi, alpha, beta, R);
  out.relerr = std::abs(out.lhs - out.rhs) / out.lhs;
  return out;
}

std::vector<Lattice> sharpness_ladder(int k, int b, int steps) {
  if (k < 1 || b < 1 || steps < 1) throw ArgumentError("sharpness_ladder needs k, b, steps >= 1");
  std::vector<Lattice> out;
  for (int i = 0; i < steps; ++i) {
    const int nx = 8 << i;
    const double nt = 2.0 * std::pow(nx / 2, 2 * b);
    if (nt > (1 << 24)) throw ArgumentError("sharpness ladder exceeds the lattice size limit");
    out.push_back({k, nx, static_cast<int>(nt), 2.0 * std::numbers::pi, 2.0 * std::numbers::pi});
  }
  return out;
}

SharpnessReport sharpness_demo(const PhiFunction& phi, int p, std::span<const Lattice> ladder,
                               int b) {
  if (criterion_verdict(phi) == CriterionVerdict::kConverges) {
    throw ArgumentError("sharpness_demo needs a function parameter whose criterion diverges");
  }
  if (p < 0) throw ArgumentError("derivative order must be nonnegative");
  if (b < 1) throw ArgumentError("b must be positive");
  if (ladder.empty()) throw ArgumentError("sharpness_demo needs a nonempty ladder");
  SharpnessReport out;
  for (const auto& lat : ladder) {
    lat.validate();
    const double gamma = 1.0 / (2.0 * b);
    const double s = p + b + 0.5 * lat.k;
    const AnisotropicIndex idx(s, gamma, phi);
    const auto w = weight_array(lat, idx);
    const std::size_t n = lat.size();
    const int nt = lat.n_t;
    std::vector<double> xi1(lat.spatial_size());
    for (std::size_t sp = 0; sp < xi1.size(); ++sp) xi1[sp] = lat.spatial_frequency_vector(sp)[0];

    std::vector<double> terms(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double x1 = xi1[i / nt];
      terms[i] = std::pow(x1, 2 * p) / (w[i] * w[i]);
    }
    const double dv = lat.frequency_cell_volume();
    const double sum = kernels::pairwise_sum(terms) * dv;
    const double scale = dv * std::sqrt(static_cast<double>(n)) / std::sqrt(sum);

    std::vector<Complex> coeffs(n);
    std::vector<Complex> deriv(n);
    const Complex ip = std::pow(Complex(0.0, 1.0), p);
    for (std::size_t i = 0; i < n; ++i) {
      const double x1 = xi1[i / nt];
      coeffs[i] = std::pow(x1, p) / (w[i] * w[i]) * scale;
      deriv[i] = ip * std::pow(x1, p) * coeffs[i];
    }
    fft_full(coeffs, lat, FftDirection::kInverse);
    fft_full(deriv, lat, FftDirection::kInverse);
    double sup = 0.0;
    for (const auto& v : deriv) sup = std::max(sup, std::abs(v));
    const double norm = hnorm(GridFunction(lat, std::move(coeffs)), idx) /
                        std::pow(2.0 * std::numbers::pi, 0.5 * (lat.k + 1));
    out.ladder.push_back({lat, norm, sup});
  }
  out.norm_bounded = true;
  out.sup_increasing = true;
  for (std::size_t i = 0; i < out.ladder.size(); ++i) {
    if (std::abs(out.ladder[i].norm / out.ladder[0].norm - 1.0) > 0.05) out.norm_bounded = false;
    if (i > 0 && !(out.ladder[i].sup > out.ladder[i - 1].sup)) out.sup_increasing = false;
  }
  return out;
}

}  // namespace hormander
