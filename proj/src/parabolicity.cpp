#include "hormander/parabolicity.hpp"

#include <gsl/gsl_blas.h>
#include <gsl/gsl_cdf.h>
#include <gsl/gsl_multimin.h>
#include <gsl/gsl_qrng.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>

#include "hormander/errors.hpp"

namespace hormander {

namespace {

int abs_order(std::span<const int> alpha) { return std::accumulate(alpha.begin(), alpha.end(), 0); }

void validate_terms(const std::vector<SymbolTerm>& terms, int n, int b, int order,
                    const char* what) {
  std::map<std::pair<std::vector<int>, int>, int> seen;
  for (const auto& t : terms) {
    std::ostringstream os;
    if (static_cast<int>(t.alpha.size()) != n) {
      os << what << ": multi-index of length " << t.alpha.size() << " in dimension " << n;
      throw StructuralError(os.str());
    }
    if (t.beta < 0 || std::any_of(t.alpha.begin(), t.alpha.end(), [](int a) { return a < 0; })) {
      os << what << ": negative exponent";
      throw StructuralError(os.str());
    }
    if (abs_order(t.alpha) + 2 * b * t.beta != order) {
      os << what << ": term with |alpha| + 2b beta = " << abs_order(t.alpha) + 2 * b * t.beta
         << " in a symbol of order " << order;
      throw StructuralError(os.str());
    }
    if (seen[{t.alpha, t.beta}]++ > 0) {
      os << what << ": duplicate term";
      throw StructuralError(os.str());
    }
  }
}

Complex monomial(std::span<const int> alpha, std::span<const double> xi) {
  double v = 1.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) v *= std::pow(xi[i], alpha[i]);
  return v;
}

Complex eval_terms(const std::vector<SymbolTerm>& terms, std::span<const double> xi, Complex p) {
  Complex acc{};
  for (const auto& t : terms) acc += t.coeff * monomial(t.alpha, xi) * std::pow(p, t.beta);
  return acc;
}

std::vector<Complex> zeta_expand(const std::vector<SymbolTerm>& terms, const BoundaryFrame& frame,
                                 int degree) {
  frame.validate();
  std::vector<Complex> out(degree + 1);
  for (const auto& t : terms) {
    std::vector<Complex> poly{t.coeff * std::pow(frame.p, t.beta)};
    for (std::size_t i = 0; i < t.alpha.size(); ++i) {
      const Complex factor[2] = {frame.xi_tan[i], frame.nu[i]};
      for (int e = 0; e < t.alpha[i]; ++e) poly = poly_multiply(poly, factor);
    }
    for (std::size_t d = 0; d < poly.size() && d <= static_cast<std::size_t>(degree); ++d) {
      out[d] += poly[d];
    }
  }
  return out;
}

Complex horner(std::span<const Complex> poly, Complex z) {
  Complex acc{};
  for (std::size_t i = poly.size(); i-- > 0;) acc = acc * z + poly[i];
  return acc;
}

Complex horner_derivative(std::span<const Complex> poly, Complex z) {
  Complex acc{};
  for (std::size_t i = poly.size(); i-- > 1;) acc = acc * z + poly[i] * static_cast<double>(i);
  return acc;
}

void balance(Eigen::MatrixXcd& c) {
  constexpr double kRadix = 2.0;
  const Eigen::Index n = c.rows();
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double r = 0.0;
      double col = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        col += std::abs(c(j, i));
        r += std::abs(c(i, j));
      }
      if (col == 0.0 || r == 0.0) continue;
      double g = r / kRadix;
      double f = 1.0;
      const double s = col + r;
      while (col < g) {
        f *= kRadix;
        col *= kRadix * kRadix;
      }
      g = r * kRadix;
      while (col > g) {
        f /= kRadix;
        col /= kRadix * kRadix;
      }
      if ((col + r) / f < 0.95 * s) {
        done = false;
        c.row(i) /= f;
        c.col(i) *= f;
      }
    }
  }
}

// Point on the half sphere |xi|^2 + |p|^2 = 1, Re p >= 0, from raw coordinates.
void to_sphere(const double* y, int n, std::vector<double>& xi, Complex& p) {
  double norm = 0.0;
  for (int i = 0; i < n + 2; ++i) norm += y[i] * y[i];
  norm = std::sqrt(norm);
  if (norm == 0.0) {
    std::fill(xi.begin(), xi.end(), 0.0);
    p = 1.0;
    return;
  }
  for (int i = 0; i < n; ++i) xi[i] = y[i] / norm;
  p = Complex(std::abs(y[n]) / norm, y[n + 1] / norm);
}

// Halton points pushed through the Gaussian quantile and normalized: close to
// uniform on the sphere S^{d-1}.
class SphereSampler {
 public:
  explicit SphereSampler(int dim) : dim_(dim), q_(gsl_qrng_alloc(gsl_qrng_halton, dim)) {
    if (q_ == nullptr) throw ArgumentError("quasi-random generator unavailable in this dimension");
  }
  ~SphereSampler() { gsl_qrng_free(q_); }
  SphereSampler(const SphereSampler&) = delete;
  SphereSampler& operator=(const SphereSampler&) = delete;

  void next(std::vector<double>& y) {
    std::vector<double> u(dim_);
    gsl_qrng_get(q_, u.data());
    y.resize(dim_);
    for (int i = 0; i < dim_; ++i) {
      y[i] = gsl_cdf_ugaussian_Pinv(std::clamp(u[i], 1e-12, 1.0 - 1e-12));
    }
  }

 private:
  int dim_;
  gsl_qrng* q_;
};

struct PolishContext {
  const PrincipalSymbol* symbol;
  mutable std::size_t evaluations = 0;
};

double polish_objective(const gsl_vector* v, void* params) {
  auto* ctx = static_cast<PolishContext*>(params);
  const int n = ctx->symbol->n;
  std::vector<double> xi(n);
  Complex p;
  to_sphere(v->data, n, xi, p);
  ++ctx->evaluations;
  return std::abs(symbol_eval(*ctx->symbol, xi, p));
}

struct Sample {
  double value;
  std::vector<double> y;
};

}  // namespace

void PrincipalSymbol::validate() const {
  if (n < 1 || b < 1 || m < b || m % b != 0) {
    std::ostringstream os;
    os << "principal symbol needs n >= 1 and m >= b >= 1 with m/b integral, got n = " << n
       << ", b = " << b << ", m = " << m;
    throw ArgumentError(os.str());
  }
  validate_terms(terms, n, b, 2 * m, "principal symbol");
  const std::vector<int> zero(n, 0);
  if (coefficient(zero, kappa()) == Complex{}) {
    throw StructuralError("principal symbol has a vanishing coefficient at p^kappa");
  }
}

Complex PrincipalSymbol::coefficient(std::span<const int> alpha, int beta) const {
  for (const auto& t : terms) {
    if (t.beta == beta && std::equal(t.alpha.begin(), t.alpha.end(), alpha.begin(), alpha.end())) {
      return t.coeff;
    }
  }
  return {};
}

void BoundarySymbol::validate(int n, int b) const {
  if (m_j < 0) throw ArgumentError("boundary order must be nonnegative");
  validate_terms(terms, n, b, m_j, "boundary symbol");
}

void BoundaryFrame::validate() const {
  if (nu.size() != xi_tan.size() || nu.empty()) throw ArgumentError("frame vectors differ in size");
  double nn = 0.0;
  double dot = 0.0;
  double xn = 0.0;
  for (std::size_t i = 0; i < nu.size(); ++i) {
    nn += nu[i] * nu[i];
    dot += nu[i] * xi_tan[i];
    xn += xi_tan[i] * xi_tan[i];
  }
  if (std::abs(std::sqrt(nn) - 1.0) > 1e-12) throw ArgumentError("frame normal is not a unit vector");
  if (std::abs(dot) > 1e-12 * (1.0 + std::sqrt(xn))) {
    throw ArgumentError("frame tangent is not orthogonal to the normal");
  }
  if (p.real() < 0.0) throw ArgumentError("frame needs Re p >= 0");
}

Complex symbol_eval(const PrincipalSymbol& a, std::span<const double> xi, Complex p) {
  if (static_cast<int>(xi.size()) != a.n) throw ShapeError("xi has the wrong dimension");
  return eval_terms(a.terms, xi, p);
}

Complex boundary_eval(const BoundarySymbol& bsym, std::span<const double> xi, Complex p) {
  return eval_terms(bsym.terms, xi, p);
}

PetrovskiiVerdict petrovskii_check(const PrincipalSymbol& a, int n_samples, double delta_min) {
  return petrovskii_check(std::span<const PrincipalSymbol>(&a, 1), n_samples, delta_min);
}

PetrovskiiVerdict petrovskii_check(std::span<const PrincipalSymbol> samples, int n_samples,
                                   double delta_min) {
  if (n_samples < 1) throw ArgumentError("petrovskii_check needs n_samples >= 1");
  if (samples.empty()) throw ArgumentError("petrovskii_check needs at least one symbol");
  for (const auto& a : samples) {
    a.validate();
    if (a.n != samples[0].n || a.b != samples[0].b || a.m != samples[0].m) {
      throw ArgumentError("sampled symbols must share n, b and m");
    }
  }
  const int n = samples[0].n;
  const int dim = n + 2;

  std::vector<std::vector<double>> points;
  auto axis = [&](int i, double v) {
    std::vector<double> y(dim, 0.0);
    y[i] = v;
    points.push_back(y);
  };
  axis(n, 1.0);
  axis(n + 1, 1.0);
  axis(n + 1, -1.0);
  for (int i = 0; i < n; ++i) {
    axis(i, 1.0);
    axis(i, -1.0);
  }
  {
    SphereSampler sampler(dim);
    std::vector<double> y;
    for (int s = 0; s < n_samples; ++s) {
      sampler.next(y);
      points.push_back(y);
    }
  }

  PetrovskiiVerdict out;
  out.min_abs = std::numeric_limits<double>::infinity();
  std::vector<double> xi(n);
  Complex p;

  for (std::size_t si = 0; si < samples.size(); ++si) {
    const auto& a = samples[si];
    std::vector<Sample> values(points.size());
#pragma omp parallel for schedule(static) firstprivate(xi, p)
    for (std::size_t i = 0; i < points.size(); ++i) {
      to_sphere(points[i].data(), n, xi, p);
      values[i] = {std::abs(symbol_eval(a, xi, p)), points[i]};
    }
    out.evaluations += values.size();

    constexpr std::size_t kStarts = 4;
    const std::size_t starts = std::min(kStarts, values.size());
    std::partial_sort(values.begin(), values.begin() + starts, values.end(),
                      [](const Sample& l, const Sample& r) { return l.value < r.value; });

    for (std::size_t st = 0; st < starts; ++st) {
      PolishContext ctx{&a};
      gsl_multimin_function fn{&polish_objective, static_cast<std::size_t>(dim), &ctx};
      gsl_vector* x = gsl_vector_alloc(dim);
      gsl_vector* step = gsl_vector_alloc(dim);
      for (int i = 0; i < dim; ++i) {
        gsl_vector_set(x, i, values[st].y[i]);
        gsl_vector_set(step, i, 0.05);
      }
      double norm = gsl_blas_dnrm2(x);
      gsl_vector_scale(x, 1.0 / norm);
      gsl_multimin_fminimizer* mz =
          gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, dim);
      gsl_multimin_fminimizer_set(mz, &fn, x, step);
      for (int it = 0; it < 4000; ++it) {
        if (gsl_multimin_fminimizer_iterate(mz) != GSL_SUCCESS) break;
        if (gsl_multimin_fminimizer_size(mz) < 1e-15) break;
      }
      const double val = gsl_multimin_fminimizer_minimum(mz);
      std::vector<double> y(mz->x->data, mz->x->data + dim);
      gsl_multimin_fminimizer_free(mz);
      gsl_vector_free(step);
      gsl_vector_free(x);
      out.evaluations += ctx.evaluations;

      double best = values[st].value;
      std::vector<double> best_y = values[st].y;
      if (val < best) {
        best = val;
        best_y = y;
      }
      if (best < out.min_abs) {
        out.min_abs = best;
        to_sphere(best_y.data(), n, xi, p);
        out.witness_xi = xi;
        out.witness_p = p;
        out.witness_symbol = si;
      }
    }
  }
  out.pass = out.min_abs > delta_min;
  return out;
}

std::vector<Complex> zeta_polynomial(const PrincipalSymbol& a, const BoundaryFrame& frame) {
  if (static_cast<int>(frame.nu.size()) != a.n) throw ShapeError("frame dimension mismatch");
  return zeta_expand(a.terms, frame, 2 * a.m);
}

std::vector<Complex> zeta_polynomial(const BoundarySymbol& bsym, const BoundaryFrame& frame) {
  return zeta_expand(bsym.terms, frame, bsym.m_j);
}

std::vector<Complex> poly_multiply(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.empty() || b.empty()) return {};
  std::vector<Complex> out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

PolyDivision poly_divide(std::span<const Complex> num, std::span<const Complex> den) {
  if (den.empty() || den.back() == Complex{}) {
    throw DegenerateFrameError("division by a polynomial with a vanishing leading coefficient");
  }
  const std::size_t dd = den.size() - 1;
  PolyDivision out;
  std::vector<Complex> rem(num.begin(), num.end());
  if (rem.size() > dd) {
    out.quotient.assign(rem.size() - dd, Complex{});
    for (std::size_t k = rem.size(); k-- > dd;) {
      const Complex q = rem[k] / den.back();
      out.quotient[k - dd] = q;
      for (std::size_t j = 0; j <= dd; ++j) rem[k - dd + j] -= q * den[j];
    }
  } else {
    out.quotient.assign(1, Complex{});
  }
  rem.resize(dd, Complex{});
  out.remainder = std::move(rem);
  return out;
}

std::vector<Complex> polynomial_roots(std::span<const Complex> poly) {
  if (poly.size() < 2) return {};
  const Complex lead = poly.back();
  double scale = 0.0;
  for (const auto& c : poly) scale = std::max(scale, std::abs(c));
  if (std::abs(lead) <= 1e-14 * scale) {
    throw DegenerateFrameError("polynomial has a vanishing leading coefficient");
  }
  const int d = static_cast<int>(poly.size()) - 1;
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 1; i < d; ++i) c(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) c(i, d - 1) = -poly[i] / lead;
  balance(c);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(c, false);
  if (solver.info() != Eigen::Success) throw NumericError("companion eigenvalue solve failed");
  std::vector<Complex> roots(solver.eigenvalues().data(), solver.eigenvalues().data() + d);

  // Merge clusters, polish isolated roots with Newton.
  std::vector<int> cluster(d, -1);
  std::vector<Complex> out(d);
  int next = 0;
  for (int i = 0; i < d; ++i) {
    if (cluster[i] >= 0) continue;
    cluster[i] = next;
    std::vector<int> members{i};
    for (int j = i + 1; j < d; ++j) {
      const double radius = 1e-7 * std::max({std::abs(roots[i]), std::abs(roots[j]), 1e-300});
      if (cluster[j] < 0 && std::abs(roots[j] - roots[i]) <= radius) {
        cluster[j] = next;
        members.push_back(j);
      }
    }
    Complex mean{};
    for (int j : members) mean += roots[j];
    mean /= static_cast<double>(members.size());
    if (members.size() == 1) {
      for (int it = 0; it < 3; ++it) {
        const Complex f = horner(poly, mean);
        const Complex df = horner_derivative(poly, mean);
        if (df == Complex{}) break;
        const Complex cand = mean - f / df;
        if (std::abs(horner(poly, cand)) < std::abs(f)) {
          mean = cand;
        } else {
          break;
        }
      }
    }
    for (int j : members) out[j] = mean;
    ++next;
  }
  std::sort(out.begin(), out.end(), [](Complex l, Complex r) {
    return l.real() != r.real() ? l.real() < r.real() : l.imag() < r.imag();
  });
  return out;
}

RootSplit root_split(std::span<const Complex> poly) {
  const auto roots = polynomial_roots(poly);
  RootSplit out;
  for (const auto& z : roots) {
    if (std::abs(z.imag()) < 1e-9 * (1.0 + std::abs(z))) {
      std::ostringstream os;
      os << "near-real root " << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag())
         << "i";
      throw DegenerateFrameError(os.str());
    }
    (z.imag() > 0 ? out.plus : out.minus).push_back(z);
  }
  if (out.plus.size() != out.minus.size()) {
    std::ostringstream os;
    os << "unbalanced root split: " << out.plus.size() << " roots above, " << out.minus.size()
       << " below the real axis";
    throw CoveringPreconditionError(os.str(), static_cast<int>(out.plus.size()),
                                    static_cast<int>(out.minus.size()));
  }
  return out;
}

std::vector<Complex> plus_polynomial(std::span<const Complex> roots_plus) {
  if (roots_plus.empty()) throw ArgumentError("plus_polynomial needs at least one root");
  std::vector<Complex> out{1.0};
  for (const auto& z : roots_plus) {
    const Complex factor[2] = {-z, 1.0};
    out = poly_multiply(out, factor);
  }
  return out;
}

CoveringVerdict covering_check(const PrincipalSymbol& a, std::span<const BoundarySymbol> bs,
                               std::span<const BoundaryFrame> frames, double rel_tol) {
  a.validate();
  if (static_cast<int>(bs.size()) != a.m) {
    std::ostringstream os;
    os << "covering_check needs m = " << a.m << " boundary symbols, got " << bs.size();
    throw ArgumentError(os.str());
  }
  for (const auto& bsym : bs) bsym.validate(a.n, a.b);
  if (frames.empty()) throw ArgumentError("covering_check needs at least one frame");
  for (const auto& f : frames) {
    if (static_cast<int>(f.nu.size()) != a.n) throw ShapeError("frame dimension mismatch");
    f.validate();
    double mag = std::abs(f.p);
    for (double x : f.xi_tan) mag += std::abs(x);
    if (mag == 0.0) throw DegenerateFrameError("frame with xi_tan = 0 and p = 0");
  }

  const long long nf = static_cast<long long>(frames.size());
  std::vector<double> sing(nf);
  std::vector<char> ok(nf);
  std::vector<std::exception_ptr> errors(nf);
#pragma omp parallel for schedule(dynamic, 4)
  for (long long fi = 0; fi < nf; ++fi) {
    try {
      const auto split = root_split(zeta_polynomial(a, frames[fi]));
      const auto plus = plus_polynomial(split.plus);
      Eigen::MatrixXcd mat(a.m, a.m);
      for (int j = 0; j < a.m; ++j) {
        const auto rem = poly_divide(zeta_polynomial(bs[j], frames[fi]), plus).remainder;
        for (int c = 0; c < a.m; ++c) mat(j, c) = rem[c];
      }
      const double maxabs = mat.cwiseAbs().maxCoeff();
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(mat);
      sing[fi] = svd.singularValues()(a.m - 1);
      ok[fi] = maxabs > 0.0 && sing[fi] > rel_tol * maxabs;
    } catch (...) {
      errors[fi] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  CoveringVerdict out;
  out.frames_checked = frames.size();
  out.pass = true;
  std::size_t first_fail = frames.size();
  std::size_t argmin = 0;
  for (std::size_t fi = 0; fi < frames.size(); ++fi) {
    if (!ok[fi] && first_fail == frames.size()) first_fail = fi;
    if (sing[fi] < sing[argmin]) argmin = fi;
  }
  out.pass = first_fail == frames.size();
  out.worst_frame = out.pass ? argmin : first_fail;
  out.min_singular = sing[argmin];
  out.witness = frames[out.worst_frame];
  return out;
}

std::vector<BoundaryFrame> default_frames(int n, int count) {
  if (n < 1) throw ArgumentError("default_frames needs n >= 1");
  if (count < 0) throw ArgumentError("default_frames needs count >= 0");
  std::vector<double> nu(n, 0.0);
  nu[n - 1] = 1.0;
  std::vector<BoundaryFrame> out;
  const std::vector<double> zero(n, 0.0);
  out.push_back({nu, zero, Complex(1.0, 0.0)});
  out.push_back({nu, zero, Complex(0.0, 1.0)});
  out.push_back({nu, zero, Complex(0.0, -1.0)});
  if (n > 1) {
    std::vector<double> e1(n, 0.0);
    e1[0] = 1.0;
    out.push_back({nu, e1, Complex{}});
  }
  // Tangent space has n - 1 coordinates; p adds two more.
  const int dim = n + 1;
  SphereSampler sampler(dim);
  std::vector<double> y;
  for (int c = 0; c < count; ++c) {
    sampler.next(y);
    double norm = 0.0;
    for (double v : y) norm += v * v;
    norm = std::sqrt(norm);
    std::vector<double> xi(n, 0.0);
    for (int i = 0; i < n - 1; ++i) xi[i] = y[i] / norm;
    out.push_back({nu, xi, Complex(std::abs(y[n - 1]) / norm, y[n] / norm)});
  }
  return out;
}

int sigma0(int m, int b, std::span<const int> m_orders) {
  if (b < 1 || m < b || m % b != 0) {
    std::ostringstream os;
    os << "sigma0 needs m >= b >= 1 with m/b integral, got m = " << m << ", b = " << b;
    throw ArgumentError(os.str());
  }
  int lo = 2 * m;
  for (int mj : m_orders) {
    if (mj < 0) throw ArgumentError("boundary orders must be nonnegative");
    lo = std::max(lo, mj + 1);
  }
  const int step = 2 * b;
  return (lo + step - 1) / step * step;
}

}  // namespace hormander
