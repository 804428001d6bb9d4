// Acceptance run: one PASS/FAIL line per criterion, details indented below.
// Exits 1 when any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "dense_oracle.hpp"
#include "hormander/class_m.hpp"
#include "hormander/cli.hpp"
#include "hormander/embedding.hpp"
#include "hormander/errors.hpp"
#include "hormander/interpolation.hpp"
#include "hormander/model_problem.hpp"
#include "hormander/parabolicity.hpp"
#include "hormander/plus_spaces.hpp"
#include "hormander/spectra.hpp"
#include "symbols.hpp"
#include "test_support.hpp"

using namespace hormander;
using namespace hormander::testing;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    notes.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. Interpolation with a function parameter reproduces the refined norm.
Outcome lemma71() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const Lattice L{2, 16, 16, kTwoPi, kTwoPi};
  const std::array<std::array<double, 3>, 3> sets{{{0, 1, 2}, {1, 2.5, 4}, {0, 0.5, 3}}};
  const std::array<PhiFunction, 3> phis{PhiFunction::constant_one(), PhiFunction::log_power({1.0}),
                                        PhiFunction::log_power({2.0, -1.0})};
  double worst = 0.0;
  int runs = 0;
  for (const auto& set : sets) {
    for (const auto& phi : phis) {
      for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const double r = verify_lemma71(random_grid(L, 1000 + seed), set[0], set[1], set[2], 0.5, phi);
        worst = std::max(worst, std::abs(r - 1.0));
        ++runs;
      }
    }
  }
  const double secs = seconds_since(t0);
  o.require(worst <= 1e-12, std::to_string(runs) + " ratios, max |ratio - 1| = " + fmt("%.3g", worst));
  o.require(secs < 5.0, "runtime " + fmt("%.2f", secs) + " s < 5 s");
  return o;
}

// 2. Zero smoothness with phi = 1 is the L2 norm.
Outcome parseval() {
  Outcome o;
  const std::vector<Lattice> lats{{1, 16, 16, kTwoPi, 1.0}, {2, 8, 32, 3.0, 2.0}, {3, 4, 8, 1.0, 5.0}};
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto g = random_grid(lats[i % 3], 500 + i);
    worst = std::max(worst, rel_diff(hnorm(g, AnisotropicIndex(0.0, 0.5)), l2_norm(g)));
  }
  o.require(worst <= 1e-12, "100 inputs, max relative gap " + fmt("%.3g", worst));
  return o;
}

// 3. Parabolicity and covering.
Outcome parabolicity() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto heat = heat_symbol(2);
  const auto pv = petrovskii_check(heat, 10000);
  o.require(pv.pass && pv.min_abs > 0.1, "heat: min |A| = " + fmt("%.6f", pv.min_abs));

  const auto back = petrovskii_check(heat_symbol(2, -1.0), 10000);
  o.require(!back.pass && back.min_abs < 1e-6,
            "backward heat fails, witness |A| = " + fmt("%.3g", back.min_abs));

  const auto frames = default_frames(2, 100);
  int balanced = 0;
  for (const auto& f : frames) {
    const auto rs = root_split(zeta_polynomial(heat, f));
    if (rs.plus.size() == 1 && rs.minus.size() == 1) ++balanced;
  }
  o.require(balanced == static_cast<int>(frames.size()),
            "heat root split 1/1 on " + std::to_string(balanced) + "/" + std::to_string(frames.size()) + " frames");

  const std::vector<BoundarySymbol> dir{dirichlet(2)}, neu{neumann(2)}, tan{tangential(2)};
  const auto cd = covering_check(heat, dir, frames);
  o.require(cd.pass && cd.min_singular > 0.1, "Dirichlet: smallest singular value " + fmt("%.6f", cd.min_singular));
  const auto cn = covering_check(heat, neu, frames);
  o.require(cn.pass && cn.min_singular > 0.1, "Neumann: smallest singular value " + fmt("%.6f", cn.min_singular));
  const auto ct = covering_check(heat, tan, frames);
  const bool at_axis = ct.witness.xi_tan[0] == 0.0 && ct.witness.xi_tan[1] == 0.0 && ct.witness.p == Complex(1.0);
  o.require(!ct.pass && at_axis, "tangential-only fails, witness xi_tan = 0, p = 1");

  const auto bi = biharmonic_symbol(2);
  const auto bv = petrovskii_check(bi, 10000);
  o.require(bv.pass, "biharmonic: min |A| = " + fmt("%.6f", bv.min_abs));
  int bi_balanced = 0;
  for (const auto& f : frames) {
    const auto rs = root_split(zeta_polynomial(bi, f));
    if (rs.plus.size() == 2 && rs.minus.size() == 2) ++bi_balanced;
  }
  o.require(bi_balanced == static_cast<int>(frames.size()),
            "biharmonic root split 2/2 on " + std::to_string(bi_balanced) + " frames");
  const double secs = seconds_since(t0);
  o.require(secs < 10.0, "runtime " + fmt("%.2f", secs) + " s < 10 s");
  return o;
}

// 4. Threshold regularity.
Outcome sigma0_examples() {
  Outcome o;
  const std::vector<int> a{0}, b{0, 1}, c{4};
  o.require(sigma0(1, 1, a) == 2, "(m=1, b=1, [0]) -> " + std::to_string(sigma0(1, 1, a)));
  o.require(sigma0(2, 1, b) == 4, "(m=2, b=1, [0,1]) -> " + std::to_string(sigma0(2, 1, b)));
  o.require(sigma0(2, 1, c) == 6, "(m=2, b=1, [4]) -> " + std::to_string(sigma0(2, 1, c)));
  return o;
}

// 5. Periodic model problem.
Outcome model_problem() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const double L_t = kTwoPi;
  const double tau = L_t / 4.0;
  const auto op = PeriodicParabolicOperator::heat(2, kTwoPi, tau);
  const Lattice coarse{2, 16, 32, kTwoPi, L_t};
  const Lattice timefine{2, 16, 64, kTwoPi, L_t};
  const Lattice fine{2, 32, 64, kTwoPi, L_t};

  double worst = 0.0;
  double min_rate = 1e300;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const double r1 = round_trip_residual(op, band_limited_source(coarse, tau, 2, 3, seed));
    const double r2 = round_trip_residual(op, band_limited_source(timefine, tau, 2, 3, seed));
    worst = std::max(worst, r1);
    min_rate = std::min(min_rate, r1 / r2);
  }
  o.require(worst <= 1e-3, "round-trip residual on 16x16x32: " + fmt("%.4g", worst) + " (<= 1e-3 required)");
  o.require(min_rate >= 3.6, "residual improvement under time doubling: " + fmt("%.3f", min_rate) + "x");

  for (const auto& phi : {PhiFunction::constant_one(), PhiFunction::log_power({1.0})}) {
    std::vector<double> spread;
    for (const auto& L : {coarse, fine}) {
      std::vector<GridFunction> ens;
      for (std::uint64_t seed = 0; seed < 100; ++seed) ens.push_back(band_limited_source(L, tau, 2, 3, seed));
      const auto r = two_sided_ratio(op, ens, 4.0, phi);
      spread.push_back(r.c2_hat / r.c1_hat);
    }
    const double change = std::max(spread[0] / spread[1], spread[1] / spread[0]);
    const std::string name = phi.is_constant_one() ? "phi = 1" : "phi = log";
    o.require(std::isfinite(spread[0]) && std::isfinite(spread[1]) && change < 2.0,
              name + ": c2/c1 = " + fmt("%.4f", spread[0]) + " -> " + fmt("%.4f", spread[1]));
  }
  const double secs = seconds_since(t0);
  o.require(secs < 60.0, "runtime " + fmt("%.1f", secs) + " s < 60 s");
  return o;
}

// 6. Embedding criterion and its sharpness.
Outcome embedding() {
  Outcome o;
  std::vector<PhiFunction> phis{PhiFunction::constant_one()};
  for (const auto& q : std::vector<std::vector<double>>{{0.4}, {0.5}, {0.6}, {0.5, 0.4}, {0.5, 0.6}}) {
    phis.push_back(PhiFunction::log_power(q));
  }
  int agree = 0;
  for (const auto& phi : phis) {
    if (classify_partial_growth(phi).verdict == criterion_verdict(phi)) ++agree;
  }
  o.require(agree == static_cast<int>(phis.size()),
            "verdict matches quadrature growth for " + std::to_string(agree) + "/" + std::to_string(phis.size()));

  double worst = 0.0;
  for (int p : {0, 1}) {
    const double s = p + 1.0 + 1.0;  // b = 1, n = 2
    const std::vector<std::vector<int>> alphas{{0, 0}, {p, 0}};
    for (const auto& alpha : alphas) {
      for (const auto& phi : {PhiFunction::constant_one(), PhiFunction::log_power({1.0})}) {
        for (double R : {10.0, 30.0, 100.0}) {
          worst = std::max(worst, radial_reduction_check(s, 0.5, phi, alpha, 0, R).relerr);
        }
      }
    }
  }
  o.require(worst <= 1e-3, "radial reduction, max relerr " + fmt("%.3g", worst));

  const auto demo = sharpness_demo(PhiFunction::constant_one(), 0, sharpness_ladder(1, 1, 5));
  std::ostringstream sups;
  for (const auto& st : demo.ladder) sups << " " << fmt("%.3f", st.sup);
  o.require(demo.norm_bounded && demo.sup_increasing, "sharpness: norms bounded, sups" + sups.str());
  return o;
}

// 7. Support-constrained extension norm.
Outcome plus_norms() {
  Outcome o;
  const std::vector<Lattice> lattices{{1, 8, 8, kTwoPi, kTwoPi},
                                      {1, 4, 8, 3.0, 2.0},
                                      {2, 4, 4, kTwoPi, 1.0},
                                      {2, 8, 8, kTwoPi, kTwoPi},
                                      {1, 8, 4, 1.0, 1.0}};
  double worst = 0.0;
  int count = 0;
  std::mt19937_64 rng(42);
  for (std::size_t li = 0; li < lattices.size(); ++li) {
    const auto& L = lattices[li];
    const auto half = RegionMask::half_space(L);
    for (int ri = 0; ri < 4; ++ri) {
      RegionMask region = ri == 0 ? RegionMask::time_slab(L, 0.0, 0.3 * L.L_t)
                                  : RegionMask::time_slab(L, 0.1 * L.L_t, 0.45 * L.L_t);
      if (ri >= 2) {
        std::bernoulli_distribution keep(ri == 2 ? 0.5 : 0.2);
        auto v = half.t_nonneg_mask;
        for (auto& b : v) b = b && keep(rng) ? 1 : 0;
        v[L.time_origin() + 1] = 1;
        region = RegionMask(L, v, half.t_nonneg_mask);
      }
      const AnisotropicIndex idx(ri % 2 ? 1.0 : 2.5, 0.5,
                                 ri < 2 ? PhiFunction::constant_one() : PhiFunction::log_power({1.0, -0.5}));
      auto g = random_grid(L, 77 * li + ri);
      for (std::size_t i = 0; i < L.size(); ++i) {
        if (!region.t_nonneg_mask[i]) g.samples[i] = 0.0;
      }
      const auto u = restrict_to_v(g, region);
      std::vector<std::uint8_t> zero(L.size());
      for (std::size_t i = 0; i < L.size(); ++i) zero[i] = region.t_nonneg_mask[i] ? 0 : 1;
      const auto want = dense_least_norm(L, weight_array(L, idx), region.v_mask, zero, u);
      worst = std::max(worst, rel_diff(plus_norm(u, idx, region).norm, want.norm));
      ++count;
    }
  }
  o.require(worst <= 1e-8, std::to_string(count) + " instances vs dense oracle, max relerr " + fmt("%.3g", worst));

  const AnisotropicIndex idx(1.8, 0.5);  // s gamma = 0.9 > 1/2
  std::vector<double> vanish, violate;
  for (int n : {8, 16, 32}) {
    const Lattice L{1, n, n, kTwoPi, kTwoPi};
    const auto region = RegionMask::time_slab(L, 0.0, std::numbers::pi / 2);
    GridFunction gv(L), gc(L);
    for (std::size_t s = 0; s < L.spatial_size(); ++s) {
      const double x = L.spatial_multi_index(s)[0] * L.dx();
      for (int j = 0; j < L.n_t; ++j) {
        gv.at(s, j) = std::cos(x) * std::sin(L.time_at(j));
        gc.at(s, j) = std::cos(x) * std::cos(L.time_at(j));
      }
    }
    vanish.push_back(lemma51_equivalence_ratio(gv, idx, region));
    violate.push_back(lemma51_equivalence_ratio(gc, idx, region));
  }
  bool bounded = true, grows = true;
  for (std::size_t i = 1; i < vanish.size(); ++i) {
    const double q = vanish[i] / vanish[i - 1];
    bounded = bounded && q < 2.0 && q > 0.5;
    grows = grows && violate[i] > violate[i - 1];
  }
  o.require(bounded, "trace-vanishing ratios " + fmt("%.4f", vanish[0]) + ", " + fmt("%.4f", vanish[1]) +
                         ", " + fmt("%.4f", vanish[2]));
  o.require(grows, "trace-violating ratios " + fmt("%.4f", violate[0]) + ", " + fmt("%.4f", violate[1]) +
                       ", " + fmt("%.4f", violate[2]));
  return o;
}

// 8. Interpolation commutes with direct sums.
Outcome direct_sum() {
  Outcome o;
  const Lattice L{2, 8, 8, kTwoPi, 1.0};
  const Lattice L2{1, 16, 8, 3.0, 2.0};
  const auto p = build_psi(0.0, 0.4, 1.0, PhiFunction::log_power({1.0, -1.0}));
  auto random_pair = [](const Lattice& lat, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    std::vector<double> m0(lat.size()), m1(lat.size());
    for (std::size_t i = 0; i < m0.size(); ++i) {
      m0[i] = u(rng);
      m1[i] = m0[i] * (1.0 + 10.0 * u(rng));
    }
    return DiagonalPair(lat, m0, m1);
  };
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::vector<DiagonalPair> pairs{random_pair(L, 3 * seed + 200), random_pair(L2, 3 * seed + 201),
                                          DiagonalPair::sobolev(L, 0.0, 2.0, 0.5)};
    const std::vector<GridFunction> gs{random_grid(L, seed + 300), random_grid(L2, seed + 350),
                                       random_grid(L, seed + 399)};
    const auto r = direct_sum_interp_check(pairs, gs, p);
    worst = std::max(worst, std::abs(r.lhs - r.rhs) / r.rhs);
  }
  o.require(worst <= 1e-12, "20 three-summand instances, max |lhs - rhs| / rhs = " + fmt("%.3g", worst));
  return o;
}

std::pair<int, std::string> run_binary(const std::string& args) {
  const std::string cmd = std::string("\"") + HORMANDER_CLI_PATH + "\" " + args + " 2>/dev/null";
  std::string out;
  FILE* f = popen(cmd.c_str(), "r");
  if (!f) return {-1, out};
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), f)) > 0) out.append(buf.data(), n);
  const int status = pclose(f);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

// 9. Same seed, same report bytes, for every command.
Outcome determinism() {
  Outcome o;
  const std::string heat = std::string("\"") + HORMANDER_DATA_DIR + "/heat2d.json\"";
  const std::vector<std::string> commands{
      "check-parabolic " + heat + " --seed 5",
      "sigma0 --m 2 --b 1 --orders 0,1",
      "norm --seed 5 --phi [1]",
      "verify-lemma71 --seed 5 --phi [2,-1]",
      "model-verify " + heat + " --seed 5 --ensemble 10",
      "embed-check --n 1 --seed 5",
      "plus-norm --s 1.2 --seed 5 --region slab:0:1"};
  for (const auto& c : commands) {
    const auto a = run_binary(c);
    const auto b = run_binary(c);
    const std::string name = c.substr(0, c.find(' '));
    o.require(a.first == b.first && a.first != 2 && !a.second.empty() && a.second == b.second,
              name + ": " + std::to_string(a.second.size()) + " bytes, exit " + std::to_string(a.first));
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 interpolation norm equality", lemma71},
      {"2 Parseval", parseval},
      {"3 parabolicity suite", parabolicity},
      {"4 sigma0 examples", sigma0_examples},
      {"5 model problem", model_problem},
      {"6 embedding criterion and sharpness", embedding},
      {"7 plus_norm oracle and refinement", plus_norms},
      {"8 direct-sum equality", direct_sum},
      {"9 determinism", determinism}};
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    std::printf("%s criterion %s\n", o.pass ? "PASS" : "FAIL", name.c_str());
    for (const auto& n : o.notes) std::printf("    %s\n", n.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
