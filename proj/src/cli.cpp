#include "hormander/cli.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "hormander/class_m.hpp"
#include "hormander/embedding.hpp"
#include "hormander/errors.hpp"
#include "hormander/interpolation.hpp"
#include "hormander/io.hpp"
#include "hormander/model_problem.hpp"
#include "hormander/parabolicity.hpp"
#include "hormander/plus_spaces.hpp"
#include "hormander/spectra.hpp"

namespace hormander::cli {

namespace {

using io::json;

constexpr std::array<const char*, 7> kNames = {
    "check-parabolic", "sigma0", "norm", "verify-lemma71", "model-verify", "embed-check",
    "plus-norm"};

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json complex_list(std::span<const Complex> zs) {
  json arr = json::array();
  for (const auto& z : zs) arr.push_back(complex_json(z));
  return arr;
}

double default_L_t(const RunConfig& c) { return c.L_t.value_or(2.0 * std::numbers::pi); }

Lattice config_lattice(const RunConfig& c, const std::string& fallback) {
  return parse_lattice_spec(c.lattice.value_or(fallback), c.L_x, default_L_t(c));
}

GridFunction random_grid(const Lattice& lat, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  GridFunction g(lat);
  for (auto& v : g.samples) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    v = Complex(re, im);
  }
  return g;
}

std::vector<GridFunction> input_grids(const RunConfig& c, const std::string& fallback,
                                      int default_count, std::optional<RegionMask>* mask) {
  std::vector<GridFunction> out;
  for (const auto& path : c.inputs) {
    auto file = io::read_grid_file(path);
    if (mask != nullptr && file.mask && !mask->has_value()) *mask = file.mask;
    out.push_back(std::move(file.grid));
  }
  if (out.empty()) {
    const Lattice lat = config_lattice(c, fallback);
    const int count = c.samples.value_or(default_count);
    if (count < 1) throw ArgumentError("--samples must be positive");
    for (int i = 0; i < count; ++i) out.push_back(random_grid(lat, c.seed + i));
  }
  return out;
}

json phi_report(const PhiFunction& phi) {
  const std::vector<double> rs = {1.0, std::numbers::e, 10.0, 1e3, 1e6, 1e12};
  json values = json::array();
  for (double r : rs) values.push_back(json::array({r, eval_phi(phi, r)}));
  return json{{"definition", io::to_json(phi)},
              {"values", values},
              {"slow_variation_defect", slow_variation_defect(phi, 2.0, rs)},
              {"epsilon_bound_constant", epsilon_bound_constant(phi, 0.1, 1e6)}};
}

RegionMask parse_region(const std::string& spec, const Lattice& lat) {
  if (spec == "half") return RegionMask::half_space(lat);
  if (spec.rfind("slab:", 0) == 0) {
    std::stringstream ss(spec.substr(5));
    std::string a;
    std::string b;
    if (std::getline(ss, a, ':') && std::getline(ss, b)) {
      try {
        return RegionMask::time_slab(lat, std::stod(a), std::stod(b));
      } catch (const std::logic_error&) {
      }
    }
  }
  throw ArgumentError("--region must be \"half\" or \"slab:t_lo:t_hi\", got \"" + spec + "\"");
}

json verdict_json(bool pass) { return pass ? "pass" : "fail"; }

// ---------------------------------------------------------------- commands

json check_parabolic(const RunConfig& c, bool& pass) {
  if (c.inputs.size() != 1) throw ArgumentError("check-parabolic needs one operator file");
  const auto op = io::operator_from_json(io::read_json_file(c.inputs[0]));
  op.a.validate();
  const int samples = c.samples.value_or(1000);
  json rep{{"command", "check-parabolic"},
           {"symbol", {{"n", op.a.n}, {"b", op.a.b}, {"m", op.a.m}, {"kappa", op.a.kappa()}}}};

  std::vector<double> zero(op.a.n, 0.0);
  std::vector<double> e1(op.a.n, 0.0);
  e1[0] = 1.0;
  rep["symbol_eval"] = {{"xi_0_p_1", complex_json(symbol_eval(op.a, zero, 1.0))},
                        {"xi_e1_p_0", complex_json(symbol_eval(op.a, e1, 0.0))}};

  auto petrovskii_json = [](const PetrovskiiVerdict& v) {
    return json{{"pass", v.pass},
                {"min_abs", v.min_abs},
                {"threshold", kPetrovskiiThreshold},
                {"witness_xi", v.witness_xi},
                {"witness_p", complex_json(v.witness_p)},
                {"witness_symbol", v.witness_symbol},
                {"evaluations", v.evaluations}};
  };
  const auto pv = petrovskii_check(op.a, samples);
  rep["petrovskii"] = petrovskii_json(pv);
  pass = pv.pass;
  if (!op.a_samples.empty()) {
    const auto fv = petrovskii_check(op.a_samples, samples);
    rep["petrovskii_frozen"] = petrovskii_json(fv);
    pass = pass && fv.pass;
  }

  const auto frames =
      op.frames.empty() ? default_frames(op.a.n, std::max(1, samples / 10)) : op.frames;
  json first{{"frame", io::to_json(frames[0])}};
  try {
    const auto poly = zeta_polynomial(op.a, frames[0]);
    first["zeta_polynomial"] = complex_list(poly);
    const auto split = root_split(poly);
    first["roots_plus"] = complex_list(split.plus);
    first["roots_minus"] = complex_list(split.minus);
    first["plus_polynomial"] = complex_list(plus_polynomial(split.plus));
  } catch (const CoveringPreconditionError& e) {
    first["error"] = e.what();
    first["n_plus"] = e.n_plus();
    first["n_minus"] = e.n_minus();
  } catch (const DegenerateFrameError& e) {
    first["error"] = e.what();
  }
  rep["first_frame"] = first;

  if (!op.bs.empty()) {
    std::vector<int> orders;
    for (const auto& bsym : op.bs) orders.push_back(bsym.m_j);
    rep["sigma0"] = sigma0(op.a.m, op.a.b, orders);
    try {
      const auto cv = covering_check(op.a, op.bs, frames, c.tol.value_or(kCoveringRelTol));
      rep["covering"] = {{"pass", cv.pass},
                         {"min_singular", cv.min_singular},
                         {"worst_frame", cv.worst_frame},
                         {"witness", io::to_json(cv.witness)},
                         {"frames_checked", cv.frames_checked}};
      pass = pass && cv.pass;
    } catch (const CoveringPreconditionError& e) {
      rep["covering"] = {{"pass", false}, {"error", e.what()}, {"n_plus", e.n_plus()},
                         {"n_minus", e.n_minus()}};
      pass = false;
    } catch (const DegenerateFrameError& e) {
      rep["covering"] = {{"pass", false}, {"error", e.what()}};
      pass = false;
    }
  }
  rep["verdict"] = verdict_json(pass);
  return rep;
}

json sigma0_command(const RunConfig& c, bool& pass) {
  pass = true;
  return json{{"sigma0", sigma0(c.m, c.b, c.orders)}};
}

json norm_command(const RunConfig& c, bool& pass) {
  const auto grids = input_grids(c, "16x16x16", 1, nullptr);
  const auto phi = io::phi_from_json(io::parse_text(c.phi));
  const AnisotropicIndex idx(c.s, c.gamma, phi);
  const AnisotropicIndex idx0(c.s0.value_or(c.s - 1.0), c.gamma, phi);
  const AnisotropicIndex idx1(c.s1.value_or(c.s + 1.0), c.gamma, phi);
  const AnisotropicIndex plain(0.0, c.gamma);
  const Lattice& lat = grids[0].lattice;

  json rows = json::array();
  double worst_parseval = 0.0;
  for (const auto& g : grids) {
    const auto f = dft(g);
    const auto back = idft(f);
    double roundtrip = 0.0;
    double energy = 0.0;
    for (std::size_t i = 0; i < g.samples.size(); ++i) {
      roundtrip = std::max(roundtrip, std::abs(back.samples[i] - g.samples[i]));
      energy += std::norm(f.coeffs[i]);
    }
    const double l2 = l2_norm(g);
    const double h0 = hnorm(g, plain);
    const double defect = l2 > 0.0 ? std::abs(h0 - l2) / l2 : std::abs(h0);
    worst_parseval = std::max(worst_parseval, defect);
    rows.push_back({{"hnorm", hnorm(g, idx)},
                    {"hnorm_spectral", hnorm(f, idx)},
                    {"l2", l2},
                    {"parseval_defect", defect},
                    {"spectral_energy", energy},
                    {"roundtrip_error", roundtrip}});
  }
  const auto w = weight_array(lat, idx);
  const auto [wmin, wmax] = std::minmax_element(w.begin(), w.end());
  const std::vector<double> xi1(lat.k, 1.0);
  const auto ec = embedding_constants(idx0, idx, idx1, lat);
  const double tol = c.tol.value_or(1e-12);
  pass = worst_parseval <= tol;
  return json{{"command", "norm"},
              {"lattice", io::to_json(lat)},
              {"index", {{"s", c.s}, {"gamma", c.gamma}, {"phi", io::to_json(phi)}}},
              {"grids", rows},
              {"weights",
               {{"min", *wmin},
                {"max", *wmax},
                {"r_gamma_at_unit", r_gamma(xi1, 1.0, c.gamma)},
                {"weight_at_unit", hormander_weight(idx, xi1, 1.0)}}},
              {"embedding_constants",
               {{"s0", idx0.s}, {"s1", idx1.s}, {"c_low", ec.c_low}, {"c_high", ec.c_high}}},
              {"phi", phi_report(phi)},
              {"verdict", verdict_json(pass)}};
}

json verify_lemma71_command(const RunConfig& c, bool& pass) {
  const auto grids = input_grids(c, "16x16x16", 10, nullptr);
  const auto phi = io::phi_from_json(io::parse_text(c.phi));
  const double s0 = c.s0.value_or(0.0);
  const double s1 = c.s1.value_or(2.0);
  const auto psi = build_psi(s0, c.s, s1, phi);
  const Lattice& lat = grids[0].lattice;
  const auto pair = DiagonalPair::sobolev(lat, s0, s1, c.gamma);
  const auto j = generating_operator(pair);
  const auto [jmin, jmax] = std::minmax_element(j.begin(), j.end());

  std::vector<double> ladder;
  for (int e = 2; e <= 12; ++e) ladder.push_back(std::pow(10.0, e));
  json psi_values = json::array();
  for (double r : {0.5, 1.0, 4.0, 100.0, 1e6}) psi_values.push_back(json::array({r, psi(r)}));

  json ratios = json::array();
  json norms = json::array();
  double worst = 0.0;
  for (const auto& g : grids) {
    if (!(g.lattice == lat)) throw ShapeError("all grids must share one lattice");
    const double rho = verify_lemma71(g, s0, c.s, s1, c.gamma, phi);
    ratios.push_back(rho);
    norms.push_back(interp_norm(g, pair, psi));
    worst = std::max(worst, std::abs(rho - 1.0));
  }

  // Direct sum over the grids as summands of one pair each.
  std::vector<DiagonalPair> pairs(grids.size(), pair);
  const auto ds = direct_sum_interp_check(pairs, grids, psi);
  const double ds_err = std::abs(ds.lhs - ds.rhs) / ds.rhs;

  // Subspace norm of the first grid cut to t >= 0, when small enough.
  json subspace;
  if (lat.n_t <= 64) {
    const auto region = RegionMask::half_space(lat);
    GridFunction cut = grids[0];
    for (std::size_t i = 0; i < cut.samples.size(); ++i) {
      if (!region.t_nonneg_mask[i]) cut.samples[i] = 0.0;
    }
    const auto sp = interp_subspace_norm(cut, region, std::max(0.0, s0), c.s, s1, c.gamma, phi);
    subspace = {{"lhs", sp.lhs}, {"rhs", sp.rhs}, {"ratio", sp.lhs / sp.rhs}};
  }

  const double tol = c.tol.value_or(1e-12);
  pass = worst <= tol && ds_err <= tol;
  return json{{"command", "verify-lemma71"},
              {"lattice", io::to_json(lat)},
              {"parameters",
               {{"s0", s0}, {"s", c.s}, {"s1", s1}, {"gamma", c.gamma}, {"phi", io::to_json(phi)}}},
              {"psi",
               {{"theta", psi.theta()},
                {"values", psi_values},
                {"regular_variation_index", regular_variation_index(psi, ladder)}}},
              {"generating_operator", {{"min", *jmin}, {"max", *jmax}}},
              {"ratios", ratios},
              {"interp_norms", norms},
              {"max_deviation", worst},
              {"direct_sum", {{"lhs", ds.lhs}, {"rhs", ds.rhs}, {"relerr", ds_err}}},
              {"subspace", subspace},
              {"tolerance", tol},
              {"verdict", verdict_json(pass)}};
}

json plus_norm_command(const RunConfig& c, bool& pass) {
  std::optional<RegionMask> mask;
  const auto grids = input_grids(c, "8x8x8", 1, &mask);
  const auto phi = io::phi_from_json(io::parse_text(c.phi));
  const AnisotropicIndex idx(c.s, c.gamma, phi);
  const Lattice& lat = grids[0].lattice;
  const RegionMask region = mask ? *mask : parse_region(c.region, lat);
  json rows = json::array();
  for (const auto& g : grids) {
    const auto u = restrict_to_v(g, region);
    const auto pn = plus_norm(u, idx, region);
    const auto fn = factor_norm(u, idx, region);
    json row{{"plus_norm", pn.norm},
             {"factor_norm", fn.norm},
             {"lemma51_ratio", lemma51_equivalence_ratio(g, idx, region)},
             {"regularized", pn.regularized || fn.regularized},
             {"min_rcond", std::min(pn.min_rcond, fn.min_rcond)}};
    try {
      row["trace_defect"] = trace_defect(g, c.gamma, c.s);
    } catch (const UnsupportedParameterError& e) {
      row["trace_defect"] = e.what();
    }
    rows.push_back(row);
  }
  pass = true;
  return json{{"command", "plus-norm"},
              {"lattice", io::to_json(lat)},
              {"index", {{"s", c.s}, {"gamma", c.gamma}, {"phi", io::to_json(phi)}}},
              {"region", mask ? "file" : c.region},
              {"v_count", region.v_count()},
              {"grids", rows},
              {"verdict", verdict_json(pass)}};
}

json model_verify_command(const RunConfig& c, bool& pass) {
  if (c.inputs.size() != 1) throw ArgumentError("model-verify needs one operator file");
  const auto file = io::operator_from_json(io::read_json_file(c.inputs[0]));
  const auto phi = io::phi_from_json(io::parse_text(c.phi));
  if (c.ensemble < 1) throw ArgumentError("--ensemble must be positive");
  if (c.refine < 0) throw ArgumentError("--refine must be nonnegative");
  const Lattice base = config_lattice(c, "16x16x32");

  PeriodicParabolicOperator op;
  op.symbol = file.a;
  op.lower_order = file.lower_order;
  op.L_x = file.L_x.value_or(base.L_x);
  op.tau = file.tau.value_or(base.L_t / 4.0);

  std::vector<Lattice> lattices{base};
  for (int r = 0; r < c.refine; ++r) {
    Lattice next = lattices.back();
    next.n_x *= 2;
    next.n_t *= 2;
    lattices.push_back(next);
  }

  json ladder = json::array();
  std::vector<double> spreads;
  double c1 = 0.0;
  double c2 = 0.0;
  for (std::size_t li = 0; li < lattices.size(); ++li) {
    Lattice lat = lattices[li];
    lat.L_x = op.L_x;
    std::vector<GridFunction> ens;
    for (int i = 0; i < c.ensemble; ++i) {
      ens.push_back(band_limited_source(lat, op.tau, 2, 3, c.seed + i));
    }
    const auto rb = two_sided_ratio(op, ens, c.sigma, phi);
    const double residual = round_trip_residual(op, ens[0]);
    if (li == 0) {
      c1 = rb.c1_hat;
      c2 = rb.c2_hat;
    }
    spreads.push_back(rb.c2_hat / rb.c1_hat);
    ladder.push_back({{"lattice", io::to_json(lat)},
                      {"c1_hat", rb.c1_hat},
                      {"c2_hat", rb.c2_hat},
                      {"spread", rb.c2_hat / rb.c1_hat},
                      {"residual", residual}});
  }
  double spread_change = 1.0;
  for (std::size_t i = 1; i < spreads.size(); ++i) {
    spread_change = std::max(spread_change, std::max(spreads[i] / spreads[i - 1],
                                                     spreads[i - 1] / spreads[i]));
  }
  pass = c1 > 0.0 && std::isfinite(c2) && spread_change < 2.0;

  json rep{{"command", "model-verify"},
           {"operator", io::to_json(file)},
           {"sigma", c.sigma},
           {"phi", io::to_json(phi)},
           {"tau", op.tau},
           {"ensemble", c.ensemble},
           {"c1_hat", c1},
           {"c2_hat", c2},
           {"spread_change", spread_change},
           {"ladder", ladder}};
  // Inheritance ladder: four space-only doublings from half the base size, so
  // the time profile of the source is resolved identically on every rung.
  std::vector<Lattice> lad;
  for (int r = 0; r < 4; ++r) {
    Lattice lat = base;
    lat.L_x = op.L_x;
    lat.n_x = std::max(4, base.n_x / 2) << r;
    lad.push_back(lat);
  }
  const auto inh = regularity_inheritance_check(op, c.sigma, phi, c.eps, lad);
  json steps = json::array();
  for (const auto& e : inh.ladder) {
    steps.push_back(
        {{"lattice", io::to_json(e.lattice)}, {"norm_f", e.norm_f}, {"norm_u", e.norm_u}});
  }
  rep["inheritance"] = {{"eps", c.eps}, {"ladder", steps}, {"growth_flagged", inh.growth_flagged}};
  pass = pass && !inh.growth_flagged;
  rep["verdict"] = verdict_json(pass);
  return rep;
}

json embed_check_command(const RunConfig& c, bool& pass) {
  const auto phi = io::phi_from_json(io::parse_text(c.phi));
  if (c.n < 1 || c.n > 3) throw ArgumentError("--n must be 1, 2 or 3");
  if (c.b < 1 || c.p < 0) throw ArgumentError("--b must be positive and --p nonnegative");
  const auto verdict = criterion_verdict(phi);
  json partials = json::array();
  for (double R : {1e3, 1e6, 1e9, 1e12}) {
    partials.push_back({{"R", R}, {"value", criterion_partial(phi, R)}});
  }
  const auto growth = classify_partial_growth(phi);

  const double gamma = 1.0 / (2.0 * c.b);
  const double s = c.p + c.b + 0.5 * c.n;
  std::vector<int> alpha(c.n, 0);
  alpha[0] = c.p;
  json ladder = json::array();
  const int steps = c.n == 1 ? 5 : (c.n == 2 ? 4 : 3);
  for (const auto& lat : sharpness_ladder(c.n, c.b, steps)) {
    ladder.push_back({{"lattice", io::to_json(lat)},
                      {"weight_sum", derivative_weight_sum(lat, s, gamma, phi, alpha, 0)}});
  }

  const double tol = c.tol.value_or(1e-3);
  json radial = json::array();
  bool radial_ok = true;
  for (double R : {10.0, 30.0, 100.0}) {
    const auto rc = radial_reduction_check(s, gamma, phi, alpha, 0, R);
    radial_ok = radial_ok && rc.relerr <= tol;
    radial.push_back({{"R", R}, {"lhs", rc.lhs}, {"rhs", rc.rhs}, {"relerr", rc.relerr},
                      {"calibration", rc.calibration}});
  }

  json rep{{"command", "embed-check"},
           {"phi", io::to_json(phi)},
           {"p", c.p},
           {"b", c.b},
           {"n", c.n},
           {"s", s},
           {"verdict", to_string(verdict)},
           {"partial_integrals", partials},
           {"growth",
            {{"level", growth.level},
             {"ladder", growth.ladder},
             {"partials", growth.partials},
             {"classification", to_string(growth.verdict)}}},
           {"ladder", ladder},
           {"radial", radial}};
  if (verdict == CriterionVerdict::kDiverges) {
    const auto demo = sharpness_demo(phi, c.p, sharpness_ladder(c.n, c.b, c.n == 1 ? 5 : 3), c.b);
    json steps_json = json::array();
    for (const auto& st : demo.ladder) {
      steps_json.push_back(
          {{"lattice", io::to_json(st.lattice)}, {"norm", st.norm}, {"sup", st.sup}});
    }
    rep["sharpness"] = {{"ladder", steps_json},
                        {"norm_bounded", demo.norm_bounded},
                        {"sup_increasing", demo.sup_increasing}};
  }
  pass = growth.verdict == verdict && radial_ok;
  rep["agreement"] = verdict_json(pass);
  return rep;
}

constexpr CoverageEntry kCoverage[] = {
    {"build_phi", Command::kNorm, "/phi/definition"},
    {"eval_phi", Command::kNorm, "/phi/values"},
    {"slow_variation_defect", Command::kNorm, "/phi/slow_variation_defect"},
    {"epsilon_bound_constant", Command::kNorm, "/phi/epsilon_bound_constant"},
    {"r_gamma", Command::kNorm, "/weights/r_gamma_at_unit"},
    {"hormander_weight", Command::kNorm, "/weights/weight_at_unit"},
    {"dft", Command::kNorm, "/grids/0/spectral_energy"},
    {"idft", Command::kNorm, "/grids/0/roundtrip_error"},
    {"hnorm", Command::kNorm, "/grids/0/hnorm"},
    {"embedding_constants", Command::kNorm, "/embedding_constants/c_low"},
    {"restrict_to_v", Command::kPlusNorm, "/v_count"},
    {"plus_norm", Command::kPlusNorm, "/grids/0/plus_norm"},
    {"factor_norm", Command::kPlusNorm, "/grids/0/factor_norm"},
    {"trace_defect", Command::kPlusNorm, "/grids/0/trace_defect"},
    {"lemma51_equivalence_ratio", Command::kPlusNorm, "/grids/0/lemma51_ratio"},
    {"build_psi", Command::kVerifyLemma71, "/psi/values"},
    {"regular_variation_index", Command::kVerifyLemma71, "/psi/regular_variation_index"},
    {"generating_operator", Command::kVerifyLemma71, "/generating_operator/max"},
    {"interp_norm", Command::kVerifyLemma71, "/interp_norms"},
    {"verify_lemma71", Command::kVerifyLemma71, "/ratios"},
    {"interp_subspace_norm", Command::kVerifyLemma71, "/subspace/ratio"},
    {"direct_sum_interp_check", Command::kVerifyLemma71, "/direct_sum/relerr"},
    {"symbol_eval", Command::kCheckParabolic, "/symbol_eval/xi_0_p_1"},
    {"petrovskii_check", Command::kCheckParabolic, "/petrovskii/pass"},
    {"zeta_polynomial", Command::kCheckParabolic, "/first_frame/zeta_polynomial"},
    {"root_split", Command::kCheckParabolic, "/first_frame/roots_plus"},
    {"plus_polynomial", Command::kCheckParabolic, "/first_frame/plus_polynomial"},
    {"covering_check", Command::kCheckParabolic, "/covering/pass"},
    {"sigma0", Command::kSigma0, "/sigma0"},
    {"solve_periodic", Command::kModelVerify, "/ladder/0/residual"},
    {"apply_operator", Command::kModelVerify, "/ladder/0/residual"},
    {"two_sided_ratio", Command::kModelVerify, "/c1_hat"},
    {"regularity_inheritance_check", Command::kModelVerify, "/inheritance/growth_flagged"},
    {"criterion_verdict", Command::kEmbedCheck, "/verdict"},
    {"criterion_partial", Command::kEmbedCheck, "/partial_integrals"},
    {"derivative_weight_sum", Command::kEmbedCheck, "/ladder/0/weight_sum"},
    {"radial_reduction_check", Command::kEmbedCheck, "/radial/0/relerr"},
    {"sharpness_demo", Command::kEmbedCheck, "/sharpness/ladder"},
};

}  // namespace

const char* command_name(Command c) { return kNames[static_cast<std::size_t>(c)]; }

Command parse_command(const std::string& name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (name == kNames[i]) return static_cast<Command>(i);
  }
  throw ArgumentError("unknown command \"" + name + "\"");
}

Lattice parse_lattice_spec(const std::string& spec, double L_x, double L_t) {
  std::vector<int> parts;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, 'x')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (tok.empty() || used != tok.size()) {
      throw ArgumentError("lattice spec must look like 16x16x32, got \"" + spec + "\"");
    }
    parts.push_back(v);
  }
  if (parts.size() < 2) throw ArgumentError("lattice spec needs at least one spatial axis and time");
  for (std::size_t i = 1; i + 1 < parts.size(); ++i) {
    if (parts[i] != parts[0]) throw ArgumentError("spatial lattice sizes must agree");
  }
  Lattice lat{static_cast<int>(parts.size()) - 1, parts[0], parts.back(), L_x, L_t};
  lat.validate();
  return lat;
}

std::span<const CoverageEntry> coverage_table() { return kCoverage; }

RunResult run(const RunConfig& config) {
  RunResult out;
  bool pass = false;
  try {
    json rep;
    switch (config.command) {
      case Command::kCheckParabolic: rep = check_parabolic(config, pass); break;
      case Command::kSigma0: rep = sigma0_command(config, pass); break;
      case Command::kNorm: rep = norm_command(config, pass); break;
      case Command::kVerifyLemma71: rep = verify_lemma71_command(config, pass); break;
      case Command::kModelVerify: rep = model_verify_command(config, pass); break;
      case Command::kEmbedCheck: rep = embed_check_command(config, pass); break;
      case Command::kPlusNorm: rep = plus_norm_command(config, pass); break;
    }
    out.report = io::format_report(rep);
    out.exit_code = pass ? 0 : 1;
  } catch (const ParseError& e) {
    out.exit_code = 2;
    out.diagnostics = std::string("parse error: ") + e.what() + "\n";
  } catch (const ArgumentError& e) {
    out.exit_code = 2;
    out.diagnostics = std::string("usage error: ") + e.what() + "\n";
  } catch (const ShapeError& e) {
    out.exit_code = 2;
    out.diagnostics = std::string("usage error: ") + e.what() + "\n";
  } catch (const UnsupportedParameterError& e) {
    out.exit_code = 2;
    out.diagnostics = std::string("unsupported: ") + e.what() + "\n";
  } catch (const StructuralError& e) {
    out.exit_code = 2;
    out.diagnostics = std::string("invalid operator: ") + e.what() + "\n";
  } catch (const Error& e) {
    out.exit_code = 1;
    out.report = io::format_report(
        json{{"command", command_name(config.command)}, {"verdict", "fail"}, {"error", e.what()}});
    out.diagnostics = std::string("error: ") + e.what() + "\n";
  }
  return out;
}

}  // namespace hormander::cli
