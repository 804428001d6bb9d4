#include <iostream>

#include "CLI11.hpp"

#include "hormander/cli.hpp"

namespace {

using hormander::cli::Command;
using hormander::cli::RunConfig;

void shared_flags(CLI::App* sub, RunConfig& c) {
  sub->add_option("--seed", c.seed, "Random seed");
  sub->add_option("--tol", c.tol, "Tolerance for the pass verdict");
  sub->add_option("--samples", c.samples, "Sample count");
  sub->add_option("--lattice", c.lattice, "Lattice KxK[xK]xT");
  sub->add_option("--Lx", c.L_x, "Spatial period");
  sub->add_option("--Lt", c.L_t, "Time period");
}

void index_flags(CLI::App* sub, RunConfig& c) {
  sub->add_option("--s", c.s, "Smoothness index");
  sub->add_option("--s0", c.s0, "Lower index");
  sub->add_option("--s1", c.s1, "Upper index");
  sub->add_option("--gamma", c.gamma, "Anisotropy gamma = 1/(2b)");
  sub->add_option("--phi", c.phi, "Function parameter as JSON");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anisotropic Hormander spaces: norms, parabolicity and embedding checks"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* cp = app.add_subcommand("check-parabolic", "Petrovskii and covering conditions");
  cp->add_option("file", cfg.inputs, "Operator definition (JSON)")->required();
  shared_flags(cp, cfg);

  auto* s0 = app.add_subcommand("sigma0", "Threshold regularity sigma0");
  s0->add_option("--m", cfg.m, "Half the spatial order")->required();
  s0->add_option("--b", cfg.b, "Parabolic weight b")->required();
  s0->add_option("--orders", cfg.orders, "Boundary orders m_j")->delimiter(',');

  auto* nm = app.add_subcommand("norm", "Anisotropic norms of a grid function");
  nm->add_option("file", cfg.inputs, "Grid files (binary or JSON)");
  shared_flags(nm, cfg);
  index_flags(nm, cfg);

  auto* vl = app.add_subcommand("verify-lemma71", "Interpolation norm against the Hormander norm");
  vl->add_option("file", cfg.inputs, "Grid files");
  shared_flags(vl, cfg);
  index_flags(vl, cfg);

  auto* mv = app.add_subcommand("model-verify", "Periodic model problem estimates");
  mv->add_option("file", cfg.inputs, "Operator definition (JSON)")->required();
  shared_flags(mv, cfg);
  mv->add_option("--sigma", cfg.sigma, "Regularity of the solution");
  mv->add_option("--phi", cfg.phi, "Function parameter as JSON");
  mv->add_option("--ensemble", cfg.ensemble, "Number of random sources");
  mv->add_option("--refine", cfg.refine, "Number of lattice doublings");
  mv->add_option("--eps", cfg.eps, "Extra decay of the inheritance source");

  auto* ec = app.add_subcommand("embed-check", "Embedding criterion and its sharpness");
  shared_flags(ec, cfg);
  ec->add_option("--phi", cfg.phi, "Function parameter as JSON");
  ec->add_option("--p", cfg.p, "Derivative order");
  ec->add_option("--b", cfg.b, "Parabolic weight b");
  ec->add_option("--n", cfg.n, "Spatial dimension");

  auto* pn = app.add_subcommand("plus-norm", "Factor norm over extensions supported in t >= 0");
  pn->add_option("file", cfg.inputs, "Grid files, optionally with a mask section");
  shared_flags(pn, cfg);
  index_flags(pn, cfg);
  pn->add_option("--region", cfg.region, "half or slab:t_lo:t_hi");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (auto* sub : app.get_subcommands()) {
    cfg.command = hormander::cli::parse_command(sub->get_name());
  }
  const auto result = hormander::cli::run(cfg);
  std::cout << result.report;
  std::cerr << result.diagnostics;
  return result.exit_code;
}
