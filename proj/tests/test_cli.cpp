#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <sys/wait.h>

#include "doctest.h"

#include "hormander/cli.hpp"
#include "hormander/errors.hpp"
#include "hormander/io.hpp"

using namespace hormander;
using namespace hormander::cli;
using nlohmann::json;

namespace {

const std::string kHeat = std::string(HORMANDER_DATA_DIR) + "/heat2d.json";

struct Proc {
  int code = -1;
  std::string out;
};

// Runs the installed binary through the shell; stderr is discarded.
Proc run_binary(const std::string& args) {
  const std::string cmd = std::string("\"") + HORMANDER_CLI_PATH + "\" " + args + " 2>/dev/null";
  Proc p;
  FILE* f = popen(cmd.c_str(), "r");
  REQUIRE(f != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), f)) > 0) p.out.append(buf.data(), n);
  const int status = pclose(f);
  p.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return p;
}

std::string temp_file(const std::string& name, const std::string& text) {
  const auto path = (std::filesystem::temp_directory_path() / ("hormander_cli_" + name)).string();
  std::ofstream(path, std::ios::binary) << text;
  return path;
}

// One representative configuration per command, small enough for a unit test.
RunConfig config_for(Command c) {
  RunConfig cfg;
  cfg.command = c;
  cfg.seed = 7;
  switch (c) {
    case Command::kCheckParabolic: cfg.inputs = {kHeat}; break;
    case Command::kSigma0: cfg.orders = {0}; break;
    case Command::kNorm: cfg.phi = "[1]"; break;
    case Command::kVerifyLemma71: cfg.phi = "[1]"; break;
    case Command::kModelVerify:
      cfg.inputs = {kHeat};
      cfg.ensemble = 3;
      break;
    case Command::kEmbedCheck: cfg.n = 1; break;
    case Command::kPlusNorm: cfg.s = 1.2; break;
  }
  return cfg;
}

}  // namespace

TEST_CASE("command names round trip") {
  for (int i = 0; i < 7; ++i) {
    const auto c = static_cast<Command>(i);
    CHECK(parse_command(command_name(c)) == c);
  }
  CHECK_THROWS_AS(parse_command("frobnicate"), ArgumentError);
}

TEST_CASE("lattice spec") {
  const auto L = parse_lattice_spec("16x16x32", 1.0, 2.0);
  CHECK(L.k == 2);
  CHECK(L.n_x == 16);
  CHECK(L.n_t == 32);
  CHECK(L.L_t == 2.0);
  CHECK(parse_lattice_spec("8x4", 1.0, 1.0).k == 1);
  CHECK_THROWS_AS(parse_lattice_spec("8x16x32", 1.0, 1.0), ArgumentError);
  CHECK_THROWS_AS(parse_lattice_spec("8xax4", 1.0, 1.0), ArgumentError);
  CHECK_THROWS_AS(parse_lattice_spec("12x8", 1.0, 1.0), ArgumentError);
}

TEST_CASE("every library operation appears in some report") {
  std::map<Command, json> reports;
  for (const auto& entry : coverage_table()) {
    if (!reports.count(entry.command)) {
      const auto res = run(config_for(entry.command));
      INFO((std::string(command_name(entry.command)) + " " + res.diagnostics));
      REQUIRE(res.exit_code != 2);
      reports[entry.command] = json::parse(res.report);
    }
    INFO((std::string(entry.operation) + " at " + entry.report_pointer));
    CHECK(reports[entry.command].contains(json::json_pointer(entry.report_pointer)));
  }
  CHECK(reports.size() == 7);
}

TEST_CASE("same seed, same bytes") {
  for (int i = 0; i < 7; ++i) {
    const auto cfg = config_for(static_cast<Command>(i));
    const auto a = run(cfg);
    const auto b = run(cfg);
    CHECK(a.exit_code == b.exit_code);
    CHECK(a.report == b.report);
    CHECK_FALSE(a.report.empty());
  }
}

TEST_CASE("seed matters where randomness is used") {
  auto cfg = config_for(Command::kNorm);
  const auto a = run(cfg);
  cfg.seed = 8;
  CHECK(run(cfg).report != a.report);
}

TEST_CASE("sigma0 report") {
  RunConfig cfg;
  cfg.command = Command::kSigma0;
  cfg.m = 1;
  cfg.b = 1;
  cfg.orders = {0};
  const auto res = run(cfg);
  CHECK(res.exit_code == 0);
  CHECK(json::parse(res.report) == json{{"sigma0", 2}});
  cfg.m = 2;
  cfg.orders = {4};
  CHECK(json::parse(run(cfg).report)["sigma0"] == 6);
}

TEST_CASE("binary exit codes") {
  auto p = run_binary("sigma0 --m 1 --b 1 --orders 0");
  CHECK(p.code == 0);
  CHECK(json::parse(p.out) == json{{"sigma0", 2}});

  p = run_binary("check-parabolic \"" + kHeat + "\"");
  CHECK(p.code == 0);
  CHECK(json::parse(p.out)["verdict"] == "pass");

  const auto backward = temp_file("backward.json", R"({
    "n": 2, "b": 1, "m": 1,
    "A": [{"alpha": [0, 0], "beta": 1, "re": -1, "im": 0},
          {"alpha": [2, 0], "beta": 0, "re": 1, "im": 0},
          {"alpha": [0, 2], "beta": 0, "re": 1, "im": 0}],
    "B": [{"m_j": 0, "coeffs": [{"alpha": [0, 0], "beta": 0, "re": 1, "im": 0}]}]
  })");
  p = run_binary("check-parabolic \"" + backward + "\"");
  CHECK(p.code == 1);
  CHECK(json::parse(p.out)["verdict"] == "fail");

  const auto broken = temp_file("broken.json", "{\"n\": 2, \"A\": [");
  CHECK(run_binary("check-parabolic \"" + broken + "\"").code == 2);
  CHECK(run_binary("sigma0 --m 1").code == 2);
  CHECK(run_binary("no-such-command").code == 2);
  CHECK(run_binary("norm --lattice 12x12x8").code == 2);
  std::filesystem::remove(backward);
  std::filesystem::remove(broken);
}

TEST_CASE("binary output is byte-identical across runs") {
  for (const char* args : {"norm --seed 3 --phi [1]", "verify-lemma71 --seed 3",
                           "plus-norm --s 1.2 --seed 3 --region slab:0:1"}) {
    const auto a = run_binary(args);
    const auto b = run_binary(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }
}
