#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hormander/lattice.hpp"

namespace hormander::cli {

enum class Command {
  kCheckParabolic,
  kSigma0,
  kNorm,
  kVerifyLemma71,
  kModelVerify,
  kEmbedCheck,
  kPlusNorm,
};

const char* command_name(Command c);
// Throws ArgumentError for an unknown name.
Command parse_command(const std::string& name);

struct RunConfig {
  Command command = Command::kSigma0;
  std::vector<std::string> inputs;  // positional file arguments
  std::uint64_t seed = 0;
  std::optional<double> tol;
  std::optional<int> samples;
  std::optional<std::string> lattice;  // "KxK[xK]xT"
  double L_x = 6.283185307179586;
  std::optional<double> L_t;

  // Norm-type commands.
  double s = 1.0;
  std::optional<double> s0;
  std::optional<double> s1;
  double gamma = 0.5;
  std::string phi = "1";  // JSON text
  std::string region = "half";  // "half" or "slab:t_lo:t_hi"

  // sigma0.
  int m = 1;
  int b = 1;
  std::vector<int> orders;

  // model-verify.
  double sigma = 4.0;
  int ensemble = 20;
  int refine = 1;
  double eps = 0.5;

  // embed-check.
  int p = 0;
  int n = 2;
};

struct RunResult {
  int exit_code = 0;        // 0 pass, 1 fail, 2 usage or parse error
  std::string report;       // JSON for standard output (may be empty)
  std::string diagnostics;  // text for standard error
};

RunResult run(const RunConfig& config);

// "16x16x32" -> k = 2, n_x = 16, n_t = 32. Spatial sizes must agree.
Lattice parse_lattice_spec(const std::string& spec, double L_x, double L_t);

// Which report key exposes each library operation.
struct CoverageEntry {
  const char* operation;
  Command command;
  const char* report_pointer;  // JSON pointer into the report
};
std::span<const CoverageEntry> coverage_table();

}  // namespace hormander::cli
