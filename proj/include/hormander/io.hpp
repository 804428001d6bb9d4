#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hormander/class_m.hpp"
#include "hormander/lattice.hpp"
#include "hormander/parabolicity.hpp"
#include "hormander/plus_spaces.hpp"

namespace hormander::io {

using nlohmann::json;

// Report text: two-space indentation, every floating-point value printed with
// 17 significant digits, object keys sorted.
std::string format_report(const json& value);

// All parse failures (syntax, missing fields, wrong types) raise ParseError.
json parse_text(const std::string& text);
json read_json_file(const std::string& path);

json to_json(const Lattice& lattice);
Lattice lattice_from_json(const json& j);

// {"kind": "constant_one" | "log_power", "exponents": [...], "cutoff": c}.
// Also accepted: the number 1 (constant one) or a bare exponent array.
json to_json(const PhiFunction& phi);
PhiFunction phi_from_json(const json& j);

json to_json(const SymbolTerm& term);
SymbolTerm term_from_json(const json& j);
json to_json(const BoundaryFrame& frame);
BoundaryFrame frame_from_json(const json& j);

// Operator definition file.
struct OperatorFile {
  PrincipalSymbol a;
  std::vector<BoundarySymbol> bs;
  std::vector<BoundaryFrame> frames;      // empty: use default_frames
  std::vector<PrincipalSymbol> a_samples; // frozen coefficients, optional
  std::vector<SymbolTerm> lower_order;    // model problem only
  std::optional<double> L_x;
  std::optional<double> tau;
};

OperatorFile operator_from_json(const json& j);
json to_json(const OperatorFile& op);

// {"lattice": {...}, "re": [...], "im": [...]}
json to_json(const GridFunction& g);
GridFunction grid_from_json(const json& j);

// Binary grid file: 32-byte little-endian header "HGRD", u32 k, n_x, n_t,
// f64 L_x, L_t, then complex64 samples (f32 re, f32 im) in lattice order.
// An optional mask section follows: "HMSK" and the V and t >= 0 masks, each
// bit-packed least significant bit first and padded to whole bytes.
void write_grid_binary(const std::string& path, const GridFunction& g,
                       const RegionMask* mask = nullptr);

struct GridFile {
  GridFunction grid;
  std::optional<RegionMask> mask;
};

// Reads either format, deciding by the leading magic bytes.
GridFile read_grid_file(const std::string& path);
void write_grid_json(const std::string& path, const GridFunction& g);

}  // namespace hormander::io
