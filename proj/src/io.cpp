#include "hormander/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "hormander/errors.hpp"

namespace hormander::io {

namespace {

void emit(const json& v, int indent, std::string& out) {
  const std::string pad(indent, ' ');
  const std::string inner(indent + 2, ' ');
  switch (v.type()) {
    case json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += inner + json(it.key()).dump() + ": ";
        emit(it.value(), indent + 2, out);
      }
      out += "\n" + pad + "}";
      return;
    }
    case json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      bool scalars = std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_primitive(); });
      if (scalars) {
        out += "[";
        bool first = true;
        for (const auto& e : v) {
          if (!first) out += ", ";
          first = false;
          emit(e, indent + 2, out);
        }
        out += "]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& e : v) {
        if (!first) out += ",\n";
        first = false;
        out += inner;
        emit(e, indent + 2, out);
      }
      out += "\n" + pad + "]";
      return;
    }
    case json::value_t::number_float: {
      const double d = v.get<double>();
      if (!std::isfinite(d)) {
        out += std::isnan(d) ? "\"nan\"" : (d > 0 ? "\"inf\"" : "\"-inf\"");
        return;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", d);
      out += buf;
      return;
    }
    default:
      out += v.dump();
  }
}

template <class T>
T get_field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(std::string("missing field \"") + key + "\"");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("field \"") + key + "\": " + e.what());
  }
}

template <class T>
void put_le(std::ostream& os, T v) {
  static_assert(std::endian::native == std::endian::little, "little-endian host required");
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get_le(const std::string& buf, std::size_t& pos) {
  if (pos + sizeof(T) > buf.size()) throw ParseError("grid file truncated");
  T v;
  std::memcpy(&v, buf.data() + pos, sizeof v);
  pos += sizeof v;
  return v;
}

std::string read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void write_bits(std::ostream& os, const std::vector<std::uint8_t>& mask) {
  std::vector<char> bytes((mask.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) bytes[i / 8] |= static_cast<char>(1u << (i % 8));
  }
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::vector<std::uint8_t> read_bits(const std::string& buf, std::size_t& pos, std::size_t n) {
  const std::size_t nbytes = (n + 7) / 8;
  if (pos + nbytes > buf.size()) throw ParseError("mask section truncated");
  std::vector<std::uint8_t> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = (static_cast<unsigned char>(buf[pos + i / 8]) >> (i % 8)) & 1u;
  }
  pos += nbytes;
  return out;
}

}  // namespace

std::string format_report(const json& value) {
  std::string out;
  emit(value, 0, out);
  out += "\n";
  return out;
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

json read_json_file(const std::string& path) { return parse_text(read_all(path)); }

json to_json(const Lattice& lattice) {
  return json{{"k", lattice.k}, {"n_x", lattice.n_x}, {"n_t", lattice.n_t},
              {"L_x", lattice.L_x}, {"L_t", lattice.L_t}};
}

Lattice lattice_from_json(const json& j) {
  Lattice lat{get_field<int>(j, "k"), get_field<int>(j, "n_x"), get_field<int>(j, "n_t"),
              get_field<double>(j, "L_x"), get_field<double>(j, "L_t")};
  lat.validate();
  return lat;
}

json to_json(const PhiFunction& phi) {
  if (phi.is_constant_one()) return json{{"kind", "constant_one"}};
  return json{{"kind", "log_power"}, {"exponents", phi.exponents()}, {"cutoff", phi.cutoff()}};
}

PhiFunction phi_from_json(const json& j) {
  if (j.is_number()) {
    if (j.get<double>() != 1.0) throw ParseError("a numeric function parameter must be 1");
    return PhiFunction::constant_one();
  }
  if (j.is_array()) {
    try {
      return PhiFunction::log_power(j.get<std::vector<double>>());
    } catch (const json::exception& e) {
      throw ParseError(std::string("exponent list: ") + e.what());
    }
  }
  const auto kind = get_field<std::string>(j, "kind");
  if (kind == "constant_one") return PhiFunction::constant_one();
  if (kind == "log_power") {
    const double cutoff = j.contains("cutoff") ? get_field<double>(j, "cutoff") : 0.0;
    return PhiFunction::log_power(get_field<std::vector<double>>(j, "exponents"), cutoff);
  }
  throw ParseError("unknown function parameter kind \"" + kind + "\"");
}

json to_json(const SymbolTerm& term) {
  return json{{"alpha", term.alpha}, {"beta", term.beta}, {"re", term.coeff.real()},
              {"im", term.coeff.imag()}};
}

SymbolTerm term_from_json(const json& j) {
  SymbolTerm t;
  t.alpha = get_field<std::vector<int>>(j, "alpha");
  t.beta = j.contains("beta") ? get_field<int>(j, "beta") : 0;
  const double re = j.contains("re") ? get_field<double>(j, "re") : 0.0;
  const double im = j.contains("im") ? get_field<double>(j, "im") : 0.0;
  t.coeff = Complex(re, im);
  return t;
}

json to_json(const BoundaryFrame& frame) {
  return json{{"nu", frame.nu}, {"xi_tan", frame.xi_tan}, {"p_re", frame.p.real()},
              {"p_im", frame.p.imag()}};
}

BoundaryFrame frame_from_json(const json& j) {
  BoundaryFrame f;
  f.nu = get_field<std::vector<double>>(j, "nu");
  f.xi_tan = get_field<std::vector<double>>(j, "xi_tan");
  f.p = Complex(j.contains("p_re") ? get_field<double>(j, "p_re") : 0.0,
                j.contains("p_im") ? get_field<double>(j, "p_im") : 0.0);
  return f;
}

namespace {

std::vector<SymbolTerm> terms_from(const json& arr, const char* what) {
  if (!arr.is_array()) throw ParseError(std::string(what) + " must be an array");
  std::vector<SymbolTerm> out;
  for (const auto& t : arr) out.push_back(term_from_json(t));
  return out;
}

json terms_to(const std::vector<SymbolTerm>& terms) {
  json arr = json::array();
  for (const auto& t : terms) arr.push_back(to_json(t));
  return arr;
}

}  // namespace

OperatorFile operator_from_json(const json& j) {
  OperatorFile op;
  op.a.n = get_field<int>(j, "n");
  op.a.b = get_field<int>(j, "b");
  op.a.m = get_field<int>(j, "m");
  op.a.terms = terms_from(get_field<json>(j, "A"), "A");
  if (j.contains("B")) {
    for (const auto& bj : j.at("B")) {
      BoundarySymbol bs;
      bs.m_j = get_field<int>(bj, "m_j");
      bs.terms = terms_from(get_field<json>(bj, "coeffs"), "coeffs");
      op.bs.push_back(std::move(bs));
    }
  }
  if (j.contains("frames")) {
    for (const auto& fj : j.at("frames")) op.frames.push_back(frame_from_json(fj));
  }
  if (j.contains("A_samples")) {
    for (const auto& sj : j.at("A_samples")) {
      PrincipalSymbol s = op.a;
      s.terms = terms_from(sj, "A_samples entry");
      op.a_samples.push_back(std::move(s));
    }
  }
  if (j.contains("lower_order")) op.lower_order = terms_from(j.at("lower_order"), "lower_order");
  if (j.contains("L_x")) op.L_x = get_field<double>(j, "L_x");
  if (j.contains("tau")) op.tau = get_field<double>(j, "tau");
  return op;
}

json to_json(const OperatorFile& op) {
  json j{{"n", op.a.n}, {"b", op.a.b}, {"m", op.a.m}, {"A", terms_to(op.a.terms)}};
  json bs = json::array();
  for (const auto& b : op.bs) bs.push_back(json{{"m_j", b.m_j}, {"coeffs", terms_to(b.terms)}});
  j["B"] = bs;
  if (!op.frames.empty()) {
    json fr = json::array();
    for (const auto& f : op.frames) fr.push_back(to_json(f));
    j["frames"] = fr;
  }
  if (!op.a_samples.empty()) {
    json sm = json::array();
    for (const auto& s : op.a_samples) sm.push_back(terms_to(s.terms));
    j["A_samples"] = sm;
  }
  if (!op.lower_order.empty()) j["lower_order"] = terms_to(op.lower_order);
  if (op.L_x) j["L_x"] = *op.L_x;
  if (op.tau) j["tau"] = *op.tau;
  return j;
}

json to_json(const GridFunction& g) {
  std::vector<double> re(g.samples.size());
  std::vector<double> im(g.samples.size());
  for (std::size_t i = 0; i < g.samples.size(); ++i) {
    re[i] = g.samples[i].real();
    im[i] = g.samples[i].imag();
  }
  return json{{"lattice", to_json(g.lattice)}, {"re", re}, {"im", im}};
}

GridFunction grid_from_json(const json& j) {
  const Lattice lat = lattice_from_json(get_field<json>(j, "lattice"));
  const auto re = get_field<std::vector<double>>(j, "re");
  const auto im = j.contains("im") ? get_field<std::vector<double>>(j, "im")
                                   : std::vector<double>(re.size(), 0.0);
  if (re.size() != lat.size() || im.size() != lat.size()) {
    throw ParseError("grid sample count does not match the lattice");
  }
  std::vector<Complex> v(re.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = Complex(re[i], im[i]);
  return GridFunction(lat, std::move(v));
}

void write_grid_binary(const std::string& path, const GridFunction& g, const RegionMask* mask) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ArgumentError("cannot write " + path);
  os.write("HGRD", 4);
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(g.lattice.k));
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(g.lattice.n_x));
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(g.lattice.n_t));
  put_le<double>(os, g.lattice.L_x);
  put_le<double>(os, g.lattice.L_t);
  for (const auto& c : g.samples) {
    put_le<float>(os, static_cast<float>(c.real()));
    put_le<float>(os, static_cast<float>(c.imag()));
  }
  if (mask != nullptr) {
    if (!(mask->lattice == g.lattice)) throw ShapeError("mask lattice differs from the grid's");
    os.write("HMSK", 4);
    write_bits(os, mask->v_mask);
    write_bits(os, mask->t_nonneg_mask);
  }
}

void write_grid_json(const std::string& path, const GridFunction& g) {
  std::ofstream os(path);
  if (!os) throw ArgumentError("cannot write " + path);
  os << format_report(to_json(g));
}

GridFile read_grid_file(const std::string& path) {
  const std::string buf = read_all(path);
  if (buf.compare(0, 4, "HGRD") != 0) return {grid_from_json(parse_text(buf)), std::nullopt};
  std::size_t pos = 4;
  Lattice lat;
  lat.k = static_cast<int>(get_le<std::uint32_t>(buf, pos));
  lat.n_x = static_cast<int>(get_le<std::uint32_t>(buf, pos));
  lat.n_t = static_cast<int>(get_le<std::uint32_t>(buf, pos));
  lat.L_x = get_le<double>(buf, pos);
  lat.L_t = get_le<double>(buf, pos);
  try {
    lat.validate();
  } catch (const ArgumentError& e) {
    throw ParseError(std::string("grid header: ") + e.what());
  }
  std::vector<Complex> v(lat.size());
  for (auto& c : v) {
    const float re = get_le<float>(buf, pos);
    const float im = get_le<float>(buf, pos);
    c = Complex(re, im);
  }
  GridFile out{GridFunction(lat, std::move(v)), std::nullopt};
  if (pos < buf.size()) {
    if (buf.compare(pos, 4, "HMSK") != 0) throw ParseError("unexpected trailing data in grid file");
    pos += 4;
    auto vm = read_bits(buf, pos, lat.size());
    auto tm = read_bits(buf, pos, lat.size());
    out.mask = RegionMask(lat, std::move(vm), std::move(tm));
  }
  return out;
}

}  // namespace hormander::io
