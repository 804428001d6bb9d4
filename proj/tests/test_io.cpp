#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>

#include "doctest.h"

#include "hormander/errors.hpp"
#include "hormander/io.hpp"
#include "test_support.hpp"

using namespace hormander;
using nlohmann::json;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("hormander_io_" + name)).string();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  os << text;
}

}  // namespace

TEST_CASE("report text: 17 digits, sorted keys") {
  const json j{{"zeta", 0.1}, {"alpha", 1.0 / 3.0}, {"mid", {{"b", 2}, {"a", true}}}};
  const auto text = io::format_report(j);
  CHECK(text.find("0.10000000000000001") != std::string::npos);
  CHECK(text.find("0.33333333333333331") != std::string::npos);
  CHECK(text.find("\"alpha\"") < text.find("\"mid\""));
  CHECK(text.find("\"mid\"") < text.find("\"zeta\""));
  CHECK(text.find("\"a\"") < text.find("\"b\""));
  // Round trip is exact.
  const auto back = io::parse_text(text);
  CHECK(back["alpha"].get<double>() == 1.0 / 3.0);
  CHECK(back["zeta"].get<double>() == 0.1);
  CHECK(io::format_report(back) == text);
}

TEST_CASE("integers stay integers") {
  const auto text = io::format_report(json{{"sigma0", 2}});
  CHECK(text.find("\"sigma0\": 2") != std::string::npos);
  CHECK(text.find("2.0") == std::string::npos);
}

TEST_CASE("parse failures") {
  CHECK_THROWS_AS(io::parse_text("{\"a\": "), ParseError);
  CHECK_THROWS_AS(io::read_json_file(temp_path("does_not_exist.json")), ParseError);
  CHECK_THROWS_AS(io::operator_from_json(json{{"n", 2}}), ParseError);
  CHECK_THROWS_AS(io::phi_from_json(json{{"kind", "bogus"}}), ParseError);
  CHECK_THROWS_AS(io::phi_from_json(json(2.0)), ParseError);
  CHECK_THROWS_AS(io::lattice_from_json(json{{"k", "two"}}), ParseError);
}

TEST_CASE("function parameter forms") {
  CHECK(io::phi_from_json(json(1)) == PhiFunction::constant_one());
  CHECK(io::phi_from_json(json::parse("[0.5, 0.6]")) == PhiFunction::log_power({0.5, 0.6}));
  const auto phi = PhiFunction::log_power({2.0, -1.0}, 30.0);
  CHECK(io::phi_from_json(io::to_json(phi)) == phi);
  CHECK(io::phi_from_json(io::to_json(PhiFunction::constant_one())) == PhiFunction::constant_one());
}

TEST_CASE("operator file round trip") {
  const auto op = io::operator_from_json(io::read_json_file(std::string(HORMANDER_DATA_DIR) + "/heat2d.json"));
  CHECK(op.a.n == 2);
  CHECK(op.a.terms.size() == 3);
  CHECK(op.bs.size() == 1);
  const auto again = io::operator_from_json(io::to_json(op));
  CHECK(io::to_json(again) == io::to_json(op));
}

TEST_CASE("grid JSON round trip") {
  const Lattice L{2, 4, 8, 2 * std::numbers::pi, 3.0};
  const auto g = testing::random_grid(L, 11);
  CHECK(io::lattice_from_json(io::to_json(L)) == L);
  const auto back = io::grid_from_json(io::parse_text(io::format_report(io::to_json(g))));
  CHECK(back.lattice == L);
  CHECK(back.samples == g.samples);

  const auto path = temp_path("grid.json");
  io::write_grid_json(path, g);
  const auto file = io::read_grid_file(path);
  CHECK(file.grid.samples == g.samples);
  CHECK_FALSE(file.mask.has_value());
  std::filesystem::remove(path);

  json bad = io::to_json(g);
  bad["re"].erase(0);
  CHECK_THROWS_AS(io::grid_from_json(bad), ParseError);
}

TEST_CASE("binary grid round trip with and without mask") {
  const Lattice L{1, 8, 16, 1.0, 2.0};
  const auto g = testing::random_grid(L, 5);
  const auto mask = RegionMask::time_slab(L, 0.0, 0.6);
  const auto path = temp_path("grid.bin");

  io::write_grid_binary(path, g, &mask);
  {
    std::ifstream in(path, std::ios::binary);
    char magic[4];
    in.read(magic, 4);
    CHECK(std::string(magic, 4) == "HGRD");
  }
  auto file = io::read_grid_file(path);
  CHECK(file.grid.lattice == L);
  REQUIRE(file.mask.has_value());
  CHECK(file.mask->v_mask == mask.v_mask);
  CHECK(file.mask->t_nonneg_mask == mask.t_nonneg_mask);
  for (std::size_t i = 0; i < g.samples.size(); ++i) {
    // complex64 storage
    CHECK(file.grid.samples[i].real() == static_cast<double>(static_cast<float>(g.samples[i].real())));
    CHECK(file.grid.samples[i].imag() == static_cast<double>(static_cast<float>(g.samples[i].imag())));
  }

  io::write_grid_binary(path, g);
  file = io::read_grid_file(path);
  CHECK_FALSE(file.mask.has_value());

  // Truncated file.
  const auto size = std::filesystem::file_size(path);
  std::filesystem::resize_file(path, size - 3);
  CHECK_THROWS_AS(io::read_grid_file(path), ParseError);

  write_text(path, "HGRD");
  CHECK_THROWS_AS(io::read_grid_file(path), ParseError);
  std::filesystem::remove(path);

  const Lattice other{1, 4, 16, 1.0, 2.0};
  const auto wrong = RegionMask::half_space(other);
  CHECK_THROWS_AS(io::write_grid_binary(path, g, &wrong), ShapeError);
}
