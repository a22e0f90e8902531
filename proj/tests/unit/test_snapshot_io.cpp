#include "doctest.h"
#include "helpers.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "novikov/snapshot_io.hpp"

using namespace novikov;

TEST_SUITE("snapshot_io") {

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(format_number(INFINITY) == "inf");
  CHECK(format_number(-INFINITY) == "-inf");
  CHECK(std::isnan(parse_number("nan")));
  CHECK(parse_number("-inf") == -INFINITY);
  CHECK_THROWS_AS(parse_number("1.5x"), FormatError);
  CHECK_THROWS_AS(parse_number(""), FormatError);
}

TEST_CASE("property: field CSV round-trips bit for bit") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const PeriodicField f = testing::random_poly(rng, 6, 1e3).on(8 << (trial % 4));
    std::stringstream ss;
    write_field_csv(ss, f);
    std::string header;
    std::getline(std::stringstream(ss.str()), header);
    CHECK(header == "x,value");
    const PeriodicField g = read_field_csv(ss);
    REQUIRE(g.size() == f.size());
    for (int j = 0; j < f.size(); ++j) CHECK(g[j] == f[j]);
  }
}

TEST_CASE("malformed field files") {
  std::stringstream bad_header("x,u\n0,1\n");
  CHECK_THROWS_AS(read_field_csv(bad_header), FormatError);
  std::stringstream bad_x("x,value\n0,1\n0.2,1\n0.25,1\n0.375,1\n0.5,1\n0.625,1\n0.75,1\n0.875,1\n");
  CHECK_THROWS_AS(read_field_csv(bad_x), FormatError);
  std::stringstream cols("x,value\n0,1,2\n");
  CHECK_THROWS_AS(read_field_csv(cols), FormatError);
}

TEST_CASE("lagrangian snapshot round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "novikov_unit_io";
  std::filesystem::create_directories(dir);
  LagrangianSnapshot s;
  for (int j = 0; j < 8; ++j) {
    s.x.push_back(j / 8.0);
    s.eta.push_back(j / 8.0 + 0.01 * std::sin(j));
    s.eta_jacobian.push_back(1.0 + 0.1 * std::cos(j));
    s.zeta.push_back(std::exp(-j) / 3);
  }
  write_lagrangian_csv(dir / "l.csv", s);
  std::ifstream in(dir / "l.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "x,eta,eta_jacobian,zeta");
  const LagrangianSnapshot r = read_lagrangian_csv(dir / "l.csv");
  CHECK(r.x == s.x);
  CHECK(r.eta == s.eta);
  CHECK(r.eta_jacobian == s.eta_jacobian);
  CHECK(r.zeta == s.zeta);
}

TEST_CASE("csv line splitting") {
  const auto cols = split_csv_line("1,2.5,nan");
  REQUIRE(cols.size() == 3u);
  CHECK(cols[2] == "nan");
}

}  // TEST_SUITE
