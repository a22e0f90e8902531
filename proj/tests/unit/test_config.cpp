#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "novikov/config.hpp"
#include "novikov/eulerian.hpp"
#include "novikov/snapshot_io.hpp"

using namespace novikov;

namespace {
const double kPi = kTwoPi / 2;

const char* kMinimal = R"(
solver = eulerian
[grid]
n = 64
[time]
dt = 1e-3
t_end = 0.1
[initial]
kind = fourier
modes = (1, 1, 0)
)";

int error_line(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

std::string error_text(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}
}  // namespace

TEST_SUITE("config") {

TEST_CASE("minimal config gets defaults") {
  const RunConfig c = parse_config(kMinimal);
  CHECK(c.n == 64);
  CHECK(*c.dt == 1e-3);
  CHECK(!c.cfl);
  CHECK(c.t_end == 0.1);
  CHECK(c.solver == SolverKind::eulerian);
  CHECK(c.sobolev_s == 3.0);
  CHECK(c.probe_stride == 1);
  CHECK(c.seed == 0u);
  CHECK(!c.analyticity);
  CHECK(c.blowup.c1_threshold == 1e3);
  const PeriodicField u = c.initial_field();
  CHECK(u[16] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(u[0] == 1.0);
}

TEST_CASE("both dt and cfl is a validation error naming the conflict") {
  const std::string text = std::string(kMinimal) + "time.cfl = 0.5\n";
  CHECK(error_text(text).find("time.dt and time.cfl") != std::string::npos);
  CHECK(error_text(std::string(kMinimal) + "time.cfl = 0.5\n").find("not both") != std::string::npos);
}

TEST_CASE("momentum initial data") {
  std::string text = kMinimal;
  text.replace(text.find("kind = fourier"), 14, "kind = momentum");
  text.replace(text.find("modes = (1, 1, 0)"), 17, "modes = (0, 1, 0), (1, 1, 0)");
  const PeriodicField u = parse_config(text).initial_field();
  for (int j = 0; j < 64; ++j)
    CHECK(u[j] == doctest::Approx(1 + std::cos(kTwoPi * j / 64) / (1 + 4 * kPi * kPi)).epsilon(1e-14));
}

TEST_CASE("strict mode and line numbers") {
  CHECK(error_line(std::string(kMinimal) + "bogus = 1\n") == 11);
  CHECK(error_text(std::string(kMinimal) + "bogus = 1\n").find("unknown key 'initial.bogus'") != std::string::npos);
  CHECK(error_line(std::string(kMinimal) + "modes = (2, 1, 0)\n") == 11);
  CHECK(error_line("grid.n = 64\ngrid.n = 32\n") == 2);
  CHECK(error_line("[grid\n") == 1);
  CHECK(error_line("n\n") == 1);
  CHECK(error_line("[grid]\nn = sixty\n") == 2);
  CHECK(error_line("solver = spectral\n") == 1);
  CHECK(error_line("[initial]\nmodes = (1, 2)\n") == 2);
  CHECK(error_text("[time]\ndt = 1e-3\nt_end = 1\n[initial]\nkind = fourier\nmodes = (1,1,0)\n").find("grid.n") != std::string::npos);
}

TEST_CASE("validation names the key") {
  auto with = [](const std::string& from, const std::string& to) {
    std::string t = kMinimal;
    t.replace(t.find(from), from.size(), to);
    return error_text(t);
  };
  CHECK(with("n = 64", "n = 6").find("grid.n") == 0);
  CHECK(with("t_end = 0.1", "t_end = -1").find("time.t_end") == 0);
  CHECK(with("dt = 1e-3", "cfl = 2").find("time.cfl") == 0);
  CHECK(with("dt = 1e-3", "max_steps = 5").find("time.dt or time.cfl") == 0);
  CHECK(with("modes = (1, 1, 0)", "path = u.csv").find("initial.modes") == 0);
  CHECK(with("kind = fourier", "kind = preset\npreset = nope").find("initial.preset") != std::string::npos);
  CHECK(with("solver = eulerian", "solver = flowmap\nseed = -3").find("seed") != std::string::npos);
}

TEST_CASE("dotted keys and comments") {
  const RunConfig c = parse_config(
      "# full names anywhere\n"
      "grid.n = 32   # trailing comment\n"
      "time.cfl = 0.4\n"
      "time.t_end = 2\n"
      "initial.kind = preset\n"
      "initial.preset = analytic\n"
      "solver = conservative\n"
      "analyticity.enabled = true\n"
      "output.dir = somewhere\n"
      "probes.stride = 7\n");
  CHECK(c.n == 32);
  CHECK(*c.cfl == 0.4);
  CHECK(c.solver == SolverKind::conservative);
  CHECK(c.analyticity);
  CHECK(c.output_dir == "somewhere");
  CHECK(c.probe_stride == 7);
  CHECK(c.stepper().adaptive());
}

TEST_CASE("property: to_text round trips every preset and random variations") {
  std::mt19937_64 rng(71);
  std::uniform_int_distribution<int> coin(0, 1);
  for (const auto& name : preset_names()) {
    RunConfig c = preset_config(name);
    c.seed = rng() >> 40;
    c.snapshots = coin(rng);
    c.solver = static_cast<SolverKind>(coin(rng) + coin(rng));
    const RunConfig back = parse_config(to_text(c));
    CHECK(to_text(back) == to_text(c));
    CHECK(back.n == c.n);
    CHECK(back.dt == c.dt);
    CHECK(back.cfl == c.cfl);
    CHECK(back.t_end == c.t_end);
    CHECK(back.blowup.c1_threshold == c.blowup.c1_threshold);
  }
  RunConfig f = parse_config(kMinimal);
  f.initial.modes = {{1, 0.1, -1.0 / 3}, {3, 1e-17, 2.5}};
  const RunConfig back = parse_config(to_text(f));
  REQUIRE(back.initial.modes.size() == 2u);
  CHECK(back.initial.modes[0].sin_coeff == -1.0 / 3);
  CHECK(back.initial.modes[1].cos_coeff == 1e-17);
}

TEST_CASE("file initial data resolves relative to the config") {
  const auto dir = std::filesystem::temp_directory_path() / "novikov_unit_cfg";
  std::filesystem::create_directories(dir);
  const auto u = PeriodicField::sample(PeriodicGrid(32), [](double x) { return std::sin(kTwoPi * x); });
  write_field_csv(dir / "u0.csv", u);
  std::ofstream(dir / "run.cfg") << "[grid]\nn = 32\n[time]\ndt = 1e-3\nt_end = 0.1\n[initial]\nkind = file\npath = u0.csv\n";
  const RunConfig c = load_config(dir / "run.cfg");
  CHECK(max_distance(c.initial_field(), u) == 0.0);
  std::ofstream(dir / "bad.cfg") << "[grid]\nn = 64\n[time]\ndt = 1e-3\nt_end = 0.1\n[initial]\nkind = file\npath = u0.csv\n";
  CHECK_THROWS_AS(load_config(dir / "bad.cfg").initial_field(), ConfigError);
  CHECK_THROWS_AS(load_config(dir / "missing.cfg"), ConfigError);
}

TEST_CASE("presets") {
  const PeriodicGrid g(64);
  CHECK(helmholtz(preset_field("reference", g)).min() == doctest::Approx(0.0).epsilon(1e-11));
  CHECK(max_distance(preset_field("constant", g), PeriodicField::constant(g, 1.5)) == 0.0);
  CHECK(preset_field("analytic", g).max() == doctest::Approx(0.1));
  CHECK(helmholtz(preset_field("large", g)).min() < 0.0);
  CHECK_THROWS_AS(preset_field("nope", g), ConfigError);
  const RunConfig r = preset_config("reference");
  CHECK(r.n == 256);
  CHECK(*r.dt == 1e-3);
  CHECK(r.t_end == 1.0);
}

}  // TEST_SUITE
