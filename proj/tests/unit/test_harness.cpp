#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "novikov/harness.hpp"
#include "novikov/snapshot_io.hpp"

using namespace novikov;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "novikov_unit_harness" / name;
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json load_json(const fs::path& p) { return json::parse(slurp(p)); }

RunConfig small(const std::string& preset, double t_end) {
  RunConfig c = preset_config(preset);
  c.n = 64;
  c.t_end = t_end;
  c.probe_stride = 10;
  return c;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("constant preset run completes with tiny drifts") {
  const fs::path out = scratch("constant");
  const RunSummary s = run(preset_config("constant"), out);
  CHECK(s.outcome == Outcome::completed);
  CHECK(s.final_time == s.t_end);
  CHECK(s.drift_h2 < 1e-12);
  CHECK(s.drift_h1 < 1e-12);
  CHECK(s.drift_h1_energy < 1e-12);
}

TEST_CASE("every emitted file re-ingests") {
  for (SolverKind solver : {SolverKind::eulerian, SolverKind::flowmap, SolverKind::conservative}) {
    RunConfig c = small("positive", 0.05);
    c.solver = solver;
    c.analyticity = true;
    const fs::path out = scratch(std::string("files_") + std::string(to_string(solver)));
    const RunSummary s = run(c, out);
    REQUIRE(s.outcome == Outcome::completed);
    for (const auto& f : s.files) CHECK(fs::exists(out / f));

    const DiagnosticsRecord rec = DiagnosticsRecord::read_csv(out / "diagnostics.csv");
    CHECK(rec.size() == 6u);
    int u_files = 0, l_files = 0;
    for (const auto& f : s.files) {
      if (f.rfind("snapshots/u_", 0) == 0) {
        CHECK(read_field_csv(out / f).size() == 64);
        ++u_files;
      } else if (f.rfind("snapshots/lagrangian_", 0) == 0) {
        CHECK(read_lagrangian_csv(out / f).eta.size() == 64u);
        ++l_files;
      }
    }
    CHECK(u_files == 6);
    CHECK(l_files == (solver == SolverKind::flowmap ? 6 : 0));

    const json summary = load_json(out / "summary.json");
    CHECK(summary["outcome"] == "completed");
    CHECK(parse_config(summary["config"].get<std::string>()).n == 64);
    const json radius = load_json(out / "radius.json");
    CHECK(radius.size() == 6u);
  }
}

TEST_CASE("identical config gives bit-identical outputs") {
  RunConfig c = small("reference", 0.05);
  c.solver = SolverKind::flowmap;
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  const RunSummary sa = run(c, a);
  run(c, b);
  for (const auto& f : sa.files) CHECK(slurp(a / f) == slurp(b / f));
}

TEST_CASE("compare") {
  const RunConfig c = small("reference", 0.1);
  const CompareReport same = compare(c, c, Norm::sup);
  REQUIRE(!same.distances.empty());
  for (double d : same.distances) CHECK(d == 0.0);

  RunConfig fine = c;
  fine.n = 128;
  RunConfig coarse = c;
  coarse.n = 256;
  fine.t_end = coarse.t_end = 0.2;
  fine.probe_stride = coarse.probe_stride = 100;
  CHECK(compare(fine, coarse, Norm::sup).max_distance < 1e-8);
  CHECK(compare(fine, coarse, Norm::hs).max_distance >= compare(fine, coarse, Norm::l2).max_distance);

  RunConfig other = c;
  other.probe_stride = 7;
  CHECK_THROWS_AS(compare(c, other, Norm::sup), ProbeMismatch);
  CHECK(parse_norm("hs") == Norm::hs);
  CHECK_THROWS_AS(parse_norm("max"), std::invalid_argument);
}

TEST_CASE("converge") {
  const ConvergeReport r = converge(preset_config("constant"), Axis::dt, {1e-2, 5e-3, 2.5e-3});
  for (double e : r.errors) CHECK(e == 0.0);
  CHECK(std::isnan(r.order));
  CHECK(to_json(r)["order"].is_null());
  CHECK_THROWS_AS(converge(preset_config("constant"), Axis::dt, {1e-2, 5e-3}), std::invalid_argument);

  RunConfig t = preset_config("temporal");
  t.t_end = 0.5;
  const ConvergeReport o = converge(t, Axis::dt, {1e-3, 2e-3, 5e-4, 1.25e-4});
  CHECK(o.levels.front() == 2e-3);
  CHECK(o.order == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("perturbation study") {
  RunConfig c = small("reference", 0.1);
  const PerturbReport zero = perturbation_study(c, {0.0}, 3);
  REQUIRE(zero.distances.size() == 1u);
  CHECK(zero.distances[0] == 0.0);
  const PerturbReport r = perturbation_study(c, {1e-4, 1e-2, 1e-3}, 3);
  CHECK(r.amplitudes.front() == 1e-2);
  CHECK(r.monotone);
  CHECK_THROWS_AS(perturbation_study(c, {-1.0}, 3), std::invalid_argument);
  const PeriodicField phi = perturbation_direction(PeriodicGrid(64), 3.0, 9);
  CHECK(sobolev_norm(phi, 3.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("bi-Hamiltonian study") {
  const BiHamiltonianStudy st = bihamiltonian_study(preset_config("constant"));
  REQUIRE(st.probes.size() == 4u);
  for (const auto& p : st.probes) {
    REQUIRE(p.ok);
    CHECK(p.report.residual_b2 < 1e-13);
  }
  // the reference momentum touches zero, which each probe reports
  const BiHamiltonianStudy ref = bihamiltonian_study(small("reference", 0.05));
  CHECK(!ref.probes.front().ok);
  CHECK(!ref.probes.front().error.empty());
  CHECK(to_json(ref)["probes"][0].contains("error"));
}

TEST_CASE("analyticity and E_s reports") {
  RunConfig c = preset_config("analytic");
  c.t_end = 0.01;
  const AnalyticityStudy a = analyticity_study(c);
  CHECK(a.radius.size() == a.es.size());
  CHECK(!a.radius.front().defined);

  EsPropsOptions o;
  o.pairs = {{0.3, 0.1}};
  o.samples = 5;
  const auto props = es_props(o);
  REQUIRE(props.size() == 1u);
  const json j = to_json(props[0]);
  CHECK(j["lambda_holds"] == true);
  CHECK(default_es_pairs().size() == 10u);
}

}  // TEST_SUITE
