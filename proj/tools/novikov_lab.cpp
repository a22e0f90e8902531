// novikov-lab: command-line front end for the solvers and studies.
//
// Exit codes: 0 completed, 2 blow-up or breakdown, 1 usage or config error,
// 3 anything else.
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "novikov/harness.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace novikov;

namespace {

enum Exit { kOk = 0, kUsage = 1, kOutcome = 2, kInternal = 3 };

struct Common {
  std::string config;
  std::string preset;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<double> t_end;
  bool quiet = false;
};

void add_common(CLI::App* cmd, Common& c, bool with_config) {
  if (with_config) {
    auto* cfg = cmd->add_option("--config", c.config, "run configuration file");
    auto* pre = cmd->add_option("--preset", c.preset, "built-in configuration instead of --config");
    cfg->excludes(pre);
    cmd->add_option("--t-end", c.t_end, "override time.t_end");
  }
  cmd->add_option("--out", c.out, "output directory (overrides NOVIKOV_LAB_OUT)");
  cmd->add_option("--seed", c.seed, "random seed");
  cmd->add_flag("--quiet", c.quiet, "print nothing on success");
}

RunConfig load(const Common& c) {
  if (c.config.empty() && c.preset.empty()) throw ConfigError("one of --config or --preset is required");
  RunConfig cfg = c.config.empty() ? preset_config(c.preset) : load_config(c.config);
  if (c.t_end) cfg.t_end = *c.t_end;
  if (c.seed) cfg.seed = *c.seed;
  cfg.validate();
  return cfg;
}

// --out beats NOVIKOV_LAB_OUT beats the config's output.dir.
fs::path output_dir(const Common& c, const fs::path& configured) {
  if (!c.out.empty()) return c.out;
  if (const char* env = std::getenv("NOVIKOV_LAB_OUT"); env && *env) return env;
  return configured;
}

int exit_for(Outcome o) { return o == Outcome::completed ? kOk : kOutcome; }

std::vector<SpacePair> parse_pairs(const std::vector<std::string>& items) {
  std::vector<SpacePair> out;
  for (const auto& item : items) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("pair '" + item + "' is not s:s'");
    const double s = std::stod(item.substr(0, colon));
    const double sp = std::stod(item.substr(colon + 1));
    if (!(s > sp && sp > 0.0)) throw std::invalid_argument("pair '" + item + "' needs s > s' > 0");
    out.emplace_back(s, sp);
  }
  return out;
}

SolverKind parse_solver(const std::string& name) {
  for (SolverKind k : {SolverKind::eulerian, SolverKind::flowmap, SolverKind::conservative})
    if (to_string(k) == name) return k;
  throw ConfigError("unknown solver '" + name + "'");
}

struct Invocation {
  std::string command;
  fs::path dir;
  json report;
  std::vector<std::string> files;
  int code = kOk;
  bool quiet = false;
};

void finish(Invocation& inv) {
  inv.files.push_back("run.json");
  json top{{"command", inv.command},
           {"version", tool_version()},
           {"exit_code", inv.code},
           {"files", inv.files},
           {"report", inv.report}};
  write_json(inv.dir / "run.json", top);
  if (!inv.quiet) std::cout << inv.report.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for the Novikov equation"};
  app.set_version_flag("--version", std::string(tool_version()));
  app.require_subcommand(1);

  Common common;
  Invocation inv;

  auto* run_cmd = app.add_subcommand("run", "integrate one configuration and write its outputs");
  add_common(run_cmd, common, true);

  std::string other_config, other_preset, solver_b, norm_name = "sup";
  int n_b = 0;
  auto* compare_cmd = app.add_subcommand("compare", "distance between two runs at every probe");
  add_common(compare_cmd, common, true);
  compare_cmd->add_option("--other-config", other_config, "second configuration (default: the first)");
  compare_cmd->add_option("--other-preset", other_preset, "second configuration as a preset");
  compare_cmd->add_option("--solver-b", solver_b, "solver of the second run");
  compare_cmd->add_option("--n-b", n_b, "grid size of the second run");
  compare_cmd->add_option("--norm", norm_name, "sup, l2 or hs");

  std::string axis_name = "dt";
  std::vector<double> levels;
  auto* converge_cmd = app.add_subcommand("converge", "error table and fitted order");
  add_common(converge_cmd, common, true);
  converge_cmd->add_option("--axis", axis_name, "dt or n");
  converge_cmd->add_option("--levels", levels, "at least three levels")->delimiter(',')->required();

  std::vector<double> amplitudes{1e-2, 1e-3, 1e-4};
  auto* perturb_cmd = app.add_subcommand("perturb", "continuous dependence on the initial data");
  add_common(perturb_cmd, common, true);
  perturb_cmd->add_option("--amplitudes", amplitudes, "perturbation sizes")->delimiter(',');

  bool refine = false;
  auto* bh_cmd = app.add_subcommand("bihamiltonian", "operator residuals along a trajectory");
  add_common(bh_cmd, common, true);
  bh_cmd->add_flag("--refine", refine, "double grid.n");

  auto* an_cmd = app.add_subcommand("analyticity", "radius of analyticity and E_s norms along a run");
  add_common(an_cmd, common, true);

  EsPropsOptions es_opts;
  std::vector<std::string> pair_text;
  auto* es_cmd = app.add_subcommand("es-props", "empirical constants of the E_s norm inequalities");
  add_common(es_cmd, common, false);
  es_cmd->add_option("--samples", es_opts.samples, "random trigonometric polynomials");
  es_cmd->add_option("--grid", es_opts.grid_n, "grid size of the samples");
  es_cmd->add_option("--k-max", es_opts.k_max, "sup truncation");
  es_cmd->add_option("--pairs", pair_text, "s:s' pairs (default: all from 0.1..0.5)")->delimiter(',');

  double radius = 1.0;
  int trials = 50, ck_grid = 64, ck_kmax = 30;
  bool literal = false;
  auto* ck_cmd = app.add_subcommand("ck-check", "Lipschitz constants of the system right-hand side");
  add_common(ck_cmd, common, false);
  ck_cmd->add_option("--radius", radius, "ball radius in X_s");
  ck_cmd->add_option("--trials", trials, "random state pairs");
  ck_cmd->add_option("--grid", ck_grid, "grid size");
  ck_cmd->add_option("--k-max", ck_kmax, "sup truncation");
  ck_cmd->add_option("--pairs", pair_text, "s:s' pairs (default 0.4:0.2,0.3:0.15,0.2:0.1)")->delimiter(',');
  ck_cmd->add_flag("--literal-g", literal, "use G as printed instead of the consistent form");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  inv.quiet = common.quiet;
  try {
    if (run_cmd->parsed()) {
      inv.command = "run";
      const RunConfig cfg = load(common);
      inv.dir = output_dir(common, cfg.output_dir);
      const RunSummary s = run(cfg, inv.dir);
      inv.report = to_json(s);
      inv.files = s.files;
      inv.code = exit_for(s.outcome);
    } else if (compare_cmd->parsed()) {
      inv.command = "compare";
      const RunConfig a = load(common);
      Common other = common;
      other.config = other_config;
      other.preset = other_preset;
      RunConfig b = other_config.empty() && other_preset.empty() ? a : load(other);
      if (!solver_b.empty()) b.solver = parse_solver(solver_b);
      if (n_b > 0) b.n = n_b;
      b.validate();
      inv.dir = output_dir(common, a.output_dir);
      const CompareReport r = compare(a, b, parse_norm(norm_name));
      inv.report = to_json(r);
      inv.code = exit_for(r.outcome_a == Outcome::completed ? r.outcome_b : r.outcome_a);
    } else if (converge_cmd->parsed()) {
      inv.command = "converge";
      const RunConfig cfg = load(common);
      inv.dir = output_dir(common, cfg.output_dir);
      const ConvergeReport r = converge(cfg, parse_axis(axis_name), levels);
      inv.report = to_json(r);
      inv.code = exit_for(r.outcome);
    } else if (perturb_cmd->parsed()) {
      inv.command = "perturb";
      const RunConfig cfg = load(common);
      inv.dir = output_dir(common, cfg.output_dir);
      const PerturbReport r = perturbation_study(cfg, amplitudes, cfg.seed);
      inv.report = to_json(r);
      inv.code = exit_for(r.outcome);
    } else if (bh_cmd->parsed()) {
      inv.command = "bihamiltonian";
      const RunConfig cfg = load(common);
      inv.dir = output_dir(common, cfg.output_dir);
      const BiHamiltonianStudy r = bihamiltonian_study(cfg, refine);
      inv.report = to_json(r);
      inv.code = exit_for(r.outcome);
    } else if (an_cmd->parsed()) {
      inv.command = "analyticity";
      const RunConfig cfg = load(common);
      inv.dir = output_dir(common, cfg.output_dir);
      const AnalyticityStudy r = analyticity_study(cfg);
      inv.report = to_json(r);
      inv.code = exit_for(r.outcome);
    } else if (es_cmd->parsed()) {
      inv.command = "es-props";
      inv.dir = output_dir(common, "novikov_out");
      es_opts.seed = common.seed.value_or(0);
      es_opts.pairs = parse_pairs(pair_text);
      json a = json::array();
      for (const auto& r : es_props(es_opts)) a.push_back(to_json(r));
      inv.report = a;
    } else if (ck_cmd->parsed()) {
      inv.command = "ck-check";
      inv.dir = output_dir(common, "novikov_out");
      auto pairs = parse_pairs(pair_text);
      if (pairs.empty()) pairs = reference_ck_pairs();
      const auto reports = ck_lipschitz_sweep(pairs, radius, trials, common.seed.value_or(0),
                                              ck_grid, ck_kmax,
                                              literal ? GForm::literal : GForm::consistent);
      json a = json::array();
      for (const auto& r : reports) a.push_back(to_json(r));
      inv.report = a;
    }
    const std::string report_name = inv.command + ".json";
    if (inv.command != "run") {
      write_json(inv.dir / report_name, inv.report);
      inv.files.push_back(report_name);
    }
    finish(inv);
    return inv.code;
  } catch (const ConfigError& e) {
    std::cerr << "novikov-lab: config error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "novikov-lab: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "novikov-lab: internal error: " << e.what() << '\n';
    return kInternal;
  }
}
