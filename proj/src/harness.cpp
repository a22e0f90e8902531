#include "novikov/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>

#include "novikov/snapshot_io.hpp"

namespace novikov {

using nlohmann::json;

namespace {

// NaN and infinities have no JSON spelling; they become null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json numbers(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

std::string indexed(const char* stem, std::size_t i) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%04zu.csv", stem, i);
  return buf;
}

template <class Run>
SolveResult from_lagrangian(Run&& r) {
  SolveResult out;
  out.outcome = r.outcome;
  out.final_time = r.final_time;
  out.breakdown_time = r.breakdown_time;
  out.message = std::move(r.message);
  out.trajectory = std::move(r.reconstructed);
  out.record = std::move(r.record);
  return out;
}

double max_defined(const std::vector<double>& v, bool absolute) {
  double best = kUndefined;
  for (double x : v) {
    if (std::isnan(x)) continue;
    const double y = absolute ? std::abs(x) : x;
    if (std::isnan(best) || y > best) best = y;
  }
  return best;
}

double min_defined(const std::vector<double>& v) {
  double best = kUndefined;
  for (double x : v)
    if (!std::isnan(x) && (std::isnan(best) || x < best)) best = x;
  return best;
}

// Worst member outcome: breakdown and blow-up both beat completed.
Outcome worse(Outcome a, Outcome b) { return a != Outcome::completed ? a : b; }

}  // namespace

std::string_view tool_version() { return NOVIKOV_VERSION; }

void write_json(const std::filesystem::path& path, const json& value) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << value.dump(2) << '\n';
}

// --- single runs ---------------------------------------------------------------

SolveResult solve(const RunConfig& config) { return solve(config, config.initial_field()); }

SolveResult solve(const RunConfig& config, const PeriodicField& u0) {
  config.validate();
  ProbeOptions probes;
  probes.stride = config.probe_stride;
  probes.diagnostics.sobolev_s = config.sobolev_s;
  const TimeStepper stepper = config.stepper();

  switch (config.solver) {
    case SolverKind::eulerian: {
      EulerianRun r = integrate(u0, stepper, config.blowup, probes);
      SolveResult out;
      out.outcome = r.outcome;
      out.final_time = r.final_time;
      out.message = std::move(r.message);
      out.trajectory = std::move(r.trajectory);
      out.record = std::move(r.record);
      return out;
    }
    case SolverKind::flowmap: {
      FlowMapRun r = integrate_flowmap(u0, stepper, config.blowup, probes);
      std::vector<LagrangianSnapshot> snaps;
      for (const auto& s : r.states) snaps.push_back(to_snapshot(s));
      SolveResult out = from_lagrangian(std::move(r));
      out.lagrangian = std::move(snaps);
      return out;
    }
    case SolverKind::conservative:
      return from_lagrangian(integrate_conservative(u0, stepper, config.blowup, probes));
  }
  throw Error("unhandled solver");
}

json to_json(const RunSummary& s) {
  return {{"outcome", to_string(s.outcome)},
          {"final_time", s.final_time},
          {"t_end", s.t_end},
          {"breakdown_time", number(s.breakdown_time)},
          {"message", s.message},
          {"drift",
           {{"h1", number(s.drift_h1)},
            {"h2", number(s.drift_h2)},
            {"h1_energy", number(s.drift_h1_energy)}}},
          {"min_m", number(s.min_m)},
          {"max_orbit_residual", number(s.max_orbit_residual)},
          {"max_persistence_ratio", number(s.max_persistence_ratio)},
          {"files", s.files},
          {"config", s.config},
          {"version", tool_version()}};
}

RunSummary run(const RunConfig& config, const std::filesystem::path& out) {
  const SolveResult r = solve(config);
  RunSummary s;
  s.outcome = r.outcome;
  s.final_time = r.final_time;
  s.t_end = config.t_end;
  s.breakdown_time = r.breakdown_time;
  s.message = r.message;
  s.drift_h1 = r.record.relative_drift(&DiagnosticsSample::h1);
  s.drift_h2 = r.record.relative_drift(&DiagnosticsSample::h2);
  s.drift_h1_energy = r.record.relative_drift(&DiagnosticsSample::h1_energy);
  s.min_m = min_defined(r.record.column(&DiagnosticsSample::min_m));
  s.max_orbit_residual = max_defined(r.record.column(&DiagnosticsSample::orbit_residual), false);
  s.max_persistence_ratio =
      max_defined(r.record.column(&DiagnosticsSample::persistence_ratio), true);
  s.config = to_text(config);

  std::filesystem::create_directories(out);
  r.record.write_csv(out / "diagnostics.csv");
  s.files.push_back("diagnostics.csv");
  if (config.snapshots) {
    for (std::size_t i = 0; i < r.trajectory.size(); ++i) {
      const auto name = std::filesystem::path("snapshots") / indexed("u", i);
      write_field_csv(out / name, r.trajectory[i].u);
      s.files.push_back(name.generic_string());
    }
    for (std::size_t i = 0; i < r.lagrangian.size(); ++i) {
      const auto name = std::filesystem::path("snapshots") / indexed("lagrangian", i);
      write_lagrangian_csv(out / name, r.lagrangian[i]);
      s.files.push_back(name.generic_string());
    }
  }
  if (config.analyticity) {
    json a = json::array();
    for (const auto& e : radius_track(r.trajectory)) a.push_back(to_json(e));
    write_json(out / "radius.json", a);
    s.files.push_back("radius.json");
  }
  s.files.push_back("summary.json");
  write_json(out / "summary.json", to_json(s));
  return s;
}

// --- distances and comparison ------------------------------------------------

std::string_view to_string(Norm norm) {
  switch (norm) {
    case Norm::sup: return "sup";
    case Norm::l2: return "l2";
    case Norm::hs: return "hs";
  }
  return "?";
}

Norm parse_norm(std::string_view text) {
  for (Norm n : {Norm::sup, Norm::l2, Norm::hs})
    if (to_string(n) == text) return n;
  throw std::invalid_argument("unknown norm '" + std::string(text) + "' (sup, l2 or hs)");
}

double field_distance(const PeriodicField& a, const PeriodicField& b, Norm norm, double s) {
  const PeriodicGrid& fine = a.size() >= b.size() ? a.grid() : b.grid();
  const PeriodicField diff = resample(a, fine) - resample(b, fine);
  switch (norm) {
    case Norm::sup: return diff.max_abs();
    case Norm::l2: {
      double sum = 0.0;
      for (double v : diff.values()) sum += v * v;
      return std::sqrt(sum / diff.size());
    }
    case Norm::hs: return sobolev_norm(diff, s);
  }
  return kUndefined;
}

json to_json(const CompareReport& r) {
  return {{"norm", to_string(r.norm)},
          {"times", numbers(r.times)},
          {"distances", numbers(r.distances)},
          {"max_distance", number(r.max_distance)},
          {"outcome_a", to_string(r.outcome_a)},
          {"outcome_b", to_string(r.outcome_b)}};
}

CompareReport compare(const RunConfig& a, const RunConfig& b, Norm norm) {
  const SolveResult ra = solve(a);
  const SolveResult rb = solve(b);
  CompareReport rep;
  rep.norm = norm;
  rep.outcome_a = ra.outcome;
  rep.outcome_b = rb.outcome;
  const bool both_completed = ra.outcome == Outcome::completed && rb.outcome == Outcome::completed;
  if (both_completed && ra.trajectory.size() != rb.trajectory.size())
    throw ProbeMismatch("runs probe " + std::to_string(ra.trajectory.size()) + " and " +
                        std::to_string(rb.trajectory.size()) + " times");
  const std::size_t count = std::min(ra.trajectory.size(), rb.trajectory.size());
  for (std::size_t i = 0; i < count; ++i) {
    const double ta = ra.trajectory[i].t, tb = rb.trajectory[i].t;
    if (std::abs(ta - tb) > 1e-9 * std::max(1.0, std::abs(ta)))
      throw ProbeMismatch("probe " + std::to_string(i) + " at t = " + format_number(ta) +
                          " versus t = " + format_number(tb));
    const double d = field_distance(ra.trajectory[i].u, rb.trajectory[i].u, norm, a.sobolev_s);
    rep.times.push_back(ta);
    rep.distances.push_back(d);
    rep.max_distance = std::max(rep.max_distance, d);
  }
  return rep;
}

// --- convergence -------------------------------------------------------------

std::string_view to_string(Axis axis) { return axis == Axis::dt ? "dt" : "n"; }

Axis parse_axis(std::string_view text) {
  if (text == "dt") return Axis::dt;
  if (text == "n") return Axis::n;
  throw std::invalid_argument("unknown axis '" + std::string(text) + "' (dt or n)");
}

json to_json(const ConvergeReport& r) {
  return {{"axis", to_string(r.axis)},
          {"levels", numbers(r.levels)},
          {"reference", r.levels.empty() ? json(nullptr) : number(r.levels.back())},
          {"errors", numbers(r.errors)},
          {"ratios", numbers(r.ratios)},
          {"order", number(r.order)},
          {"outcome", to_string(r.outcome)}};
}

ConvergeReport converge(const RunConfig& base, Axis axis, std::vector<double> levels) {
  if (levels.size() < 3) throw std::invalid_argument("a convergence study needs >= 3 levels");
  for (double l : levels)
    if (!(l > 0.0)) throw std::invalid_argument("convergence levels must be positive");
  if (axis == Axis::dt) std::sort(levels.rbegin(), levels.rend());
  else std::sort(levels.begin(), levels.end());
  if (std::adjacent_find(levels.begin(), levels.end()) != levels.end())
    throw std::invalid_argument("convergence levels must be distinct");

  ConvergeReport rep;
  rep.axis = axis;
  rep.levels = levels;
  std::vector<PeriodicField> finals;
  for (double level : levels) {
    RunConfig c = base;
    c.probe_stride = static_cast<int>(std::min<std::int64_t>(c.max_steps, 1 << 30));
    if (axis == Axis::dt) {
      c.dt = level;
      c.cfl.reset();
    } else {
      if (level != std::floor(level)) throw std::invalid_argument("grid levels must be integers");
      c.n = static_cast<int>(level);
    }
    const SolveResult r = solve(c);
    rep.outcome = worse(rep.outcome, r.outcome);
    if (r.outcome != Outcome::completed) return rep;
    finals.push_back(r.trajectory.back().u);
  }
  for (std::size_t i = 0; i + 1 < finals.size(); ++i)
    rep.errors.push_back(field_distance(finals[i], finals.back(), Norm::sup));
  for (std::size_t i = 0; i + 1 < rep.errors.size(); ++i)
    rep.ratios.push_back(rep.errors[i + 1] > 0.0 ? rep.errors[i] / rep.errors[i + 1]
                                                 : kUndefined);

  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < rep.errors.size(); ++i) {
    if (!(rep.errors[i] > 0.0)) continue;
    const double h = axis == Axis::dt ? levels[i] : 1.0 / levels[i];
    xs.push_back(std::log(h));
    ys.push_back(std::log(rep.errors[i]));
  }
  if (xs.size() >= 2) {
    const double m = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i] / m, my += ys[i] / m;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxy += (xs[i] - mx) * (ys[i] - my);
    }
    rep.order = sxy / sxx;
  }
  return rep;
}

// --- continuous dependence -----------------------------------------------------

json to_json(const PerturbReport& r) {
  return {{"seed", r.seed},
          {"amplitudes", numbers(r.amplitudes)},
          {"distances", numbers(r.distances)},
          {"ratios", numbers(r.ratios)},
          {"monotone", r.monotone},
          {"outcome", to_string(r.outcome)}};
}

PeriodicField perturbation_direction(const PeriodicGrid& grid, double s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  PeriodicField phi = random_trig_polynomial(grid, rng);
  const double norm = sobolev_norm(phi, s);
  if (norm == 0.0) throw Error("degenerate perturbation direction");
  phi *= 1.0 / norm;
  return phi;
}

PerturbReport perturbation_study(const RunConfig& config, const std::vector<double>& amplitudes,
                                 std::uint64_t seed) {
  if (amplitudes.empty()) throw std::invalid_argument("no perturbation amplitudes given");
  for (double a : amplitudes)
    if (!(a >= 0.0) || !std::isfinite(a))
      throw std::invalid_argument("perturbation amplitudes must be finite and >= 0");
  PerturbReport rep;
  rep.seed = seed;
  rep.amplitudes = amplitudes;
  std::sort(rep.amplitudes.rbegin(), rep.amplitudes.rend());

  RunConfig c = config;
  c.probe_stride = static_cast<int>(std::min<std::int64_t>(c.max_steps, 1 << 30));
  const PeriodicField u0 = c.initial_field();
  const PeriodicField phi = perturbation_direction(u0.grid(), c.sobolev_s, seed);

  const SolveResult base = solve(c, u0);
  rep.outcome = base.outcome;
  if (base.outcome != Outcome::completed) return rep;
  for (double a : rep.amplitudes) {
    const SolveResult r = solve(c, u0 + a * phi);
    rep.outcome = worse(rep.outcome, r.outcome);
    if (r.outcome != Outcome::completed) return rep;
    const double d = field_distance(r.trajectory.back().u, base.trajectory.back().u, Norm::sup);
    rep.distances.push_back(d);
    rep.ratios.push_back(a > 0.0 ? d / a : kUndefined);
  }
  for (std::size_t i = 0; i + 1 < rep.distances.size(); ++i)
    if (!(rep.distances[i + 1] < rep.distances[i])) rep.monotone = false;
  return rep;
}

// --- bi-Hamiltonian ------------------------------------------------------------

json to_json(const BiHamiltonianStudy& s) {
  json probes = json::array();
  for (const auto& p : s.probes) {
    json j{{"t", p.t}, {"ok", p.ok}};
    if (p.ok) {
      const auto& r = p.report;
      j["residual_b2"] = number(r.residual_b2);
      j["residual_b1"] = number(r.residual_b1);
      j["translation_residual_b2"] = number(r.translation_residual_b2);
      j["gateaux_error_h1"] = number(r.gateaux_error_h1);
      j["gateaux_error_h2"] = number(r.gateaux_error_h2);
      j["b1_mean_defect"] = number(r.b1_mean_defect);
    } else {
      j["error"] = p.error;
    }
    probes.push_back(j);
  }
  return {{"n", s.n}, {"probes", probes}, {"outcome", to_string(s.outcome)}};
}

BiHamiltonianStudy bihamiltonian_study(const RunConfig& config, bool refine) {
  RunConfig c = config;
  if (refine) c.n *= 2;
  if (c.dt) {
    const auto steps = static_cast<std::int64_t>(std::ceil(c.t_end / *c.dt - 1e-9));
    c.probe_stride = static_cast<int>(std::max<std::int64_t>(1, (steps + 2) / 3));
  }
  const SolveResult r = solve(c);
  BiHamiltonianStudy study;
  study.n = c.n;
  study.outcome = r.outcome;

  std::vector<std::size_t> picks{0};
  const std::size_t last = r.trajectory.size() - 1;
  if (last >= 3) {
    for (std::size_t i = 1; i <= 3; ++i) picks.push_back((i * last + 1) / 3);
  } else {
    for (std::size_t i = 1; i <= last; ++i) picks.push_back(i);
  }
  for (std::size_t i : picks) {
    BiHamiltonianProbe p;
    p.t = r.trajectory[i].t;
    try {
      p.report = bihamiltonian_check(r.trajectory[i].u);
      p.ok = true;
    } catch (const Error& e) {
      p.error = e.what();
    }
    study.probes.push_back(std::move(p));
  }
  return study;
}

// --- analyticity ---------------------------------------------------------------

json to_json(const RadiusEstimate& r) {
  return {{"t", r.t},
          {"defined", r.defined},
          {"sigma", number(r.sigma)},
          {"fit_quality", number(r.fit_quality)},
          {"tail_floor", number(r.tail_floor)},
          {"modes_used", r.modes_used}};
}

json to_json(const AnalyticityStudy& s) {
  json radius = json::array();
  for (const auto& r : s.radius) radius.push_back(to_json(r));
  json es = json::array();
  for (const auto& e : s.es)
    es.push_back({{"value", number(e.value)}, {"argmax", e.argmax}, {"truncated", e.truncated}});
  return {{"radius", radius}, {"es_norm_s", s.es_s}, {"es_norm", es},
          {"outcome", to_string(s.outcome)}};
}

AnalyticityStudy analyticity_study(const RunConfig& config) {
  const SolveResult r = solve(config);
  AnalyticityStudy s;
  s.outcome = r.outcome;
  s.radius = radius_track(r.trajectory);
  const EsNormConfig cfg{s.es_s, 30, false};
  for (const auto& st : r.trajectory) s.es.push_back(es_norm_detailed(st.u, cfg));
  return s;
}

json to_json(const EsPropertyReport& r) {
  return {{"s", r.s},
          {"s_prime", r.s_prime},
          {"k_max", r.k_max},
          {"samples", r.samples},
          {"product_constant", number(r.product_constant)},
          {"product_worst_pair", {r.product_worst_i, r.product_worst_j}},
          {"dx_constant", number(r.dx_constant)},
          {"dx_worst_sample", r.dx_worst},
          {"lambda_ratio", number(r.lambda_ratio)},
          {"lambda_worst_sample", r.lambda_worst},
          {"lambda_holds", r.lambda_holds},
          {"monotone_holds", r.monotone_holds},
          {"any_truncated", r.any_truncated}};
}

json to_json(const CkReport& r) {
  return {{"s", r.s},
          {"s_prime", r.s_prime},
          {"radius", r.radius},
          {"trials", r.trials},
          {"seed", r.seed},
          {"grid_n", r.grid_n},
          {"k_max", r.k_max},
          {"constant", number(r.constant)},
          {"worst_trial", r.worst_trial},
          {"skipped", r.skipped},
          {"rhs_at_zero", number(r.rhs_at_zero)}};
}

std::vector<SpacePair> default_es_pairs() {
  std::vector<SpacePair> out;
  for (int i = 2; i <= 5; ++i)
    for (int j = 1; j < i; ++j) out.emplace_back(0.1 * i, 0.1 * j);
  return out;
}

std::vector<SpacePair> reference_ck_pairs() { return {{0.4, 0.2}, {0.3, 0.15}, {0.2, 0.1}}; }

std::vector<EsPropertyReport> es_props(const EsPropsOptions& options) {
  if (options.samples < 1) throw std::invalid_argument("need at least one sample");
  const PeriodicGrid grid(options.grid_n);
  std::mt19937_64 rng(options.seed);
  std::vector<PeriodicField> samples;
  for (int i = 0; i < options.samples; ++i) samples.push_back(random_trig_polynomial(grid, rng));
  const auto pairs = options.pairs.empty() ? default_es_pairs() : options.pairs;
  std::vector<EsPropertyReport> out;
  for (const auto& [s, sp] : pairs) out.push_back(es_property_suite(samples, s, sp, options.k_max));
  return out;
}

}  // namespace novikov
