// Experiment drivers behind the command-line tool: single runs with file
// output, cross-solver comparison, convergence and perturbation studies, and
// the bi-Hamiltonian and analyticity reports.
#ifndef NOVIKOV_HARNESS_HPP
#define NOVIKOV_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "novikov/analyticity.hpp"
#include "novikov/config.hpp"
#include "novikov/diagnostics.hpp"
#include "novikov/eulerian.hpp"
#include "novikov/lagrangian.hpp"

namespace novikov {

std::string_view tool_version();

/// Solver output reduced to what every formulation provides.
struct SolveResult {
  Outcome outcome = Outcome::completed;
  double final_time = 0.0;
  double breakdown_time = kUndefined;
  std::string message;
  /// Eulerian u at every probe (reconstructed for the Lagrangian solvers).
  std::vector<EulerianState> trajectory;
  DiagnosticsRecord record;
  /// Flow-map runs only, one per probe.
  std::vector<LagrangianSnapshot> lagrangian;
};

SolveResult solve(const RunConfig& config);
SolveResult solve(const RunConfig& config, const PeriodicField& u0);

struct RunSummary {
  Outcome outcome = Outcome::completed;
  double final_time = 0.0;
  double t_end = 0.0;
  double breakdown_time = kUndefined;
  std::string message;
  double drift_h1 = kUndefined;
  double drift_h2 = kUndefined;
  double drift_h1_energy = kUndefined;
  double min_m = kUndefined;
  double max_orbit_residual = kUndefined;
  double max_persistence_ratio = kUndefined;
  std::vector<std::string> files;
  std::string config;
};

nlohmann::json to_json(const RunSummary& s);

/// Runs the configured solver and writes diagnostics.csv, snapshots/ and
/// summary.json (plus radius.json when analyticity is enabled) into `out`.
RunSummary run(const RunConfig& config, const std::filesystem::path& out);

// --- distances and comparison ------------------------------------------------

enum class Norm { sup, l2, hs };
std::string_view to_string(Norm norm);
Norm parse_norm(std::string_view text);

/// Distance between two fields, the coarser one interpolated onto the finer
/// grid. `s` is the Sobolev index for Norm::hs.
double field_distance(const PeriodicField& a, const PeriodicField& b, Norm norm, double s = 3.0);

class ProbeMismatch : public Error {
 public:
  using Error::Error;
};

struct CompareReport {
  Norm norm = Norm::sup;
  std::vector<double> times;
  std::vector<double> distances;
  double max_distance = 0.0;
  Outcome outcome_a = Outcome::completed;
  Outcome outcome_b = Outcome::completed;
};
nlohmann::json to_json(const CompareReport& r);

/// Requires both runs to probe the same times (to 1e-9).
CompareReport compare(const RunConfig& a, const RunConfig& b, Norm norm);

// --- convergence -------------------------------------------------------------

enum class Axis { dt, n };
std::string_view to_string(Axis axis);
Axis parse_axis(std::string_view text);

struct ConvergeReport {
  Axis axis = Axis::dt;
  /// Levels as given, sorted coarse to fine; the last one is the reference.
  std::vector<double> levels;
  /// Sup error at t_end of every level but the reference.
  std::vector<double> errors;
  /// errors[i] / errors[i + 1]
  std::vector<double> ratios;
  /// Least-squares slope of log error against log h (h = dt or 1/n); NaN
  /// when fewer than two errors are positive.
  double order = kUndefined;
  Outcome outcome = Outcome::completed;
};
nlohmann::json to_json(const ConvergeReport& r);

/// Needs at least three levels.
ConvergeReport converge(const RunConfig& base, Axis axis, std::vector<double> levels);

// --- continuous dependence -----------------------------------------------------

struct PerturbReport {
  std::uint64_t seed = 0;
  std::vector<double> amplitudes;
  /// sup distance at t_end between the perturbed and the unperturbed run
  std::vector<double> distances;
  std::vector<double> ratios;
  bool monotone = true;
  Outcome outcome = Outcome::completed;
};
nlohmann::json to_json(const PerturbReport& r);

/// Unit H^s-norm random direction (s = config.sobolev_s), drawn once from
/// `seed` and shared by every amplitude.
PeriodicField perturbation_direction(const PeriodicGrid& grid, double s, std::uint64_t seed);

PerturbReport perturbation_study(const RunConfig& config, const std::vector<double>& amplitudes,
                                 std::uint64_t seed);

// --- bi-Hamiltonian ------------------------------------------------------------

struct BiHamiltonianProbe {
  double t = 0.0;
  bool ok = false;
  std::string error;
  BiHamiltonianReport report;
};

struct BiHamiltonianStudy {
  int n = 0;
  std::vector<BiHamiltonianProbe> probes;
  Outcome outcome = Outcome::completed;
};
nlohmann::json to_json(const BiHamiltonianStudy& s);

/// Checks at t = 0 and three later probe times; `refine` doubles grid.n.
BiHamiltonianStudy bihamiltonian_study(const RunConfig& config, bool refine = false);

// --- analyticity ---------------------------------------------------------------

struct AnalyticityStudy {
  std::vector<RadiusEstimate> radius;
  /// E_s norms (s = 0.1) of the probed fields, with truncation flags.
  std::vector<EsNormResult> es;
  double es_s = 0.1;
  Outcome outcome = Outcome::completed;
};
nlohmann::json to_json(const AnalyticityStudy& s);
AnalyticityStudy analyticity_study(const RunConfig& config);

nlohmann::json to_json(const EsPropertyReport& r);
nlohmann::json to_json(const CkReport& r);
nlohmann::json to_json(const RadiusEstimate& r);

struct EsPropsOptions {
  std::vector<SpacePair> pairs;
  int samples = 20;
  int grid_n = 64;
  int k_max = 60;
  std::uint64_t seed = 0;
};
/// Every pair s > s' from {0.1, ..., 0.5}.
std::vector<SpacePair> default_es_pairs();
std::vector<EsPropertyReport> es_props(const EsPropsOptions& options);

/// (0.4, 0.2), (0.3, 0.15), (0.2, 0.1)
std::vector<SpacePair> reference_ck_pairs();

/// Writes `value` as indented JSON followed by a newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& value);

}  // namespace novikov

#endif  // NOVIKOV_HARNESS_HPP
