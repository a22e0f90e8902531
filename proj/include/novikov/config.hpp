// Run configuration: a small key = value format with [section] headers.
//
//   # comment
//   solver = eulerian          # eulerian | flowmap | conservative
//   seed = 1
//   [grid]
//   n = 256
//   [time]
//   dt = 1e-3                  # or cfl = 0.4, never both
//   t_end = 1
//   [initial]
//   kind = momentum            # fourier | momentum | file | preset
//   modes = (0, 1, 0), (1, 1, 0)
//
// A key inside [section] is read as section.key; dotted keys may also be
// written out in full anywhere. Unknown keys are errors.
#ifndef NOVIKOV_CONFIG_HPP
#define NOVIKOV_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "novikov/spectral.hpp"
#include "novikov/stepping.hpp"

namespace novikov {

class ConfigError : public Error {
 public:
  /// line = 0 for validation errors not tied to one line.
  ConfigError(const std::string& what, int line = 0);
  int line() const { return line_; }

 private:
  int line_;
};

enum class SolverKind { eulerian, flowmap, conservative };
std::string_view to_string(SolverKind kind);

enum class InitialKind { fourier, momentum, file, preset };
std::string_view to_string(InitialKind kind);

struct InitialSpec {
  InitialKind kind = InitialKind::fourier;
  /// fourier: modes of u0; momentum: modes of m0 = Lambda^2 u0.
  std::vector<FourierMode> modes;
  /// file: an "x,value" CSV of u0 on the configured grid.
  std::filesystem::path path;
  /// preset: one of preset_names().
  std::string preset;
};

struct RunConfig {
  int n = 0;
  std::optional<double> dt;
  std::optional<double> cfl;
  double t_end = 0.0;
  std::int64_t max_steps = 100'000'000;
  SolverKind solver = SolverKind::eulerian;
  InitialSpec initial;
  double sobolev_s = 3.0;
  int probe_stride = 1;
  std::filesystem::path output_dir = "novikov_out";
  bool snapshots = true;
  bool analyticity = false;
  std::uint64_t seed = 0;
  BlowupPolicy blowup;

  /// Throws ConfigError naming the offending key.
  void validate() const;
  TimeStepper stepper() const;
  /// u0 on the configured grid.
  PeriodicField initial_field() const;
  /// u0 on another grid (the initial data is re-evaluated, not resampled,
  /// unless it comes from a file).
  PeriodicField initial_field(const PeriodicGrid& grid) const;
};

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);
/// Canonical text form; parse_config(to_text(c)) reproduces c.
std::string to_text(const RunConfig& config);

/// Parses "(k, a, b), (k, a, b), ...".
std::vector<FourierMode> parse_modes(std::string_view text);

// --- presets ---------------------------------------------------------------

/// reference     m0 = 1 + cos 2 pi x (sign condition, min m0 = 0)
/// positive      m0 = 1 + cos(2 pi x)/2
/// constant      u0 = 1.5
/// smooth        m0 = 1 + 0.1 sum_k 0.8^k cos 2 pi k x
/// temporal      m0 = 1 + 2 sum_k 0.5^k cos 2 pi k x
/// large         m0 = 10 cos 2 pi x (sign-changing)
/// analytic      u0 = 0.1 cos 2 pi x
const std::vector<std::string>& preset_names();
PeriodicField preset_field(std::string_view name, const PeriodicGrid& grid);
/// A complete configuration around the preset (grid, step and horizon used
/// by the acceptance runs).
RunConfig preset_config(std::string_view name);

}  // namespace novikov

#endif  // NOVIKOV_CONFIG_HPP
