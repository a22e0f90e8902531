#include "novikov/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "novikov/eulerian.hpp"
#include "novikov/snapshot_io.hpp"

namespace novikov {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string number_text(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double to_double(std::string_view text, const std::string& key, int line) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || p != end || !std::isfinite(v))
    throw ConfigError(key + ": expected a finite number, got '" + std::string(text) + "'", line);
  return v;
}

std::int64_t to_int(std::string_view text, const std::string& key, int line) {
  std::int64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || p != end)
    throw ConfigError(key + ": expected an integer, got '" + std::string(text) + "'", line);
  return v;
}

bool to_bool(std::string_view text, const std::string& key, int line) {
  if (text == "true" || text == "yes" || text == "on" || text == "1") return true;
  if (text == "false" || text == "no" || text == "off" || text == "0") return false;
  throw ConfigError(key + ": expected true or false, got '" + std::string(text) + "'", line);
}

template <class Enum, std::size_t N>
Enum to_enum(std::string_view text, const std::array<Enum, N>& values, const std::string& key,
             int line) {
  for (Enum e : values)
    if (to_string(e) == text) return e;
  std::string names;
  for (Enum e : values) names += (names.empty() ? "" : ", ") + std::string(to_string(e));
  throw ConfigError(key + ": unknown value '" + std::string(text) + "' (expected one of " +
                        names + ")",
                    line);
}

constexpr std::array kSolvers{SolverKind::eulerian, SolverKind::flowmap,
                              SolverKind::conservative};
constexpr std::array kInitialKinds{InitialKind::fourier, InitialKind::momentum,
                                   InitialKind::file, InitialKind::preset};

PeriodicField poisson_momentum(const PeriodicGrid& grid, double amplitude, double ratio) {
  std::vector<FourierMode> modes{{0, 1.0, 0.0}};
  for (int k = 1; k < grid.size() / 2; ++k)
    modes.push_back({k, amplitude * std::pow(ratio, k), 0.0});
  return from_momentum(trig_polynomial(grid, modes));
}

}  // namespace

ConfigError::ConfigError(const std::string& what, int line)
    : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

std::string_view to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::eulerian: return "eulerian";
    case SolverKind::flowmap: return "flowmap";
    case SolverKind::conservative: return "conservative";
  }
  return "?";
}

std::string_view to_string(InitialKind kind) {
  switch (kind) {
    case InitialKind::fourier: return "fourier";
    case InitialKind::momentum: return "momentum";
    case InitialKind::file: return "file";
    case InitialKind::preset: return "preset";
  }
  return "?";
}

std::vector<FourierMode> parse_modes(std::string_view text) {
  std::vector<FourierMode> modes;
  std::size_t pos = 0;
  auto fail = [&](const std::string& why) {
    throw ConfigError("initial.modes: " + why + " in '" + std::string(text) + "'");
  };
  while (true) {
    pos = text.find_first_not_of(" \t", pos);
    if (pos == std::string_view::npos) break;
    if (text[pos] != '(') fail("expected '('");
    const auto close = text.find(')', pos);
    if (close == std::string_view::npos) fail("missing ')'");
    std::vector<std::string_view> parts;
    std::string_view inner = text.substr(pos + 1, close - pos - 1);
    for (std::size_t start = 0;;) {
      const auto comma = inner.find(',', start);
      parts.push_back(trim(inner.substr(start, comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (parts.size() != 3) fail("each mode needs (k, cos, sin)");
    FourierMode m;
    m.k = static_cast<int>(to_int(parts[0], "initial.modes", 0));
    m.cos_coeff = to_double(parts[1], "initial.modes", 0);
    m.sin_coeff = to_double(parts[2], "initial.modes", 0);
    if (m.k < 0) fail("wavenumbers must be >= 0");
    modes.push_back(m);
    pos = text.find_first_not_of(" \t", close + 1);
    if (pos == std::string_view::npos) break;
    if (text[pos] != ',') fail("expected ',' between modes");
    ++pos;
  }
  if (modes.empty()) throw ConfigError("initial.modes: no modes given");
  return modes;
}

RunConfig parse_config(std::string_view text) {
  RunConfig c;
  std::map<std::string, int> seen;
  std::string section;
  bool have_n = false, have_t_end = false, have_kind = false;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view s = raw;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("malformed section header", line);
      section = std::string(trim(s.substr(1, s.size() - 2)));
      if (section.empty() || section.find_first_of(" \t.=") != std::string::npos)
        throw ConfigError("malformed section name '" + section + "'", line);
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected key = value", line);
    const std::string name(trim(s.substr(0, eq)));
    const std::string_view value = trim(s.substr(eq + 1));
    if (name.empty()) throw ConfigError("missing key before '='", line);
    if (value.empty()) throw ConfigError(name + ": missing value", line);
    const std::string key =
        section.empty() || name.find('.') != std::string::npos ? name : section + "." + name;
    if (auto [it, fresh] = seen.emplace(key, line); !fresh)
      throw ConfigError(key + ": duplicate key (first set on line " +
                            std::to_string(it->second) + ")",
                        line);

    if (key == "grid.n") {
      c.n = static_cast<int>(to_int(value, key, line));
      have_n = true;
    } else if (key == "time.dt") {
      c.dt = to_double(value, key, line);
    } else if (key == "time.cfl") {
      c.cfl = to_double(value, key, line);
    } else if (key == "time.t_end") {
      c.t_end = to_double(value, key, line);
      have_t_end = true;
    } else if (key == "time.max_steps") {
      c.max_steps = to_int(value, key, line);
    } else if (key == "solver") {
      c.solver = to_enum(value, kSolvers, key, line);
    } else if (key == "initial.kind") {
      c.initial.kind = to_enum(value, kInitialKinds, key, line);
      have_kind = true;
    } else if (key == "initial.modes") {
      try {
        c.initial.modes = parse_modes(value);
      } catch (const ConfigError& e) {
        throw ConfigError(e.what(), line);
      }
    } else if (key == "initial.path") {
      c.initial.path = std::string(value);
    } else if (key == "initial.preset") {
      c.initial.preset = std::string(value);
    } else if (key == "sobolev_s") {
      c.sobolev_s = to_double(value, key, line);
    } else if (key == "probes.stride") {
      c.probe_stride = static_cast<int>(to_int(value, key, line));
    } else if (key == "output.dir") {
      c.output_dir = std::string(value);
    } else if (key == "output.snapshots") {
      c.snapshots = to_bool(value, key, line);
    } else if (key == "analyticity.enabled") {
      c.analyticity = to_bool(value, key, line);
    } else if (key == "seed") {
      const auto v = to_int(value, key, line);
      if (v < 0) throw ConfigError("seed: must be non-negative", line);
      c.seed = static_cast<std::uint64_t>(v);
    } else if (key == "blowup.c1_threshold") {
      c.blowup.c1_threshold = to_double(value, key, line);
    } else if (key == "blowup.dt_min") {
      c.blowup.dt_min = to_double(value, key, line);
    } else {
      throw ConfigError("unknown key '" + key + "'", line);
    }
  }
  if (!have_n) throw ConfigError("grid.n: required");
  if (!have_t_end) throw ConfigError("time.t_end: required");
  if (!have_kind) throw ConfigError("initial.kind: required");
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  RunConfig c = parse_config(buf.str());
  if (c.initial.kind == InitialKind::file && c.initial.path.is_relative())
    c.initial.path = path.parent_path() / c.initial.path;
  return c;
}

void RunConfig::validate() const {
  if (n < 8 || n % 2 != 0) throw ConfigError("grid.n: must be even and >= 8");
  if (dt.has_value() == cfl.has_value())
    throw ConfigError(dt ? "time.dt and time.cfl: set exactly one, not both"
                         : "time.dt or time.cfl: one of them is required");
  if (dt && !(*dt > 0.0)) throw ConfigError("time.dt: must be positive");
  if (cfl && !(*cfl > 0.0 && *cfl <= 1.0)) throw ConfigError("time.cfl: must lie in (0, 1]");
  if (!(t_end > 0.0)) throw ConfigError("time.t_end: must be positive");
  if (max_steps < 1) throw ConfigError("time.max_steps: must be >= 1");
  if (probe_stride < 1) throw ConfigError("probes.stride: must be >= 1");
  if (!(sobolev_s >= -4.0 && sobolev_s <= 8.0))
    throw ConfigError("sobolev_s: must lie in [-4, 8]");
  if (!(blowup.c1_threshold > 0.0)) throw ConfigError("blowup.c1_threshold: must be positive");
  if (!(blowup.dt_min > 0.0)) throw ConfigError("blowup.dt_min: must be positive");
  switch (initial.kind) {
    case InitialKind::fourier:
    case InitialKind::momentum:
      if (initial.modes.empty()) throw ConfigError("initial.modes: required for this kind");
      break;
    case InitialKind::file:
      if (initial.path.empty()) throw ConfigError("initial.path: required for kind = file");
      break;
    case InitialKind::preset: {
      const auto& names = preset_names();
      if (std::find(names.begin(), names.end(), initial.preset) == names.end())
        throw ConfigError("initial.preset: unknown preset '" + initial.preset + "'");
      break;
    }
  }
}

TimeStepper RunConfig::stepper() const {
  TimeStepper s;
  if (dt) s.control = FixedStep{*dt};
  else s.control = CflStep{*cfl};
  s.t_end = t_end;
  s.max_steps = max_steps;
  return s;
}

PeriodicField RunConfig::initial_field() const { return initial_field(PeriodicGrid(n)); }

PeriodicField RunConfig::initial_field(const PeriodicGrid& grid) const {
  switch (initial.kind) {
    case InitialKind::fourier: return trig_polynomial(grid, initial.modes);
    case InitialKind::momentum: return from_momentum(trig_polynomial(grid, initial.modes));
    case InitialKind::preset: return preset_field(initial.preset, grid);
    case InitialKind::file: {
      PeriodicField u = [&] {
        try {
          return read_field_csv(initial.path);
        } catch (const Error& e) {
          throw ConfigError("initial.path: " + std::string(e.what()));
        }
      }();
      if (u.size() != n)
        throw ConfigError("initial.path: file has " + std::to_string(u.size()) +
                          " samples but grid.n = " + std::to_string(n));
      return u.grid() == grid ? u : resample(u, grid);
    }
  }
  throw ConfigError("initial.kind: unhandled");
}

std::string to_text(const RunConfig& c) {
  std::ostringstream out;
  out << "solver = " << to_string(c.solver) << '\n';
  out << "seed = " << c.seed << '\n';
  out << "sobolev_s = " << number_text(c.sobolev_s) << '\n';
  out << "[grid]\nn = " << c.n << '\n';
  out << "[time]\n";
  if (c.dt) out << "dt = " << number_text(*c.dt) << '\n';
  if (c.cfl) out << "cfl = " << number_text(*c.cfl) << '\n';
  out << "t_end = " << number_text(c.t_end) << '\n';
  out << "max_steps = " << c.max_steps << '\n';
  out << "[initial]\nkind = " << to_string(c.initial.kind) << '\n';
  if (!c.initial.modes.empty()) {
    out << "modes = ";
    for (std::size_t i = 0; i < c.initial.modes.size(); ++i) {
      const auto& m = c.initial.modes[i];
      out << (i ? ", " : "") << '(' << m.k << ", " << number_text(m.cos_coeff) << ", "
          << number_text(m.sin_coeff) << ')';
    }
    out << '\n';
  }
  if (!c.initial.path.empty()) out << "path = " << c.initial.path.string() << '\n';
  if (!c.initial.preset.empty()) out << "preset = " << c.initial.preset << '\n';
  out << "[probes]\nstride = " << c.probe_stride << '\n';
  out << "[output]\ndir = " << c.output_dir.string() << '\n';
  out << "snapshots = " << (c.snapshots ? "true" : "false") << '\n';
  out << "[analyticity]\nenabled = " << (c.analyticity ? "true" : "false") << '\n';
  out << "[blowup]\nc1_threshold = " << number_text(c.blowup.c1_threshold) << '\n';
  out << "dt_min = " << number_text(c.blowup.dt_min) << '\n';
  return out.str();
}

// --- presets ---------------------------------------------------------------

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"reference", "positive", "constant", "smooth",
                                              "temporal",  "large",    "analytic"};
  return names;
}

PeriodicField preset_field(std::string_view name, const PeriodicGrid& grid) {
  const auto cosine = [&](double a) {
    return PeriodicField::sample(grid, [a](double x) { return a * std::cos(kTwoPi * x); });
  };
  if (name == "reference") return from_momentum(PeriodicField::constant(grid, 1.0) + cosine(1.0));
  if (name == "positive") return from_momentum(PeriodicField::constant(grid, 1.0) + cosine(0.5));
  if (name == "constant") return PeriodicField::constant(grid, 1.5);
  if (name == "smooth") return poisson_momentum(grid, 0.1, 0.8);
  if (name == "temporal") return poisson_momentum(grid, 2.0, 0.5);
  if (name == "large") return from_momentum(cosine(10.0));
  if (name == "analytic") return cosine(0.1);
  throw ConfigError("initial.preset: unknown preset '" + std::string(name) + "'");
}

RunConfig preset_config(std::string_view name) {
  RunConfig c;
  c.initial.kind = InitialKind::preset;
  c.initial.preset = std::string(name);
  c.n = 256;
  c.dt = 1e-3;
  c.t_end = 1.0;
  c.probe_stride = 100;
  if (name == "constant") {
    c.n = 64;
  } else if (name == "smooth") {
    c.n = 128;
    c.t_end = 0.2;
  } else if (name == "temporal") {
    c.n = 64;
  } else if (name == "large") {
    c.dt.reset();
    c.cfl = 0.2;
    c.t_end = 8.0;
    c.blowup.dt_min = 1e-9;
    // No breakdown develops at n = 256 on this horizon; a low C1 threshold
    // makes the preset exercise the detection path instead.
    c.blowup.c1_threshold = 2.5;
  } else if (name == "analytic") {
    c.n = 128;
    c.t_end = 0.1;
    c.probe_stride = 1;
    c.analyticity = true;
  }
  c.validate();
  return c;
}

}  // namespace novikov
