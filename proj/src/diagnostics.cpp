#include "novikov/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "novikov/eulerian.hpp"
#include "novikov/snapshot_io.hpp"

namespace novikov {

namespace {

bool defined(double v) { return !std::isnan(v); }

void require_positive_momentum(const PeriodicField& m, const char* who) {
  const double lo = sign_monitor(m);
  if (!(lo > 0.0))
    throw NonpositiveMomentum(std::string(who) + ": momentum minimum " + format_number(lo) +
                              " is not positive");
}

void require_nonvanishing_momentum(const PeriodicField& m, const char* who) {
  const auto fine = refine_samples(m, 8);
  const auto [lo, hi] = std::minmax_element(fine.begin(), fine.end());
  if (!(*lo > 0.0 || *hi < 0.0))
    throw MomentumVanishes(std::string(who) + ": momentum changes sign or vanishes");
}

// Mean of a pointwise expression evaluated on the 2x refined grid.
template <class F>
double refined_quadrature(const PeriodicField& u, F&& integrand) {
  const auto uf = refine_samples(u, 2);
  const auto uxf = refine_samples(derivative(u, 1), 2);
  double s = 0.0;
  for (std::size_t j = 0; j < uf.size(); ++j) s += integrand(uf[j], uxf[j]);
  return s / static_cast<double>(uf.size());
}

PeriodicField reciprocal(const PeriodicField& m) {
  return m.map([](double v) { return 1.0 / v; });
}

}  // namespace

// --- record ----------------------------------------------------------------

void DiagnosticsRecord::append(const DiagnosticsSample& s) {
  if (!std::isfinite(s.t)) throw std::invalid_argument("probe time must be finite");
  if (!samples_.empty()) {
    const double last = samples_.back().t;
    if (s.t == last) throw std::invalid_argument("probe times must be strictly monotone");
    if (samples_.size() >= 2) {
      const bool increasing = samples_[1].t > samples_[0].t;
      if ((s.t > last) != increasing)
        throw std::invalid_argument("probe times must be strictly monotone");
    }
  }
  for (double v : {s.h1, s.h2, s.h1_energy, s.mean_u, s.min_m, s.c1, s.hs, s.orbit_residual,
                   s.persistence_ratio})
    if (defined(v) && !std::isfinite(v))
      throw std::invalid_argument("diagnostic entries must be finite when defined");
  samples_.push_back(s);
}

std::vector<double> DiagnosticsRecord::times() const { return column(&DiagnosticsSample::t); }

std::vector<double> DiagnosticsRecord::column(double DiagnosticsSample::*member) const {
  std::vector<double> out;
  out.reserve(samples_.size());
  for (const auto& s : samples_) out.push_back(s.*member);
  return out;
}

double DiagnosticsRecord::relative_drift(double DiagnosticsSample::*member) const {
  if (samples_.empty()) return kUndefined;
  const double q0 = samples_.front().*member;
  if (!defined(q0)) return kUndefined;
  double worst = 0.0;
  for (const auto& s : samples_)
    if (defined(s.*member)) worst = std::max(worst, std::abs(s.*member - q0));
  return worst == 0.0 ? 0.0 : worst / std::max(std::abs(q0), 1e-300);
}

void DiagnosticsRecord::set_persistence_ratios(std::span<const double> ratios) {
  if (ratios.size() != samples_.size())
    throw std::invalid_argument("one persistence ratio per probe expected");
  for (std::size_t i = 0; i < ratios.size(); ++i) samples_[i].persistence_ratio = ratios[i];
}

void DiagnosticsRecord::write_csv(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  out << kCsvHeader << '\n';
  for (const auto& s : samples_) {
    out << format_number(s.t) << ',' << format_number(s.h1) << ',' << format_number(s.h2) << ','
        << format_number(s.h1_energy) << ',' << format_number(s.mean_u) << ','
        << format_number(s.min_m) << ',' << format_number(s.c1) << ',' << format_number(s.hs)
        << ',' << format_number(s.orbit_residual) << ',' << format_number(s.persistence_ratio)
        << '\n';
  }
}

DiagnosticsRecord DiagnosticsRecord::read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw FormatError("unexpected diagnostics header: " + line);
  DiagnosticsRecord rec;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c = split_csv_line(line);
    if (c.size() != 10) throw FormatError("expected 10 columns in diagnostics row");
    DiagnosticsSample s;
    s.t = parse_number(c[0]);
    s.h1 = parse_number(c[1]);
    s.h2 = parse_number(c[2]);
    s.h1_energy = parse_number(c[3]);
    s.mean_u = parse_number(c[4]);
    s.min_m = parse_number(c[5]);
    s.c1 = parse_number(c[6]);
    s.hs = parse_number(c[7]);
    s.orbit_residual = parse_number(c[8]);
    s.persistence_ratio = parse_number(c[9]);
    rec.append(s);
  }
  return rec;
}

DiagnosticsSample probe_diagnostics(double t, const PeriodicField& u,
                                    const DiagnosticsOptions& options, double orbit_residual) {
  DiagnosticsSample s;
  s.t = t;
  const PeriodicField m = helmholtz(u);
  s.min_m = sign_monitor(m);
  s.h1 = s.min_m > 0.0 ? h1_functional(m) : kUndefined;
  s.h2 = h2_functional(u);
  s.h1_energy = h1_energy(u);
  s.mean_u = u.mean();
  s.c1 = c1_norm(u);
  s.hs = sobolev_norm(u, options.sobolev_s);
  s.orbit_residual = orbit_residual;
  return s;
}

// --- functionals -----------------------------------------------------------

double inner_product(const PeriodicField& f, const PeriodicField& g) {
  const auto ff = refine_samples(f, 2);
  const auto gf = refine_samples(g, 2);
  double s = 0.0;
  for (std::size_t j = 0; j < ff.size(); ++j) s += ff[j] * gf[j];
  return s / static_cast<double>(ff.size());
}

double h1_functional(const PeriodicField& m) {
  require_positive_momentum(m, "H1");
  const PeriodicField mx = derivative(m, 1);
  double s = 0.0;
  for (int j = 0; j < m.size(); ++j)
    s += std::pow(m[j], -8.0 / 3.0) * mx[j] * mx[j] + 9.0 * std::pow(m[j], -2.0 / 3.0);
  return s / (3.0 * m.size());
}

double h2_functional(const PeriodicField& u) {
  return refined_quadrature(u, [](double a, double ax) {
           const double a2 = a * a, ax2 = ax * ax;
           return a2 * a2 + 2.0 * a2 * ax2 - ax2 * ax2 / 3.0;
         }) /
         8.0;
}

double h1_energy(const PeriodicField& u) {
  return refined_quadrature(u, [](double a, double ax) { return a * a + ax * ax; });
}

double sign_monitor(const PeriodicField& m) { return refined_min(m, 8); }

std::vector<double> persistence_ratio(std::span<const double> times,
                                      std::span<const PeriodicField> fields, double s) {
  const std::size_t n = fields.size();
  if (n < 3 || times.size() != n)
    throw std::invalid_argument("persistence ratio needs at least 3 probes with times");
  std::vector<double> hs2(n), c1(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double h = sobolev_norm(fields[i], s);
    hs2[i] = h * h;
    c1[i] = c1_norm(fields[i]);
  }
  // Three-point derivative on a possibly non-uniform probe grid: centered in
  // the interior, one-sided at the ends.
  auto slope = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t at) {
    const double ta = times[a], tb = times[b], tc = times[c];
    const double t = times[at];
    const double la = (2 * t - tb - tc) / ((ta - tb) * (ta - tc));
    const double lb = (2 * t - ta - tc) / ((tb - ta) * (tb - tc));
    const double lc = (2 * t - ta - tb) / ((tc - ta) * (tc - tb));
    // the weights sum to zero; differencing against hs2[at] keeps a flat
    // norm history exactly flat
    return la * (hs2[a] - hs2[at]) + lb * (hs2[b] - hs2[at]) + lc * (hs2[c] - hs2[at]);
  };
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) {
    double d;
    if (i == 0) d = slope(0, 1, 2, 0);
    else if (i == n - 1) d = slope(n - 3, n - 2, n - 1, n - 1);
    else d = slope(i - 1, i, i + 1, i);
    const double denom = c1[i] * c1[i] * hs2[i];
    r[i] = denom == 0.0 ? 0.0 : d / denom;
  }
  return r;
}

// --- variational calculus --------------------------------------------------

PeriodicField variational_derivative_h1(const PeriodicField& m) {
  require_positive_momentum(m, "dH1/dm");
  const PeriodicField mx = derivative(m, 1);
  std::vector<double> local(m.size()), flux(m.size());
  for (int j = 0; j < m.size(); ++j) {
    local[j] = (-(8.0 / 3.0) * std::pow(m[j], -11.0 / 3.0) * mx[j] * mx[j] -
                6.0 * std::pow(m[j], -5.0 / 3.0)) /
               3.0;
    flux[j] = std::pow(m[j], -8.0 / 3.0) * mx[j];
  }
  PeriodicField out(m.grid(), std::move(local));
  out -= (2.0 / 3.0) * derivative(PeriodicField(m.grid(), std::move(flux)), 1);
  return out;
}

namespace {

// dH2/du = u^3/2 + u u_x^2/2 - (u^2 u_x)_x/2 + (u_x^3)_x/6
PeriodicField h2_gradient_u(const PeriodicField& u) {
  const PeriodicField ux = derivative(u, 1);
  PeriodicField e = 0.5 * dealiased_product(u, u, u);
  e += 0.5 * dealiased_product(u, ux, ux);
  e -= 0.5 * derivative(dealiased_product(u, u, ux), 1);
  e += (1.0 / 6.0) * derivative(dealiased_product(ux, ux, ux), 1);
  return e;
}

// B2 f given Lambda^2 f directly, which saves a Lambda^{-2} Lambda^2 round trip.
PeriodicField b2_from_helmholtz(const PeriodicField& m, const PeriodicField& lf) {
  const PeriodicField inv_m = reciprocal(m);
  const PeriodicField inner = derivative(dealiased_product(inv_m, lf), 1);
  return helmholtz(dealiased_product(inv_m, inner));
}

}  // namespace

PeriodicField variational_derivative_h2(const PeriodicField& m) {
  return helmholtz_inverse(h2_gradient_u(helmholtz_inverse(m)));
}

double gateaux_error(const std::function<double(const PeriodicField&)>& functional,
                     const PeriodicField& gradient, const PeriodicField& m,
                     const PeriodicField& direction, double eps) {
  const double fd =
      (functional(m + eps * direction) - functional(m - eps * direction)) / (2.0 * eps);
  const double an = inner_product(gradient, direction);
  const double scale = std::max(std::abs(an), std::abs(fd));
  return scale == 0.0 ? 0.0 : std::abs(fd - an) / scale;
}

PeriodicField apply_b2(const PeriodicField& m, const PeriodicField& f) {
  require_nonvanishing_momentum(m, "B2");
  return b2_from_helmholtz(m, helmholtz(f));
}

PeriodicField apply_b1_kernel(const PeriodicField& g) {
  const int n = g.size();
  auto half = detail::forward_half(g.samples());
  for (int k = 0; k < n / 2; ++k) {
    const double w = kTwoPi * k;
    half[k] *= cplx(0.0, w * (4.0 + w * w));
  }
  half[n / 2] = 0.0;
  return PeriodicField(g.grid(), detail::inverse_half(half, n));
}

PeriodicField invert_b1_kernel(const PeriodicField& g) {
  const int n = g.size();
  auto half = detail::forward_half(g.samples());
  half[0] = 0.0;
  for (int k = 1; k < n / 2; ++k) {
    const double w = kTwoPi * k;
    half[k] /= cplx(0.0, w * (4.0 + w * w));
  }
  half[n / 2] = 0.0;
  return PeriodicField(g.grid(), detail::inverse_half(half, n));
}

B1Result apply_b1(const PeriodicField& m, const PeriodicField& f) {
  require_nonvanishing_momentum(m, "B1");
  const PeriodicField mx = derivative(m, 1);
  PeriodicField g = 3.0 * dealiased_product(m, derivative(f, 1)) + dealiased_product(mx, f);
  const double mean = g.mean();
  g -= PeriodicField::constant(g.grid(), mean);
  const PeriodicField h = invert_b1_kernel(g);
  PeriodicField value =
      -2.0 * (3.0 * dealiased_product(m, derivative(h, 1)) + 2.0 * dealiased_product(mx, h));
  return {std::move(value), mean};
}

BiHamiltonianReport bihamiltonian_check(const PeriodicField& u) {
  const PeriodicField m = helmholtz(u);
  require_positive_momentum(m, "bi-Hamiltonian check");
  BiHamiltonianReport rep;

  const PeriodicField mt = rhs_momentum(u);
  const PeriodicField mx = derivative(m, 1);
  const double mt_scale = std::max(1.0, mt.max_abs());

  const PeriodicField e2 = h2_gradient_u(u);
  const PeriodicField dh2 = helmholtz_inverse(e2);
  require_nonvanishing_momentum(m, "B2");
  const PeriodicField b2 = b2_from_helmholtz(m, e2);
  rep.residual_b2 = max_distance(mt, b2) / mt_scale;
  rep.translation_residual_b2 = max_distance(mx, b2) / std::max(1.0, mx.max_abs());

  const PeriodicField dh1 = variational_derivative_h1(m);
  const B1Result b1 = apply_b1(m, dh1);
  rep.residual_b1 = max_distance(mt, b1.value) / mt_scale;
  rep.b1_mean_defect = b1.mean_defect;

  // Fixed test direction, scaled so that m +- eps*phi stays positive.
  PeriodicField phi = PeriodicField::sample(m.grid(), [](double x) {
    return std::cos(kTwoPi * x) + 0.5 * std::sin(2 * kTwoPi * x) + 0.25 * std::cos(3 * kTwoPi * x);
  });
  const double eps = 1e-5;
  const double room = 0.5 * sign_monitor(m) / (eps * phi.max_abs());
  if (room < 1.0) phi *= room;

  rep.gateaux_error_h1 = gateaux_error(
      [](const PeriodicField& mm) { return h1_functional(mm); }, dh1, m, phi, eps);
  rep.gateaux_error_h2 = gateaux_error(
      [](const PeriodicField& mm) { return h2_functional(helmholtz_inverse(mm)); }, dh2, m, phi,
      eps);
  return rep;
}

}  // namespace novikov
