// Conserved functionals, monitors and the bi-Hamiltonian residual check.
//
//   H1 = (1/3) int (m^{-8/3} m_x^2 + 9 m^{-2/3}) dx       (needs m > 0)
//   H2 = (1/8) int (u^4 + 2 u^2 u_x^2 - u_x^4 / 3) dx
//   B1 = -2 (3m d_x + 2m_x)(4 d_x - d_x^3)^{-1}(3m d_x + m_x)
//   B2 = (1 - d_x^2)(1/m) d_x (1/m)(1 - d_x^2)
#ifndef NOVIKOV_DIAGNOSTICS_HPP
#define NOVIKOV_DIAGNOSTICS_HPP

#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "novikov/spectral.hpp"

namespace novikov {

inline constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();

class NonpositiveMomentum : public Error {
 public:
  using Error::Error;
};

class MomentumVanishes : public Error {
 public:
  using Error::Error;
};

/// One probe of a run. Undefined entries are NaN.
struct DiagnosticsSample {
  double t = 0.0;
  double h1 = kUndefined;
  double h2 = 0.0;
  double h1_energy = 0.0;
  double mean_u = 0.0;
  double min_m = 0.0;
  double c1 = 0.0;
  double hs = 0.0;
  double orbit_residual = kUndefined;
  double persistence_ratio = kUndefined;
};

class DiagnosticsRecord {
 public:
  /// Times must be strictly monotone (increasing for forward runs); defined
  /// entries must be finite.
  void append(const DiagnosticsSample& sample);

  const std::vector<DiagnosticsSample>& samples() const { return samples_; }
  bool empty() const { return samples_.empty(); }
  std::size_t size() const { return samples_.size(); }

  std::vector<double> times() const;
  std::vector<double> column(double DiagnosticsSample::*member) const;

  /// max_i |q_i - q_0| / max(|q_0|, tiny) over defined entries; NaN if the
  /// first entry is undefined.
  double relative_drift(double DiagnosticsSample::*member) const;

  void set_persistence_ratios(std::span<const double> ratios);

  static constexpr const char* kCsvHeader =
      "t,h1,h2,h1_energy,mean_u,min_m,c1,hs,orbit_residual,persistence_ratio";
  void write_csv(const std::filesystem::path& path) const;
  static DiagnosticsRecord read_csv(const std::filesystem::path& path);

 private:
  std::vector<DiagnosticsSample> samples_;
};

struct DiagnosticsOptions {
  double sobolev_s = 3.0;
};

/// Evaluates every per-probe quantity of u. h1 is NaN when min m <= 0.
DiagnosticsSample probe_diagnostics(double t, const PeriodicField& u,
                                    const DiagnosticsOptions& options,
                                    double orbit_residual = kUndefined);

// --- functionals ----------------------------------------------------------

/// int f g dx by the uniform-grid trapezoid rule.
double inner_product(const PeriodicField& f, const PeriodicField& g);

double h1_functional(const PeriodicField& m);
double h2_functional(const PeriodicField& u);
/// int (u^2 + u_x^2) dx
double h1_energy(const PeriodicField& u);
/// Minimum of the 8x refined trigonometric interpolant of m.
double sign_monitor(const PeriodicField& m);

/// Ratio (d/dt ||u||_{H^s}^2) / (||u||_{C^1}^2 ||u||_{H^s}^2) at every probe.
/// The time derivative is a three-point difference on the (possibly uneven)
/// probe times: centered inside, one-sided second order at the two ends.
/// Needs >= 3 probes. u == 0 gives 0.
std::vector<double> persistence_ratio(std::span<const double> times,
                                      std::span<const PeriodicField> fields, double s);

// --- variational calculus --------------------------------------------------

PeriodicField variational_derivative_h1(const PeriodicField& m);
/// Lambda^{-2} (dH2/du), with u = Lambda^{-2} m.
PeriodicField variational_derivative_h2(const PeriodicField& m);

/// Relative discrepancy between <dH/dm, phi> and the central difference
/// (H(m + eps phi) - H(m - eps phi)) / (2 eps).
double gateaux_error(const std::function<double(const PeriodicField&)>& functional,
                     const PeriodicField& gradient, const PeriodicField& m,
                     const PeriodicField& direction, double eps = 1e-5);

PeriodicField apply_b2(const PeriodicField& m, const PeriodicField& f);

struct B1Result {
  PeriodicField value;
  /// Mean of (3m d_x + m_x) f removed before inverting 4 d_x - d_x^3.
  double mean_defect;
};
B1Result apply_b1(const PeriodicField& m, const PeriodicField& f);

/// (4 d_x - d_x^3)^{-1} on mean-free fields; the k = 0 mode is set to 0.
PeriodicField invert_b1_kernel(const PeriodicField& g);
/// 4 g_x - g_xxx
PeriodicField apply_b1_kernel(const PeriodicField& g);

struct BiHamiltonianReport {
  /// ||m_t - B2 dH2/dm||_inf / max(1, ||m_t||_inf)
  double residual_b2 = 0.0;
  /// ||m_t - B1 dH1/dm||_inf / max(1, ||m_t||_inf); NaN when H1 is undefined.
  double residual_b1 = kUndefined;
  double gateaux_error_h1 = kUndefined;
  double gateaux_error_h2 = 0.0;
  /// Mean removed inside B1.
  double b1_mean_defect = kUndefined;
  /// ||m_x - B2 dH2/dm||_inf / max(1, ||m_x||_inf): the flow that the pair
  /// (B2, H2) generates as printed is x-translation.
  double translation_residual_b2 = 0.0;
};

/// Requires min m > 0. Throws NonpositiveMomentum otherwise.
BiHamiltonianReport bihamiltonian_check(const PeriodicField& u);

}  // namespace novikov

#endif  // NOVIKOV_DIAGNOSTICS_HPP
