// Scale of Banach spaces E_s used for the analytic (Cauchy-Kowalevski)
// existence argument, the first-order system in (u, v = u_x), and a
// Fourier-tail estimate of the radius of analyticity.
//
//   |||u|||_s = sup_{k>0} ||d_x^k u||_{H^2} s^k (k+1)^2 / k!
#ifndef NOVIKOV_ANALYTICITY_HPP
#define NOVIKOV_ANALYTICITY_HPP

#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "novikov/eulerian.hpp"
#include "novikov/spectral.hpp"

namespace novikov {

struct EsNormConfig {
  double s = 0.1;
  /// The supremum is truncated at k_max.
  int k_max = 30;
  /// Also take k = 0 into the supremum, which turns the seminorm of the
  /// definition into a norm.
  bool include_zero = false;

  void validate() const;
};

struct EsNormResult {
  double value = 0.0;
  /// k attaining the maximum (0 when every term vanishes).
  int argmax = 0;
  /// One of the last three terms is at least 1e-3 of the maximum, so the
  /// truncation at k_max may have cut off the supremum.
  bool truncated = false;
};

/// Terms are accumulated in log space; a term above 1e300 makes the result
/// +infinity.
/// Fourier coefficients below 1e-13 of the largest one count as zero.
EsNormResult es_norm_detailed(const PeriodicField& u, const EsNormConfig& cfg);
double es_norm(const PeriodicField& u, const EsNormConfig& cfg);

/// Random trigonometric polynomial: degree uniform in [1, max_degree], the
/// k-th mode with uniform coefficients in [-2^{-k}, 2^{-k}].
PeriodicField random_trig_polynomial(const PeriodicGrid& grid, std::mt19937_64& rng,
                                     int max_degree = 8);

struct EsPropertyReport {
  double s = 0.0;
  double s_prime = 0.0;
  int k_max = 0;
  std::size_t samples = 0;
  /// max |||uv|||_s / (|||u|||_s |||v|||_s) over sample pairs
  double product_constant = 0.0;
  std::size_t product_worst_i = 0, product_worst_j = 0;
  /// max (s - s') |||u_x|||_{s'} / |||u|||_s
  double dx_constant = 0.0;
  std::size_t dx_worst = 0;
  /// max |||Lambda^{-2} u|||_{s'} / |||u|||_s; the inequality asserts <= 1
  double lambda_ratio = 0.0;
  std::size_t lambda_worst = 0;
  bool lambda_holds = true;
  /// |||u|||_{s'} <= |||u|||_s on every sample
  bool monotone_holds = true;
  /// Some norm evaluation hit the truncation flag.
  bool any_truncated = false;
};

EsPropertyReport es_property_suite(std::span<const PeriodicField> samples, double s,
                                   double s_prime, int k_max = 30);

struct SystemState {
  PeriodicField u;
  PeriodicField v;

  /// (u, u_x)
  static SystemState from_field(const PeriodicField& u);
};

enum class GForm {
  /// -2uv^2 - u^2 v_x - ..., the x-derivative of the u equation
  consistent,
  /// -uv^2 - u^2 v_x - ..., as printed
  literal,
};

/// (F(u, v), G(u, v)) of the first-order system, products dealiased.
SystemState system_rhs(const SystemState& w, GForm form = GForm::consistent);

/// |||u|||_s + |||v|||_s
double product_norm(const SystemState& w, const EsNormConfig& cfg);

struct CkReport {
  double s = 0.0;
  double s_prime = 0.0;
  double radius = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;
  int grid_n = 0;
  int k_max = 0;
  /// max over trials of (s - s') |||RHS(w1) - RHS(w2)|||_{s'} / |||w1 - w2|||_s
  double constant = 0.0;
  int worst_trial = -1;
  int skipped = 0;
  /// |||RHS(0)|||_s (condition 3)
  double rhs_at_zero = 0.0;
};

/// Lipschitz check of the system right-hand side between the spaces X_s and
/// X_{s'} on random pairs of trigonometric-polynomial states inside the
/// X_s ball of the given radius.
/// (s, s')
using SpacePair = std::pair<double, double>;

/// The same check for several (s, s') pairs on one shared set of trial
/// states, drawn inside the ball of the largest s.
std::vector<CkReport> ck_lipschitz_sweep(std::span<const SpacePair> pairs, double radius,
                                         int trials, std::uint64_t seed, int grid_n = 64,
                                         int k_max = 30, GForm form = GForm::consistent);

CkReport ck_lipschitz_check(double s, double s_prime, double radius, int trials,
                            std::uint64_t seed, int grid_n = 64, int k_max = 30,
                            GForm form = GForm::consistent);

struct RadiusEstimate {
  double t = 0.0;
  bool defined = false;
  /// |c_k| ~ exp(-2 pi sigma |k|); NaN when undefined.
  double sigma = 0.0;
  /// Coefficient of determination of the log-linear fit.
  double fit_quality = 0.0;
  /// log10 of the smallest magnitude used in the fit.
  double tail_floor = 0.0;
  int modes_used = 0;
};

/// Least-squares fit of log|c_k| against |k| over the modes with |k| >= 2 and
/// |c_k| > 1e-13 (both signs of k, Nyquist excluded). Fewer than four modes
/// leave the estimate undefined.
RadiusEstimate fit_radius(const PeriodicField& u, double t = 0.0);
std::vector<RadiusEstimate> radius_track(std::span<const EulerianState> trajectory);

}  // namespace novikov

#endif  // NOVIKOV_ANALYTICITY_HPP
