#include "novikov/analyticity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace novikov {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLogOverflow = std::log(1e300);
constexpr double kCoefficientFloor = 1e-13;

double log_sum_exp(const std::vector<double>& v) {
  double hi = -kInf;
  for (double x : v) hi = std::max(hi, x);
  if (hi == -kInf) return -kInf;
  double s = 0.0;
  for (double x : v) s += std::exp(x - hi);
  return hi + std::log(s);
}

}  // namespace

void EsNormConfig::validate() const {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("E_s index must lie in (0, 1)");
  if (k_max < 5) throw std::invalid_argument("E_s truncation k_max must be >= 5");
}

EsNormResult es_norm_detailed(const PeriodicField& u, const EsNormConfig& cfg) {
  cfg.validate();
  const int n = u.size();
  const auto half = detail::forward_half(u.samples());

  // log(2 (1 + w^2)^2 |c_k|^2) per resolved mode; the Nyquist mode is dropped
  // like in every derivative. Coefficients at the transform's roundoff level
  // are treated as zero: (2 pi k s)^k / k! would otherwise let them dominate.
  double cmax = 0.0;
  for (const auto& c : half) cmax = std::max(cmax, std::abs(c));
  const double floor = kCoefficientFloor * cmax;
  std::vector<double> base, logw;
  for (int k = 1; k < n / 2; ++k) {
    const double a = std::abs(half[k]);
    if (a <= floor) continue;
    const double w = kTwoPi * k;
    base.push_back(std::log(2.0) + 2.0 * std::log1p(w * w) + 2.0 * std::log(a));
    logw.push_back(std::log(w));
  }

  std::vector<double> log_terms;
  const int k0 = cfg.include_zero ? 0 : 1;
  std::vector<double> acc(base.size());
  for (int k = k0; k <= cfg.k_max; ++k) {
    for (std::size_t i = 0; i < base.size(); ++i) acc[i] = base[i] + 2.0 * k * logw[i];
    double log_norm_sq = log_sum_exp(acc);
    if (k == 0) {
      const double c0 = std::abs(half[0]);
      const double tail = base.empty() ? -kInf : log_norm_sq;
      log_norm_sq = c0 == 0.0 ? tail : log_sum_exp({2.0 * std::log(c0), tail});
    }
    log_terms.push_back(0.5 * log_norm_sq + k * std::log(cfg.s) + 2.0 * std::log(k + 1.0) -
                        std::lgamma(k + 1.0));
  }

  EsNormResult r;
  if (log_terms.empty()) return r;
  const auto it = std::max_element(log_terms.begin(), log_terms.end());
  if (*it == -kInf) return r;
  r.argmax = k0 + static_cast<int>(it - log_terms.begin());
  r.value = *it > kLogOverflow ? kInf : std::exp(*it);
  const double cut = *it + std::log(1e-3);
  for (std::size_t i = log_terms.size() - 3; i < log_terms.size(); ++i)
    if (log_terms[i] >= cut) r.truncated = true;
  return r;
}

double es_norm(const PeriodicField& u, const EsNormConfig& cfg) {
  return es_norm_detailed(u, cfg).value;
}

PeriodicField random_trig_polynomial(const PeriodicGrid& grid, std::mt19937_64& rng,
                                     int max_degree) {
  if (max_degree < 1) throw std::invalid_argument("polynomial degree must be >= 1");
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const int degree = std::uniform_int_distribution<int>(1, max_degree)(rng);
  std::vector<FourierMode> modes;
  for (int k = 0; k <= degree; ++k) {
    const double scale = std::ldexp(1.0, -k);
    const double a = scale * unit(rng);
    const double b = k == 0 ? 0.0 : scale * unit(rng);
    modes.push_back({k, a, b});
  }
  return trig_polynomial(grid, modes);
}

EsPropertyReport es_property_suite(std::span<const PeriodicField> samples, double s,
                                   double s_prime, int k_max) {
  if (!(s_prime > 0.0 && s_prime < s && s < 1.0))
    throw std::invalid_argument("property suite needs 0 < s' < s < 1");
  const EsNormConfig at_s{s, k_max, false};
  const EsNormConfig at_sp{s_prime, k_max, false};

  EsPropertyReport rep;
  rep.s = s;
  rep.s_prime = s_prime;
  rep.k_max = k_max;
  rep.samples = samples.size();

  auto norm = [&](const PeriodicField& f, const EsNormConfig& c) {
    const auto r = es_norm_detailed(f, c);
    rep.any_truncated = rep.any_truncated || r.truncated;
    return r.value;
  };
  // 0 <= 0 counts as satisfied with ratio 0.
  auto ratio = [](double num, double den) { return den == 0.0 ? (num == 0.0 ? 0.0 : kInf) : num / den; };

  std::vector<double> ns(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) ns[i] = norm(samples[i], at_s);

  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& u = samples[i];
    const double nsp = norm(u, at_sp);
    if (nsp > ns[i]) rep.monotone_holds = false;

    const double dx = ratio(norm(derivative(u, 1), at_sp), ns[i]) * (s - s_prime);
    if (dx > rep.dx_constant) rep.dx_constant = dx, rep.dx_worst = i;

    const double lam = ratio(norm(helmholtz_inverse(u), at_sp), ns[i]);
    if (lam > rep.lambda_ratio) rep.lambda_ratio = lam, rep.lambda_worst = i;
    if (lam > 1.0) rep.lambda_holds = false;

    for (std::size_t j = i; j < samples.size(); ++j) {
      const double p = ratio(norm(dealiased_product(u, samples[j]), at_s), ns[i] * ns[j]);
      if (p > rep.product_constant)
        rep.product_constant = p, rep.product_worst_i = i, rep.product_worst_j = j;
    }
  }
  return rep;
}

SystemState SystemState::from_field(const PeriodicField& u) { return {u, derivative(u, 1)}; }

SystemState system_rhs(const SystemState& w, GForm form) {
  const auto& u = w.u;
  const auto& v = w.v;
  if (!(u.grid() == v.grid())) throw IncompatibleGrid("u and v live on different grids");
  const PeriodicField vx = derivative(v, 1);
  PeriodicField source = 3.0 * dealiased_product(u, u, v);
  source += 2.0 * dealiased_product(v, v, v);
  source += 3.0 * dealiased_product(u, v, vx);
  const PeriodicField smooth = helmholtz_inverse(source);

  PeriodicField f = -dealiased_product(u, u, v) - smooth;
  const double local = form == GForm::consistent ? 2.0 : 1.0;
  PeriodicField g = -local * dealiased_product(u, v, v) - dealiased_product(u, u, vx) -
                    derivative(smooth, 1);
  return {std::move(f), std::move(g)};
}

double product_norm(const SystemState& w, const EsNormConfig& cfg) {
  return es_norm(w.u, cfg) + es_norm(w.v, cfg);
}

std::vector<CkReport> ck_lipschitz_sweep(std::span<const SpacePair> pairs, double radius,
                                         int trials, std::uint64_t seed, int grid_n, int k_max,
                                         GForm form) {
  if (pairs.empty()) throw std::invalid_argument("Lipschitz sweep needs at least one (s, s') pair");
  double s_top = 0.0;
  for (const auto& [s, sp] : pairs) {
    if (!(sp > 0.0 && sp < s && s <= 1.0))
      throw std::invalid_argument("Lipschitz check needs 0 < s' < s <= 1");
    s_top = std::max(s_top, s);
  }
  if (!(radius > 0.0)) throw std::invalid_argument("ball radius must be positive");
  if (trials < 1) throw std::invalid_argument("need at least one trial");
  // s = 1 is admitted by the remark; the norm itself needs s < 1.
  auto config = [k_max](double s) {
    return EsNormConfig{std::min(s, std::nextafter(1.0, 0.0)), k_max, false};
  };

  // One set of trial states for the whole sweep, inside the X_s ball for the
  // largest s and hence (norms being monotone in s) for every pair.
  const PeriodicGrid grid(grid_n);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> fill(0.05, 0.95);
  auto draw = [&] {
    SystemState w{random_trig_polynomial(grid, rng), random_trig_polynomial(grid, rng)};
    const double nrm = product_norm(w, config(s_top));
    const double target = radius * fill(rng);
    if (nrm > 0.0) {
      w.u *= target / nrm;
      w.v *= target / nrm;
    }
    return w;
  };
  std::vector<std::pair<SystemState, SystemState>> states;
  for (int t = 0; t < trials; ++t) {
    SystemState w1 = draw();
    SystemState w2 = draw();
    states.emplace_back(std::move(w1), std::move(w2));
  }

  const SystemState zero{PeriodicField::zero(grid), PeriodicField::zero(grid)};
  const SystemState rhs_zero = system_rhs(zero, form);

  std::vector<CkReport> out;
  for (const auto& [s, s_prime] : pairs) {
    CkReport rep;
    rep.s = s;
    rep.s_prime = s_prime;
    rep.radius = radius;
    rep.trials = trials;
    rep.seed = seed;
    rep.grid_n = grid_n;
    rep.k_max = k_max;
    rep.rhs_at_zero = product_norm(rhs_zero, config(s));
    for (int t = 0; t < trials; ++t) {
      const auto& [w1, w2] = states[t];
      const double den = product_norm({w1.u - w2.u, w1.v - w2.v}, config(s));
      if (den == 0.0) {
        ++rep.skipped;
        continue;
      }
      const SystemState r1 = system_rhs(w1, form);
      const SystemState r2 = system_rhs(w2, form);
      const double num = product_norm({r1.u - r2.u, r1.v - r2.v}, config(s_prime));
      const double c = (s - s_prime) * num / den;
      if (c > rep.constant) rep.constant = c, rep.worst_trial = t;
    }
    out.push_back(rep);
  }
  return out;
}

CkReport ck_lipschitz_check(double s, double s_prime, double radius, int trials,
                            std::uint64_t seed, int grid_n, int k_max, GForm form) {
  const SpacePair pair{s, s_prime};
  return ck_lipschitz_sweep({&pair, 1}, radius, trials, seed, grid_n, k_max, form).front();
}

RadiusEstimate fit_radius(const PeriodicField& u, double t) {
  RadiusEstimate est;
  est.t = t;
  est.sigma = std::numeric_limits<double>::quiet_NaN();
  const int n = u.size();
  const auto half = detail::forward_half(u.samples());
  std::vector<double> xs, ys;
  for (int k = 2; k < n / 2; ++k) {
    const double a = std::abs(half[k]);
    if (a > 1e-13) {
      // c_k and c_{-k} have the same modulus for real fields.
      for (int rep = 0; rep < 2; ++rep) {
        xs.push_back(k);
        ys.push_back(std::log(a));
      }
    }
  }
  est.modes_used = static_cast<int>(xs.size());
  if (xs.size() < 4) return est;

  const double m = static_cast<double>(xs.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) sx += xs[i], sy += ys[i];
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) return est;  // a single |k|
  const double slope = sxy / sxx;
  est.defined = true;
  est.sigma = std::max(0.0, -slope / kTwoPi);
  est.fit_quality = syy == 0.0 ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  est.tail_floor = *std::min_element(ys.begin(), ys.end()) / std::log(10.0);
  return est;
}

std::vector<RadiusEstimate> radius_track(std::span<const EulerianState> trajectory) {
  std::vector<RadiusEstimate> out;
  out.reserve(trajectory.size());
  for (const auto& s : trajectory) out.push_back(fit_radius(s.u, s.t));
  return out;
}

}  // namespace novikov
