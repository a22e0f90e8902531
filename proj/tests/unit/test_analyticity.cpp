#include "doctest.h"
#include "helpers.hpp"

#include <cmath>

#include "novikov/analyticity.hpp"
#include "novikov/eulerian.hpp"

using namespace novikov;

namespace {
const double kPi = kTwoPi / 2;

// |||u|||_s straight from the definition, with ||d^k u||_{H^2}^2 summed mode
// by mode from the closed-form coefficients.
double es_oracle(const testing::TrigPoly& p, double s, int k_max) {
  double best = 0.0;
  for (int k = 1; k <= k_max; ++k) {
    double sq = 0.0;
    for (const auto& m : p.modes) {
      if (m.k == 0) continue;
      const double w = kTwoPi * m.k;
      sq += std::pow(w, 2.0 * k) * std::pow(1 + w * w, 2) * (m.cos_coeff * m.cos_coeff + m.sin_coeff * m.sin_coeff) / 2;
    }
    const double term = std::exp(0.5 * std::log(sq) + k * std::log(s) + 2 * std::log(k + 1.0) - std::lgamma(k + 1.0));
    best = std::max(best, term);
  }
  return best;
}

PeriodicField cosine(int n) {
  return PeriodicField::sample(PeriodicGrid(n), [](double x) { return std::cos(kTwoPi * x); });
}

// Field with Fourier coefficients c_k = A exp(-2 pi sigma |k|) for 1 <= |k| < n/2.
PeriodicField planted(int n, double sigma, double amplitude = 1.0) {
  return PeriodicField::sample(PeriodicGrid(n), [=](double x) {
    double v = 0.0;
    for (int k = 1; k < n / 2; ++k) v += 2 * amplitude * std::exp(-kTwoPi * sigma * k) * std::cos(kTwoPi * k * x);
    return v;
  });
}
}  // namespace

TEST_SUITE("analyticity") {

TEST_CASE("config validation") {
  CHECK_THROWS_AS(EsNormConfig({0.0, 30, false}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(EsNormConfig({1.0, 30, false}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(EsNormConfig({0.5, 4, false}).validate(), std::invalid_argument);
  CHECK_NOTHROW(EsNormConfig({0.5, 5, false}).validate());
}

TEST_CASE("E_s norm examples") {
  CHECK(es_norm(PeriodicField::constant(PeriodicGrid(32), 3.0), {}) == 0.0);
  CHECK(es_norm(PeriodicField::zero(PeriodicGrid(32)), {}) == 0.0);
  // the k = 0 variant sees the constant through its H^2 norm
  CHECK(es_norm(PeriodicField::constant(PeriodicGrid(32), 3.0), {0.1, 30, true}) == doctest::Approx(3.0));

  const EsNormResult r = es_norm_detailed(cosine(64), {0.05, 30, false});
  CHECK(r.argmax == 1);
  CHECK(r.value == doctest::Approx(4 * (kTwoPi * 0.05) * (1 + 4 * kPi * kPi) / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(!r.truncated);
}

TEST_CASE("property: E_s norm matches the defining supremum") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    const testing::TrigPoly p = testing::random_poly(rng, 1 + trial % 8);
    for (double s : {0.05, 0.1, 0.3}) {
      const double got = es_norm(p.on(64), {s, 30, false});
      CHECK(testing::rel_err(got, es_oracle(p, s, 30)) < 1e-10);
    }
  }
}

TEST_CASE("property: homogeneity and monotonicity in s") {
  std::mt19937_64 rng(62);
  std::uniform_real_distribution<double> lam(-5.0, 5.0);
  for (int trial = 0; trial < 20; ++trial) {
    const PeriodicField u = random_trig_polynomial(PeriodicGrid(64), rng);
    const double l = lam(rng);
    const EsNormConfig cfg{0.2, 30, false};
    CHECK(es_norm(l * u, cfg) == doctest::Approx(std::abs(l) * es_norm(u, cfg)).epsilon(1e-12));
    double prev = 0.0;
    for (double s = 0.05; s < 0.95; s += 0.05) {
      const double v = es_norm(u, {s, 30, false});
      CHECK(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("truncation flag and overflow guard") {
  // at s = 0.9 the terms of cos(2 pi x) keep growing up to k ~ 5.7 and decay
  // slowly; k_max = 5 cuts the supremum short
  CHECK(es_norm_detailed(cosine(64), {0.9, 5, false}).truncated);
  // the k-th term of cos(2 pi 400 x) passes 1e308 well before k = 600
  const auto high = PeriodicField::sample(PeriodicGrid(1024), [](double x) { return std::cos(kTwoPi * 400 * x); });
  CHECK(std::isinf(es_norm(high, {0.9, 600, false})));
}

TEST_CASE("random samples") {
  std::mt19937_64 a(5), b(5);
  const PeriodicField f = random_trig_polynomial(PeriodicGrid(64), a);
  const PeriodicField g = random_trig_polynomial(PeriodicGrid(64), b);
  CHECK(max_distance(f, g) == 0.0);
  const Spectrum sp = to_spectrum(f);
  for (int k = 9; k < 32; ++k) CHECK(std::abs(sp[k]) < 1e-15);
  for (int k = 1; k <= 8; ++k) CHECK(std::abs(sp[k]) <= std::pow(2.0, -k) / std::sqrt(2.0) + 1e-15);
}

TEST_CASE("property suite") {
  std::mt19937_64 rng(63);
  std::vector<PeriodicField> samples;
  for (int i = 0; i < 20; ++i) samples.push_back(random_trig_polynomial(PeriodicGrid(64), rng));
  const EsPropertyReport r = es_property_suite(samples, 0.3, 0.15);
  CHECK(r.samples == 20u);
  CHECK(r.lambda_holds);
  CHECK(r.lambda_ratio <= 1.0);
  CHECK(r.monotone_holds);
  CHECK(std::isfinite(r.product_constant));
  CHECK(r.dx_constant > 0.0);

  const std::vector<PeriodicField> consts(3, PeriodicField::constant(PeriodicGrid(32), 2.0));
  const EsPropertyReport c = es_property_suite(consts, 0.3, 0.15);
  CHECK(c.lambda_holds);
  CHECK(c.dx_constant == 0.0);
  CHECK(c.product_constant == 0.0);

  // (s - s') scaling of the dx constant over a sweep
  double lo = INFINITY, hi = 0.0;
  for (auto [s, sp] : std::vector<std::pair<double, double>>{{0.2, 0.1}, {0.3, 0.15}, {0.4, 0.2}}) {
    const double k = es_property_suite(samples, s, sp).dx_constant;
    lo = std::min(lo, k);
    hi = std::max(hi, k);
  }
  CHECK(hi / lo < 3.0);
}

TEST_CASE("first-order system") {
  const SystemState still = system_rhs(SystemState{PeriodicField::constant(PeriodicGrid(32), 1.3), PeriodicField::zero(PeriodicGrid(32))});
  CHECK(still.u.max_abs() == 0.0);
  CHECK(still.v.max_abs() == 0.0);

  std::mt19937_64 rng(64);
  for (int trial = 0; trial < 20; ++trial) {
    const PeriodicField u = testing::random_poly(rng, 6, 0.5).on(128);
    const SystemState w = SystemState::from_field(u);
    CHECK(max_distance(w.v, derivative(u, 1)) < 1e-10 * std::max(1.0, w.v.max_abs()));
    const SystemState r = system_rhs(w);
    CHECK(max_distance(r.u, rhs_nonlocal(u)) < 1e-10);
    const PeriodicField dF = derivative(r.u, 1);
    CHECK(max_distance(r.v, dF) < 1e-9 * std::max(1.0, dF.max_abs()));
  }
  // the printed G differs by u v^2 exactly
  const PeriodicField u = testing::random_poly(rng, 4, 0.5).on(64);
  const SystemState w = SystemState::from_field(u);
  const PeriodicField gap = system_rhs(w, GForm::literal).v - system_rhs(w).v;
  CHECK(max_distance(gap, dealiased_product(u, w.v, w.v)) < 1e-12);
}

TEST_CASE("Cauchy-Kowalevski Lipschitz sweep") {
  const auto pairs = std::vector<SpacePair>{{0.4, 0.2}, {0.3, 0.15}, {0.2, 0.1}};
  const auto a = ck_lipschitz_sweep(pairs, 1.0, 50, 2024);
  const auto b = ck_lipschitz_sweep(pairs, 1.0, 50, 2024);
  REQUIRE(a.size() == 3u);
  double lo = INFINITY, hi = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(a[i].constant == b[i].constant);
    CHECK(std::isfinite(a[i].constant));
    CHECK(a[i].constant > 0.0);
    CHECK(a[i].rhs_at_zero == 0.0);
    lo = std::min(lo, a[i].constant);
    hi = std::max(hi, a[i].constant);
  }
  CHECK(hi / lo < 3.0);
  const CkReport single = ck_lipschitz_check(0.4, 0.2, 1.0, 50, 2024);
  CHECK(single.trials == 50);
  CHECK_THROWS_AS(ck_lipschitz_check(0.2, 0.4, 1.0, 10, 1), std::invalid_argument);
}

TEST_CASE("radius fits") {
  const RadiusEstimate e = fit_radius(planted(64, 1 / kTwoPi));
  REQUIRE(e.defined);
  CHECK(e.sigma == doctest::Approx(1 / kTwoPi).epsilon(1e-5));
  CHECK(e.fit_quality == doctest::Approx(1.0).epsilon(1e-10));

  const RadiusEstimate c = fit_radius(PeriodicField::constant(PeriodicGrid(64), 1.0));
  CHECK(!c.defined);
  CHECK(std::isnan(c.sigma));
  CHECK(!fit_radius(cosine(64)).defined);

  // synthetic trajectory with a shrinking planted radius
  std::vector<EulerianState> traj;
  for (int i = 0; i < 5; ++i) traj.push_back({0.1 * i, planted(128, 0.2 - 0.03 * i, 0.3)});
  const auto track = radius_track(traj);
  REQUIRE(track.size() == 5u);
  for (int i = 0; i < 5; ++i) {
    CHECK(track[i].t == doctest::Approx(0.1 * i));
    REQUIRE(track[i].defined);
    if (track[i].fit_quality > 0.999) CHECK(track[i].sigma == doctest::Approx(0.2 - 0.03 * i).epsilon(0.02));
  }
}

}  // TEST_SUITE
