#include "novikov/eulerian.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace novikov {

namespace {

// Samples of the field and its first two derivatives on the 2x padded grid.
struct PaddedJet {
  std::vector<double> f, fx, fxx;
};

PaddedJet padded_jet(std::span<const cplx> half, int n, bool second) {
  PaddedJet jet;
  std::vector<cplx> d1(half.begin(), half.end());
  std::vector<cplx> d2(half.begin(), half.end());
  for (int k = 0; k < n / 2; ++k) {
    const cplx ik(0.0, kTwoPi * k);
    d1[k] *= ik;
    d2[k] *= ik * ik;
  }
  d1[n / 2] = d2[n / 2] = 0.0;
  jet.f = detail::inverse_half(detail::pad_half(half, n, 2), 2 * n);
  jet.fx = detail::inverse_half(detail::pad_half(d1, n, 2), 2 * n);
  if (second) jet.fxx = detail::inverse_half(detail::pad_half(d2, n, 2), 2 * n);
  return jet;
}

std::vector<cplx> truncated(std::span<const double> fine, int n) {
  return detail::truncate_half(detail::forward_half(fine), n);
}

double helmholtz_symbol(int k) {
  const double w = kTwoPi * k;
  return 1.0 + w * w;
}

PeriodicField axpy(const PeriodicField& y, double a, const PeriodicField& k) {
  std::vector<double> v(y.values());
  for (int j = 0; j < y.size(); ++j) v[j] += a * k[j];
  return PeriodicField(y.grid(), std::move(v));
}

double grid_c1(const PeriodicField& u) { return u.max_abs() + derivative(u, 1).max_abs(); }

}  // namespace

PeriodicField rhs_nonlocal(const PeriodicField& u) {
  const int n = u.size();
  const auto half = detail::forward_half(u.samples());
  const PaddedJet jet = padded_jet(half, n, true);
  std::vector<double> transport(2 * n), source(2 * n);
  for (int j = 0; j < 2 * n; ++j) {
    const double a = jet.f[j], ax = jet.fx[j], axx = jet.fxx[j];
    transport[j] = a * a * ax;
    source[j] = 3.0 * a * a * ax + 2.0 * ax * ax * ax + 3.0 * a * ax * axx;
  }
  const auto t_half = truncated(transport, n);
  const auto s_half = truncated(source, n);
  std::vector<cplx> out(n / 2 + 1);
  for (int k = 0; k <= n / 2; ++k) out[k] = -t_half[k] - s_half[k] / helmholtz_symbol(k);
  return PeriodicField(u.grid(), detail::inverse_half(out, n));
}

PeriodicField rhs_momentum(const PeriodicField& u) {
  const int n = u.size();
  const auto u_half = detail::forward_half(u.samples());
  std::vector<cplx> m_half(u_half);
  detail::apply_multiplier(m_half, [](int k) { return helmholtz_symbol(k); });
  const PaddedJet uj = padded_jet(u_half, n, false);
  const PaddedJet mj = padded_jet(m_half, n, false);
  std::vector<double> prod(2 * n);
  for (int j = 0; j < 2 * n; ++j)
    prod[j] = -(mj.fx[j] * uj.f[j] * uj.f[j] + 3.0 * mj.f[j] * uj.f[j] * uj.fx[j]);
  return PeriodicField(u.grid(), detail::inverse_half(truncated(prod, n), n));
}

EulerianState step_rk4(const EulerianState& state, double dt, bool reverse) {
  if (!(dt > 0.0)) throw std::invalid_argument("step size must be positive");
  const double sign = reverse ? -1.0 : 1.0;
  auto rate = [sign](const PeriodicField& u) {
    PeriodicField r = rhs_nonlocal(u);
    if (sign < 0) r *= -1.0;
    return r;
  };
  try {
    PeriodicField next = rk4_step(state.u, dt, rate, axpy);
    return {state.t + sign * dt, std::move(next)};
  } catch (const InvalidField& e) {
    throw BlowupDetected(std::string("non-finite state in RK4 step: ") + e.what(), state);
  }
}

PeriodicField from_momentum(const PeriodicField& m0) { return helmholtz_inverse(m0); }

EulerianRun integrate(const PeriodicField& u0, const TimeStepper& stepper,
                      const BlowupPolicy& policy, const ProbeOptions& probes) {
  policy.validate();
  if (probes.stride < 1) throw std::invalid_argument("probe stride must be >= 1");
  StepClock clock(stepper, u0.grid().spacing());
  const double sign = stepper.reverse ? -1.0 : 1.0;

  EulerianRun run;
  auto probe = [&](const EulerianState& s) {
    run.record.append(probe_diagnostics(s.t, s.u, probes.diagnostics));
    run.trajectory.push_back(s);
    for (const auto& hook : probes.hooks) hook(s);
  };

  EulerianState state{0.0, u0};
  probe(state);
  bool final_probed = true;

  while (!clock.done()) {
    const double umax = state.u.max_abs();
    const double dt = clock.next_dt(umax * umax);
    if (stepper.adaptive() && dt < policy.dt_min &&
        clock.elapsed() + dt < stepper.t_end) {
      run.outcome = Outcome::blowup;
      run.message = "adaptive step " + std::to_string(dt) + " fell below dt_min";
      break;
    }
    std::optional<EulerianState> next;
    try {
      next = step_rk4(state, dt, stepper.reverse);
    } catch (const BlowupDetected& e) {
      run.outcome = Outcome::blowup;
      run.message = e.what();
      break;
    }
    clock.advance(dt);
    next->t = sign * clock.elapsed();
    const double c1 = grid_c1(next->u);
    if (c1 > policy.c1_threshold) {
      run.outcome = Outcome::blowup;
      run.message = "C1 norm " + std::to_string(c1) + " exceeded threshold at t = " +
                    std::to_string(next->t);
      break;
    }
    state = std::move(*next);
    final_probed = clock.steps() % probes.stride == 0 || clock.done();
    if (final_probed) probe(state);
  }
  if (!final_probed) probe(state);

  run.final_time = state.t;
  if (run.trajectory.size() >= 3) {
    std::vector<PeriodicField> fields;
    for (const auto& s : run.trajectory) fields.push_back(s.u);
    const auto times = run.record.times();
    run.record.set_persistence_ratios(
        persistence_ratio(times, fields, probes.diagnostics.sobolev_s));
  }
  return run;
}

}  // namespace novikov
