#include "novikov/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace novikov {

namespace {

constexpr double kNewtonTol = 1e-12;
constexpr int kNewtonMaxIter = 100;

bool all_zero(const PeriodicField& f) {
  return std::all_of(f.values().begin(), f.values().end(), [](double v) { return v == 0.0; });
}

double solve_preimage(const TrigInterpolant& theta, double y, double lo, double hi) {
  // g(x) = x + theta(x) - y is increasing; [lo, hi] brackets its root.
  auto g = [&](double x) { return x + theta(x) - y; };
  while (g(lo) > 0.0) lo -= 0.5;
  while (g(hi) < 0.0) hi += 0.5;
  double x = std::clamp(y - theta(y), lo, hi);
  for (int it = 0; it < kNewtonMaxIter; ++it) {
    const auto [v, s] = theta.value_and_slope(x);
    const double gx = x + v - y;
    if (gx == 0.0) return x;
    if (gx < 0.0) lo = x;
    else hi = x;
    const double slope = 1.0 + s;
    double next = slope > 0.0 ? x - gx / slope : lo - 1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - x);
    x = next;
    if (step < kNewtonTol || hi - lo < kNewtonTol) return x;
  }
  throw Error("diffeomorphism inversion did not converge at y = " + std::to_string(y));
}

PeriodicField power(const PeriodicField& f, double p) {
  return f.map([p](double v) { return std::pow(v, p); });
}

}  // namespace

// --- Diffeo ----------------------------------------------------------------

Diffeo::Diffeo(PeriodicField displacement)
    : displacement_(std::move(displacement)),
      jacobian_(PeriodicField::constant(displacement_.grid(), 1.0)),
      min_jacobian_(1.0),
      identity_(all_zero(displacement_)) {
  if (!identity_) {
    jacobian_ += derivative(displacement_, 1);
    min_jacobian_ = refined_min(jacobian_);
    if (!(min_jacobian_ > 0.0))
      throw JacobianNonpositive("eta_x reached " + std::to_string(min_jacobian_) +
                                ": eta is no longer a diffeomorphism");
  }
}

Diffeo Diffeo::identity(const PeriodicGrid& grid) { return Diffeo(PeriodicField::zero(grid)); }

std::vector<double> Diffeo::values() const {
  std::vector<double> v(size());
  for (int j = 0; j < size(); ++j) v[j] = grid().point(j) + displacement_[j];
  return v;
}

std::vector<double> preimages(const Diffeo& eta) {
  const int n = eta.size();
  std::vector<double> x = eta.grid().points();
  if (eta.is_identity()) return x;
  const TrigInterpolant theta(eta.displacement());
  const auto fine = refine_samples(eta.displacement(), 8);
  const auto [tmin, tmax] = std::minmax_element(fine.begin(), fine.end());
  const double margin = 1e-9 + 0.01 * (*tmax - *tmin);
  for (int j = 0; j < n; ++j) {
    const double y = eta.grid().point(j);
    x[j] = solve_preimage(theta, y, y - *tmax - margin, y - *tmin + margin);
  }
  return x;
}

Diffeo invert(const Diffeo& eta) {
  if (eta.is_identity()) return eta;
  const auto x = preimages(eta);
  std::vector<double> disp(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) disp[j] = x[j] - eta.grid().point(static_cast<int>(j));
  return Diffeo(PeriodicField(eta.grid(), std::move(disp)));
}

PeriodicField compose(const PeriodicField& f, const Diffeo& eta) {
  if (eta.is_identity()) return f;
  const TrigInterpolant fi(f);
  const auto pts = eta.values();
  std::vector<double> v(pts.size());
  for (std::size_t j = 0; j < pts.size(); ++j) v[j] = fi(pts[j]);
  return PeriodicField(f.grid(), std::move(v));
}

PeriodicField compose_inverse(const PeriodicField& f, const Diffeo& eta) {
  if (eta.is_identity()) return f;
  const TrigInterpolant fi(f);
  const auto pts = preimages(eta);
  std::vector<double> v(pts.size());
  for (std::size_t j = 0; j < pts.size(); ++j) v[j] = fi(pts[j]);
  return PeriodicField(f.grid(), std::move(v));
}

PeriodicField conjugated_derivative(const PeriodicField& f, const Diffeo& eta) {
  if (eta.is_identity()) return derivative(f, 1);
  return pointwise_quotient(derivative(f, 1), eta.jacobian());
}

PeriodicField conjugated_helmholtz_inverse(const PeriodicField& g, const Diffeo& eta) {
  if (eta.is_identity()) return helmholtz_inverse(g);
  return compose(helmholtz_inverse(compose_inverse(g, eta)), eta);
}

PeriodicField f_eta_zeta(const Diffeo& eta, const PeriodicField& zeta) {
  const PeriodicField dz = conjugated_derivative(zeta, eta);
  const PeriodicField d2z = conjugated_derivative(dz, eta);
  PeriodicField w = 3.0 * dealiased_product(zeta, zeta, dz);
  w += 2.0 * dealiased_product(dz, dz, dz);
  w += 3.0 * dealiased_product(zeta, dz, d2z);
  return -conjugated_helmholtz_inverse(w, eta);
}

double orbit_residual(const Diffeo& eta, const PeriodicField& m, const PeriodicField& m0) {
  const PeriodicField mc = compose(m, eta);
  double worst = 0.0;
  for (int j = 0; j < m0.size(); ++j)
    worst = std::max(worst, std::abs(mc[j] * std::pow(eta.jacobian()[j], 1.5) - m0[j]));
  return worst;
}

LagrangianSnapshot to_snapshot(const LagrangianState& state) {
  return {state.eta.grid().points(), state.eta.values(), state.eta.jacobian().values(),
          state.zeta.values()};
}

PeriodicField reconstruct(const LagrangianState& state) {
  return compose_inverse(state.zeta, state.eta);
}

namespace {

// m o eta = m0 eta_x^{-3/2}
PeriodicField transported_momentum(const Diffeo& eta, const PeriodicField& m0) {
  if (eta.is_identity()) return m0;
  return pointwise_product(m0, power(eta.jacobian(), -1.5));
}

}  // namespace

PeriodicField reconstruct(const ConservativeState& state) {
  return helmholtz_inverse(compose_inverse(transported_momentum(state.eta, state.m0), state.eta));
}

// --- integration -----------------------------------------------------------

namespace {

struct FlowVars {
  PeriodicField theta;
  PeriodicField zeta;
};

FlowVars axpy(const FlowVars& y, double a, const FlowVars& k) {
  return {y.theta + a * k.theta, y.zeta + a * k.zeta};
}

PeriodicField axpy(const PeriodicField& y, double a, const PeriodicField& k) { return y + a * k; }

// Shared driver. `rate(vars)` is the right-hand side, `speed(vars)` the
// largest characteristic speed, `make(t, vars)` builds the public state.
template <class Vars, class State, class Rate, class Speed, class Make>
LagrangianRun<State> drive(Vars vars, const PeriodicField& m0, const TimeStepper& stepper,
                           const BlowupPolicy& policy, const ProbeOptions& probes, Rate&& rate,
                           Speed&& speed, Make&& make) {
  policy.validate();
  if (probes.stride < 1) throw std::invalid_argument("probe stride must be >= 1");
  StepClock clock(stepper, m0.grid().spacing());
  const double sign = stepper.reverse ? -1.0 : 1.0;
  auto signed_rate = [&](const Vars& v) {
    Vars r = rate(v);
    if (sign < 0) r = axpy(r, -2.0, r);
    return r;
  };

  LagrangianRun<State> run;
  auto probe = [&](const State& s) {
    const PeriodicField u = reconstruct(s);
    const double orbit = orbit_residual(s.eta, helmholtz(u), m0);
    run.record.append(probe_diagnostics(s.t, u, probes.diagnostics, orbit));
    run.reconstructed.push_back({s.t, u});
    run.states.push_back(s);
    for (const auto& hook : probes.hooks) hook(run.reconstructed.back());
  };

  State state = make(0.0, vars);
  probe(state);
  bool final_probed = true;

  while (!clock.done()) {
    const double dt = clock.next_dt(stepper.adaptive() ? speed(vars) : 0.0);
    if (stepper.adaptive() && dt < policy.dt_min && clock.elapsed() + dt < stepper.t_end) {
      run.outcome = Outcome::blowup;
      run.message = "adaptive step " + std::to_string(dt) + " fell below dt_min";
      break;
    }
    std::optional<State> next;
    try {
      Vars stepped = rk4_step(vars, dt, signed_rate,
                              [](const Vars& y, double a, const Vars& k) { return axpy(y, a, k); });
      next.emplace(make(sign * (clock.elapsed() + dt), stepped));
      vars = std::move(stepped);
    } catch (const JacobianNonpositive& e) {
      run.outcome = Outcome::breakdown;
      run.breakdown_time = sign * (clock.elapsed() + dt);
      run.message = e.what();
      break;
    } catch (const InvalidField& e) {
      run.outcome = Outcome::blowup;
      run.message = std::string("non-finite state: ") + e.what();
      break;
    }
    clock.advance(dt);
    next->t = sign * clock.elapsed();
    state = std::move(*next);
    final_probed = clock.steps() % probes.stride == 0 || clock.done();
    if (final_probed) probe(state);
  }
  if (!final_probed) probe(state);

  run.final_time = state.t;
  if (run.reconstructed.size() >= 3) {
    std::vector<PeriodicField> fields;
    for (const auto& s : run.reconstructed) fields.push_back(s.u);
    const auto times = run.record.times();
    run.record.set_persistence_ratios(
        persistence_ratio(times, fields, probes.diagnostics.sobolev_s));
  }
  return run;
}

}  // namespace

FlowMapRun integrate_flowmap(const PeriodicField& u0, const TimeStepper& stepper,
                             const BlowupPolicy& policy, const ProbeOptions& probes) {
  const PeriodicField m0 = helmholtz(u0);
  auto rate = [](const FlowVars& v) {
    const Diffeo eta(v.theta);
    return FlowVars{dealiased_product(v.zeta, v.zeta), f_eta_zeta(eta, v.zeta)};
  };
  auto speed = [](const FlowVars& v) {
    const double z = v.zeta.max_abs();
    return z * z;
  };
  auto make = [](double t, const FlowVars& v) {
    return LagrangianState{t, Diffeo(v.theta), v.zeta};
  };
  return drive<FlowVars, LagrangianState>(FlowVars{PeriodicField::zero(u0.grid()), u0}, m0,
                                          stepper, policy, probes, rate, speed, make);
}

ConservativeRun integrate_conservative(const PeriodicField& u0, const TimeStepper& stepper,
                                       const BlowupPolicy& policy, const ProbeOptions& probes) {
  const PeriodicField m0 = helmholtz(u0);
  auto velocity = [&m0](const PeriodicField& theta) {
    const Diffeo eta(theta);
    const PeriodicField u =
        helmholtz_inverse(compose_inverse(transported_momentum(eta, m0), eta));
    return compose(u, eta);
  };
  auto rate = [&](const PeriodicField& theta) {
    const PeriodicField z = velocity(theta);
    return dealiased_product(z, z);
  };
  auto speed = [&](const PeriodicField& theta) {
    const double z = velocity(theta).max_abs();
    return z * z;
  };
  auto make = [&m0](double t, const PeriodicField& theta) {
    return ConservativeState{t, Diffeo(theta), m0};
  };
  return drive<PeriodicField, ConservativeState>(PeriodicField::zero(u0.grid()), m0, stepper,
                                                 policy, probes, rate, speed, make);
}

}  // namespace novikov
