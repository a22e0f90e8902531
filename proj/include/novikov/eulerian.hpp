// Pseudo-spectral integration of the nonlocal form
//
//   u_t + u^2 u_x = -Lambda^{-2}(3 u^2 u_x + 2 u_x^3 + 3 u u_x u_xx)
//
// on the period-1 torus with classical RK4.
#ifndef NOVIKOV_EULERIAN_HPP
#define NOVIKOV_EULERIAN_HPP

#include <functional>
#include <string>
#include <vector>

#include "novikov/diagnostics.hpp"
#include "novikov/spectral.hpp"
#include "novikov/stepping.hpp"

namespace novikov {

struct EulerianState {
  double t = 0.0;
  PeriodicField u;
};

class BlowupDetected : public Error {
 public:
  BlowupDetected(const std::string& what, EulerianState last_good)
      : Error(what), last_good_(std::move(last_good)) {}

  const EulerianState& last_good() const { return last_good_; }

 private:
  EulerianState last_good_;
};

using ProbeHook = std::function<void(const EulerianState&)>;

struct ProbeOptions {
  /// Probe every `stride` steps; the initial and final states are always
  /// probed.
  int stride = 1;
  DiagnosticsOptions diagnostics;
  std::vector<ProbeHook> hooks;
};

struct EulerianRun {
  Outcome outcome = Outcome::completed;
  double final_time = 0.0;
  std::string message;
  /// Probed states, in time order; the last entry is the last good state.
  std::vector<EulerianState> trajectory;
  DiagnosticsRecord record;
};

/// -u^2 u_x - Lambda^{-2}(3 u^2 u_x + 2 u_x^3 + 3 u u_x u_xx), products dealiased.
PeriodicField rhs_nonlocal(const PeriodicField& u);
/// The same evolution in momentum form: -(m_x u^2 + 3 m u u_x), m = Lambda^2 u.
PeriodicField rhs_momentum(const PeriodicField& u);

/// One RK4 step of size dt (dt > 0). With reverse = true the right-hand side
/// is negated and t decreases. Non-finite stages raise BlowupDetected.
EulerianState step_rk4(const EulerianState& state, double dt, bool reverse = false);

/// Integrates to stepper.t_end or until the blow-up policy triggers. Blow-up
/// is reported through EulerianRun::outcome; exceeding max_steps throws.
EulerianRun integrate(const PeriodicField& u0, const TimeStepper& stepper,
                      const BlowupPolicy& policy = {}, const ProbeOptions& probes = {});

/// u0 = Lambda^{-2} m0, so that Lambda^2 u0 = m0.
PeriodicField from_momentum(const PeriodicField& m0);

}  // namespace novikov

#endif  // NOVIKOV_EULERIAN_HPP
