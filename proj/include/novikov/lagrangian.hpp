// Lagrangian formulation. With eta(t, x) the flow of u^2 and zeta = u o eta,
//
//   eta_t = zeta^2,   zeta_t = F(eta, zeta)
//
// where F is the nonlocal term conjugated by eta. The conservative variant
// transports the momentum exactly: (m o eta) eta_x^{3/2} = m0.
#ifndef NOVIKOV_LAGRANGIAN_HPP
#define NOVIKOV_LAGRANGIAN_HPP

#include <limits>
#include <string>
#include <vector>

#include "novikov/eulerian.hpp"
#include "novikov/snapshot_io.hpp"
#include "novikov/spectral.hpp"
#include "novikov/stepping.hpp"

namespace novikov {

class JacobianNonpositive : public Error {
 public:
  using Error::Error;
};

/// Orientation-preserving circle diffeomorphism eta(x) = x + theta(x) with
/// theta periodic.
class Diffeo {
 public:
  /// Throws JacobianNonpositive when 1 + theta' is not positive on the 8x
  /// refined grid.
  explicit Diffeo(PeriodicField displacement);

  static Diffeo identity(const PeriodicGrid& grid);

  const PeriodicGrid& grid() const { return displacement_.grid(); }
  int size() const { return displacement_.size(); }
  const PeriodicField& displacement() const { return displacement_; }
  const PeriodicField& jacobian() const { return jacobian_; }
  double min_jacobian() const { return min_jacobian_; }
  bool is_identity() const { return identity_; }

  /// eta(x_j) = x_j + theta_j, not reduced mod 1.
  std::vector<double> values() const;

 private:
  PeriodicField displacement_;
  PeriodicField jacobian_;
  double min_jacobian_;
  bool identity_;
};

/// Labels x_j with eta(x_j) = y_j for every grid point y_j, by safeguarded
/// Newton iteration on the monotone lift.
std::vector<double> preimages(const Diffeo& eta);

Diffeo invert(const Diffeo& eta);
/// f o eta sampled on the grid.
PeriodicField compose(const PeriodicField& f, const Diffeo& eta);
/// f o eta^{-1} sampled on the grid (f is a function of the label).
PeriodicField compose_inverse(const PeriodicField& f, const Diffeo& eta);

/// (d_x (f o eta^{-1})) o eta, computed as f_x / eta_x.
PeriodicField conjugated_derivative(const PeriodicField& f, const Diffeo& eta);
/// (Lambda^{-2} (g o eta^{-1})) o eta
PeriodicField conjugated_helmholtz_inverse(const PeriodicField& g, const Diffeo& eta);

/// F(eta, zeta) = -Lambda_eta^{-2}(3 zeta^2 D zeta + 2 (D zeta)^3 + 3 zeta D zeta D^2 zeta),
/// D the conjugated derivative.
PeriodicField f_eta_zeta(const Diffeo& eta, const PeriodicField& zeta);

/// max_j |(m o eta)(x_j) eta_x(x_j)^{3/2} - m0(x_j)|
double orbit_residual(const Diffeo& eta, const PeriodicField& m, const PeriodicField& m0);

struct LagrangianState {
  double t = 0.0;
  Diffeo eta;
  PeriodicField zeta;
};

struct ConservativeState {
  double t = 0.0;
  Diffeo eta;
  PeriodicField m0;
};

LagrangianSnapshot to_snapshot(const LagrangianState& state);

template <class State>
struct LagrangianRun {
  Outcome outcome = Outcome::completed;
  double final_time = 0.0;
  /// Time of the first step at which eta_x stopped being positive; NaN if
  /// the run did not break down.
  double breakdown_time = std::numeric_limits<double>::quiet_NaN();
  std::string message;
  std::vector<State> states;
  /// u = zeta o eta^{-1} (flow map) or Lambda^{-2}(m o eta^{-1}) (conservative),
  /// one per probed state.
  std::vector<EulerianState> reconstructed;
  /// Diagnostics of the reconstructed fields, with the orbit residual.
  DiagnosticsRecord record;
};

using FlowMapRun = LagrangianRun<LagrangianState>;
using ConservativeRun = LagrangianRun<ConservativeState>;

/// u = zeta o eta^{-1}
PeriodicField reconstruct(const LagrangianState& state);
/// u = Lambda^{-2}((m0 eta_x^{-3/2}) o eta^{-1})
PeriodicField reconstruct(const ConservativeState& state);

FlowMapRun integrate_flowmap(const PeriodicField& u0, const TimeStepper& stepper,
                             const BlowupPolicy& policy = {}, const ProbeOptions& probes = {});
ConservativeRun integrate_conservative(const PeriodicField& u0, const TimeStepper& stepper,
                                       const BlowupPolicy& policy = {},
                                       const ProbeOptions& probes = {});

}  // namespace novikov

#endif  // NOVIKOV_LAGRANGIAN_HPP
