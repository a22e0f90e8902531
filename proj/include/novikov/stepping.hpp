// Time-step control shared by the Eulerian and Lagrangian integrators.
#ifndef NOVIKOV_STEPPING_HPP
#define NOVIKOV_STEPPING_HPP

#include <cstdint>
#include <string_view>
#include <variant>

#include "novikov/spectral.hpp"

namespace novikov {

struct FixedStep {
  double dt = 0.0;
};

/// dt = cfl * dx / max(1, speed), speed being the largest characteristic
/// speed (u^2 for this equation).
struct CflStep {
  double cfl = 0.0;
};

struct TimeStepper {
  std::variant<FixedStep, CflStep> control = FixedStep{1e-3};
  double t_end = 1.0;
  std::int64_t max_steps = 100'000'000;
  /// Integrate with the negated right-hand side (backwards in time).
  bool reverse = false;

  void validate() const;
  bool adaptive() const { return std::holds_alternative<CflStep>(control); }
};

struct BlowupPolicy {
  double c1_threshold = 1e3;
  double dt_min = 1e-10;

  void validate() const;
};

enum class Outcome { completed, blowup, breakdown };

std::string_view to_string(Outcome outcome);

class MaxStepsExceeded : public Error {
 public:
  using Error::Error;
};

/// Tracks elapsed integration time. Fixed steps land on i*dt exactly, with
/// the last step shortened to hit t_end.
class StepClock {
 public:
  StepClock(const TimeStepper& stepper, double dx);

  bool done() const { return elapsed_ >= stepper_.t_end; }
  double elapsed() const { return elapsed_; }
  std::int64_t steps() const { return steps_; }

  /// Size of the next step; max_speed is ignored for fixed steps.
  double next_dt(double max_speed) const;
  /// Records a step of size dt; throws MaxStepsExceeded past the budget.
  void advance(double dt);

 private:
  TimeStepper stepper_;
  double dx_;
  double elapsed_ = 0.0;
  std::int64_t steps_ = 0;
  std::int64_t fixed_total_ = 0;
};

/// Classical four-stage Runge-Kutta step. `axpy(y, a, k)` must return y + a*k.
template <class State, class Rate, class Axpy>
State rk4_step(const State& y, double h, Rate&& rate, Axpy&& axpy) {
  const State k1 = rate(y);
  const State k2 = rate(axpy(y, 0.5 * h, k1));
  const State k3 = rate(axpy(y, 0.5 * h, k2));
  const State k4 = rate(axpy(y, h, k3));
  State out = axpy(y, h / 6.0, k1);
  out = axpy(out, h / 3.0, k2);
  out = axpy(out, h / 3.0, k3);
  return axpy(out, h / 6.0, k4);
}

}  // namespace novikov

#endif  // NOVIKOV_STEPPING_HPP
