#include "novikov/stepping.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace novikov {

void TimeStepper::validate() const {
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("t_end must be positive");
  if (max_steps <= 0) throw std::invalid_argument("max_steps must be positive");
  if (const auto* f = std::get_if<FixedStep>(&control)) {
    if (!(f->dt > 0.0) || !std::isfinite(f->dt)) throw std::invalid_argument("dt must be positive");
  } else {
    const double cfl = std::get<CflStep>(control).cfl;
    if (!(cfl > 0.0 && cfl <= 1.0)) throw std::invalid_argument("cfl must lie in (0, 1]");
  }
}

void BlowupPolicy::validate() const {
  if (!(c1_threshold > 0.0)) throw std::invalid_argument("c1_threshold must be positive");
  if (!(dt_min > 0.0)) throw std::invalid_argument("dt_min must be positive");
}

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::completed: return "completed";
    case Outcome::blowup: return "blowup";
    case Outcome::breakdown: return "breakdown";
  }
  return "unknown";
}

StepClock::StepClock(const TimeStepper& stepper, double dx) : stepper_(stepper), dx_(dx) {
  stepper_.validate();
  if (const auto* f = std::get_if<FixedStep>(&stepper_.control))
    fixed_total_ = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::ceil(stepper_.t_end / f->dt - 1e-9)));
}

double StepClock::next_dt(double max_speed) const {
  const double remaining = stepper_.t_end - elapsed_;
  if (const auto* f = std::get_if<FixedStep>(&stepper_.control))
    return steps_ + 1 == fixed_total_ ? remaining : f->dt;
  const double dt = std::get<CflStep>(stepper_.control).cfl * dx_ / std::max(1.0, max_speed);
  return std::min(dt, remaining);
}

void StepClock::advance(double dt) {
  if (steps_ >= stepper_.max_steps)
    throw MaxStepsExceeded("step budget of " + std::to_string(stepper_.max_steps) +
                           " exhausted at t = " + std::to_string(elapsed_));
  ++steps_;
  if (const auto* f = std::get_if<FixedStep>(&stepper_.control)) {
    elapsed_ = steps_ >= fixed_total_ ? stepper_.t_end : static_cast<double>(steps_) * f->dt;
  } else {
    elapsed_ += dt;
    if (stepper_.t_end - elapsed_ <= 1e-14 * stepper_.t_end) elapsed_ = stepper_.t_end;
  }
}

}  // namespace novikov
