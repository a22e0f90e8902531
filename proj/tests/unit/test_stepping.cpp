#include "doctest.h"

#include <cmath>
#include <vector>

#include "novikov/stepping.hpp"

using namespace novikov;

TEST_SUITE("stepping") {

TEST_CASE("stepper and policy validation") {
  TimeStepper s;
  CHECK_NOTHROW(s.validate());
  s.t_end = 0.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.t_end = 1.0;
  s.control = FixedStep{-1e-3};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.control = CflStep{1.5};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.control = CflStep{0.5};
  CHECK(s.adaptive());
  CHECK_NOTHROW(s.validate());

  BlowupPolicy p;
  CHECK(p.c1_threshold == 1e3);
  CHECK(p.dt_min == 1e-10);
  p.dt_min = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("fixed clock lands exactly on t_end") {
  TimeStepper s;
  s.control = FixedStep{0.3};
  s.t_end = 1.0;
  StepClock clock(s, 1.0 / 64);
  std::vector<double> dts;
  while (!clock.done()) {
    const double dt = clock.next_dt(0.0);
    dts.push_back(dt);
    clock.advance(dt);
  }
  REQUIRE(dts.size() == 4u);
  CHECK(dts[3] == doctest::Approx(0.1));
  CHECK(clock.elapsed() == 1.0);
  CHECK(clock.steps() == 4);
}

TEST_CASE("cfl clock uses max(1, speed)") {
  TimeStepper s;
  s.control = CflStep{0.5};
  s.t_end = 10.0;
  StepClock clock(s, 0.01);
  CHECK(clock.next_dt(0.25) == doctest::Approx(0.005));
  CHECK(clock.next_dt(4.0) == doctest::Approx(0.00125));
}

TEST_CASE("step budget") {
  TimeStepper s;
  s.control = FixedStep{0.1};
  s.max_steps = 3;
  StepClock clock(s, 0.1);
  clock.advance(0.1);
  clock.advance(0.1);
  clock.advance(0.1);
  CHECK_THROWS_AS(clock.advance(0.1), MaxStepsExceeded);
}

TEST_CASE("rk4 template has order 4 on y' = y") {
  auto rate = [](double y) { return y; };
  auto axpy = [](double y, double a, double k) { return y + a * k; };
  std::vector<double> err;
  for (double h : {0.1, 0.05, 0.025}) {
    double y = 1.0;
    for (int i = 0; i < static_cast<int>(std::lround(1.0 / h)); ++i) y = rk4_step(y, h, rate, axpy);
    err.push_back(std::abs(y - std::exp(1.0)));
  }
  CHECK(std::log2(err[0] / err[1]) == doctest::Approx(4.0).epsilon(0.05));
  CHECK(std::log2(err[1] / err[2]) == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("outcome names") {
  CHECK(to_string(Outcome::completed) == "completed");
  CHECK(to_string(Outcome::blowup) == "blowup");
  CHECK(to_string(Outcome::breakdown) == "breakdown");
}

}  // TEST_SUITE
