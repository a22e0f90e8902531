// Shared fixtures for the unit tests: seeded random trigonometric polynomials
// with closed-form evaluation, used as oracles independent of the FFT path.
#ifndef NOVIKOV_TEST_HELPERS_HPP
#define NOVIKOV_TEST_HELPERS_HPP

#include <cmath>
#include <random>
#include <vector>

#include "novikov/spectral.hpp"

namespace testing {

struct TrigPoly {
  std::vector<novikov::FourierMode> modes;

  double operator()(double x) const {
    double v = 0.0;
    for (const auto& m : modes)
      v += m.cos_coeff * std::cos(novikov::kTwoPi * m.k * x) +
           m.sin_coeff * std::sin(novikov::kTwoPi * m.k * x);
    return v;
  }
  // d^order/dx^order in closed form
  double derivative(double x, int order) const {
    double v = 0.0;
    for (const auto& m : modes) {
      const double w = novikov::kTwoPi * m.k;
      // derivative of cos shifts phase by pi/2 per order
      const double phase = w * x + order * M_PI / 2;
      v += std::pow(w, order) * (m.cos_coeff * std::cos(phase) + m.sin_coeff * std::sin(phase));
    }
    return v;
  }
  novikov::PeriodicField on(int n) const {
    return novikov::PeriodicField::sample(novikov::PeriodicGrid(n), *this);
  }
};

inline TrigPoly random_poly(std::mt19937_64& rng, int degree, double scale = 1.0,
                            bool with_mean = true) {
  std::uniform_real_distribution<double> c(-scale, scale);
  TrigPoly p;
  for (int k = with_mean ? 0 : 1; k <= degree; ++k) p.modes.push_back({k, c(rng), k ? c(rng) : 0.0});
  return p;
}

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

}  // namespace testing

#endif
