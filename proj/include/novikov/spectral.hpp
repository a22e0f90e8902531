// Fourier pseudo-spectral primitives on the period-1 torus T = R/Z.
//
// A PeriodicField holds samples u(x_j) at x_j = j/n. Its spectrum view holds
// the coefficients c_k of e^{2 pi i k x} for k in [-n/2, n/2 - 1], normalized
// so that u(x_j) = sum_k c_k e^{2 pi i k x_j}.
#ifndef NOVIKOV_SPECTRAL_HPP
#define NOVIKOV_SPECTRAL_HPP

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace novikov {

using cplx = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidField : public Error {
 public:
  using Error::Error;
};

class UnsupportedOrder : public Error {
 public:
  using Error::Error;
};

class IncompatibleGrid : public Error {
 public:
  using Error::Error;
};

class PeriodicGrid {
 public:
  /// n must be even and at least 8.
  explicit PeriodicGrid(int n);

  int size() const { return n_; }
  double spacing() const { return 1.0 / n_; }
  double point(int j) const { return static_cast<double>(j) / n_; }
  std::vector<double> points() const;

  bool operator==(const PeriodicGrid&) const = default;

 private:
  int n_;
};

class PeriodicField {
 public:
  /// Throws InvalidField on size mismatch or non-finite samples.
  PeriodicField(PeriodicGrid grid, std::vector<double> samples);

  static PeriodicField constant(PeriodicGrid grid, double value);
  static PeriodicField zero(PeriodicGrid grid) { return constant(grid, 0.0); }

  template <class F>
  static PeriodicField sample(PeriodicGrid grid, F&& f) {
    std::vector<double> v(grid.size());
    for (int j = 0; j < grid.size(); ++j) v[j] = f(grid.point(j));
    return PeriodicField(grid, std::move(v));
  }

  const PeriodicGrid& grid() const { return grid_; }
  int size() const { return grid_.size(); }
  std::span<const double> samples() const { return samples_; }
  const std::vector<double>& values() const { return samples_; }
  double operator[](int j) const { return samples_[j]; }

  double max_abs() const;
  double min() const;
  double max() const;
  /// Trapezoidal mean, i.e. the integral over one period.
  double mean() const;

  /// Pointwise map; the result is validated like any other field.
  template <class F>
  PeriodicField map(F&& f) const {
    std::vector<double> v(samples_.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = f(samples_[j]);
    return PeriodicField(grid_, std::move(v));
  }

  PeriodicField& operator+=(const PeriodicField& other);
  PeriodicField& operator-=(const PeriodicField& other);
  PeriodicField& operator*=(double a);

 private:
  PeriodicGrid grid_;
  std::vector<double> samples_;
};

PeriodicField operator+(PeriodicField a, const PeriodicField& b);
PeriodicField operator-(PeriodicField a, const PeriodicField& b);
PeriodicField operator-(PeriodicField a);
PeriodicField operator*(double s, PeriodicField a);
PeriodicField operator*(PeriodicField a, double s);

/// Pointwise product on the grid, without alias control. Use dealiased_product
/// for nonlinear terms.
PeriodicField pointwise_product(const PeriodicField& a, const PeriodicField& b);
PeriodicField pointwise_quotient(const PeriodicField& a, const PeriodicField& b);

/// Sup-norm of a - b; both fields must share a grid.
double max_distance(const PeriodicField& a, const PeriodicField& b);

class Spectrum {
 public:
  explicit Spectrum(int n);

  int size() const { return static_cast<int>(coeffs_.size()); }
  int min_wavenumber() const { return -size() / 2; }
  int max_wavenumber() const { return size() / 2 - 1; }

  /// Coefficient of e^{2 pi i k x}, k in [-n/2, n/2 - 1].
  cplx operator[](int k) const { return coeffs_[index(k)]; }
  cplx& operator[](int k) { return coeffs_[index(k)]; }

  /// max_k |c_{-k} - conj(c_k)| over pairs that both live in range.
  double hermitian_defect() const;
  /// sum_k |c_k|^2
  double energy() const;

 private:
  int index(int k) const;
  std::vector<cplx> coeffs_;
};

Spectrum to_spectrum(const PeriodicField& field);
/// Real part of the synthesized samples; the imaginary part is discarded.
PeriodicField from_spectrum(const Spectrum& spec, const PeriodicGrid& grid);

inline constexpr int kDefaultMaxDerivativeOrder = 8;

/// Spectral derivative, multiplier (2 pi i k)^order. The Nyquist coefficient is
/// zeroed for order >= 1.
PeriodicField derivative(const PeriodicField& field, int order,
                         int max_order = kDefaultMaxDerivativeOrder);

/// Lambda^2 = 1 - d_xx and its inverse.
PeriodicField helmholtz(const PeriodicField& field);
PeriodicField helmholtz_inverse(const PeriodicField& field);

/// sqrt(sum_k (1 + (2 pi k)^2)^s |c_k|^2). Requires s in [-4, 8].
double sobolev_norm(const PeriodicField& field, double s);

/// max|u| + max|u_x|, maxima over the 8x refined trigonometric interpolant.
double c1_norm(const PeriodicField& field);

/// Minimum / maximum of the trigonometric interpolant sampled on a grid
/// refined by `factor`.
double refined_min(const PeriodicField& field, int factor = 8);
double refined_max_abs(const PeriodicField& field, int factor = 8);

/// Samples of the trigonometric interpolant on the grid refined by `factor`.
std::vector<double> refine_samples(const PeriodicField& field, int factor);

/// Exact spectral interpolation (factor > 1) or truncation onto another grid.
PeriodicField resample(const PeriodicField& field, const PeriodicGrid& target);

/// Evaluates the trigonometric interpolant at x (reduced mod 1) by direct
/// Fourier summation. The Nyquist mode enters as c_{-n/2} cos(pi n x).
double evaluate_offgrid(const PeriodicField& field, double x);

/// Reusable interpolant for repeated off-grid evaluation of one field.
class TrigInterpolant {
 public:
  explicit TrigInterpolant(const PeriodicField& field);

  double operator()(double x) const;
  /// Value and x-derivative of the interpolant at x.
  std::pair<double, double> value_and_slope(double x) const;

  int size() const { return n_; }

 private:
  int n_;
  std::vector<cplx> half_;  // c_0 .. c_{n/2}
};

/// Pointwise product of 2 or 3 fields evaluated on a grid zero-padded by a
/// factor 2 and truncated back. Exact for cubic products of resolved fields.
PeriodicField dealiased_product(std::span<const PeriodicField> fields);
PeriodicField dealiased_product(const PeriodicField& a, const PeriodicField& b);
PeriodicField dealiased_product(const PeriodicField& a, const PeriodicField& b,
                                const PeriodicField& c);

/// Trigonometric polynomial sum_k (a_k cos 2 pi k x + b_k sin 2 pi k x).
/// Modes with k >= n/2 are not representable and are dropped.
struct FourierMode {
  int k = 0;
  double cos_coeff = 0.0;
  double sin_coeff = 0.0;
};
PeriodicField trig_polynomial(const PeriodicGrid& grid,
                              std::span<const FourierMode> modes);

namespace detail {

/// Normalized r2c transform: half[k] = c_k for k = 0 .. n/2.
std::vector<cplx> forward_half(std::span<const double> samples);
/// Inverse of forward_half for a grid of size n.
std::vector<double> inverse_half(std::span<const cplx> half, int n);

/// Zero-pads a half spectrum of an n-grid onto a grid of size factor*n,
/// splitting the Nyquist coefficient symmetrically.
std::vector<cplx> pad_half(std::span<const cplx> half, int n, int factor);
/// Truncates a half spectrum of a fine grid back to an n-grid, folding the
/// +-n/2 pair into the Nyquist slot.
std::vector<cplx> truncate_half(std::span<const cplx> fine_half, int n);

/// Applies multiplier(k) to every mode k = 0 .. n/2.
template <class M>
void apply_multiplier(std::vector<cplx>& half, M&& multiplier) {
  for (std::size_t k = 0; k < half.size(); ++k) half[k] *= multiplier(static_cast<int>(k));
}

}  // namespace detail

}  // namespace novikov

#endif  // NOVIKOV_SPECTRAL_HPP
