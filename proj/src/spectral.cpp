#include "novikov/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace novikov {

namespace {

// FFTW plans are created once per size and executed through the new-array
// interface, so they can be shared between threads.
struct PlanPair {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.r2c);
      fftw_destroy_plan(p.c2r);
    }
  }

  const PlanPair& get(int n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    double* r = fftw_alloc_real(n);
    fftw_complex* c = fftw_alloc_complex(n / 2 + 1);
    PlanPair p;
    p.r2c = fftw_plan_dft_r2c_1d(n, r, c, FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.c2r = fftw_plan_dft_c2r_1d(n, c, r, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(r);
    fftw_free(c);
    return plans_.emplace(n, p).first->second;
  }

 private:
  std::mutex mutex_;
  std::map<int, PlanPair> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

void require_same_grid(const PeriodicField& a, const PeriodicField& b) {
  if (!(a.grid() == b.grid()))
    throw IncompatibleGrid("fields live on grids of size " + std::to_string(a.size()) +
                           " and " + std::to_string(b.size()));
}

}  // namespace

// ---------------------------------------------------------------------------

PeriodicGrid::PeriodicGrid(int n) : n_(n) {
  if (n < 8 || n % 2 != 0)
    throw std::invalid_argument("grid size must be even and >= 8, got " + std::to_string(n));
}

std::vector<double> PeriodicGrid::points() const {
  std::vector<double> x(n_);
  for (int j = 0; j < n_; ++j) x[j] = point(j);
  return x;
}

PeriodicField::PeriodicField(PeriodicGrid grid, std::vector<double> samples)
    : grid_(grid), samples_(std::move(samples)) {
  if (static_cast<int>(samples_.size()) != grid_.size())
    throw InvalidField("expected " + std::to_string(grid_.size()) + " samples, got " +
                       std::to_string(samples_.size()));
  for (double v : samples_)
    if (!std::isfinite(v)) throw InvalidField("non-finite sample in periodic field");
}

PeriodicField PeriodicField::constant(PeriodicGrid grid, double value) {
  return PeriodicField(grid, std::vector<double>(grid.size(), value));
}

double PeriodicField::max_abs() const {
  double m = 0.0;
  for (double v : samples_) m = std::max(m, std::abs(v));
  return m;
}

double PeriodicField::min() const { return *std::min_element(samples_.begin(), samples_.end()); }

double PeriodicField::max() const { return *std::max_element(samples_.begin(), samples_.end()); }

double PeriodicField::mean() const {
  double s = 0.0;
  for (double v : samples_) s += v;
  return s / static_cast<double>(samples_.size());
}

PeriodicField& PeriodicField::operator+=(const PeriodicField& other) {
  require_same_grid(*this, other);
  for (std::size_t j = 0; j < samples_.size(); ++j) samples_[j] += other.samples_[j];
  return *this;
}

PeriodicField& PeriodicField::operator-=(const PeriodicField& other) {
  require_same_grid(*this, other);
  for (std::size_t j = 0; j < samples_.size(); ++j) samples_[j] -= other.samples_[j];
  return *this;
}

PeriodicField& PeriodicField::operator*=(double a) {
  for (double& v : samples_) v *= a;
  return *this;
}

PeriodicField operator+(PeriodicField a, const PeriodicField& b) { return a += b; }
PeriodicField operator-(PeriodicField a, const PeriodicField& b) { return a -= b; }
PeriodicField operator-(PeriodicField a) { return a *= -1.0; }
PeriodicField operator*(double s, PeriodicField a) { return a *= s; }
PeriodicField operator*(PeriodicField a, double s) { return a *= s; }

PeriodicField pointwise_product(const PeriodicField& a, const PeriodicField& b) {
  require_same_grid(a, b);
  std::vector<double> v(a.size());
  for (int j = 0; j < a.size(); ++j) v[j] = a[j] * b[j];
  return PeriodicField(a.grid(), std::move(v));
}

PeriodicField pointwise_quotient(const PeriodicField& a, const PeriodicField& b) {
  require_same_grid(a, b);
  std::vector<double> v(a.size());
  for (int j = 0; j < a.size(); ++j) v[j] = a[j] / b[j];
  return PeriodicField(a.grid(), std::move(v));
}

double max_distance(const PeriodicField& a, const PeriodicField& b) {
  require_same_grid(a, b);
  double d = 0.0;
  for (int j = 0; j < a.size(); ++j) d = std::max(d, std::abs(a[j] - b[j]));
  return d;
}

// ---------------------------------------------------------------------------

namespace detail {

std::vector<cplx> forward_half(std::span<const double> samples) {
  const int n = static_cast<int>(samples.size());
  const PlanPair& p = plan_cache().get(n);
  std::vector<double> in(samples.begin(), samples.end());
  std::vector<cplx> out(n / 2 + 1);
  fftw_execute_dft_r2c(p.r2c, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / n;
  for (auto& c : out) c *= scale;
  return out;
}

std::vector<double> inverse_half(std::span<const cplx> half, int n) {
  const PlanPair& p = plan_cache().get(n);
  std::vector<cplx> in(half.begin(), half.end());
  // c2r assumes real DC and Nyquist bins.
  in[0] = cplx(in[0].real(), 0.0);
  in[n / 2] = cplx(in[n / 2].real(), 0.0);
  std::vector<double> out(n);
  fftw_execute_dft_c2r(p.c2r, reinterpret_cast<fftw_complex*>(in.data()), out.data());
  return out;
}

std::vector<cplx> pad_half(std::span<const cplx> half, int n, int factor) {
  if (factor == 1) return {half.begin(), half.end()};
  std::vector<cplx> fine(factor * n / 2 + 1, cplx(0.0, 0.0));
  for (int k = 0; k < n / 2; ++k) fine[k] = half[k];
  fine[n / 2] = cplx(0.5 * half[n / 2].real(), 0.0);
  return fine;
}

std::vector<cplx> truncate_half(std::span<const cplx> fine_half, int n) {
  std::vector<cplx> half(n / 2 + 1);
  for (int k = 0; k < n / 2; ++k) half[k] = fine_half[k];
  half[n / 2] = cplx(2.0 * fine_half[n / 2].real(), 0.0);
  return half;
}

}  // namespace detail

// ---------------------------------------------------------------------------

Spectrum::Spectrum(int n) : coeffs_(n, cplx(0.0, 0.0)) {}

int Spectrum::index(int k) const {
  const int n = size();
  if (k < -n / 2 || k > n / 2 - 1)
    throw std::out_of_range("wavenumber " + std::to_string(k) + " outside spectrum range");
  return k >= 0 ? k : k + n;
}

double Spectrum::hermitian_defect() const {
  double d = 0.0;
  for (int k = 0; k <= max_wavenumber(); ++k)
    d = std::max(d, std::abs((*this)[-k] - std::conj((*this)[k])));
  d = std::max(d, std::abs((*this)[min_wavenumber()].imag()));
  return d;
}

double Spectrum::energy() const {
  double e = 0.0;
  for (const auto& c : coeffs_) e += std::norm(c);
  return e;
}

Spectrum to_spectrum(const PeriodicField& field) {
  const int n = field.size();
  auto half = detail::forward_half(field.samples());
  Spectrum s(n);
  s[0] = half[0];
  for (int k = 1; k < n / 2; ++k) {
    s[k] = half[k];
    s[-k] = std::conj(half[k]);
  }
  s[-n / 2] = half[n / 2];
  return s;
}

PeriodicField from_spectrum(const Spectrum& spec, const PeriodicGrid& grid) {
  const int n = grid.size();
  if (spec.size() != n) throw IncompatibleGrid("spectrum size does not match grid");
  std::vector<cplx> half(n / 2 + 1);
  half[0] = cplx(spec[0].real(), 0.0);
  for (int k = 1; k < n / 2; ++k) half[k] = 0.5 * (spec[k] + std::conj(spec[-k]));
  half[n / 2] = cplx(spec[-n / 2].real(), 0.0);
  return PeriodicField(grid, detail::inverse_half(half, n));
}

PeriodicField derivative(const PeriodicField& field, int order, int max_order) {
  if (order < 0 || order > max_order)
    throw UnsupportedOrder("derivative order " + std::to_string(order) + " outside [0, " +
                           std::to_string(max_order) + "]");
  if (order == 0) return field;
  const int n = field.size();
  auto half = detail::forward_half(field.samples());
  for (int k = 0; k < n / 2; ++k) {
    const cplx ik(0.0, kTwoPi * k);
    cplx mult = ik;
    for (int o = 1; o < order; ++o) mult *= ik;
    half[k] *= mult;
  }
  half[n / 2] = 0.0;
  return PeriodicField(field.grid(), detail::inverse_half(half, n));
}

namespace {

double helmholtz_symbol(int k) {
  const double w = kTwoPi * k;
  return 1.0 + w * w;
}

}  // namespace

PeriodicField helmholtz(const PeriodicField& field) {
  auto half = detail::forward_half(field.samples());
  detail::apply_multiplier(half, [](int k) { return helmholtz_symbol(k); });
  return PeriodicField(field.grid(), detail::inverse_half(half, field.size()));
}

PeriodicField helmholtz_inverse(const PeriodicField& field) {
  auto half = detail::forward_half(field.samples());
  detail::apply_multiplier(half, [](int k) { return 1.0 / helmholtz_symbol(k); });
  return PeriodicField(field.grid(), detail::inverse_half(half, field.size()));
}

double sobolev_norm(const PeriodicField& field, double s) {
  if (!(s >= -4.0 && s <= 8.0))
    throw std::invalid_argument("Sobolev index must lie in [-4, 8]");
  const int n = field.size();
  const auto half = detail::forward_half(field.samples());
  double sum = std::norm(half[0]);
  for (int k = 1; k < n / 2; ++k) sum += 2.0 * std::pow(helmholtz_symbol(k), s) * std::norm(half[k]);
  sum += std::pow(helmholtz_symbol(n / 2), s) * std::norm(half[n / 2]);
  return std::sqrt(sum);
}

std::vector<double> refine_samples(const PeriodicField& field, int factor) {
  if (factor < 1) throw std::invalid_argument("refinement factor must be >= 1");
  const int n = field.size();
  const auto half = detail::forward_half(field.samples());
  return detail::inverse_half(detail::pad_half(half, n, factor), factor * n);
}

double refined_min(const PeriodicField& field, int factor) {
  const auto v = refine_samples(field, factor);
  return *std::min_element(v.begin(), v.end());
}

double refined_max_abs(const PeriodicField& field, int factor) {
  double m = 0.0;
  for (double v : refine_samples(field, factor)) m = std::max(m, std::abs(v));
  return m;
}

double c1_norm(const PeriodicField& field) {
  return refined_max_abs(field, 8) + refined_max_abs(derivative(field, 1), 8);
}

PeriodicField resample(const PeriodicField& field, const PeriodicGrid& target) {
  const int n = field.size();
  const int m = target.size();
  if (m == n) return field;
  const auto half = detail::forward_half(field.samples());
  std::vector<cplx> out(m / 2 + 1, cplx(0.0, 0.0));
  if (m > n) {
    for (int k = 0; k < n / 2; ++k) out[k] = half[k];
    out[n / 2] = cplx(0.5 * half[n / 2].real(), 0.0);
  } else {
    for (int k = 0; k < m / 2; ++k) out[k] = half[k];
    out[m / 2] = cplx(2.0 * half[m / 2].real(), 0.0);
  }
  return PeriodicField(target, detail::inverse_half(out, m));
}

// ---------------------------------------------------------------------------

TrigInterpolant::TrigInterpolant(const PeriodicField& field)
    : n_(field.size()), half_(detail::forward_half(field.samples())) {}

double TrigInterpolant::operator()(double x) const {
  const double xr = x - std::floor(x);
  const cplx z = std::polar(1.0, kTwoPi * xr);
  cplx p(0.0, 0.0);
  for (int k = n_ / 2 - 1; k >= 1; --k) p = p * z + half_[k];
  p *= z;
  return half_[0].real() + 2.0 * p.real() +
         half_[n_ / 2].real() * std::cos(0.5 * kTwoPi * n_ * xr);
}

std::pair<double, double> TrigInterpolant::value_and_slope(double x) const {
  const double xr = x - std::floor(x);
  const cplx z = std::polar(1.0, kTwoPi * xr);
  cplx p(0.0, 0.0);
  cplx q(0.0, 0.0);
  for (int k = n_ / 2 - 1; k >= 1; --k) {
    p = p * z + half_[k];
    q = q * z + static_cast<double>(k) * half_[k];
  }
  p *= z;
  q *= z;
  const double nyq = half_[n_ / 2].real();
  const double phase = 0.5 * kTwoPi * n_ * xr;
  const double value = half_[0].real() + 2.0 * p.real() + nyq * std::cos(phase);
  // d/dx of 2 Re(sum c_k e^{2 pi i k x}) = -2 (2 pi) Im(sum k c_k z^k)
  const double slope = -2.0 * kTwoPi * q.imag() - nyq * 0.5 * kTwoPi * n_ * std::sin(phase);
  return {value, slope};
}

double evaluate_offgrid(const PeriodicField& field, double x) { return TrigInterpolant(field)(x); }

// ---------------------------------------------------------------------------

PeriodicField dealiased_product(std::span<const PeriodicField> fields) {
  if (fields.size() < 2 || fields.size() > 3)
    throw std::invalid_argument("dealiased_product takes 2 or 3 factors");
  for (const auto& f : fields.subspan(1)) require_same_grid(fields[0], f);
  const int n = fields[0].size();
  std::vector<double> prod;
  for (const auto& f : fields) {
    auto fine = detail::inverse_half(
        detail::pad_half(detail::forward_half(f.samples()), n, 2), 2 * n);
    if (prod.empty()) {
      prod = std::move(fine);
    } else {
      for (int j = 0; j < 2 * n; ++j) prod[j] *= fine[j];
    }
  }
  auto half = detail::truncate_half(detail::forward_half(prod), n);
  return PeriodicField(fields[0].grid(), detail::inverse_half(half, n));
}

PeriodicField dealiased_product(const PeriodicField& a, const PeriodicField& b) {
  const PeriodicField f[] = {a, b};
  return dealiased_product(std::span<const PeriodicField>(f));
}

PeriodicField dealiased_product(const PeriodicField& a, const PeriodicField& b,
                                const PeriodicField& c) {
  const PeriodicField f[] = {a, b, c};
  return dealiased_product(std::span<const PeriodicField>(f));
}

PeriodicField trig_polynomial(const PeriodicGrid& grid, std::span<const FourierMode> modes) {
  const int n = grid.size();
  std::vector<cplx> half(n / 2 + 1, cplx(0.0, 0.0));
  for (const auto& m : modes) {
    const int k = std::abs(m.k);
    const double b = m.k < 0 ? -m.sin_coeff : m.sin_coeff;
    if (k == 0) {
      half[0] += m.cos_coeff;
    } else if (k < n / 2) {
      half[k] += cplx(0.5 * m.cos_coeff, -0.5 * b);
    }
  }
  return PeriodicField(grid, detail::inverse_half(half, n));
}

}  // namespace novikov
