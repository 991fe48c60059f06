#include "swt/fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "swt/errors.hpp"

namespace swt {

namespace {
// FFTW's planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(const cplx* p) { return reinterpret_cast<fftw_complex*>(const_cast<cplx*>(p)); }
}  // namespace

struct FftPlan::Impl {
  fftw_plan inplace = nullptr;
  fftw_plan outplace = nullptr;
  ~Impl() {
    std::lock_guard lock(planner_mutex());
    if (inplace) fftw_destroy_plan(inplace);
    if (outplace) fftw_destroy_plan(outplace);
  }
};

FftPlan::FftPlan(std::size_t n, Direction dir) : impl_(std::make_unique<Impl>()), n_(n) {
  if (n == 0) throw InvalidArgument("FFT of length 0");
  const int sign = dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD;
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::vector<cplx> a(n), b(n);
  std::lock_guard lock(planner_mutex());
  impl_->inplace = fftw_plan_dft_1d(static_cast<int>(n), as_fftw(a.data()), as_fftw(a.data()), sign, flags);
  impl_->outplace = fftw_plan_dft_1d(static_cast<int>(n), as_fftw(a.data()), as_fftw(b.data()), sign, flags);
}

FftPlan::~FftPlan() = default;
FftPlan::FftPlan(FftPlan&&) noexcept = default;
FftPlan& FftPlan::operator=(FftPlan&&) noexcept = default;

void FftPlan::execute(const cplx* in, cplx* out) const {
  fftw_execute_dft(in == out ? impl_->inplace : impl_->outplace, as_fftw(in), as_fftw(out));
}

struct FftPlan2D::Impl {
  fftw_plan plan = nullptr;
  ~Impl() {
    std::lock_guard lock(planner_mutex());
    if (plan) fftw_destroy_plan(plan);
  }
};

FftPlan2D::FftPlan2D(std::size_t n0, std::size_t n1, FftPlan::Direction dir)
    : impl_(std::make_unique<Impl>()), n0_(n0), n1_(n1) {
  const int sign = dir == FftPlan::Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD;
  std::vector<cplx> a(n0 * n1);
  std::lock_guard lock(planner_mutex());
  impl_->plan = fftw_plan_dft_2d(static_cast<int>(n0), static_cast<int>(n1), as_fftw(a.data()),
                                 as_fftw(a.data()), sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
}

FftPlan2D::~FftPlan2D() = default;

void FftPlan2D::execute(std::span<cplx> data) const {
  if (data.size() != n0_ * n1_) throw InvalidArgument("2-D FFT buffer has the wrong size");
  fftw_execute_dft(impl_->plan, as_fftw(data.data()), as_fftw(data.data()));
}

double fft_frequency(std::size_t i, std::size_t n, double h) {
  const auto si = static_cast<long long>(i);
  const auto sn = static_cast<long long>(n);
  const long long m = (si < (sn + 1) / 2) ? si : si - sn;
  return static_cast<double>(m) / (static_cast<double>(n) * h);
}

std::size_t next_fast_size(std::size_t n) {
  for (std::size_t m = std::max<std::size_t>(n, 1);; ++m) {
    std::size_t r = m;
    for (std::size_t p : {2, 3, 5})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

ComplexField1D forward_ft(const ComplexField1D& f) {
  const Axis& ax = f.axis();
  const std::size_t n = ax.count();
  const Axis dual = ax.dual();
  const double shift = static_cast<double>(n / 2);  // dual index 0 sits at -shift frequency bins

  // k_m x_j = (m - shift) j / n + k_m x0
  std::vector<cplx> buf(n);
  for (std::size_t j = 0; j < n; ++j)
    buf[j] = f[j] * std::polar(1.0, two_pi * shift * static_cast<double>(j) / static_cast<double>(n));
  FftPlan(n, FftPlan::Direction::forward).execute(buf);
  for (std::size_t m = 0; m < n; ++m) buf[m] *= ax.step() * std::polar(1.0, -two_pi * dual[m] * ax.start());
  return ComplexField1D(dual, std::move(buf));
}

ComplexField1D inverse_ft(const ComplexField1D& spectrum, double x_start) {
  const Axis& kax = spectrum.axis();
  const std::size_t n = kax.count();
  const Axis xax(x_start, 1.0 / (static_cast<double>(n) * kax.step()), n);

  std::vector<cplx> buf(n);
  for (std::size_t m = 0; m < n; ++m) buf[m] = spectrum[m] * std::polar(1.0, two_pi * kax[m] * x_start);
  FftPlan(n, FftPlan::Direction::backward).execute(buf);
  for (std::size_t j = 0; j < n; ++j)
    buf[j] *= kax.step() * std::polar(1.0, two_pi * kax.start() * static_cast<double>(j) * xax.step());
  return ComplexField1D(xax, std::move(buf));
}

ComplexField1D spectral_derivative(const ComplexField1D& f, int order) {
  if (order < 0) throw InvalidArgument("derivative order must be non-negative");
  if (order == 0) return f;
  const std::size_t n = f.size();
  std::vector<cplx> buf(f.values().begin(), f.values().end());
  FftPlan(n, FftPlan::Direction::forward).execute(buf);
  for (std::size_t i = 0; i < n; ++i) {
    if (order % 2 == 1 && n % 2 == 0 && i == n / 2) {
      buf[i] = 0.0;
      continue;
    }
    const cplx ik(0.0, two_pi * fft_frequency(i, n, f.axis().step()));
    buf[i] *= std::pow(ik, order) / static_cast<double>(n);
  }
  FftPlan(n, FftPlan::Direction::backward).execute(buf);
  return ComplexField1D(f.axis(), std::move(buf));
}

std::vector<cplx> fourier_upsample(std::span<const cplx> values, std::size_t factor) {
  const std::size_t n = values.size();
  if (factor == 1) return {values.begin(), values.end()};
  if (factor == 0) throw InvalidArgument("upsampling factor must be positive");
  const std::size_t m = n * factor;
  std::vector<cplx> spec(values.begin(), values.end());
  FftPlan(n, FftPlan::Direction::forward).execute(spec);
  std::vector<cplx> out(m, cplx(0.0));
  const std::size_t half = n / 2;
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) out[i] = spec[i];
  for (std::size_t i = (n + 1) / 2; i < n; ++i) out[m - n + i] = spec[i];
  if (n % 2 == 0) {
    // split the Nyquist coefficient between +n/2 and -n/2
    out[half] = 0.5 * spec[half];
    out[m - half] = 0.5 * spec[half];
  }
  FftPlan(m, FftPlan::Direction::backward).execute(out);
  for (auto& v : out) v /= static_cast<double>(n);
  return out;
}

}  // namespace swt
