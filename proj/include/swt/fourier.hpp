#pragma once

// Fourier conventions used everywhere in this library:
//
//   forward:  f^(k) = \int exp(-2 pi i k x) f(x) dx
//   inverse:  f(x)  = \int exp(+2 pi i k x) f^(k) dk
//
// No angular-frequency variant exists anywhere.  Fields are zero outside their axis and
// every transform treats them as one period of a periodic function, so callers pad.
// docs/conventions.md carries the full statement.

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "swt/grid.hpp"

namespace swt {

/// FFTW plan for one size and direction.  Execution is thread-safe, planning is serialized
/// internally.  FFTW's sign convention: forward = exp(-2 pi i jm/N), no normalization.
class FftPlan {
 public:
  enum class Direction { forward, backward };

  FftPlan(std::size_t n, Direction dir);
  ~FftPlan();
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;
  FftPlan(FftPlan&&) noexcept;
  FftPlan& operator=(FftPlan&&) noexcept;

  std::size_t size() const { return n_; }
  /// Out-of-place unless in == out; arrays of length size().
  void execute(const cplx* in, cplx* out) const;
  void execute(std::span<cplx> data) const { execute(data.data(), data.data()); }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::size_t n_ = 0;
};

/// Two-dimensional transform over a row-major (n0 x n1) array.
class FftPlan2D {
 public:
  FftPlan2D(std::size_t n0, std::size_t n1, FftPlan::Direction dir);
  ~FftPlan2D();
  FftPlan2D(const FftPlan2D&) = delete;
  FftPlan2D& operator=(const FftPlan2D&) = delete;

  void execute(std::span<cplx> data) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::size_t n0_, n1_;
};

/// Unnormalized DFT frequency for index i of an n-point transform with sample step h,
/// in the standard FFT order (0, 1, ..., n/2-1, -n/2, ..., -1) / (n h).
double fft_frequency(std::size_t i, std::size_t n, double h);

/// Smallest m >= n whose only prime factors are 2, 3 and 5.
std::size_t next_fast_size(std::size_t n);

/// Samples of f^ on f.axis().dual() by the rectangle rule (FFT with phase corrections).
ComplexField1D forward_ft(const ComplexField1D& f);

/// Inverse of forward_ft: `spectrum` lives on some dual axis; the result is placed on the
/// axis with the given start and step 1/(count * spectrum step).
ComplexField1D inverse_ft(const ComplexField1D& spectrum, double x_start);

/// d^order f / dx^order by multiplication with (2 pi i k)^order.  The field must be smooth
/// and decay to machine zero at both ends (or be periodic on its axis).  For odd orders the
/// Nyquist mode is dropped.
ComplexField1D spectral_derivative(const ComplexField1D& f, int order);

/// Band-limited (trigonometric) interpolation of a periodic sample vector onto a grid that is
/// `factor` times finer.  Output length n*factor; sample 0 is unchanged.
std::vector<cplx> fourier_upsample(std::span<const cplx> values, std::size_t factor);

}  // namespace swt
