#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace swt {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

/// Uniform sample positions start + i*step, i = 0..count-1.
class Axis {
 public:
  Axis() = default;
  Axis(double start, double step, std::size_t count);

  double start() const { return start_; }
  double step() const { return step_; }
  std::size_t count() const { return count_; }
  double operator[](std::size_t i) const { return start_ + static_cast<double>(i) * step_; }
  double back() const { return (*this)[count_ - 1]; }
  /// count * step; the period used by every FFT-based operation.
  double length() const { return static_cast<double>(count_) * step_; }

  /// Frequency axis of the discrete transform: step 1/(count*step), centred so that
  /// index count/2 is zero frequency.
  Axis dual() const;

  std::vector<double> samples() const;

  /// Position of x in index units; not rounded.
  double index_of(double x) const { return (x - start_) / step_; }

  bool operator==(const Axis&) const = default;

 private:
  double start_ = 0.0;
  double step_ = 1.0;
  std::size_t count_ = 2;
};

/// Validating factory; throws InvalidArgument for step <= 0 or count < 2.
Axis make_axis(double start, double step, std::size_t count);

/// Centred axis of `count` samples over [-half_width, half_width).
Axis centered_axis(double half_width, std::size_t count);

/// Semiclassical parameter; always > 0.
class EpsilonParam {
 public:
  explicit EpsilonParam(double eps);
  double value() const { return eps_; }
  operator double() const { return eps_; }

 private:
  double eps_;
};

/// Complex samples of a wavefunction on an Axis.  Outside the axis the field is zero.
class ComplexField1D {
 public:
  ComplexField1D() = default;
  explicit ComplexField1D(Axis axis);
  ComplexField1D(Axis axis, std::vector<cplx> values);

  template <class F>
  static ComplexField1D sample(const Axis& axis, F&& f) {
    std::vector<cplx> v(axis.count());
    for (std::size_t i = 0; i < axis.count(); ++i) v[i] = cplx(f(axis[i]));
    return ComplexField1D(axis, std::move(v));
  }

  const Axis& axis() const { return axis_; }
  std::size_t size() const { return values_.size(); }
  std::span<const cplx> values() const { return values_; }
  std::span<cplx> values() { return values_; }
  cplx operator[](std::size_t i) const { return values_[i]; }
  cplx& operator[](std::size_t i) { return values_[i]; }

  /// Rectangle-rule squared L2 norm.
  double norm_squared() const;
  double norm() const;
  double max_abs() const;

  ComplexField1D& operator+=(const ComplexField1D& other);
  ComplexField1D& operator*=(cplx s);

 private:
  Axis axis_;
  std::vector<cplx> values_;
};

ComplexField1D operator+(ComplexField1D a, const ComplexField1D& b);
ComplexField1D operator*(cplx s, ComplexField1D a);

/// Pointwise x * f(x).
ComplexField1D multiply_by_x(const ComplexField1D& f);

/// Rectangle-rule inner product <f, g> = sum conj(f) g dx.
cplx inner_product(const ComplexField1D& f, const ComplexField1D& g);

/// Relative L2 distance ||a - b|| / ||b||; a and b must share an axis.
double relative_l2_error(const ComplexField1D& a, const ComplexField1D& b);

}  // namespace swt
