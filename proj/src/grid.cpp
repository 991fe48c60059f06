#include "swt/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "swt/errors.hpp"

namespace swt {

Axis::Axis(double start, double step, std::size_t count) : start_(start), step_(step), count_(count) {
  if (!(step > 0.0) || !std::isfinite(step))
    throw InvalidArgument("axis step must be positive, got " + std::to_string(step));
  if (count < 2) throw InvalidArgument("axis needs at least 2 samples, got " + std::to_string(count));
  if (!std::isfinite(start)) throw InvalidArgument("axis start must be finite");
}

Axis Axis::dual() const {
  const double dk = 1.0 / (static_cast<double>(count_) * step_);
  return Axis(-static_cast<double>(count_ / 2) * dk, dk, count_);
}

std::vector<double> Axis::samples() const {
  std::vector<double> s(count_);
  for (std::size_t i = 0; i < count_; ++i) s[i] = (*this)[i];
  return s;
}

Axis make_axis(double start, double step, std::size_t count) { return Axis(start, step, count); }

Axis centered_axis(double half_width, std::size_t count) {
  return Axis(-half_width, 2.0 * half_width / static_cast<double>(count), count);
}

EpsilonParam::EpsilonParam(double eps) : eps_(eps) {
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw InvalidArgument("eps must be positive, got " + std::to_string(eps));
}

ComplexField1D::ComplexField1D(Axis axis) : axis_(axis), values_(axis.count()) {}

ComplexField1D::ComplexField1D(Axis axis, std::vector<cplx> values)
    : axis_(axis), values_(std::move(values)) {
  if (values_.size() != axis_.count())
    throw InvalidArgument("field has " + std::to_string(values_.size()) + " values for an axis of " +
                          std::to_string(axis_.count()));
}

double ComplexField1D::norm_squared() const {
  double s = 0.0;
  for (const auto& v : values_) s += std::norm(v);
  return s * axis_.step();
}

double ComplexField1D::norm() const { return std::sqrt(norm_squared()); }

double ComplexField1D::max_abs() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, std::abs(v));
  return m;
}

ComplexField1D& ComplexField1D::operator+=(const ComplexField1D& other) {
  if (!(other.axis_ == axis_)) throw InvalidArgument("cannot add fields on different axes");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

ComplexField1D& ComplexField1D::operator*=(cplx s) {
  for (auto& v : values_) v *= s;
  return *this;
}

ComplexField1D operator+(ComplexField1D a, const ComplexField1D& b) { return a += b; }
ComplexField1D operator*(cplx s, ComplexField1D a) { return a *= s; }

ComplexField1D multiply_by_x(const ComplexField1D& f) {
  ComplexField1D out = f;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= f.axis()[i];
  return out;
}

cplx inner_product(const ComplexField1D& f, const ComplexField1D& g) {
  if (!(f.axis() == g.axis())) throw InvalidArgument("inner product of fields on different axes");
  cplx s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += std::conj(f[i]) * g[i];
  return s * f.axis().step();
}

double relative_l2_error(const ComplexField1D& a, const ComplexField1D& b) {
  if (!(a.axis() == b.axis())) throw InvalidArgument("relative error of fields on different axes");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  if (den == 0.0) return std::sqrt(num);
  return std::sqrt(num / den);
}

}  // namespace swt
