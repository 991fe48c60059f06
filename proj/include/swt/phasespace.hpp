#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "swt/grid.hpp"
#include "swt/symbol.hpp"

namespace swt {

/// Cartesian (x, k) sampling.  Values are stored x-major: index = ix * nk + ik.
struct PhaseSpaceGrid {
  Axis x_axis;
  Axis k_axis;

  std::size_t nx() const { return x_axis.count(); }
  std::size_t nk() const { return k_axis.count(); }
  double cell_area() const { return x_axis.step() * k_axis.step(); }
  bool operator==(const PhaseSpaceGrid&) const = default;
};

enum class FieldKind : std::uint32_t { wigner = 0, smoothed = 1, spectrogram = 2, transported = 3 };

const char* to_string(FieldKind kind);

template <class T>
class BasicPhaseSpaceField {
 public:
  BasicPhaseSpaceField() = default;
  BasicPhaseSpaceField(PhaseSpaceGrid grid, FieldKind kind)
      : grid_(std::move(grid)), kind_(kind), values_(grid_.nx() * grid_.nk(), T(0)) {}
  BasicPhaseSpaceField(PhaseSpaceGrid grid, FieldKind kind, std::vector<T> values);

  const PhaseSpaceGrid& grid() const { return grid_; }
  FieldKind kind() const { return kind_; }
  void set_kind(FieldKind k) { kind_ = k; }
  std::size_t nx() const { return grid_.nx(); }
  std::size_t nk() const { return grid_.nk(); }

  std::span<const T> values() const { return values_; }
  std::span<T> values() { return values_; }
  T operator()(std::size_t ix, std::size_t ik) const { return values_[ix * grid_.nk() + ik]; }
  T& operator()(std::size_t ix, std::size_t ik) { return values_[ix * grid_.nk() + ik]; }

  double max_abs() const;
  /// Rectangle-rule integral over the grid.
  T integral() const;

 private:
  PhaseSpaceGrid grid_;
  FieldKind kind_ = FieldKind::wigner;
  std::vector<T> values_;
};

using PhaseSpaceField = BasicPhaseSpaceField<double>;
using ComplexPhaseSpaceField = BasicPhaseSpaceField<cplx>;

/// max |a - b| / max |b|; a and b must share a grid.
double relative_max_error(const PhaseSpaceField& a, const PhaseSpaceField& b);
double relative_max_error(const ComplexPhaseSpaceField& a, const ComplexPhaseSpaceField& b);

/// Covariance of a phase-space Gaussian kernel (x-x, x-k, k-k entries).
struct KernelCovariance {
  double xx = 0.0;
  double xk = 0.0;
  double kk = 0.0;

  bool is_zero() const { return xx == 0.0 && xk == 0.0 && kk == 0.0; }
  double determinant() const { return xx * kk - xk * xk; }
};

enum class SmoothingRegime { none, subcritical, critical, supercritical };

/// (sigma_x, sigma_k, eps) of the smoothed Wigner transform.  The kernel is the unit-mass
/// Gaussian with covariance diag(eps sigma_x^2 / (4 pi), eps sigma_k^2 / (4 pi)).
class SmoothingParams {
 public:
  SmoothingParams(double sigma_x, double sigma_k, double eps);

  double sigma_x() const { return sx_; }
  double sigma_k() const { return sk_; }
  double eps() const { return eps_; }

  /// none when both sigmas vanish; critical when sigma_x sigma_k = 1 to 1e-12.
  SmoothingRegime regime() const;
  KernelCovariance covariance() const;

 private:
  double sx_, sk_, eps_;
};

struct TransformOptions {
  /// Largest admissible fraction of |f^|^2 outside the k-window scaled by 1/eps.
  double spectral_tolerance = 1e-6;
  /// Threshold (relative to max |f|, |g|) that defines the support used to size the y-sum.
  double support_threshold = 1e-9;
  /// Test hook: evaluates with exp(+2 pi i k y), i.e. the wrong Fourier sign.
  bool flip_fourier_sign = false;
};

/// Cross Wigner transform W^eps[f, g] smoothed by a Gaussian of covariance `cov`
/// (cov = 0 gives the plain transform).  The grid's x nodes must coincide with nodes of the
/// field axis, or of a refinement of it by an integer factor.
ComplexPhaseSpaceField cross_gaussian_smoothed_wigner(const ComplexField1D& f, const ComplexField1D& g, double eps,
                                                      const KernelCovariance& cov, const PhaseSpaceGrid& grid,
                                                      const TransformOptions& opts = {});

/// Real field of the f = g transform; throws if the discarded imaginary part exceeds
/// 1e-10 max(1, max|W|).
PhaseSpaceField gaussian_smoothed_wigner(const ComplexField1D& f, double eps, const KernelCovariance& cov,
                                         const PhaseSpaceGrid& grid, const TransformOptions& opts = {});

ComplexPhaseSpaceField cross_wigner(const ComplexField1D& f, const ComplexField1D& g, EpsilonParam eps,
                                    const PhaseSpaceGrid& grid, const TransformOptions& opts = {});
PhaseSpaceField wigner(const ComplexField1D& f, EpsilonParam eps, const PhaseSpaceGrid& grid,
                       const TransformOptions& opts = {});
/// W^eps[f, g] as a real field; only meaningful when it is real (e.g. g = f).
PhaseSpaceField wigner(const ComplexField1D& f, const ComplexField1D& g, EpsilonParam eps, const PhaseSpaceGrid& grid,
                       const TransformOptions& opts = {});

ComplexPhaseSpaceField cross_smoothed_wigner(const ComplexField1D& f, const ComplexField1D& g,
                                             const SmoothingParams& params, const PhaseSpaceGrid& grid,
                                             const TransformOptions& opts = {});
PhaseSpaceField smoothed_wigner(const ComplexField1D& f, const SmoothingParams& params, const PhaseSpaceGrid& grid,
                                const TransformOptions& opts = {});

/// Gaussian-window spectrogram, i.e. the SWT at sigma_x sigma_k = 1.  Equals
/// (1/eps) |int f(y) h(y - x) exp(-2 pi i k y / eps) dy|^2 with the unit-norm window
/// h(y) = (2 / (eps sigma_x^2))^(1/4) exp(-pi y^2 / (eps sigma_x^2)).
PhaseSpaceField spectrogram(const ComplexField1D& f, const SmoothingParams& params, const PhaseSpaceGrid& grid,
                            const TransformOptions& opts = {});

/// Convolution of a sampled field with a unit-mass Gaussian, by a 2-D FFT multiplier.
/// The field must decay at the grid edges.
PhaseSpaceField smooth_field(const PhaseSpaceField& w, const KernelCovariance& cov);

using ScalarFunction = std::function<cplx(double)>;

struct OracleOptions {
  double y_half_width = 20.0;
  double y_step = 1e-3;
};

/// Direct rectangle-rule quadrature of int exp(-2 pi i k y) f(x + eps y/2) conj(g(x - eps y/2)) dy
/// for callables f, g.
cplx wigner_point_oracle(const ScalarFunction& f, const ScalarFunction& g, double eps, double x, double k,
                         const OracleOptions& opts = {});

/// Same quadrature for sampled fields at the field node x = axis[i], using the node pairs
/// (i + m, i - m), i.e. step 2 dx / eps in y.  Exact when the k-extent of W^eps[f, g] is
/// narrower than eps / (2 dx).
cplx wigner_point_oracle(const ComplexField1D& f, const ComplexField1D& g, double eps, std::size_t i, double k);

/// Rectangle-rule integral over k, one value per x node.
std::vector<double> marginal_k(const PhaseSpaceField& w);
/// Rectangle-rule integral over x, one value per k node.
std::vector<double> marginal_x(const PhaseSpaceField& w);

/// Quadrature of L(x, k) W(x, k).  Complex because symbols are complex.
cplx trace_observable(const PolynomialSymbol& L, const PhaseSpaceField& w);

/// x-grid aligned with the nodes of `field_axis` (every `stride`-th node) spanning at least
/// [x_lo, x_hi], and a centred k-axis of nk points over [-k_half, k_half).
PhaseSpaceGrid aligned_grid(const Axis& field_axis, double x_lo, double x_hi, std::size_t stride, double k_half,
                            std::size_t nk);

}  // namespace swt
