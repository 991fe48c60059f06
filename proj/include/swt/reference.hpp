#pragma once

#include <optional>
#include <string>
#include <vector>

#include "swt/grid.hpp"
#include "swt/symbol.hpp"

namespace swt {

// All solutions here refer to
//
//   i eps u_t = -(eps^2 / 2) u_xx + V(x) u,
//
// i.e. u_t = (i eps / 2) u_xx - (i / eps) V u.

/// u(x) = exp(-(K x^2 + Lambda x + M)), Re K > 0.
struct GaussianPacket {
  cplx K{1.0, 0.0};
  cplx Lambda{0.0, 0.0};
  cplx M{0.0, 0.0};

  void validate() const;
  cplx operator()(double x) const { return std::exp(-(K * x * x + Lambda * x + M)); }
  ComplexField1D sample(const Axis& axis) const;
};

class PotentialSpec {
 public:
  enum class Kind { free, uniform_field, harmonic, general_polynomial };

  PotentialSpec() = default;
  static PotentialSpec free();
  /// V(x) = c x.
  static PotentialSpec uniform_field(double c);
  /// V(x) = (omega^2 / 2) x^2.
  static PotentialSpec harmonic(double omega_squared);
  static PotentialSpec polynomial(std::vector<double> ascending);

  Kind kind() const { return kind_; }
  const RealPolynomial& polynomial() const { return v_; }
  double operator()(double x) const { return v_(x); }
  double derivative(double x) const { return dv_(x); }
  double second_derivative(double x) const { return d2v_(x); }

  /// (a, s) when V = a x^s with s in {0, 1, 2}; a = 0 counts as s = 0.
  std::optional<std::pair<double, int>> monomial() const;
  /// Harmonic angular frequency sqrt(omega^2); throws unless kind() == harmonic.
  double omega() const;
  std::string describe() const;

 private:
  PotentialSpec(Kind kind, RealPolynomial v);
  Kind kind_ = Kind::free;
  RealPolynomial v_, dv_, d2v_;
};

const char* to_string(PotentialSpec::Kind kind);

/// Closed-form free evolution of a Gaussian packet:
///   u = (1 + s)^(-1/2) exp(Lambda^2/(4K) - M - K (x + Lambda/(2K))^2 / (1 + s)),  s = 2 i eps K t,
/// principal square root (Im(1 + s) > 0 for t > 0 keeps it continuous).
ComplexField1D gaussian_packet_exact(const GaussianPacket& p, double eps, double t, const Axis& axis);

/// Evolves the packet parameters exactly for V = a x^2 + b x + c by integrating the Riccati
/// system for (K, Lambda, M) with many fine RK4 steps.  Throws Unsupported for degree > 2.
GaussianPacket evolve_gaussian_packet(const GaussianPacket& p, const PotentialSpec& V, double eps, double t);

/// Normalized Hermite function of the oscillator V = (omega^2/2) x^2:
///   psi_n(x) = (omega/eps)^(1/4) h_n(x sqrt(omega/eps)),  energy eps omega (n + 1/2).
/// Stable three-term recurrence; n <= 60.
ComplexField1D harmonic_eigenfunction(int n, double omega, double eps, const Axis& axis);
inline constexpr int max_hermite_order = 60;

/// Exact evolution under a harmonic potential by expansion in its eigenfunctions.
class HarmonicEvolver {
 public:
  HarmonicEvolver(const ComplexField1D& u0, double omega, double eps, int n_max = max_hermite_order);
  ComplexField1D at(double t) const;
  /// L2 norm of u0 not captured by the expansion, relative to ||u0||.
  double truncation_residual() const { return residual_; }

 private:
  Axis axis_;
  double omega_, eps_;
  std::vector<ComplexField1D> basis_;
  std::vector<cplx> coeff_;
  double residual_ = 0.0;
};

/// A(x) exp((2 pi i / eps)(-x^4/4 - x^2 + 2x)),
/// A(x) = 0.25 [tanh(6.87 (x + 2.42)) + 1] [tanh(6.87 (2.42 - x)) + 1].
ComplexField1D build_f_eps(double eps, const Axis& axis);
double f_eps_envelope(double x);
/// Local wavenumber of f^eps in the eps-scaled k variable: -x^3 - 2x + 2.
double f_eps_ridge(double x);

/// Sum of the three chirped packets exp(-K x^2) with K = (1+7i)/0.1, (0.2+3i)/0.1, (0.9-8i)/0.1.
std::vector<GaussianPacket> three_gaussian_packets();

struct TimeSeries {
  std::vector<double> t;
  std::vector<ComplexField1D> u;
};

struct SplitStepOptions {
  /// Fraction of the axis at each end that must stay (nearly) empty.
  double boundary_fraction = 0.05;
  double boundary_mass_tolerance = 1e-10;
  /// Steps between boundary checks.
  int check_every = 20;
};

/// Strang splitting, half-steps of exp(-i V dt / (2 eps)) around the exact kinetic
/// propagator exp(-i (eps/2) (2 pi nu)^2 dt).  Second order in dt.  Stores the solution at
/// every requested time (0 and t_final when `times` is empty); the step is shortened to hit
/// each time exactly.  Resolution rule: dt * max|V| / eps and dt * eps (2 pi nu_max)^2 / 2
/// should both be small against 2 pi.
TimeSeries split_step_solve(const ComplexField1D& u0, const PotentialSpec& V, double eps, double t_final, double dt,
                            std::vector<double> times = {}, const SplitStepOptions& opts = {});

}  // namespace swt
