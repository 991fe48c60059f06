#pragma once

#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "swt/phasespace.hpp"
#include "swt/symbol.hpp"

namespace swt {

/// One term coeff(x, k) * eps^eps_power * d^dx_order/dx * d^dk_order/dk.
struct OperatorTerm {
  int dx_order = 0;
  int dk_order = 0;
  int eps_power = 0;
  PolynomialSymbol coeff;
};

/// Linear differential operator on phase-space fields with polynomial coefficients.
/// Terms are kept in canonical form (coefficients to the left of derivatives) and carry an
/// explicit power of eps, so truncation in eps is exact.
class PhaseSpaceOperator {
 public:
  explicit PhaseSpaceOperator(double eps = 1.0);

  static PhaseSpaceOperator identity(double eps);
  static PhaseSpaceOperator multiplication(double eps, const PolynomialSymbol& c);

  double eps() const { return eps_; }
  void add_term(int dx_order, int dk_order, int eps_power, const PolynomialSymbol& coeff);
  std::vector<OperatorTerm> terms() const;
  bool is_zero() const { return terms_.empty(); }

  PolynomialSymbol coefficient(int dx_order, int dk_order, int eps_power) const;
  /// sum_p eps^p * coefficient(dx_order, dk_order, p).
  PolynomialSymbol collected(int dx_order, int dk_order) const;
  int max_eps_power() const;

  /// (*this) o rhs, normalized with the product rule.
  PhaseSpaceOperator compose(const PhaseSpaceOperator& rhs) const;
  PhaseSpaceOperator power(int n) const;
  PhaseSpaceOperator conj() const;
  /// op + conj(op): the real operator acting on real fields.
  PhaseSpaceOperator twice_real_part() const;
  bool is_real(double tol = 0.0) const;
  PhaseSpaceOperator pruned(double tol) const;

  PhaseSpaceOperator& operator+=(const PhaseSpaceOperator& o);
  PhaseSpaceOperator& operator*=(cplx s);
  friend PhaseSpaceOperator operator+(PhaseSpaceOperator a, const PhaseSpaceOperator& b) { return a += b; }
  friend PhaseSpaceOperator operator*(cplx s, PhaseSpaceOperator a) { return a *= s; }

  std::string to_string() const;

 private:
  using Key = std::tuple<int, int, int>;  // dx, dk, eps power
  double eps_;
  std::map<Key, PolynomialSymbol> terms_;
};

/// Operators that multiplication by x and (eps / (2 pi i)) d/dx of the first (slot 0) or second
/// (slot 1) argument induce on W~[f, g]:
///   first:  X = x + eps[(sx^2/4pi) d_x + (i/4pi) d_k],  K = k + eps[(sk^2/4pi) d_k - (i/4pi) d_x]
///   second: X' = conj(X),  K' = conj(K).
enum class Slot { first, second };
PhaseSpaceOperator position_operator(const SmoothingParams& params, Slot slot = Slot::first);
PhaseSpaceOperator wavenumber_operator(const SmoothingParams& params, Slot slot = Slot::first);

/// Weyl quantization of L with x -> X, k -> K (McCoy ordering
/// x^m k^n -> 2^-m sum_l C(m,l) X^(m-l) K^n X^l).  W~[L(x, eps d_x) f, g] = result W~[f, g].
PhaseSpaceOperator pullout_operator(const PolynomialSymbol& L, const SmoothingParams& params,
                                    Slot slot = Slot::first);

/// Generator G of  eps dW~/dt + G W~ = 0  for  eps u_t + L(x, eps d_x) u = 0; exact.
PhaseSpaceOperator build_evolution_operator(const PolynomialSymbol& L, const SmoothingParams& params);

/// Taylor form with coefficients to the left, L(x + eps b, k + eps a) with b, a the constant
/// coefficient parts of X, K treated as commuting.  Agrees with build_evolution_operator at
/// sigma = 0 and for i*H with H quadratic and separable; differs otherwise.
PhaseSpaceOperator series_evolution_operator(const PolynomialSymbol& L, const SmoothingParams& params);

/// Keeps terms whose order in the rescaled equation, eps_power - 1, is <= order.
PhaseSpaceOperator truncate(const PhaseSpaceOperator& op, int order);

/// Sum of coefficient(x, k) times spectral mixed derivatives.  The field must be smooth and
/// decay at the grid edges.  The real overload requires a real operator.
PhaseSpaceField apply_operator(const PhaseSpaceOperator& op, const PhaseSpaceField& w);
ComplexPhaseSpaceField apply_operator(const PhaseSpaceOperator& op, const ComplexPhaseSpaceField& w);

/// Spectral d^a/dx^a d^b/dk^b of a sampled field.
ComplexPhaseSpaceField spectral_mixed_derivative(const ComplexPhaseSpaceField& w, int a, int b);

/// The four elementary pull-out identities of the smoothed transform.
enum class Identity {
  x_first,           // W~[x f, g]
  x_second,          // W~[f, x g]
  derivative_first,  // W~[eps f', g]
  derivative_second  // W~[f, eps g']
};

PhaseSpaceOperator identity_operator(Identity id, const SmoothingParams& params);
/// Transform of the modified pair, computed directly.
ComplexPhaseSpaceField identity_lhs(Identity id, const ComplexField1D& f, const ComplexField1D& g,
                                    const SmoothingParams& params, const PhaseSpaceGrid& grid);
/// identity_operator applied to the transform of (f, g).
ComplexPhaseSpaceField identity_rhs(Identity id, const ComplexField1D& f, const ComplexField1D& g,
                                    const SmoothingParams& params, const PhaseSpaceGrid& grid);

ComplexPhaseSpaceField apply_identity_lhs_x(const ComplexField1D& f, const ComplexField1D& g,
                                            const SmoothingParams& params, const PhaseSpaceGrid& grid);
ComplexPhaseSpaceField apply_identity_rhs_x(const ComplexField1D& f, const ComplexField1D& g,
                                            const SmoothingParams& params, const PhaseSpaceGrid& grid);
/// (lhs, rhs) of the first-slot derivative identity.
std::pair<ComplexPhaseSpaceField, ComplexPhaseSpaceField> apply_identity_derivative(const ComplexField1D& f,
                                                                                    const ComplexField1D& g,
                                                                                    const SmoothingParams& params,
                                                                                    const PhaseSpaceGrid& grid);

/// Weyl symbol of eps u_t + L u = 0 for i eps u_t = -(eps^2/2) u_xx + V u:
/// L(x, k) = i [(2 pi k)^2 / 2 + V(x)].
struct SchrodingerSymbol {
  RealPolynomial potential;
  double eps = 1.0;

  PolynomialSymbol hamiltonian() const;
  PolynomialSymbol symbol() const;
};

}  // namespace swt
