#pragma once

#include <complex>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "swt/grid.hpp"

namespace swt {

/// Bivariate complex polynomial L(x, k) = sum c_{mn} x^m k^n, stored sparsely.
/// Used both as a Weyl symbol and as the coefficient function of a phase-space operator.
class PolynomialSymbol {
 public:
  /// (power of x, power of k)
  using Exponents = std::pair<int, int>;

  PolynomialSymbol() = default;

  static PolynomialSymbol constant(cplx c);
  static PolynomialSymbol monomial(cplx c, int x_power, int k_power);
  static PolynomialSymbol x() { return monomial(1.0, 1, 0); }
  static PolynomialSymbol k() { return monomial(1.0, 0, 1); }

  void add_term(int x_power, int k_power, cplx c);
  cplx coefficient(int x_power, int k_power) const;
  const std::map<Exponents, cplx>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  /// True when every coefficient has |imag| <= tol.
  bool is_real(double tol = 0.0) const;
  int degree_x() const;
  int degree_k() const;
  int total_degree() const;

  cplx operator()(double x, double k) const;

  PolynomialSymbol derivative_x(int order = 1) const;
  PolynomialSymbol derivative_k(int order = 1) const;
  PolynomialSymbol real_part() const;
  PolynomialSymbol imag_part() const;
  PolynomialSymbol conj() const;
  PolynomialSymbol pow(int exponent) const;

  PolynomialSymbol& operator+=(const PolynomialSymbol& o);
  PolynomialSymbol& operator-=(const PolynomialSymbol& o);
  PolynomialSymbol& operator*=(cplx s);
  friend PolynomialSymbol operator+(PolynomialSymbol a, const PolynomialSymbol& b) { return a += b; }
  friend PolynomialSymbol operator-(PolynomialSymbol a, const PolynomialSymbol& b) { return a -= b; }
  friend PolynomialSymbol operator*(PolynomialSymbol a, cplx s) { return a *= s; }
  friend PolynomialSymbol operator*(cplx s, PolynomialSymbol a) { return a *= s; }
  friend PolynomialSymbol operator*(const PolynomialSymbol& a, const PolynomialSymbol& b);

  /// Drops coefficients with |c| <= tol.
  PolynomialSymbol pruned(double tol) const;

  /// Human-readable form in the same notation parse_symbol accepts.
  std::string to_string() const;

 private:
  std::map<Exponents, cplx> terms_;
};

/// Parses the plain-text polynomial notation described in docs/symbols.md.
/// Each non-empty line is `[label:] expression`; the symbol is the sum of all lines.
/// Throws ParseError with the line and column on malformed input.
PolynomialSymbol parse_symbol(std::string_view text);

/// Real polynomial in one variable, coefficients in ascending powers.
class RealPolynomial {
 public:
  RealPolynomial() = default;
  explicit RealPolynomial(std::vector<double> ascending);

  const std::vector<double>& coefficients() const { return c_; }
  int degree() const;
  double operator()(double x) const;
  RealPolynomial derivative() const;
  /// The same polynomial as a function of x only.
  PolynomialSymbol as_symbol() const;

 private:
  std::vector<double> c_;
};

}  // namespace swt
