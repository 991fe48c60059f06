#include "swt/weyl.hpp"

#include <cmath>
#include <sstream>

#include "swt/errors.hpp"
#include "swt/fourier.hpp"

namespace swt {

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace

PhaseSpaceOperator::PhaseSpaceOperator(double eps) : eps_(eps) {
  if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
}

PhaseSpaceOperator PhaseSpaceOperator::identity(double eps) {
  return multiplication(eps, PolynomialSymbol::constant(1.0));
}

PhaseSpaceOperator PhaseSpaceOperator::multiplication(double eps, const PolynomialSymbol& c) {
  PhaseSpaceOperator op(eps);
  op.add_term(0, 0, 0, c);
  return op;
}

void PhaseSpaceOperator::add_term(int dx_order, int dk_order, int eps_power, const PolynomialSymbol& coeff) {
  if (dx_order < 0 || dk_order < 0 || eps_power < 0) throw InvalidArgument("operator orders must be non-negative");
  if (coeff.is_zero()) return;
  auto& slot = terms_[{dx_order, dk_order, eps_power}];
  slot += coeff;
  if (slot.is_zero()) terms_.erase({dx_order, dk_order, eps_power});
}

std::vector<OperatorTerm> PhaseSpaceOperator::terms() const {
  std::vector<OperatorTerm> out;
  out.reserve(terms_.size());
  for (const auto& [key, c] : terms_) out.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), c});
  return out;
}

PolynomialSymbol PhaseSpaceOperator::coefficient(int dx_order, int dk_order, int eps_power) const {
  auto it = terms_.find({dx_order, dk_order, eps_power});
  return it == terms_.end() ? PolynomialSymbol{} : it->second;
}

PolynomialSymbol PhaseSpaceOperator::collected(int dx_order, int dk_order) const {
  PolynomialSymbol s;
  for (const auto& [key, c] : terms_)
    if (std::get<0>(key) == dx_order && std::get<1>(key) == dk_order) s += c * std::pow(eps_, std::get<2>(key));
  return s;
}

int PhaseSpaceOperator::max_eps_power() const {
  int m = 0;
  for (const auto& [key, c] : terms_) m = std::max(m, std::get<2>(key));
  return m;
}

PhaseSpaceOperator PhaseSpaceOperator::compose(const PhaseSpaceOperator& rhs) const {
  PhaseSpaceOperator out(eps_);
  for (const auto& [k1, c1] : terms_) {
    const auto [a1, b1, p1] = k1;
    for (const auto& [k2, c2] : rhs.terms_) {
      const auto [a2, b2, p2] = k2;
      // d_x^a1 d_k^b1 (c2 .) = sum C(a1,i) C(b1,j) (d_x^i d_k^j c2) d_x^(a1-i) d_k^(b1-j)
      for (int i = 0; i <= a1; ++i)
        for (int j = 0; j <= b1; ++j) {
          PolynomialSymbol dc = c2.derivative_x(i).derivative_k(j);
          if (dc.is_zero()) continue;
          out.add_term(a1 - i + a2, b1 - j + b2, p1 + p2, c1 * dc * cplx(binomial(a1, i) * binomial(b1, j)));
        }
    }
  }
  return out;
}

PhaseSpaceOperator PhaseSpaceOperator::power(int n) const {
  if (n < 0) throw InvalidArgument("negative operator power");
  PhaseSpaceOperator r = identity(eps_);
  for (int i = 0; i < n; ++i) r = r.compose(*this);
  return r;
}

PhaseSpaceOperator PhaseSpaceOperator::conj() const {
  PhaseSpaceOperator out(eps_);
  for (const auto& [key, c] : terms_) out.terms_.emplace(key, c.conj());
  return out;
}

PhaseSpaceOperator PhaseSpaceOperator::twice_real_part() const {
  PhaseSpaceOperator out(eps_);
  for (const auto& [key, c] : terms_) {
    PolynomialSymbol r = c.real_part() * cplx(2.0);
    if (!r.is_zero()) out.terms_.emplace(key, r);
  }
  return out;
}

bool PhaseSpaceOperator::is_real(double tol) const {
  for (const auto& [key, c] : terms_)
    if (!c.is_real(tol)) return false;
  return true;
}

PhaseSpaceOperator PhaseSpaceOperator::pruned(double tol) const {
  PhaseSpaceOperator out(eps_);
  for (const auto& [key, c] : terms_) {
    PolynomialSymbol p = c.pruned(tol);
    if (!p.is_zero()) out.terms_.emplace(key, p);
  }
  return out;
}

PhaseSpaceOperator& PhaseSpaceOperator::operator+=(const PhaseSpaceOperator& o) {
  if (o.eps_ != eps_) throw InvalidArgument("adding operators built for different eps");
  for (const auto& [key, c] : o.terms_) add_term(std::get<0>(key), std::get<1>(key), std::get<2>(key), c);
  return *this;
}

PhaseSpaceOperator& PhaseSpaceOperator::operator*=(cplx s) {
  if (s == cplx(0.0)) {
    terms_.clear();
    return *this;
  }
  for (auto& [key, c] : terms_) c *= s;
  return *this;
}

std::string PhaseSpaceOperator::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [key, c] : terms_) {
    const auto [a, b, p] = key;
    if (!first) os << "\n";
    first = false;
    os << "eps^" << p << " [" << c.to_string() << "] d_x^" << a << " d_k^" << b;
  }
  return os.str();
}

PhaseSpaceOperator position_operator(const SmoothingParams& params, Slot slot) {
  const double s = slot == Slot::first ? 1.0 : -1.0;
  PhaseSpaceOperator op(params.eps());
  op.add_term(0, 0, 0, PolynomialSymbol::x());
  op.add_term(1, 0, 1, PolynomialSymbol::constant(params.sigma_x() * params.sigma_x() / (4.0 * pi)));
  op.add_term(0, 1, 1, PolynomialSymbol::constant(cplx(0.0, s / (4.0 * pi))));
  return op;
}

PhaseSpaceOperator wavenumber_operator(const SmoothingParams& params, Slot slot) {
  const double s = slot == Slot::first ? 1.0 : -1.0;
  PhaseSpaceOperator op(params.eps());
  op.add_term(0, 0, 0, PolynomialSymbol::k());
  op.add_term(0, 1, 1, PolynomialSymbol::constant(params.sigma_k() * params.sigma_k() / (4.0 * pi)));
  op.add_term(1, 0, 1, PolynomialSymbol::constant(cplx(0.0, -s / (4.0 * pi))));
  return op;
}

PhaseSpaceOperator pullout_operator(const PolynomialSymbol& L, const SmoothingParams& params, Slot slot) {
  const double eps = params.eps();
  const PhaseSpaceOperator X = position_operator(params, slot);
  const PhaseSpaceOperator K = wavenumber_operator(params, slot);
  std::vector<PhaseSpaceOperator> xp{PhaseSpaceOperator::identity(eps)}, kp{PhaseSpaceOperator::identity(eps)};
  for (int i = 0; i < L.degree_x(); ++i) xp.push_back(xp.back().compose(X));
  for (int i = 0; i < L.degree_k(); ++i) kp.push_back(kp.back().compose(K));

  PhaseSpaceOperator out(eps);
  for (const auto& [e, c] : L.terms()) {
    const auto [m, n] = e;
    // the second slot is conjugate-linear: W~[f, c A g] = conj(c) W~[f, A g]
    const cplx coeff = slot == Slot::first ? c : std::conj(c);
    PhaseSpaceOperator sum(eps);
    for (int l = 0; l <= m; ++l) sum += cplx(binomial(m, l)) * xp[m - l].compose(kp[n]).compose(xp[l]);
    out += (coeff * std::pow(0.5, m)) * sum;
  }
  return out;
}

PhaseSpaceOperator build_evolution_operator(const PolynomialSymbol& L, const SmoothingParams& params) {
  return pullout_operator(L, params, Slot::first).twice_real_part();
}

PhaseSpaceOperator series_evolution_operator(const PolynomialSymbol& L, const SmoothingParams& params) {
  const double eps = params.eps();
  PhaseSpaceOperator b = position_operator(params), a = wavenumber_operator(params);
  b.add_term(0, 0, 0, PolynomialSymbol::x() * cplx(-1.0));
  a.add_term(0, 0, 0, PolynomialSymbol::k() * cplx(-1.0));
  PhaseSpaceOperator out(eps);
  for (int j = 0; j <= L.degree_x(); ++j)
    for (int l = 0; l <= L.degree_k(); ++l) {
      const PolynomialSymbol d = L.derivative_x(j).derivative_k(l);
      if (d.is_zero()) continue;
      const PhaseSpaceOperator tail = b.power(j).compose(a.power(l));
      out += PhaseSpaceOperator::multiplication(eps, d * cplx(1.0 / (factorial(j) * factorial(l)))).compose(tail);
    }
  return out.twice_real_part();
}

PhaseSpaceOperator truncate(const PhaseSpaceOperator& op, int order) {
  if (order < 0) throw InvalidArgument("truncation order must be non-negative");
  PhaseSpaceOperator out(op.eps());
  for (const auto& t : op.terms())
    if (t.eps_power - 1 <= order) out.add_term(t.dx_order, t.dk_order, t.eps_power, t.coeff);
  return out;
}

ComplexPhaseSpaceField spectral_mixed_derivative(const ComplexPhaseSpaceField& w, int a, int b) {
  if (a < 0 || b < 0) throw InvalidArgument("derivative orders must be non-negative");
  if (a == 0 && b == 0) return w;
  const std::size_t nx = w.nx(), nk = w.nk();
  std::vector<cplx> buf(w.values().begin(), w.values().end());
  FftPlan2D(nx, nk, FftPlan::Direction::forward).execute(buf);
  const double hx = w.grid().x_axis.step(), hk = w.grid().k_axis.step();
  const double norm = 1.0 / static_cast<double>(nx * nk);
  std::vector<cplx> mx(nx), mk(nk);
  for (std::size_t i = 0; i < nx; ++i) {
    const bool nyq = nx % 2 == 0 && i == nx / 2 && a % 2 == 1;
    mx[i] = nyq ? cplx(0.0) : std::pow(cplx(0.0, two_pi * fft_frequency(i, nx, hx)), a);
  }
  for (std::size_t j = 0; j < nk; ++j) {
    const bool nyq = nk % 2 == 0 && j == nk / 2 && b % 2 == 1;
    mk[j] = nyq ? cplx(0.0) : std::pow(cplx(0.0, two_pi * fft_frequency(j, nk, hk)), b);
  }
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < nk; ++j) buf[i * nk + j] *= mx[i] * mk[j] * norm;
  FftPlan2D(nx, nk, FftPlan::Direction::backward).execute(buf);
  return ComplexPhaseSpaceField(w.grid(), w.kind(), std::move(buf));
}

ComplexPhaseSpaceField apply_operator(const PhaseSpaceOperator& op, const ComplexPhaseSpaceField& w) {
  ComplexPhaseSpaceField out(w.grid(), FieldKind::transported);
  std::map<std::pair<int, int>, bool> orders;
  for (const auto& t : op.terms()) orders[{t.dx_order, t.dk_order}] = true;
  const auto& gx = w.grid().x_axis;
  const auto& gk = w.grid().k_axis;
  for (const auto& [ab, unused] : orders) {
    const PolynomialSymbol c = op.collected(ab.first, ab.second);
    if (c.is_zero()) continue;
    const ComplexPhaseSpaceField d = spectral_mixed_derivative(w, ab.first, ab.second);
    for (std::size_t i = 0; i < w.nx(); ++i)
      for (std::size_t j = 0; j < w.nk(); ++j) out(i, j) += c(gx[i], gk[j]) * d(i, j);
  }
  return out;
}

PhaseSpaceField apply_operator(const PhaseSpaceOperator& op, const PhaseSpaceField& w) {
  if (!op.is_real(1e-12)) throw InvalidArgument("a complex operator does not map real fields to real fields");
  std::vector<cplx> c(w.values().begin(), w.values().end());
  const auto r = apply_operator(op, ComplexPhaseSpaceField(w.grid(), w.kind(), std::move(c)));
  std::vector<double> re(r.values().size());
  for (std::size_t i = 0; i < re.size(); ++i) re[i] = r.values()[i].real();
  return PhaseSpaceField(w.grid(), FieldKind::transported, std::move(re));
}

PhaseSpaceOperator identity_operator(Identity id, const SmoothingParams& params) {
  switch (id) {
    case Identity::x_first: return position_operator(params, Slot::first);
    case Identity::x_second: return position_operator(params, Slot::second);
    case Identity::derivative_first: return cplx(0.0, two_pi) * wavenumber_operator(params, Slot::first);
    case Identity::derivative_second: return cplx(0.0, -two_pi) * wavenumber_operator(params, Slot::second);
  }
  throw InvalidArgument("unknown identity");
}

ComplexPhaseSpaceField identity_lhs(Identity id, const ComplexField1D& f, const ComplexField1D& g,
                                    const SmoothingParams& params, const PhaseSpaceGrid& grid) {
  const double eps = params.eps();
  switch (id) {
    case Identity::x_first: return cross_smoothed_wigner(multiply_by_x(f), g, params, grid);
    case Identity::x_second: return cross_smoothed_wigner(f, multiply_by_x(g), params, grid);
    case Identity::derivative_first:
      return cross_smoothed_wigner(cplx(eps) * spectral_derivative(f, 1), g, params, grid);
    case Identity::derivative_second:
      return cross_smoothed_wigner(f, cplx(eps) * spectral_derivative(g, 1), params, grid);
  }
  throw InvalidArgument("unknown identity");
}

ComplexPhaseSpaceField identity_rhs(Identity id, const ComplexField1D& f, const ComplexField1D& g,
                                    const SmoothingParams& params, const PhaseSpaceGrid& grid) {
  return apply_operator(identity_operator(id, params), cross_smoothed_wigner(f, g, params, grid));
}

ComplexPhaseSpaceField apply_identity_lhs_x(const ComplexField1D& f, const ComplexField1D& g,
                                            const SmoothingParams& params, const PhaseSpaceGrid& grid) {
  return identity_lhs(Identity::x_first, f, g, params, grid);
}

ComplexPhaseSpaceField apply_identity_rhs_x(const ComplexField1D& f, const ComplexField1D& g,
                                            const SmoothingParams& params, const PhaseSpaceGrid& grid) {
  return identity_rhs(Identity::x_first, f, g, params, grid);
}

std::pair<ComplexPhaseSpaceField, ComplexPhaseSpaceField> apply_identity_derivative(const ComplexField1D& f,
                                                                                    const ComplexField1D& g,
                                                                                    const SmoothingParams& params,
                                                                                    const PhaseSpaceGrid& grid) {
  return {identity_lhs(Identity::derivative_first, f, g, params, grid),
          identity_rhs(Identity::derivative_first, f, g, params, grid)};
}

PolynomialSymbol SchrodingerSymbol::hamiltonian() const {
  return PolynomialSymbol::monomial(2.0 * pi * pi, 0, 2) + potential.as_symbol();
}

PolynomialSymbol SchrodingerSymbol::symbol() const { return cplx(0.0, 1.0) * hamiltonian(); }

}  // namespace swt
