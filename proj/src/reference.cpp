#include "swt/reference.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "swt/errors.hpp"
#include "swt/fourier.hpp"

namespace swt {

void GaussianPacket::validate() const {
  if (!(K.real() > 0.0)) throw InvalidArgument("Gaussian packet needs Re(K) > 0");
}

ComplexField1D GaussianPacket::sample(const Axis& axis) const {
  validate();
  return ComplexField1D::sample(axis, [this](double x) { return (*this)(x); });
}

PotentialSpec::PotentialSpec(Kind kind, RealPolynomial v)
    : kind_(kind), v_(std::move(v)), dv_(v_.derivative()), d2v_(dv_.derivative()) {}

PotentialSpec PotentialSpec::free() { return PotentialSpec(Kind::free, RealPolynomial{}); }

PotentialSpec PotentialSpec::uniform_field(double c) { return PotentialSpec(Kind::uniform_field, RealPolynomial({0.0, c})); }

PotentialSpec PotentialSpec::harmonic(double omega_squared) {
  if (!(omega_squared > 0.0)) throw InvalidArgument("harmonic potential needs omega^2 > 0");
  return PotentialSpec(Kind::harmonic, RealPolynomial({0.0, 0.0, 0.5 * omega_squared}));
}

PotentialSpec PotentialSpec::polynomial(std::vector<double> ascending) {
  for (double c : ascending)
    if (!std::isfinite(c)) throw InvalidArgument("potential coefficients must be finite");
  return PotentialSpec(Kind::general_polynomial, RealPolynomial(std::move(ascending)));
}

std::optional<std::pair<double, int>> PotentialSpec::monomial() const {
  const auto& c = v_.coefficients();
  if (c.empty()) return std::make_pair(0.0, 0);
  int nonzero = 0, s = 0;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] != 0.0) {
      ++nonzero;
      s = static_cast<int>(i);
    }
  if (nonzero != 1 || s > 2) return std::nullopt;
  return std::make_pair(c[static_cast<std::size_t>(s)], s);
}

double PotentialSpec::omega() const {
  if (kind_ != Kind::harmonic) throw InvalidArgument("omega() of a non-harmonic potential");
  return std::sqrt(2.0 * v_.coefficients().at(2));
}

const char* to_string(PotentialSpec::Kind kind) {
  switch (kind) {
    case PotentialSpec::Kind::free: return "free";
    case PotentialSpec::Kind::uniform_field: return "uniform_field";
    case PotentialSpec::Kind::harmonic: return "harmonic";
    case PotentialSpec::Kind::general_polynomial: return "general_polynomial";
  }
  return "unknown";
}

std::string PotentialSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << to_string(kind_) << " V(x) = ";
  const auto& c = v_.coefficients();
  if (c.empty()) os << "0";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) os << " + ";
    os << c[i] << "*x^" << i;
  }
  return os.str();
}

ComplexField1D gaussian_packet_exact(const GaussianPacket& p, double eps, double t, const Axis& axis) {
  p.validate();
  if (t < 0.0) throw InvalidArgument("gaussian_packet_exact needs t >= 0");
  if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
  const cplx one_s = 1.0 + cplx(0.0, 2.0 * eps * t) * p.K;
  const cplx pre = 1.0 / std::sqrt(one_s);
  const cplx shift = p.Lambda / (2.0 * p.K);
  const cplx c0 = p.Lambda * p.Lambda / (4.0 * p.K) - p.M;
  return ComplexField1D::sample(axis, [&](double x) {
    const cplx xs = x + shift;
    return pre * std::exp(c0 - p.K * xs * xs / one_s);
  });
}

GaussianPacket evolve_gaussian_packet(const GaussianPacket& p, const PotentialSpec& V, double eps, double t) {
  p.validate();
  if (t < 0.0) throw InvalidArgument("packet evolution needs t >= 0");
  const auto& c = V.polynomial().coefficients();
  if (c.size() > 3) throw Unsupported("Gaussian packets stay Gaussian only for potentials of degree <= 2");
  const double vc = c.size() > 0 ? c[0] : 0.0;
  const double vb = c.size() > 1 ? c[1] : 0.0;
  const double va = c.size() > 2 ? c[2] : 0.0;
  const cplx I(0.0, 1.0);

  using State = std::array<cplx, 3>;
  auto rhs = [&](const State& s) -> State {
    const cplx K = s[0], L = s[1];
    return {I * (-2.0 * eps * K * K + va / eps), I * (-2.0 * eps * K * L + vb / eps),
            I * (-0.5 * eps * L * L + eps * K + vc / eps)};
  };
  State s{p.K, p.Lambda, p.M};
  double done = 0.0;
  while (done < t) {
    const double rate = 2.0 * eps * std::abs(s[0]) + std::sqrt(std::abs(va)) + std::abs(vb) / eps + 1.0;
    const double h = std::min(t - done, 2e-3 / rate);
    const State k1 = rhs(s);
    State tmp;
    for (int i = 0; i < 3; ++i) tmp[i] = s[i] + 0.5 * h * k1[i];
    const State k2 = rhs(tmp);
    for (int i = 0; i < 3; ++i) tmp[i] = s[i] + 0.5 * h * k2[i];
    const State k3 = rhs(tmp);
    for (int i = 0; i < 3; ++i) tmp[i] = s[i] + h * k3[i];
    const State k4 = rhs(tmp);
    for (int i = 0; i < 3; ++i) s[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    done += h;
  }
  return {s[0], s[1], s[2]};
}

ComplexField1D harmonic_eigenfunction(int n, double omega, double eps, const Axis& axis) {
  if (n < 0) throw InvalidArgument("eigenfunction index must be non-negative");
  if (n > max_hermite_order) throw Unsupported("Hermite functions are limited to n <= 60");
  if (!(omega > 0.0) || !(eps > 0.0)) throw InvalidArgument("omega and eps must be positive");
  const double scale = std::sqrt(omega / eps);
  const double norm = std::pow(omega / eps, 0.25);
  return ComplexField1D::sample(axis, [&](double x) {
    const double xi = x * scale;
    double prev = 0.0;
    double cur = std::pow(pi, -0.25) * std::exp(-0.5 * xi * xi);
    for (int j = 0; j < n; ++j) {
      const double next = std::sqrt(2.0 / (j + 1)) * xi * cur - std::sqrt(static_cast<double>(j) / (j + 1)) * prev;
      prev = cur;
      cur = next;
    }
    return cplx(norm * cur);
  });
}

HarmonicEvolver::HarmonicEvolver(const ComplexField1D& u0, double omega, double eps, int n_max)
    : axis_(u0.axis()), omega_(omega), eps_(eps) {
  ComplexField1D rest = u0;
  for (int n = 0; n <= n_max; ++n) {
    basis_.push_back(harmonic_eigenfunction(n, omega, eps, axis_));
    const cplx c = inner_product(basis_.back(), u0);
    coeff_.push_back(c);
    rest += (-c) * basis_.back();
  }
  const double n0 = u0.norm();
  residual_ = n0 > 0.0 ? rest.norm() / n0 : 0.0;
}

ComplexField1D HarmonicEvolver::at(double t) const {
  ComplexField1D u(axis_);
  for (std::size_t n = 0; n < basis_.size(); ++n)
    u += (coeff_[n] * std::polar(1.0, -omega_ * (static_cast<double>(n) + 0.5) * t)) * basis_[n];
  return u;
}

double f_eps_envelope(double x) {
  return 0.25 * (std::tanh(6.87 * (x + 2.42)) + 1.0) * (std::tanh(6.87 * (2.42 - x)) + 1.0);
}

double f_eps_ridge(double x) { return -x * x * x - 2.0 * x + 2.0; }

ComplexField1D build_f_eps(double eps, const Axis& axis) {
  if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
  return ComplexField1D::sample(axis, [eps](double x) {
    const double phase = (two_pi / eps) * (-0.25 * x * x * x * x - x * x + 2.0 * x);
    return std::polar(f_eps_envelope(x), phase);
  });
}

std::vector<GaussianPacket> three_gaussian_packets() {
  return {{cplx(1.0, 7.0) / 0.1, 0.0, 0.0}, {cplx(0.2, 3.0) / 0.1, 0.0, 0.0}, {cplx(0.9, -8.0) / 0.1, 0.0, 0.0}};
}

namespace {

double boundary_mass(const ComplexField1D& u, double fraction) {
  const std::size_t n = u.size();
  const auto edge = std::max<std::size_t>(1, static_cast<std::size_t>(fraction * static_cast<double>(n)));
  double m = 0.0;
  for (std::size_t i = 0; i < edge; ++i) m += std::norm(u[i]) + std::norm(u[n - 1 - i]);
  return m * u.axis().step();
}

}  // namespace

TimeSeries split_step_solve(const ComplexField1D& u0, const PotentialSpec& V, double eps, double t_final, double dt,
                            std::vector<double> times, const SplitStepOptions& opts) {
  if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
  if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
  if (t_final < 0.0) throw InvalidArgument("t_final must be non-negative");
  if (times.empty()) times = {0.0, t_final};
  std::sort(times.begin(), times.end());
  if (times.front() < 0.0 || times.back() > t_final + 1e-12)
    throw InvalidArgument("snapshot times must lie in [0, t_final]");

  const Axis& ax = u0.axis();
  const std::size_t n = ax.count();
  const double mass0 = u0.norm_squared();
  std::vector<double> vx(n), nu2(n);
  for (std::size_t i = 0; i < n; ++i) {
    vx[i] = V(ax[i]);
    const double nu = fft_frequency(i, n, ax.step());
    nu2[i] = two_pi * two_pi * nu * nu;
  }
  const FftPlan fwd(n, FftPlan::Direction::forward), bwd(n, FftPlan::Direction::backward);
  std::vector<cplx> u(u0.values().begin(), u0.values().end());

  auto step = [&](double h) {
    for (std::size_t i = 0; i < n; ++i) u[i] *= std::polar(1.0, -vx[i] * h / (2.0 * eps));
    fwd.execute(u);
    for (std::size_t i = 0; i < n; ++i) u[i] *= std::polar(1.0 / static_cast<double>(n), -0.5 * eps * nu2[i] * h);
    bwd.execute(u);
    for (std::size_t i = 0; i < n; ++i) u[i] *= std::polar(1.0, -vx[i] * h / (2.0 * eps));
  };

  TimeSeries out;
  double t = 0.0;
  long long count = 0;
  for (double target : times) {
    while (t < target - 1e-14 * std::max(1.0, target)) {
      const double h = std::min(dt, target - t);
      step(h);
      t = (h == target - t) ? target : t + h;
      if (++count % opts.check_every == 0) {
        const double bm = boundary_mass(ComplexField1D(ax, u), opts.boundary_fraction);
        if (bm > opts.boundary_mass_tolerance * std::max(mass0, 1e-300))
          throw SolverAbort("split-step: mass " + std::to_string(bm) + " reached the boundary strip at t = " +
                            std::to_string(t) + "; enlarge the axis");
      }
    }
    out.t.push_back(target);
    out.u.emplace_back(ax, u);
  }
  return out;
}

}  // namespace swt
