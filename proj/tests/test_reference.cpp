#include <cmath>

#include "doctest.h"
#include "swt/errors.hpp"
#include "swt/fourier.hpp"
#include "swt/phasespace.hpp"
#include "swt/reference.hpp"
#include "swt/weyl.hpp"

using namespace swt;

namespace {

// Max-norm residual of i eps u_t + (eps^2/2) u_xx - V u at time t, relative to max |eps u_t|.
double pde_residual(const std::function<ComplexField1D(double)>& u, const PotentialSpec& V, double eps, double t) {
  const double h = 1e-3;
  const auto up = u(t + h), um = u(t - h), upp = u(t + 2.0 * h), umm = u(t - 2.0 * h), u0 = u(t);
  const auto uxx = spectral_derivative(u0, 2);
  double r = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < u0.size(); ++i) {
    const cplx ut = (8.0 * (up[i] - um[i]) - (upp[i] - umm[i])) / (12.0 * h);
    const double x = u0.axis()[i];
    r = std::max(r, std::abs(cplx(0.0, eps) * ut + 0.5 * eps * eps * uxx[i] - V(x) * u0[i]));
    scale = std::max(scale, std::abs(eps * ut));
  }
  return r / scale;
}

double linf(const ComplexField1D& a, const ComplexField1D& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double modulus_drift(const ComplexField1D& a, const ComplexField1D& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(std::abs(a[i]) - std::abs(b[i])));
  return m;
}

}  // namespace

TEST_CASE("free Gaussian packet closed form") {
  const Axis axis = make_axis(-32.0, 1.0 / 32.0, 2048);
  const GaussianPacket p{cplx(2.0, 1.0), cplx(0.5, -4.0), cplx(0.1, 0.3)};
  const double eps = 0.5;

  const auto u0 = gaussian_packet_exact(p, eps, 0.0, axis);
  CHECK(linf(u0, p.sample(axis)) < 1e-14);
  CHECK_THROWS_AS(gaussian_packet_exact(p, eps, -0.1, axis), InvalidArgument);
  CHECK_THROWS_AS((GaussianPacket{cplx(-1.0, 0.0)}.validate()), InvalidArgument);

  auto u = [&](double t) { return gaussian_packet_exact(p, eps, t, axis); };
  for (double t : {0.1, 0.5, 1.0, 2.0}) {
    CAPTURE(t);
    CHECK(pde_residual(u, PotentialSpec::free(), eps, t) < 1e-6);
  }

  // the packet ODE agrees with the closed form in free space
  const auto q = evolve_gaussian_packet(p, PotentialSpec::free(), eps, 1.0);
  CHECK(relative_l2_error(q.sample(axis), u(1.0)) < 1e-8);
  CHECK(std::abs(u(1.0).norm() - u0.norm()) < 1e-10 * u0.norm());
}

TEST_CASE("packet ODE solves the equation for quadratic potentials") {
  const Axis axis = make_axis(-8.0, 1.0 / 32.0, 512);
  const GaussianPacket p{cplx(1.0, 0.5), cplx(0.5, -6.0), 0.0};
  const double eps = 0.7;
  for (const auto& V : {PotentialSpec::harmonic(4.0), PotentialSpec::uniform_field(3.0),
                        PotentialSpec::polynomial({1.0, -2.0, 1.5})}) {
    auto u = [&](double t) { return evolve_gaussian_packet(p, V, eps, t).sample(axis); };
    INFO(V.describe());
    CHECK(pde_residual(u, V, eps, 0.4) < 1e-6);
  }
  CHECK_THROWS_AS(evolve_gaussian_packet(p, PotentialSpec::polynomial({0.0, 0.0, 0.0, 1.0}), eps, 0.1), Unsupported);
}

TEST_CASE("three chirped packets evolve as the sum of closed forms") {
  const auto packets = three_gaussian_packets();
  REQUIRE(packets.size() == 3);
  for (const auto& p : packets) CHECK(p.K.real() > 0.0);
  CHECK(std::abs(packets[0].K - cplx(10.0, 70.0)) < 1e-12);
  CHECK(std::abs(packets[2].K - cplx(9.0, -80.0)) < 1e-12);

  const Axis axis = make_axis(-16.0, 1.0 / 128.0, 4096);
  ComplexField1D u0(axis), exact(axis);
  for (const auto& p : packets) {
    u0 += p.sample(axis);
    exact += gaussian_packet_exact(p, 1.0, 0.05, axis);
  }
  const auto series = split_step_solve(u0, PotentialSpec::free(), 1.0, 0.05, 1e-3);
  CHECK(relative_l2_error(series.u.back(), exact) < 1e-8);
}

TEST_CASE("harmonic eigenfunctions") {
  const Axis axis = make_axis(-4.0, 1.0 / 64.0, 512);
  const double omega = std::sqrt(290.0), eps = 0.7;
  std::vector<ComplexField1D> psi;
  for (int n = 0; n <= 10; ++n) psi.push_back(harmonic_eigenfunction(n, omega, eps, axis));
  double worst = 0.0;
  for (int m = 0; m <= 10; ++m)
    for (int n = 0; n <= 10; ++n)
      worst = std::max(worst, std::abs(inner_product(psi[m], psi[n]) - (m == n ? 1.0 : 0.0)));
  CHECK(worst < 1e-8);

  // H psi_n = eps omega (n + 1/2) psi_n
  const auto V = PotentialSpec::harmonic(290.0);
  for (int n : {0, 3, 9}) {
    const auto d2 = spectral_derivative(psi[n], 2);
    double r = 0.0;
    for (std::size_t i = 0; i < axis.count(); ++i)
      r = std::max(r, std::abs(-0.5 * eps * eps * d2[i] + V(axis[i]) * psi[n][i] - eps * omega * (n + 0.5) * psi[n][i]));
    CHECK(r < 1e-8 * eps * omega * (n + 0.5));
  }
  CHECK_THROWS_AS(harmonic_eigenfunction(61, omega, eps, axis), Unsupported);
  CHECK_THROWS_AS(harmonic_eigenfunction(-1, omega, eps, axis), InvalidArgument);
}

TEST_CASE("eigenfunctions are stationary in modulus under split-step") {
  const Axis axis = make_axis(-4.0, 1.0 / 64.0, 512);
  const double omega = std::sqrt(290.0), eps = 0.7, period = two_pi / omega;
  const auto V = PotentialSpec::harmonic(290.0);
  for (int n : {0, 9}) {
    const auto u0 = harmonic_eigenfunction(n, omega, eps, axis);
    const auto s = split_step_solve(u0, V, eps, period, period / 4000.0, {0.5 * period, period});
    for (const auto& u : s.u) {
      INFO("n = ", n);
      CHECK(modulus_drift(u, u0) < (n == 0 ? 1e-8 : 1e-6));
    }
    // exact phase after one period: exp(-i omega (n + 1/2) T) = -1
    CHECK(relative_l2_error(s.u.back(), cplx(-1.0) * u0) < 2e-5);
  }
  const HarmonicEvolver ev(harmonic_eigenfunction(9, omega, eps, axis), omega, eps);
  CHECK(ev.truncation_residual() < 1e-10);
  CHECK(modulus_drift(ev.at(0.3 * period), harmonic_eigenfunction(9, omega, eps, axis)) < 1e-10);
}

TEST_CASE("split-step: accuracy, convergence, unitarity, symmetry") {
  const Axis axis = make_axis(-12.0, 1.0 / 32.0, 768);
  const GaussianPacket p{cplx(2.0, 1.0), cplx(0.5, -4.0), 0.0};
  const double eps = 0.5;

  const auto u0 = p.sample(axis);
  const auto free_run = split_step_solve(u0, PotentialSpec::free(), eps, 1.0, 0.01);
  CHECK(relative_l2_error(free_run.u.back(), gaussian_packet_exact(p, eps, 1.0, axis)) < 1e-6);
  CHECK(free_run.t.front() == 0.0);
  CHECK(free_run.t.back() == 1.0);

  // second order against the exact packet in a harmonic well
  const auto V = PotentialSpec::harmonic(4.0);
  const auto exact = evolve_gaussian_packet(p, V, eps, 1.0).sample(axis);
  std::vector<double> err;
  for (double dt : {0.02, 0.01, 0.005}) err.push_back(relative_l2_error(split_step_solve(u0, V, eps, 1.0, dt).u.back(), exact));
  CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.1));
  CHECK(err[1] / err[2] == doctest::Approx(4.0).epsilon(0.1));

  // unitarity at every snapshot
  const auto run = split_step_solve(u0, V, eps, 1.0, 0.005, {0.1, 0.37, 0.8});
  REQUIRE(run.t.size() == 3);
  CHECK(run.t[1] == 0.37);
  for (const auto& u : run.u) CHECK(std::abs(u.norm() - u0.norm()) < 1e-10 * u0.norm());

  // V = 0 and real even data stay even
  const auto even = ComplexField1D::sample(axis, [](double x) { return cplx(std::exp(-x * x) * (1.0 + x * x)); });
  const auto ev = split_step_solve(even, PotentialSpec::free(), eps, 1.0, 0.01).u.back();
  double asym = 0.0;
  for (std::size_t i = 1; i < axis.count(); ++i) asym = std::max(asym, std::abs(ev[i] - ev[axis.count() - i]));
  CHECK(asym < 1e-12);

  // a packet running into the edge aborts
  const GaussianPacket fast{cplx(4.0, 0.0), cplx(0.0, -2.0 * two_pi * 8.0), 0.0};
  CHECK_THROWS_AS(split_step_solve(fast.sample(axis), PotentialSpec::free(), eps, 5.0, 0.01), SolverAbort);
  CHECK_THROWS_AS(split_step_solve(u0, V, eps, 1.0, 0.01, {2.0}), InvalidArgument);
}

TEST_CASE("energy from the Wigner trace is conserved") {
  const Axis axis = make_axis(-8.0, 1.0 / 32.0, 512);
  const double eps = 0.7;
  const GaussianPacket p{cplx(1.0, 0.5), cplx(0.5, -6.0), 0.0};
  const auto V = PotentialSpec::polynomial({0.0, 1.0, 2.0});
  const SchrodingerSymbol sch{V.polynomial(), eps};
  const auto grid = aligned_grid(axis, -7.0, 7.0, 2, 8.0, 256);
  const auto run = split_step_solve(p.sample(axis), V, eps, 1.0, 1e-3, {0.0, 0.5, 1.0});
  std::vector<double> e;
  for (const auto& u : run.u) {
    const cplx E = trace_observable(sch.hamiltonian(), wigner(u, EpsilonParam(eps), grid));
    CHECK(std::abs(E.imag()) < 1e-12 * std::abs(E));
    e.push_back(E.real());
  }
  // <u, H u> directly
  const auto& u0 = run.u.front();
  const auto d2 = spectral_derivative(u0, 2);
  ComplexField1D Hu(axis);
  for (std::size_t i = 0; i < axis.count(); ++i) Hu[i] = -0.5 * eps * eps * d2[i] + V(axis[i]) * u0[i];
  CHECK(std::abs(e[0] - inner_product(u0, Hu).real()) < 1e-8 * std::abs(e[0]));
  for (double v : e) CHECK(std::abs(v - e[0]) < 1e-6 * std::abs(e[0]));
}

TEST_CASE("chirped test signal") {
  CHECK(f_eps_envelope(0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(f_eps_envelope(0.0) - 0.25 * std::pow(std::tanh(6.87 * 2.42) + 1.0, 2)) < 1e-15);
  CHECK(f_eps_envelope(2.42) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(f_eps_ridge(1.0) == -1.0);

  const double eps = 0.7;
  const Axis axis = make_axis(-4.0, 1.0 / 128.0, 1024);
  const auto f = build_f_eps(eps, axis);
  double m = 0.0;
  for (std::size_t i = 0; i < axis.count(); ++i) m = std::max(m, std::abs(std::abs(f[i]) - f_eps_envelope(axis[i])));
  CHECK(m < 1e-14);

  const auto grid = aligned_grid(axis, -3.0, 3.0, 8, 32.0, 1024);
  const auto w = smoothed_wigner(f, SmoothingParams(0.5, 0.5, eps), grid);
  const double dk = grid.k_axis.step();
  for (double x0 : {-1.5, -0.5, 0.0, 0.8, 1.6}) {
    const auto i = static_cast<std::size_t>(std::lround(grid.x_axis.index_of(x0)));
    std::size_t best = 0;
    for (std::size_t j = 0; j < grid.nk(); ++j)
      if (w(i, j) > w(i, best)) best = j;
    INFO("x = ", grid.x_axis[i]);
    CHECK(std::abs(grid.k_axis[best] - f_eps_ridge(grid.x_axis[i])) <= 3.0 * dk);
  }
}
