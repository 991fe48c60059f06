#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "swt/errors.hpp"
#include "swt/fourier.hpp"
#include "swt/phasespace.hpp"
#include "swt/reference.hpp"
#include "test_util.hpp"

using namespace swt;

namespace {

const Axis kFieldAxis = make_axis(-8.0, 1.0 / 32.0, 512);

PhaseSpaceGrid standard_grid() { return aligned_grid(kFieldAxis, -6.0, 6.0, 2, 8.0, 256); }

double gaussian2(double x, double k, double vx, double vk, double mass) {
  return mass / (two_pi * std::sqrt(vx * vk)) * std::exp(-0.5 * x * x / vx - 0.5 * k * k / vk);
}

}  // namespace

TEST_CASE("wigner of the unit Gaussian") {
  const auto f = ComplexField1D::sample(kFieldAxis, [](double x) { return std::exp(-pi * x * x); });
  const auto grid = standard_grid();
  const auto w = wigner(f, EpsilonParam(1.0), grid);
  CHECK(w.kind() == FieldKind::wigner);
  double err = 0.0;
  for (std::size_t i = 0; i < w.nx(); ++i)
    for (std::size_t j = 0; j < w.nk(); ++j) {
      const double x = grid.x_axis[i], k = grid.k_axis[j];
      err = std::max(err, std::abs(w(i, j) - std::sqrt(2.0) * std::exp(-two_pi * (x * x + k * k))));
    }
  CHECK(err < 1e-8);

  auto gauss = [](double x) { return cplx(std::exp(-pi * x * x)); };
  CHECK(std::abs(wigner_point_oracle(gauss, gauss, 1.0, 0.0, 0.0) - std::sqrt(2.0)) < 1e-8);
  CHECK(std::abs(wigner_point_oracle(gauss, gauss, 1.0, 30.0, 0.3)) < 1e-12);

  // marginal_k is exp(-2 pi x^2) = |f|^2
  const auto mk = marginal_k(w);
  for (std::size_t i = 0; i < w.nx(); ++i) CHECK(std::abs(mk[i] - std::exp(-two_pi * grid.x_axis[i] * grid.x_axis[i])) < 1e-10);
}

TEST_CASE("zero input gives zero fields") {
  const ComplexField1D z(kFieldAxis);
  const auto grid = standard_grid();
  CHECK(wigner(z, EpsilonParam(0.7), grid).max_abs() == 0.0);
  CHECK(smoothed_wigner(z, SmoothingParams(0.5, 0.5, 0.7), grid).max_abs() == 0.0);
  const auto w = wigner(z, EpsilonParam(0.7), grid);
  for (double v : marginal_k(w)) CHECK(v == 0.0);
  for (double v : marginal_x(w)) CHECK(v == 0.0);
}

TEST_CASE("FFT path agrees with direct quadrature at random nodes") {
  std::mt19937_64 rng(2024);
  const auto grid = standard_grid();
  const auto funcs = testutil::smooth_functions();
  for (double eps : {1.0, 0.7}) {
    for (std::size_t a = 0; a < funcs.size(); ++a) {
      const std::size_t b = (a + 1) % funcs.size();
      const auto f = ComplexField1D::sample(kFieldAxis, funcs[a].f);
      const auto g = ComplexField1D::sample(kFieldAxis, funcs[b].f);
      const auto w = cross_wigner(f, g, EpsilonParam(eps), grid);
      std::uniform_int_distribution<std::size_t> ix(0, grid.nx() - 1), ik(0, grid.nk() - 1);
      double err = 0.0;
      for (int s = 0; s < 20; ++s) {
        const std::size_t i = ix(rng), j = ik(rng);
        const cplx ref = wigner_point_oracle(funcs[a].f, funcs[b].f, eps, grid.x_axis[i], grid.k_axis[j], {20.0, 2e-3});
        err = std::max(err, std::abs(w(i, j) - ref));
      }
      INFO(funcs[a].name, " x ", funcs[b].name, " eps ", eps);
      CHECK(err / w.max_abs() < 1e-8);
    }
  }
}

TEST_CASE("sampled oracle matches the FFT path on a band-limited pair") {
  const auto f = ComplexField1D::sample(kFieldAxis, [](double x) { return std::exp(-pi * x * x); });
  const auto g = ComplexField1D::sample(kFieldAxis, [](double x) { return std::polar(std::exp(-pi * (x - 0.3) * (x - 0.3)), 2.0 * x); });
  const auto grid = standard_grid();
  const auto w = cross_wigner(f, g, EpsilonParam(1.0), grid);
  for (std::size_t i : {10u, 50u, 96u, 120u})
    for (std::size_t j : {100u, 128u, 140u}) {
      const std::size_t node = static_cast<std::size_t>(std::llround(kFieldAxis.index_of(grid.x_axis[i])));
      CHECK(std::abs(wigner_point_oracle(f, g, 1.0, node, grid.k_axis[j]) - w(i, j)) < 1e-10);
    }
}

TEST_CASE("smoothed wigner of a Gaussian is the widened Gaussian") {
  const auto f = ComplexField1D::sample(kFieldAxis, [](double x) { return std::exp(-pi * x * x); });
  const auto grid = standard_grid();
  const SmoothingParams sp(0.5, 0.5, 1.0);
  const auto w = smoothed_wigner(f, sp, grid);
  const auto cov = sp.covariance();
  const double v0 = 1.0 / (4.0 * pi);
  double err = 0.0;
  for (std::size_t i = 0; i < w.nx(); ++i)
    for (std::size_t j = 0; j < w.nk(); ++j)
      err = std::max(err, std::abs(w(i, j) - gaussian2(grid.x_axis[i], grid.k_axis[j], v0 + cov.xx, v0 + cov.kk,
                                                       1.0 / std::sqrt(2.0))));
  CHECK(err < 1e-8);
  CHECK(sp.regime() == SmoothingRegime::subcritical);

  // degenerate kernel reproduces the plain transform exactly
  const auto z = smoothed_wigner(f, SmoothingParams(0.0, 0.0, 1.0), grid);
  const auto p = wigner(f, EpsilonParam(1.0), grid);
  for (std::size_t n = 0; n < z.values().size(); ++n) CHECK(z.values()[n] == p.values()[n]);
}

TEST_CASE("general covariance smoothing matches the closed form") {
  const auto f = ComplexField1D::sample(kFieldAxis, [](double x) { return std::exp(-pi * x * x); });
  const auto grid = standard_grid();
  const KernelCovariance cov{0.05, 0.03, 0.04};
  const auto w = gaussian_smoothed_wigner(f, 1.0, cov, grid);
  const double v0 = 1.0 / (4.0 * pi);
  const double a = v0 + cov.xx, b = cov.xk, c = v0 + cov.kk, det = a * c - b * b;
  double err = 0.0;
  for (std::size_t i = 0; i < w.nx(); ++i)
    for (std::size_t j = 0; j < w.nk(); ++j) {
      const double x = grid.x_axis[i], k = grid.k_axis[j];
      const double q = (c * x * x - 2.0 * b * x * k + a * k * k) / det;
      err = std::max(err, std::abs(w(i, j) - std::exp(-0.5 * q) / (std::sqrt(2.0) * two_pi * std::sqrt(det))));
    }
  CHECK(err < 1e-8);

  // sampled-field smoothing agrees with the transform-level smoothing
  const auto p = wigner(f, EpsilonParam(1.0), grid);
  CHECK(relative_max_error(smooth_field(p, cov), w) < 1e-9);
}

TEST_CASE("spectrogram: nonnegative, equal to critical SWT, matches the STFT oracle") {
  const double eps = 0.7;
  const auto fn = testutil::smooth_functions()[1].f;
  const auto f = ComplexField1D::sample(kFieldAxis, fn);
  const auto grid = standard_grid();
  for (double sx : {1.0, 0.8}) {
    const SmoothingParams sp(sx, 1.0 / sx, eps);
    CHECK(sp.regime() == SmoothingRegime::critical);
    const auto s = spectrogram(f, sp, grid);
    CHECK(s.kind() == FieldKind::spectrogram);
    CHECK(*std::min_element(s.values().begin(), s.values().end()) >= -1e-12);
    const auto w = smoothed_wigner(f, sp, grid);
    for (std::size_t n = 0; n < s.values().size(); ++n) CHECK(s.values()[n] == w.values()[n]);

    const double s2 = eps * sx * sx;
    auto h = [&](double y) { return std::pow(2.0 / s2, 0.25) * std::exp(-pi * y * y / s2); };
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::size_t> ix(0, grid.nx() - 1), ik(0, grid.nk() - 1);
    double err = 0.0;
    for (int t = 0; t < 20; ++t) {
      const std::size_t i = ix(rng), j = ik(rng);
      const double x = grid.x_axis[i], k = grid.k_axis[j];
      cplx acc = 0.0;
      for (std::size_t m = 0; m < kFieldAxis.count(); ++m) {
        const double y = kFieldAxis[m];
        acc += f[m] * h(y - x) * std::polar(1.0, -two_pi * k * y / eps);
      }
      acc *= kFieldAxis.step();
      err = std::max(err, std::abs(std::norm(acc) / eps - s(i, j)));
    }
    CHECK(err / s.max_abs() < 1e-6);
  }
  CHECK_THROWS_AS(spectrogram(f, SmoothingParams(0.5, 0.5, eps), grid), InvalidArgument);
}

TEST_CASE("exact marginals on padded band-limited inputs") {
  const auto grid = aligned_grid(kFieldAxis, -7.0, 7.0, 1, 8.0, 256);
  for (const auto& tf : testutil::smooth_functions()) {
    for (double eps : {1.0, 0.7}) {
      const auto f = ComplexField1D::sample(kFieldAxis, tf.f);
      const auto w = wigner(f, EpsilonParam(eps), grid);
      std::vector<double> abs2(grid.nx());
      for (std::size_t i = 0; i < grid.nx(); ++i) abs2[i] = std::norm(tf.f(grid.x_axis[i]));
      INFO(tf.name, " eps ", eps);
      CHECK(testutil::l1_diff(marginal_k(w), abs2, grid.x_axis.step()) < 1e-8);

      // int W dx = (1/eps) |f^(k/eps)|^2 with f^ by direct quadrature
      std::vector<double> spec(grid.nk());
      for (std::size_t j = 0; j < grid.nk(); ++j) {
        cplx s = 0.0;
        for (std::size_t m = 0; m < kFieldAxis.count(); ++m)
          s += f[m] * std::polar(1.0, -two_pi * grid.k_axis[j] / eps * kFieldAxis[m]);
        spec[j] = std::norm(s * kFieldAxis.step()) / eps;
      }
      CHECK(testutil::l1_diff(marginal_x(w), spec, grid.k_axis.step()) < 1e-8);
    }
  }
}

TEST_CASE("f_eps: marginals and mass of the smoothed transform") {
  const double eps = 0.7;
  const Axis ax = make_axis(-4.0, 1.0 / 128.0, 1024);
  const auto f = build_f_eps(eps, ax);
  const auto grid = aligned_grid(ax, -4.0, 3.96, 4, 32.0, 640);
  const auto w = wigner(f, EpsilonParam(eps), grid);
  std::vector<double> abs2(grid.nx());
  for (std::size_t i = 0; i < grid.nx(); ++i) abs2[i] = f_eps_envelope(grid.x_axis[i]) * f_eps_envelope(grid.x_axis[i]);
  CHECK(testutil::l1_diff(marginal_k(w), abs2, grid.x_axis.step()) < 1e-6);

  const auto s = smoothed_wigner(f, SmoothingParams(0.5, 0.5, eps), grid);
  CHECK(std::abs(s.integral() - w.integral()) / w.integral() < 1e-10);
}

TEST_CASE("sesquilinearity") {
  const auto funcs = testutil::smooth_functions();
  const auto grid = standard_grid();
  const EpsilonParam eps(0.7);
  const auto f = ComplexField1D::sample(kFieldAxis, funcs[1].f);
  const auto h = ComplexField1D::sample(kFieldAxis, funcs[3].f);
  const cplx alpha(0.3, -1.2);
  const auto wf = cross_wigner(alpha * f, h, eps, grid);
  const auto w1 = cross_wigner(f, h, eps, grid);
  double e1 = 0.0;
  for (std::size_t n = 0; n < wf.values().size(); ++n) e1 = std::max(e1, std::abs(wf.values()[n] - alpha * w1.values()[n]));
  CHECK(e1 < 1e-10);

  const auto sum = wigner(f + h, eps, grid);
  const auto a = wigner(f, eps, grid), b = wigner(h, eps, grid);
  double e2 = 0.0;
  for (std::size_t n = 0; n < sum.values().size(); ++n)
    e2 = std::max(e2, std::abs(sum.values()[n] - a.values()[n] - b.values()[n] - 2.0 * w1.values()[n].real()));
  CHECK(e2 < 1e-10);
}

TEST_CASE("smoothing tames the interference between two packets") {
  const double eps = 0.1;
  const Axis ax = make_axis(-4.0, 1.0 / 64.0, 512);
  const auto f = ComplexField1D::sample(ax, [eps](double x) {
    return cplx(std::exp(-pi * (x - 2.0) * (x - 2.0) / eps) + std::exp(-pi * (x + 2.0) * (x + 2.0) / eps));
  });
  const auto grid = aligned_grid(ax, -3.5, 3.5, 2, 2.0, 128);
  const auto w = wigner(f, EpsilonParam(eps), grid);
  const auto s = smoothed_wigner(f, SmoothingParams(0.5, 0.5, eps), grid);
  double mw = 0.0, ms = 0.0;
  for (std::size_t i = 0; i < grid.nx(); ++i) {
    if (std::abs(grid.x_axis[i]) >= 0.5) continue;
    for (std::size_t j = 0; j < grid.nk(); ++j) {
      mw = std::max(mw, std::abs(w(i, j)));
      ms = std::max(ms, std::abs(s(i, j)));
    }
  }
  MESSAGE("interference ratio WT/SWT = ", mw / ms);
  CHECK(mw / ms >= 5.0);
}

TEST_CASE("trace observables") {
  const double eps = 0.5;
  const auto f = ComplexField1D::sample(kFieldAxis, [eps](double x) { return std::polar(std::exp(-pi * x * x), two_pi * 3.0 * x / eps); });
  const auto grid = standard_grid();
  const auto w = wigner(f, EpsilonParam(eps), grid);
  const double n2 = f.norm_squared();
  CHECK(std::abs(trace_observable(PolynomialSymbol::constant(1.0), w) - n2) / n2 < 1e-8);
  CHECK(std::abs(trace_observable(PolynomialSymbol::k(), w) - 3.0 * n2) / n2 < 1e-8);
  // <f, x^2 f> = int x^2 |f|^2
  double x2 = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) x2 += kFieldAxis[i] * kFieldAxis[i] * std::norm(f[i]) * kFieldAxis.step();
  CHECK(std::abs(trace_observable(PolynomialSymbol::monomial(1.0, 2, 0), w) - x2) / x2 < 1e-8);
}

TEST_CASE("grid validation") {
  const auto f = ComplexField1D::sample(kFieldAxis, [](double x) { return std::polar(std::exp(-pi * x * x), two_pi * 5.0 * x); });
  // k-window misses the spectral peak at k = 5 eps
  CHECK_THROWS_AS(wigner(f, EpsilonParam(1.0), aligned_grid(kFieldAxis, -2.0, 2.0, 2, 3.0, 64)), InvalidArgument);
  // beyond the field axis
  CHECK_THROWS_AS(wigner(f, EpsilonParam(1.0), PhaseSpaceGrid{make_axis(-9.0, 1.0 / 16.0, 64), centered_axis(8.0, 64)}),
                  OutOfDomain);
  // not on field nodes
  CHECK_THROWS_AS(wigner(f, EpsilonParam(1.0), PhaseSpaceGrid{make_axis(-1.01, 1.0 / 16.0, 64), centered_axis(8.0, 64)}),
                  InvalidArgument);
  CHECK_THROWS_AS(SmoothingParams(-0.1, 0.5, 1.0), InvalidArgument);
}

TEST_CASE("wrong Fourier sign is detectable through the x-marginal") {
  const auto fn = testutil::smooth_functions()[3].f;
  const auto f = ComplexField1D::sample(kFieldAxis, fn);
  const auto grid = aligned_grid(kFieldAxis, -7.0, 7.0, 1, 8.0, 256);
  TransformOptions bad;
  bad.flip_fourier_sign = true;
  const auto good = wigner(f, EpsilonParam(1.0), grid);
  const auto flipped = wigner(f, EpsilonParam(1.0), grid, bad);
  CHECK(testutil::l1_diff(marginal_x(good), marginal_x(flipped), grid.k_axis.step()) > 0.1);
}
