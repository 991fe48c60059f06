#include <cmath>
#include <functional>
#include <random>

#include "doctest.h"
#include "swt/errors.hpp"
#include "swt/fourier.hpp"
#include "swt/grid.hpp"

using namespace swt;

TEST_CASE("make_axis samples and validation") {
  const Axis a = make_axis(-1.0, 0.5, 5);
  const std::vector<double> expect{-1.0, -0.5, 0.0, 0.5, 1.0};
  for (std::size_t i = 0; i < 5; ++i) CHECK(a[i] == doctest::Approx(expect[i]));

  const Axis b = make_axis(0.0, 1.0, 2);
  CHECK(b[0] == 0.0);
  CHECK(b[1] == 1.0);

  CHECK_THROWS_AS(make_axis(0.0, 0.0, 4), InvalidArgument);
  CHECK_THROWS_AS(make_axis(0.0, -1.0, 4), InvalidArgument);
  CHECK_THROWS_AS(make_axis(0.0, 1.0, 1), InvalidArgument);
  CHECK_THROWS_AS(EpsilonParam(0.0), InvalidArgument);
}

TEST_CASE("dual axis step matches DFT bin spacing") {
  const Axis a = make_axis(-8.0, 1.0 / 64.0, 1024);
  const Axis d = a.dual();
  CHECK(d.step() == doctest::Approx(1.0 / 16.0).epsilon(1e-15));
  // independent: spacing between FFT frequencies 1 and 0
  CHECK(fft_frequency(1, 1024, 1.0 / 64.0) - fft_frequency(0, 1024, 1.0 / 64.0) == doctest::Approx(d.step()));
  CHECK(d[512] == doctest::Approx(0.0));
}

namespace {
double max_err(const ComplexField1D& a, const std::function<cplx(double)>& exact) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - exact(a.axis()[i])));
  return e;
}

// direct rectangle-rule transform at one frequency
cplx direct_ft(const ComplexField1D& f, double k) {
  cplx s = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) s += f[j] * std::polar(1.0, -two_pi * k * f.axis()[j]);
  return s * f.axis().step();
}
}  // namespace

TEST_CASE("forward_ft of Gaussians") {
  const Axis ax = make_axis(-8.0, 1.0 / 32.0, 512);
  auto g = ComplexField1D::sample(ax, [](double x) { return std::exp(-pi * x * x); });
  CHECK(max_err(forward_ft(g), [](double k) { return cplx(std::exp(-pi * k * k)); }) < 1e-10);

  auto zero = ComplexField1D(ax);
  CHECK(forward_ft(zero).max_abs() == 0.0);

  auto mod = ComplexField1D::sample(ax, [](double x) { return std::polar(std::exp(-pi * x * x), two_pi * 3.0 * x); });
  const auto spec = forward_ft(mod);
  CHECK(max_err(spec, [](double k) { return cplx(std::exp(-pi * (k - 3.0) * (k - 3.0))); }) < 1e-10);
  for (std::size_t m : {100u, 256u, 300u, 350u, 400u}) CHECK(std::abs(spec[m] - direct_ft(mod, spec.axis()[m])) < 1e-8);
}

TEST_CASE("spectral_derivative") {
  const Axis ax = make_axis(-8.0, 1.0 / 32.0, 512);
  auto g = ComplexField1D::sample(ax, [](double x) { return std::exp(-pi * x * x); });
  CHECK(max_err(spectral_derivative(g, 1), [](double x) { return cplx(-two_pi * x * std::exp(-pi * x * x)); }) < 1e-8);
  CHECK(max_err(spectral_derivative(g, 0), [](double x) { return cplx(std::exp(-pi * x * x)); }) == 0.0);

  const Axis per = make_axis(0.0, 1.0 / 64.0, 64 * 3);
  auto s = ComplexField1D::sample(per, [](double x) { return std::sin(two_pi * x); });
  CHECK(max_err(spectral_derivative(s, 2), [](double x) { return cplx(-4.0 * pi * pi * std::sin(two_pi * x)); }) < 1e-9);
  CHECK_THROWS_AS(spectral_derivative(s, -1), InvalidArgument);
}

TEST_CASE("round trip, Parseval and double transform on random fields") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 64 + 2 * static_cast<std::size_t>(trial) * 7;
    const Axis ax = make_axis(-3.0 + 0.1 * trial, 0.05 + 0.01 * trial, n);
    ComplexField1D f(ax);
    for (std::size_t i = 0; i < n; ++i) f[i] = cplx(nd(rng), nd(rng));

    const auto spec = forward_ft(f);
    const auto back = inverse_ft(spec, ax.start());
    CHECK(back.axis().step() == doctest::Approx(ax.step()));
    CHECK(relative_l2_error(ComplexField1D(ax, {back.values().begin(), back.values().end()}), f) < 1e-12);
    CHECK(std::abs(spec.norm() - f.norm()) / f.norm() < 1e-10);

    // forward twice on a centred axis: g(x) = f(-x), sample j -> n - j
    const Axis centred = make_axis(-static_cast<double>(n / 2) * 0.1, 0.1, n);
    ComplexField1D fc(centred, {f.values().begin(), f.values().end()});
    const auto sp = forward_ft(fc);
    const auto twice = forward_ft(ComplexField1D(make_axis(sp.axis().start(), sp.axis().step(), n),
                                                 {sp.values().begin(), sp.values().end()}));
    double err = 0.0;
    for (std::size_t j = 0; j < n; ++j) err = std::max(err, std::abs(twice[j] - fc[(n - j) % n]));
    CHECK(err < 1e-10 * fc.max_abs());
  }
}

TEST_CASE("fourier_upsample keeps band-limited samples") {
  const std::size_t n = 48;
  std::vector<cplx> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = std::polar(1.0, two_pi * 5.0 * static_cast<double>(i) / n);
  const auto up = fourier_upsample(v, 3);
  for (std::size_t i = 0; i < up.size(); ++i)
    CHECK(std::abs(up[i] - std::polar(1.0, two_pi * 5.0 * static_cast<double>(i) / (3.0 * n))) < 1e-12);
  CHECK(next_fast_size(97) == 100);
  CHECK(next_fast_size(128) == 128);
}
