#include "swt/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <sstream>

#include "swt/errors.hpp"
#include "swt/experiments.hpp"
#include "swt/fourier.hpp"
#include "swt/liouville.hpp"
#include "swt/weyl.hpp"

namespace swt {

namespace fs = std::filesystem;

std::vector<NamedFunction> standard_test_functions() {
  return {
      {"gaussian", [](double x) { return cplx(std::exp(-pi * x * x)); }},
      {"chirp", [](double x) { return std::exp(cplx(-1.5 * pi, 2.0 * pi) * (x - 0.5) * (x - 0.5)); }},
      {"two_packets",
       [](double x) {
         return std::exp(-pi * (x - 1.5) * (x - 1.5)) + cplx(0.0, 0.7) * std::exp(-2.0 * pi * (x + 1.2) * (x + 1.2));
       }},
      {"modulated", [](double x) { return std::polar(std::exp(-2.0 * pi * x * x), two_pi * 1.7 * x); }},
      {"hermite_like",
       [](double x) { return (x * x - 0.3 + cplx(0.0, 0.5) * x) * std::exp(-pi * (x + 0.4) * (x + 0.4)); }},
  };
}

std::string format_result(const CheckResult& r) {
  char secs[32];
  std::snprintf(secs, sizeof secs, "%.1f s", r.seconds);
  std::string tag = r.passed ? "[PASS]" : (r.gating ? "[FAIL]" : "[SOFT-FAIL]");
  if (r.passed && !r.gating) tag = "[PASS-SOFT]";
  return tag + " " + r.id + " " + r.title + ": " + r.detail + " (" + secs + ")";
}

bool all_gating_passed(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed || !r.gating; });
}

namespace {

using Clock = std::chrono::steady_clock;

std::string sci(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3g", v);
  return b;
}

const Axis& test_axis() {
  static const Axis a = make_axis(-8.0, 1.0 / 32.0, 512);
  return a;
}

ComplexField1D test_field(int i) {
  return ComplexField1D::sample(test_axis(), standard_test_functions()[static_cast<std::size_t>(i)].f);
}

double l1_diff(const std::vector<double>& a, const std::vector<double>& b, double step) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s * step;
}

double normalized_l1_fields(const PhaseSpaceField& a, const PhaseSpaceField& b) {
  return normalized_l1(a.values(), b.values());
}

// 1. FFT path vs direct quadrature.
CheckResult transform_correctness() {
  CheckResult r{"1", "transform correctness", false, true, "", 0.0};
  const auto grid = aligned_grid(test_axis(), -8.0, 8.0 - 1.0 / 16.0, 2, 8.0, 256);
  std::mt19937_64 rng(2024);
  const auto funcs = standard_test_functions();
  double worst = 0.0;
  for (std::size_t a = 0; a < funcs.size(); ++a) {
    const auto f = test_field(static_cast<int>(a));
    const auto w = wigner(f, EpsilonParam(1.0), grid);
    std::uniform_int_distribution<std::size_t> ix(0, grid.nx() - 1), ik(0, grid.nk() - 1);
    for (int s = 0; s < 20; ++s) {
      const std::size_t i = ix(rng), j = ik(rng);
      const cplx ref = wigner_point_oracle(funcs[a].f, funcs[a].f, 1.0, grid.x_axis[i], grid.k_axis[j], {20.0, 2e-3});
      worst = std::max(worst, std::abs(w(i, j) - ref) / w.max_abs());
    }
  }
  r.passed = worst < 1e-8;
  r.detail = "N = " + std::to_string(grid.nx()) + "x" + std::to_string(grid.nk()) + ", 5 functions x 20 points, max rel err " +
             sci(worst) + " (limit 1e-8)";
  return r;
}

// 2. Exact marginals.
CheckResult marginals() {
  CheckResult r{"2", "exact marginals", false, true, "", 0.0};
  const auto grid = aligned_grid(test_axis(), -7.0, 7.0, 1, 8.0, 256);
  const auto& ax = test_axis();
  double worst_x = 0.0, worst_k = 0.0;
  const auto funcs = standard_test_functions();
  for (std::size_t n = 0; n < funcs.size(); ++n) {
    for (double eps : {1.0, 0.7}) {
      const auto f = test_field(static_cast<int>(n));
      const auto w = wigner(f, EpsilonParam(eps), grid);
      std::vector<double> abs2(grid.nx());
      for (std::size_t i = 0; i < grid.nx(); ++i) abs2[i] = std::norm(funcs[n].f(grid.x_axis[i]));
      worst_x = std::max(worst_x, l1_diff(marginal_k(w), abs2, grid.x_axis.step()));
      std::vector<double> spec(grid.nk());
      for (std::size_t j = 0; j < grid.nk(); ++j) {
        cplx s = 0.0;
        for (std::size_t m = 0; m < ax.count(); ++m) s += f[m] * std::polar(1.0, -two_pi * grid.k_axis[j] / eps * ax[m]);
        spec[j] = std::norm(s * ax.step()) / eps;
      }
      worst_k = std::max(worst_k, l1_diff(marginal_x(w), spec, grid.k_axis.step()));
    }
  }
  r.passed = worst_x < 1e-8 && worst_k < 1e-8;
  r.detail = "L1 |int W dk - |f|^2| = " + sci(worst_x) + ", |int W dx - |f^|^2| = " + sci(worst_k) + " (limit 1e-8)";
  return r;
}

PhaseSpaceGrid identity_grid(double eps) {
  const double k_half = 8.0 * eps + 2.0;
  const auto nk = static_cast<std::size_t>(std::ceil(2.0 * k_half / (eps / 20.0)));
  return aligned_grid(test_axis(), -7.0, 7.0, 1, k_half, nk + nk % 2);
}

// 3. Pull-out identities.
CheckResult identity_suite() {
  CheckResult r{"3", "identity suite", false, true, "", 0.0};
  const std::vector<std::pair<int, int>> pairs{{0, 0}, {1, 3}, {2, 4}, {3, 1}, {4, 2}};
  double worst = 0.0;
  int count = 0;
  for (double eps : {1.0, 0.7, 0.25}) {
    const auto grid = identity_grid(eps);
    for (double sigma : {0.0, 0.5, 1.0}) {
      const SmoothingParams sp(sigma, sigma, eps);
      for (const auto& [a, b] : pairs) {
        const auto f = test_field(a), g = test_field(b);
        const auto base = cross_gaussian_smoothed_wigner(f, g, eps, sp.covariance(), grid);
        for (Identity id :
             {Identity::x_first, Identity::x_second, Identity::derivative_first, Identity::derivative_second}) {
          const auto lhs = identity_lhs(id, f, g, sp, grid);
          const auto rhs = apply_operator(identity_operator(id, sp), base);
          worst = std::max(worst, relative_max_error(rhs, lhs));
          ++count;
        }
      }
    }
  }
  r.passed = worst < 1e-7;
  r.detail = std::to_string(count) + " lhs/rhs pairs (eps {1, 0.7, 0.25} x sigma {0, 0.5, 1} x 5 pairs x 4), max err " +
             sci(worst) + " (limit 1e-7)";
  return r;
}

// 4. Exact-equation residual under time-step refinement.
CheckResult exact_residual() {
  CheckResult r{"4", "exact-equation residual", false, true, "", 0.0};
  const double eps = 0.7;
  const auto grid = identity_grid(eps);
  const SmoothingParams sp(0.5, 0.5, eps);
  const auto V = PotentialSpec::harmonic(4.0);
  const GaussianPacket p0{cplx(1.0, 0.5), cplx(0.5, -6.0), 0.0};
  const auto G = build_evolution_operator(SchrodingerSymbol{V.polynomial(), eps}.symbol(), sp);
  const double t = 0.3;
  auto swt_at = [&](double s) { return smoothed_wigner(evolve_gaussian_packet(p0, V, eps, s).sample(test_axis()), sp, grid); };
  const auto w = swt_at(t);
  const auto gw = apply_operator(G, w);
  const auto g0w = apply_operator(truncate(G, 0), w);
  std::vector<double> res;
  double res0 = 0.0;
  for (double dt : {0.02, 0.01, 0.005}) {
    const auto wp = swt_at(t + dt), wm = swt_at(t - dt);
    double m = 0.0, m0 = 0.0;
    for (std::size_t i = 0; i < w.values().size(); ++i) {
      const double d = eps * (wp.values()[i] - wm.values()[i]) / (2.0 * dt);
      m = std::max(m, std::abs(d + gw.values()[i]));
      m0 = std::max(m0, std::abs(d + g0w.values()[i]));
    }
    res.push_back(m / gw.max_abs());
    res0 = m0 / gw.max_abs();
  }
  const double q1 = res[0] / res[1], q2 = res[1] / res[2];
  r.passed = std::abs(q1 - 4.0) < 0.4 && std::abs(q2 - 4.0) < 0.4 && res0 > 20.0 * res[2];
  r.detail = "residuals " + sci(res[0]) + ", " + sci(res[1]) + ", " + sci(res[2]) + " (ratios " + sci(q1) + ", " +
             sci(q2) + ", expect 4); order-0 truncation stalls at " + sci(res0);
  return r;
}

// 5. Truncated coefficients.
CheckResult truncation_coefficients() {
  CheckResult r{"5", "truncation coefficients", false, true, "", 0.0};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.2);
  double worst = 0.0;
  bool structure = true;
  for (int trial = 0; trial < 10; ++trial) {
    const double sx = u(rng), sk = u(rng), eps = 0.2 + u(rng);
    const double a = 145.0 * u(rng), b = 10.0 * u(rng) - 5.0;
    const SmoothingParams sp(sx, sk, eps);
    const auto G = build_evolution_operator(SchrodingerSymbol{RealPolynomial({0.0, b, a}), eps}.symbol(), sp);
    const auto G0 = truncate(G, 0), G1 = truncate(G, 1);
    worst = std::max(worst, std::abs(G0.coefficient(1, 0, 1).coefficient(0, 1) - two_pi));
    worst = std::max(worst, std::abs(G0.coefficient(0, 1, 1).coefficient(1, 0) + 2.0 * a / two_pi));
    worst = std::max(worst, std::abs(G0.coefficient(0, 1, 1).coefficient(0, 0) + b / two_pi));
    structure = structure && G0.pruned(1e-13).terms().size() == 2;
    // Sign of the V'' term as the operator algebra produces it.
    const double c = 0.5 * sk * sk - 2.0 * a * sx * sx / (8.0 * pi * pi);
    const auto extra = (G1 + cplx(-1.0) * G0).pruned(1e-13);
    if (extra.terms().size() != 1 || extra.terms()[0].dx_order != 1 || extra.terms()[0].dk_order != 1 ||
        extra.terms()[0].eps_power != 2) {
      structure = false;
      continue;
    }
    worst = std::max(worst, std::abs(extra.terms()[0].coeff.coefficient(0, 0) - c));
  }
  r.passed = structure && worst < 1e-12;
  r.detail = "order 0 = (2 pi k, -V'/2 pi), order 1 = eps (sigma_k^2/2 - V'' sigma_x^2/(8 pi^2)) d_x d_k; max coefficient err " +
             sci(worst) + " over 10 random setups (limit 1e-12)";
  return r;
}

std::string snapshot_line(const CaseStudyReport& rep, bool errors) {
  std::ostringstream o;
  for (std::size_t i = 1; i < rep.snapshots.size(); ++i) {
    const auto& s = rep.snapshots[i];
    o << (i > 1 ? "; " : "") << "t=" << sci(s.t) << ": "
      << (errors ? sci(s.swt_error) + " vs " + sci(s.spectrogram_error)
                 : sci(s.swt_drift) + " vs " + sci(s.spectrogram_drift));
  }
  return o.str();
}

// 6, 7, 8: case studies.
CheckResult case_free(const CaseStudyReport& rep) {
  CheckResult r{"6", "case study free (SWT vs spectrogram marginal error)", true, true, "", 0.0};
  for (std::size_t i = 1; i < rep.snapshots.size(); ++i)
    r.passed = r.passed && rep.snapshots[i].swt_error <= 0.5 * rep.snapshots[i].spectrogram_error;
  r.detail = "normalized L1 error SWT vs spectrogram " + snapshot_line(rep, true) + " (need SWT <= half)";
  return r;
}

CheckResult case_harmonic(const CaseStudyReport& rep) {
  CheckResult r{"7", "case study harmonic (marginal drift over one period)", false, true, "", 0.0};
  double swt = 0.0, spec = 0.0;
  for (const auto& s : rep.snapshots) {
    swt = std::max(swt, s.swt_drift);
    spec = std::max(spec, s.spectrogram_drift);
  }
  r.passed = swt < 0.1 && spec > swt;
  r.detail = "max drift SWT " + sci(swt) + " (limit 0.1), spectrogram " + sci(spec) + "; " + snapshot_line(rep, false);
  return r;
}

CheckResult case_uniform(const CaseStudyReport& rep) {
  CheckResult r{"8", "case study uniform field", true, true, "", 0.0};
  for (std::size_t i = 1; i < rep.snapshots.size(); ++i)
    r.passed = r.passed && rep.snapshots[i].swt_error < rep.snapshots[i].spectrogram_error;
  const double mass = std::max(rep.swt.marginal_mass_drift, rep.swt.mass_drift);
  r.passed = r.passed && mass < 1e-3;
  r.detail = "mass drift " + sci(mass) + " (limit 1e-3); error SWT vs spectrogram " + snapshot_line(rep, true);
  return r;
}

// 9. Liouville-evolved SWT equals the flow-distorted kernel reference.
struct ExactnessRun {
  double coarse = 0.0;
  double fine = 0.0;
};

ExactnessRun exactness_run(const PotentialSpec& V, double t) {
  const double eps = 0.7;
  const SmoothingParams sp(0.5, 0.5, eps);
  const GaussianPacket p0{cplx(1.0, 0.5), cplx(0.5, -6.0), 0.0};
  const Axis axis = make_axis(-10.0, 1.0 / 128.0, 2560);
  const auto u0 = p0.sample(axis);
  const auto u_t = evolve_gaussian_packet(p0, V, eps, t).sample(axis);
  const auto mono = V.monomial();
  const FlowMap flow = FlowMap::exact(mono->first, mono->second, t);
  const auto out_grid = aligned_grid(axis, -6.0, 6.0, 8, 4.0, 128);
  const auto reference = kernel_evolution_reference(u_t, sp, flow, out_grid);
  auto pipeline = [&](std::size_t stride, std::size_t nk) {
    const auto seed_grid = aligned_grid(axis, -3.5, 3.0, stride, 4.0, nk);
    const auto w0 = smoothed_wigner(u0, sp, seed_grid);
    const auto moved = propagate(seed_particles(w0, 1e-9, 3), V, t, 1e-3);
    return relative_max_error(interpolate_to_grid(moved, out_grid), reference);
  };
  return {pipeline(2, 512), pipeline(1, 1024)};
}

CheckResult kernel_exactness() {
  CheckResult r{"9", "Liouville-evolved SWT equals the distorted-kernel reference", true, true, "", 0.0};
  std::ostringstream o;
  const std::vector<std::pair<PotentialSpec, double>> cases{
      {PotentialSpec::free(), 0.5}, {PotentialSpec::uniform_field(two_pi * 2.0), 0.5}, {PotentialSpec::harmonic(16.0), pi / 8.0}};
  int s = 0;
  for (const auto& [V, t] : cases) {
    const auto e = exactness_run(V, t);
    const bool ok = e.coarse < 1e-4 && e.fine <= 0.5 * e.coarse;
    r.passed = r.passed && ok;
    o << (s ? "; " : "") << "s=" << s << ": " << sci(e.coarse) << " -> " << sci(e.fine);
    ++s;
  }
  r.detail = "rel L-inf error default -> 2x refined " + o.str() + " (limit 1e-4, refined <= half)";
  return r;
}

// 10. Conservation across the case-study runs.
CheckResult conservation(const std::vector<CaseStudyReport>& reps) {
  CheckResult r{"10", "conservation of mass and slow-scale energy", true, true, "", 0.0};
  std::ostringstream o;
  for (const auto& rep : reps) {
    for (const auto* c : {&rep.swt, &rep.spectrogram}) {
      const double m = std::max(c->mass_drift, c->marginal_mass_drift);
      r.passed = r.passed && m < 1e-3 && c->energy_drift < 1e-3;
    }
    o << (o.tellp() > 0 ? "; " : "") << rep.name << ": mass " << sci(std::max(rep.swt.mass_drift, rep.swt.marginal_mass_drift))
      << ", energy " << sci(rep.swt.energy_drift);
  }
  r.detail = "max relative drift (SWT runs) " + o.str() + " (limit 1e-3, spectrogram runs included)";
  return r;
}

// 11. Raw WT vs SWT through the particle pipeline.
CheckResult instability_contrast() {
  CheckResult r{"11", "instability contrast raw WT vs SWT", false, true, "", 0.0};
  auto cfg = ExperimentConfig::preset("uniform");
  const double eps = cfg.eps, t = 0.025;
  const auto axis = cfg.field_axis();
  const auto u0 = cfg.initial_field();
  const auto series = split_step_solve(u0, cfg.potential, eps, t, 1e-4, {t});
  const auto& u_t = series.u.back();
  const auto seed_grid = cfg.phase_grid();
  const auto out_grid = aligned_grid(axis, -6.0, 5.0, 8, 32.0, 384);
  const auto flow = FlowMap::for_potential(cfg.potential, t);
  const SmoothingParams sp(0.5, 0.5, eps);

  auto residual = [&](const PhaseSpaceField& w0, const PhaseSpaceField& reference) {
    const auto moved = propagate(seed_particles(w0, cfg.seed_tolerance, cfg.halo), cfg.potential, t, 1e-4);
    return normalized_l1_fields(interpolate_to_grid(moved, out_grid), reference);
  };
  const double raw = residual(wigner(u0, EpsilonParam(eps), seed_grid), wigner(u_t, EpsilonParam(eps), out_grid));
  const double smooth = residual(smoothed_wigner(u0, sp, seed_grid), kernel_evolution_reference(u_t, sp, flow, out_grid));
  r.passed = raw >= 10.0 * smooth;
  r.detail = "normalized L1 residual raw WT " + sci(raw) + ", SWT " + sci(smooth) + ", ratio " + sci(raw / smooth) +
             " (need >= 10)";
  return r;
}

// 12. Complexity smoke test.
CheckResult complexity() {
  CheckResult r{"12", "complexity O(N^2 log N) (soft)", false, false, "", 0.0};
  std::vector<double> secs;
  const std::vector<double> ns{128, 256, 512};
  for (double nd : ns) {
    const auto n = static_cast<std::size_t>(nd);
    const Axis axis = centered_axis(8.0, n);
    const auto f = ComplexField1D::sample(axis, standard_test_functions()[0].f);
    const PhaseSpaceGrid grid = aligned_grid(axis, axis.start(), axis.back(), 1, 0.45 / axis.step(), n);
    double best = 1e300;
    for (int rep = 0; rep < 3; ++rep) {
      const auto t0 = Clock::now();
      (void)wigner(f, EpsilonParam(1.0), grid);
      best = std::min(best, std::chrono::duration<double>(Clock::now() - t0).count());
    }
    secs.push_back(best);
  }
  auto model = [](double n) { return n * n * std::log(n); };
  const double measured = secs[2] / secs[1], predicted = model(512) / model(256);
  const double q = measured / predicted;
  r.passed = q >= 0.5 && q <= 2.0;
  r.detail = "t(128, 256, 512) = " + sci(secs[0]) + ", " + sci(secs[1]) + ", " + sci(secs[2]) +
             " s; largest ratio " + sci(measured) + " vs model " + sci(predicted) + " (factor " + sci(q) + ")";
  return r;
}

CheckResult negative_control() {
  CheckResult r{"N1", "negative control: wrong Fourier sign breaks the k-marginal", false, true, "", 0.0};
  const auto& ax = test_axis();
  const auto f = test_field(3);
  const auto grid = aligned_grid(ax, -7.0, 7.0, 1, 8.0, 256);
  TransformOptions bad;
  bad.flip_fourier_sign = true;
  const auto w = wigner(f, EpsilonParam(1.0), grid, bad);
  std::vector<double> spec(grid.nk());
  for (std::size_t j = 0; j < grid.nk(); ++j) {
    cplx s = 0.0;
    for (std::size_t m = 0; m < ax.count(); ++m) s += f[m] * std::polar(1.0, -two_pi * grid.k_axis[j] * ax[m]);
    spec[j] = std::norm(s * ax.step());
  }
  const double err = l1_diff(marginal_x(w), spec, grid.k_axis.step());
  r.passed = err > 1e-2;
  r.detail = "marginal check with the corrupted convention misses by " + sci(err) + " (must fail, i.e. exceed 1e-2)";
  return r;
}

CheckResult spectrogram_nonnegative() {
  CheckResult r{"N2", "spectrogram nonnegativity at sigma_x sigma_k = 1", false, true, "", 0.0};
  double worst = 0.0, scale = 0.0;
  const auto grid = aligned_grid(test_axis(), -6.0, 6.0, 2, 8.0, 256);
  for (int i = 0; i < 5; ++i)
    for (double sx : {1.0, 0.6, 1.7}) {
      const auto s = spectrogram(test_field(i), SmoothingParams(sx, 1.0 / sx, 0.7), grid);
      worst = std::min(worst, *std::min_element(s.values().begin(), s.values().end()));
      scale = std::max(scale, s.max_abs());
    }
  r.passed = worst >= -1e-12 * scale;
  r.detail = "min value " + sci(worst) + " relative to max " + sci(scale);
  return r;
}

template <class F>
CheckResult timed(F&& f) {
  const auto t0 = Clock::now();
  CheckResult r;
  try {
    r = f();
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return r;
}

}  // namespace

std::vector<CheckResult> run_acceptance(const AcceptanceOptions& opts, std::ostream* log) {
  auto wanted = [&](int id) { return opts.only.empty() || std::count(opts.only.begin(), opts.only.end(), id) > 0; };
  std::vector<CheckResult> out;
  auto emit = [&](CheckResult r) {
    if (log) *log << format_result(r) << std::endl;
    out.push_back(std::move(r));
  };
  auto run = [&](int id, auto&& f) {
    if (!wanted(id)) return;
    auto r = timed(f);
    if (r.id.empty()) r.id = std::to_string(id);
    emit(std::move(r));
  };
  run(1, transform_correctness);
  run(2, marginals);
  run(3, identity_suite);
  run(4, exact_residual);
  run(5, truncation_coefficients);

  // Case studies feed criteria 6, 7, 8 and 10.
  std::vector<CaseStudyReport> reports;
  const bool need_cases = wanted(6) || wanted(7) || wanted(8) || wanted(10);
  const std::vector<std::pair<int, std::string>> cases{{6, "free"}, {7, "harmonic"}, {8, "uniform"}};
  for (const auto& [id, name] : cases) {
    if (!need_cases || (!wanted(id) && !wanted(10))) continue;
    CaseStudyReport rep;
    bool failed = false;
    auto r = timed([&] {
      rep = run_casestudy(name, ExperimentConfig::preset(name), opts.work_dir / name);
      if (id == 6) return case_free(rep);
      if (id == 7) return case_harmonic(rep);
      return case_uniform(rep);
    });
    failed = rep.snapshots.empty();
    if (r.id.empty()) r.id = std::to_string(id);
    if (r.title.empty()) r.title = "case study " + name;
    if (!failed) reports.push_back(rep);
    if (wanted(id)) emit(std::move(r));
  }
  run(9, kernel_exactness);
  if (wanted(10)) {
    auto r = timed([&] { return conservation(reports); });
    if (reports.size() < 3) {
      r.passed = false;
      r.detail = "case-study runs missing; " + r.detail;
    }
    emit(std::move(r));
  }
  run(11, instability_contrast);
  run(12, complexity);
  return out;
}

std::vector<CheckResult> run_verification(const AcceptanceOptions& opts, std::ostream* log) {
  auto out = run_acceptance(opts, log);
  for (auto* f : {&negative_control, &spectrogram_nonnegative}) {
    auto r = timed(*f);
    if (log) *log << format_result(r) << std::endl;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace swt
