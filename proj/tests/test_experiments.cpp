#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "swt/errors.hpp"
#include "swt/experiments.hpp"
#include "swt/io.hpp"

using namespace swt;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const char* name) {
  const fs::path d = fs::temp_directory_path() / "swt_test_experiments" / name;
  fs::remove_all(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string parse_error(const std::string& text) {
  try {
    ExperimentConfig::parse(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("config text round trip is lossless") {
  for (const char* name : {"free", "harmonic", "uniform", "transform"}) {
    const auto c = ExperimentConfig::preset(name);
    CHECK_NOTHROW(c.validate());
    const auto back = ExperimentConfig::parse(c.to_yaml());
    CHECK(back == c);
    CHECK(back.to_yaml() == c.to_yaml());
  }
  auto c = ExperimentConfig::preset("free");
  c.initial.packets = {GaussianPacket{cplx(0.1 + 1.0 / 3.0, 7.0), cplx(0.2, -1.0 / 7.0), cplx(0.0, 0.3)}};
  c.potential = PotentialSpec::polynomial({0.5, -1.0 / 3.0, 2.0, 0.25});
  c.times = {1.0 / 3.0, 0.7};
  c.sigma_x = 0.1 + 0.2;
  CHECK(ExperimentConfig::parse(c.to_yaml()) == c);
}

TEST_CASE("config diagnostics name the line and field") {
  CHECK(parse_error("eps: 0.7\nsmoothing:\n  sigma_x: -1\n").find("line 3: field 'smoothing.sigma_x'") !=
        std::string::npos);
  CHECK(parse_error("eps: 0.7\nsmoothin: {}\n").find("line 2: field 'smoothin': unknown key") != std::string::npos);
  CHECK(parse_error("eps: abc\n").find("line 1: field 'eps': cannot convert 'abc'") != std::string::npos);
  CHECK(parse_error("potential: {kind: cubic}\n").find("potential.kind") != std::string::npos);
  CHECK(parse_error("initial_condition: {type: hermite, n: 99}\n").find("initial_condition.n") != std::string::npos);
  CHECK(parse_error("eps: [1\n").find("line") != std::string::npos);
  CHECK(parse_error("preset: nope\n").find("preset") != std::string::npos);
  CHECK(parse_error("times: [0.2, 0.1]\n").find("times") != std::string::npos);
  // presets can be overridden field by field
  const auto c = ExperimentConfig::parse("preset: harmonic\neps: 0.5\n");
  CHECK(c.eps == 0.5);
  CHECK(c.potential.kind() == PotentialSpec::Kind::harmonic);
}

TEST_CASE("bin_average integrates the piecewise-linear interpolant exactly") {
  const Axis src = make_axis(-2.0, 0.01, 401);
  std::vector<double> v(src.count());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 3.0 * src[i] + 1.0;
  const Axis bins = make_axis(-1.0, 0.37, 5);
  const auto b = bin_average(src, v, bins);
  for (std::size_t i = 0; i < b.size(); ++i) CHECK(b[i] == doctest::Approx(3.0 * bins[i] + 1.0).epsilon(1e-12));
  // bins outside the samples see zero
  CHECK(bin_average(src, v, make_axis(5.0, 0.5, 3))[1] == 0.0);
}

TEST_CASE("transform: zero initial condition gives zero fields") {
  auto c = ExperimentConfig::preset("transform");
  c.initial.amplitude = 0.0;
  c.nx = c.nk = 64;
  const auto out = scratch("zero");
  const auto r = run_transform(c, out);
  for (const char* f : {"wigner.psf2", "swt.psf2", "spectrogram.psf2"}) CHECK(read_psf2(out / f).max_abs() == 0.0);
  CHECK(r.max_abs_wigner == 0.0);
}

TEST_CASE("transform: SWT ridge of f_eps and interference taming of the three packets") {
  auto c = ExperimentConfig::preset("transform");
  const auto r = run_transform(c, scratch("feps"));
  CHECK(r.ridge_deviation < 2.0 * c.phase_grid().k_axis.step());
  CHECK(r.min_spectrogram >= -1e-12 * r.max_abs_wigner);

  auto g = ExperimentConfig::preset("free");
  g.sigma_x = g.sigma_k = 0.5;
  const auto out = scratch("packets");
  const auto rg = run_transform(g, out);
  CHECK(rg.interference_suppression >= 5.0);
  CHECK(fs::exists(out / "config.yaml"));
  CHECK(fs::exists(out / "swt_marginal_x.csv"));
  CHECK(ExperimentConfig::load((out / "config.yaml").string()) == g);
}

TEST_CASE("f_eps SWT needs far fewer particles than grid nodes") {
  const auto c = ExperimentConfig::preset("uniform");
  const auto grid = c.phase_grid();
  const auto w = smoothed_wigner(c.initial_field(), c.smoothing(), grid);
  const auto e = seed_particles(w, 1e-4, 3);
  CHECK(e.size() < grid.nx() * grid.nk() / 2);
}

TEST_CASE("case study output is deterministic and echoes the config") {
  auto c = ExperimentConfig::preset("free");
  c.nx = c.nk = 96;
  c.times = {0.25};
  const auto a = scratch("det_a"), b = scratch("det_b");
  const auto ra = run_casestudy(c, a);
  run_casestudy(c, b);
  for (const char* f : {"marginal_1.csv", "errors.csv", "report.json", "conservation_swt.csv", "config.yaml"})
    CHECK(slurp(a / f) == slurp(b / f));
  CHECK(ExperimentConfig::load((a / "config.yaml").string()) == c);
  REQUIRE(ra.snapshots.size() == 2);
  CHECK(ra.snapshots[1].swt_error < ra.snapshots[1].spectrogram_error);
  CHECK(ra.swt.marginal_mass_drift < 1e-3);
}

TEST_CASE("evolve writes snapshots, ensembles, conservation and the wavefunction series") {
  auto c = ExperimentConfig::preset("harmonic");
  c.nx = c.nk = 64;
  c.times = {c.t_final / 4.0};
  const auto out = scratch("evolve");
  const auto r = run_evolve(c, out);
  REQUIRE(r.conservation.size() == 2);
  CHECK(std::abs(r.conservation[1].energy - r.conservation[0].energy) < 1e-6 * std::abs(r.conservation[0].energy));
  const auto w = read_psf2(out / "snapshot_1.psf2");
  CHECK(w.max_abs() > 0.0);
  const auto series = read_time_series(out / "wavefunction");
  CHECK(series.t.back() == doctest::Approx(c.times[0]));
  CHECK(fs::exists(out / "snapshot_1_ensemble.csv"));
}
