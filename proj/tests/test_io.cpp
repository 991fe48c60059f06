#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "swt/errors.hpp"
#include "swt/io.hpp"

using namespace swt;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const char* name) {
  const fs::path d = fs::temp_directory_path() / "swt_test_io" / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

ComplexField1D sample_field() {
  return ComplexField1D::sample(make_axis(-2.5, 0.125, 41), [](double x) {
    return std::polar(std::exp(-x * x), 3.0 * x + 0.1);
  });
}

}  // namespace

TEST_CASE("PSF1 round trip is bit exact") {
  const auto d = scratch_dir("psf1");
  const auto f = sample_field();
  write_psf1(d / "f.psf1", f);
  CHECK(fs::file_size(d / "f.psf1") == 4 + 4 + 8 + 8 + 8 + 4 + 16 * f.size());
  const auto g = read_psf1(d / "f.psf1");
  CHECK(g.axis() == f.axis());
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(g[i] == f[i]);
  CHECK_FALSE(fs::exists(d / "f.psf1.tmp"));
}

TEST_CASE("PSF2 round trip keeps grid, kind and x-major layout") {
  const auto d = scratch_dir("psf2");
  PhaseSpaceGrid grid{make_axis(-1.0, 0.5, 5), make_axis(-2.0, 0.25, 7)};
  PhaseSpaceField w(grid, FieldKind::spectrogram);
  for (std::size_t i = 0; i < grid.nx(); ++i)
    for (std::size_t j = 0; j < grid.nk(); ++j) w(i, j) = 10.0 * i + j + 0.5;
  write_psf2(d / "w.psf2", w);
  const auto r = read_psf2(d / "w.psf2");
  CHECK(r.grid() == grid);
  CHECK(r.kind() == FieldKind::spectrogram);
  CHECK(r(3, 2) == doctest::Approx(32.5));
  for (std::size_t i = 0; i < w.values().size(); ++i) CHECK(r.values()[i] == w.values()[i]);
}

TEST_CASE("corrupted binary files are rejected") {
  const auto d = scratch_dir("bad");
  write_psf1(d / "f.psf1", sample_field());
  CHECK_THROWS_AS(read_psf2(d / "f.psf1"), ParseError);
  fs::resize_file(d / "f.psf1", fs::file_size(d / "f.psf1") - 3);
  CHECK_THROWS_AS(read_psf1(d / "f.psf1"), ParseError);
  CHECK_THROWS_AS(read_psf1(d / "missing.psf1"), ParseError);
}

TEST_CASE("CSV writers emit the documented columns") {
  const auto d = scratch_dir("csv");
  write_field_csv(d / "f.csv", sample_field());
  ParticleEnsemble e;
  e.positions = {{0.5, -1.0}, {1.5, 2.0}};
  e.densities = {0.25, 0.75};
  write_ensemble_csv(d / "e.csv", e);
  write_conservation_csv(d / "c.csv", {{0.0, 1.0, 2.0}, {0.5, 1.0, 2.0}});
  auto first_line = [](const fs::path& p) {
    std::ifstream in(p);
    std::string s;
    std::getline(in, s);
    return s;
  };
  CHECK(first_line(d / "f.csv") == "x,re,im");
  CHECK(first_line(d / "e.csv") == "x,k,density");
  CHECK(first_line(d / "c.csv") == "t,mass,energy");
  CHECK_THROWS_AS(write_table_csv(d / "x.csv", {"a", "b"}, {{1.0}, {1.0, 2.0}}), InvalidArgument);
}

TEST_CASE("time series round trip through the manifest") {
  const auto d = scratch_dir("series");
  TimeSeries s;
  s.t = {0.0, 0.25};
  s.u = {sample_field(), cplx(0.0, 1.0) * sample_field()};
  write_time_series(d, s, 0.7, PotentialSpec::harmonic(290.0));
  const auto r = read_time_series(d);
  REQUIRE(r.t.size() == 2);
  CHECK(r.t[1] == 0.25);
  CHECK(relative_l2_error(r.u[1], s.u[1]) == 0.0);
  std::ifstream in(d / "manifest.json");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(text.find("\"eps\": 0.7") != std::string::npos);
  CHECK(text.find("harmonic") != std::string::npos);
}
