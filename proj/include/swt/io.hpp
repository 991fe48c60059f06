#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "swt/grid.hpp"
#include "swt/liouville.hpp"
#include "swt/phasespace.hpp"
#include "swt/reference.hpp"

namespace swt {

// Binary formats are little-endian.
//
// PSF1 (complex 1-D field):
//   char[4] "PSF1", u32 version = 1, f64 start, f64 step, u64 count, u32 components = 2,
//   then count pairs of f64 (re, im).
// PSF2 (real phase-space field):
//   char[4] "PSF2", u32 version = 1, u32 kind (FieldKind),
//   f64 x_start, f64 x_step, u64 nx, f64 k_start, f64 k_step, u64 nk,
//   then nx * nk f64 values, x-major (index ix * nk + ik).

inline constexpr std::uint32_t psf_version = 1;

/// Writes to a temporary file next to `path` and renames it into place.
void atomic_write(const std::filesystem::path& path, std::string_view bytes);

void write_psf1(const std::filesystem::path& path, const ComplexField1D& f);
ComplexField1D read_psf1(const std::filesystem::path& path);

void write_psf2(const std::filesystem::path& path, const PhaseSpaceField& w);
PhaseSpaceField read_psf2(const std::filesystem::path& path);

/// Columns x, re, im.
void write_field_csv(const std::filesystem::path& path, const ComplexField1D& f);
/// Named columns of equal length, full double precision.
void write_table_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& columns);
/// Columns x, density.
void write_ensemble_csv(const std::filesystem::path& path, const ParticleEnsemble& e);
/// Columns t, mass, energy.
void write_conservation_csv(const std::filesystem::path& path, const std::vector<ConservationRow>& rows);

/// Snapshot i goes to u_<i>.psf1; manifest.json lists file names, t, eps and the potential.
void write_time_series(const std::filesystem::path& dir, const TimeSeries& series, double eps,
                       const PotentialSpec& V);
TimeSeries read_time_series(const std::filesystem::path& dir);

}  // namespace swt
