#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "swt/config.hpp"
#include "swt/liouville.hpp"

namespace swt {

/// Average over each bin [x_i - h/2, x_i + h/2] of the piecewise-linear interpolant of
/// samples `v` on `src` (zero outside src).
std::vector<double> bin_average(const Axis& src, const std::vector<double>& v, const Axis& bins);

struct TransformResult {
  /// Largest |k_peak - ridge| of the SWT over the interior where the envelope exceeds 0.5
  /// (f_eps only, else NaN).
  double ridge_deviation = 0.0;
  /// Interference measure: negative L1 mass over total L1 mass, WT divided by SWT (NaN when
  /// the WT has no negative part).
  double interference_suppression = 0.0;
  double max_abs_wigner = 0.0;
  double min_spectrogram = 0.0;
  std::vector<std::string> files;
};

/// WT, SWT and spectrogram of the initial condition: PSF2 fields and marginal CSVs.
TransformResult run_transform(const ExperimentConfig& cfg, const std::filesystem::path& out);

struct SnapshotErrors {
  double t = 0.0;
  /// Normalized L1 distance of the transported marginal to the exact |u|^2 (bin averaged).
  double swt_error = 0.0;
  double spectrogram_error = 0.0;
  /// Normalized L1 distance of the transported marginal to its own t = 0 value.
  double swt_drift = 0.0;
  double spectrogram_drift = 0.0;
};

struct RunConservation {
  std::vector<ConservationRow> rows;
  /// Particle quadrature: max relative change of mass and energy against t = 0.
  double mass_drift = 0.0;
  double energy_drift = 0.0;
  /// Mass of the projected marginal against the particle mass at t = 0.
  double marginal_mass_drift = 0.0;
};

struct CaseStudyReport {
  std::string name;
  std::string ground_truth;
  std::size_t particles_swt = 0;
  std::size_t particles_spectrogram = 0;
  std::vector<SnapshotErrors> snapshots;
  RunConservation swt;
  RunConservation spectrogram;
};

/// Ground truth, SWT + Liouville and spectrogram + Liouville over cfg.snapshot_times().
/// Writes config.yaml, marginal_<i>.csv (x, swt, spectrogram, exact), errors.csv,
/// conservation_{swt,spectrogram}.csv and report.json into `out`.
CaseStudyReport run_casestudy(const ExperimentConfig& cfg, const std::filesystem::path& out);
/// Uses the potential the case-study name fixes (free, harmonic, uniform).
CaseStudyReport run_casestudy(const std::string& name, ExperimentConfig cfg, const std::filesystem::path& out);

struct EvolveResult {
  std::vector<ConservationRow> conservation;
  std::vector<std::string> files;
};

/// Liouville evolution of the configured SWT: per snapshot a PSF2 field on a grid that
/// follows the particles, the ensemble CSV, plus the conservation CSV and the split-step
/// wavefunction series (wavefunction/manifest.json).
EvolveResult run_evolve(const ExperimentConfig& cfg, const std::filesystem::path& out);

/// Writes cfg.to_yaml() as out/config.yaml.
void write_config_echo(const ExperimentConfig& cfg, const std::filesystem::path& out);

}  // namespace swt
