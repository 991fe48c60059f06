#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "swt/grid.hpp"
#include "swt/phasespace.hpp"
#include "swt/reference.hpp"

namespace swt {

struct InitialCondition {
  enum class Type { f_eps, gaussian_sum, hermite, file };

  Type type = Type::f_eps;
  /// gaussian_sum: packets; empty means the three-packet set of the free case study.
  std::vector<GaussianPacket> packets;
  /// hermite: order and oscillator frequency.
  int n = 0;
  double omega = 1.0;
  /// file: PSF1 wavefunction, resampled onto the field axis by linear interpolation.
  std::string path;
  /// Multiplies the initial condition; 0 gives the zero field.
  double amplitude = 1.0;

  bool operator==(const InitialCondition& o) const;
};

const char* to_string(InitialCondition::Type type);

/// Everything one experiment needs.  Text form is YAML; see docs/config.md.
struct ExperimentConfig {
  std::string name = "custom";
  PotentialSpec potential;
  double eps = 0.7;
  /// Smoothing of the SWT runs.
  double sigma_x = 0.5;
  double sigma_k = 0.5;
  /// Window width of the spectrogram runs (sigma_k = 1 / sigma_x).
  double spectrogram_sigma_x = 1.0;
  InitialCondition initial;

  /// Wavefunction axis: [x_min, x_max) with step dx.
  double field_x_min = -8.0;
  double field_x_max = 8.0;
  double field_dx = 1.0 / 64.0;

  /// Phase-space seed grid: x nodes taken from the field axis over [x_min, x_max], nx of them
  /// as nearly as the field step allows; k centred over [-k_half, k_half) with nk nodes.
  double phase_x_min = -3.0;
  double phase_x_max = 3.0;
  std::size_t nx = 256;
  double k_half = 8.0;
  std::size_t nk = 256;

  /// Snapshot times; empty means a geometric schedule ending at t_final.
  std::vector<double> times;
  double t_final = 1.0;
  /// Split-step step of the ground-truth solver.
  double dt = 1e-3;
  /// RK4 step of the particle trajectories.
  double rk4_dt = 1e-3;
  double seed_tolerance = 1e-6;
  int halo = 3;
  /// Width of the x-bins of the transported marginals.
  double marginal_bin = 0.05;
  std::string output_dir = "out";

  /// Throws ParseError naming the offending field.
  void validate() const;
  /// Full-precision YAML; parse(to_yaml()) reproduces the config exactly.
  std::string to_yaml() const;
  static ExperimentConfig parse(const std::string& yaml_text);
  static ExperimentConfig load(const std::string& path);
  /// Built-in setups: "free", "harmonic", "uniform", "transform".
  static ExperimentConfig preset(const std::string& name);

  Axis field_axis() const;
  PhaseSpaceGrid phase_grid() const;
  SmoothingParams smoothing() const { return SmoothingParams(sigma_x, sigma_k, eps); }
  SmoothingParams spectrogram_params() const {
    return SmoothingParams(spectrogram_sigma_x, 1.0 / spectrogram_sigma_x, eps);
  }
  /// `times` if given, else t_final * 2^-j for j = 3, 2, 1, 0.
  std::vector<double> snapshot_times() const;
  /// Samples the initial condition on field_axis().
  ComplexField1D initial_field() const;

  bool operator==(const ExperimentConfig& o) const;
};

}  // namespace swt
