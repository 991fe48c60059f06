#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "swt/phasespace.hpp"
#include "swt/reference.hpp"
#include "swt/symbol.hpp"

namespace swt {

// Characteristics of  dW/dt + 2 pi k dW/dx - V'(x)/(2 pi) dW/dk = 0:
//   dx/dt = 2 pi k,  dk/dt = -V'(x) / (2 pi).

struct PhasePoint {
  double x = 0.0;
  double k = 0.0;
};

PhasePoint hamilton_rhs(const PotentialSpec& V, double x, double k);

/// One classic RK4 step of length h (h may be negative).
PhasePoint rk4_step(const PotentialSpec& V, PhasePoint p, double h);
/// RK4 over [0, t] with ceil(|t| / dt) equal steps.
PhasePoint rk4_flow(const PotentialSpec& V, PhasePoint p, double t, double dt);

/// Closed-form flow for V = a x^s, s in {0, 1, 2}; throws Unsupported otherwise.
PhasePoint exact_flow(double a, int s, double t, double x, double k);

/// Row-major 2x2 matrix.
using Mat2 = std::array<double, 4>;

/// Forward flow map over time t.  Exact kinds are affine: p -> linear * p + offset.
class FlowMap {
 public:
  enum class Kind { exact_s0, exact_s1, exact_s2, numeric };

  /// Exact when V is a monomial of degree <= 2, numeric RK4 with step dt otherwise.
  static FlowMap for_potential(const PotentialSpec& V, double t, double dt = 1e-3);
  static FlowMap exact(double a, int s, double t);

  Kind kind() const { return kind_; }
  double t() const { return t_; }
  bool is_exact() const { return kind_ != Kind::numeric; }
  PhasePoint operator()(PhasePoint p) const;
  /// Linear part; throws Unsupported for numeric flows.
  Mat2 linear() const;
  /// Same flow run backwards in time.
  FlowMap inverse() const;

 private:
  Kind kind_ = Kind::exact_s0;
  double a_ = 0.0;
  double t_ = 0.0;
  double dt_ = 1e-3;
  PotentialSpec V_;
};

const char* to_string(FlowMap::Kind kind);

/// Particles on the nodes of a seed grid.  Densities never change along trajectories.
struct ParticleEnsemble {
  std::vector<PhasePoint> positions;
  std::vector<double> densities;
  /// Seed node (ix, ik) of each particle.
  std::vector<std::array<std::size_t, 2>> seed_nodes;
  PhaseSpaceGrid seed_grid;

  std::size_t size() const { return positions.size(); }
};

/// Nodes with |W0| > tol * max|W0| plus `halo` rings of neighbouring nodes.
ParticleEnsemble seed_particles(const PhaseSpaceField& w0, double tol, int halo = 3);

/// RK4 propagation of every particle over time t with step at most dt.
ParticleEnsemble propagate(const ParticleEnsemble& ensemble, const PotentialSpec& V, double t, double dt);
/// Moves particles with a given flow map.
ParticleEnsemble propagate(const ParticleEnsemble& ensemble, const FlowMap& flow);

/// Coordinates in which the moving least squares weights and basis are set up.
///   seed:    the node is mapped back to seed-lattice coordinates through a local affine fit of
///            the particle motion; stencil = the (2 degree + 1)^2 seed neighbours.  Insensitive
///            to the stretching the flow applies to the particle cloud.
///   current: k nearest particles in the current positions (scaled by the seed steps).
enum class MlsFrame { seed, current };

struct MlsOptions {
  int degree = 2;
  MlsFrame frame = MlsFrame::seed;
  /// k for the current frame.
  std::size_t neighbours = 20;
  /// Current frame: nodes farther than this many local particle spacings from every particle
  /// are set to zero.  The seed frame zeroes nodes that map outside the seeded set.
  double hull_margin = 2.0;
};

/// Moving least squares interpolation of the particle densities onto `grid`.  Falls back to
/// lower degree where the local stencil is degenerate; exact at nodes that coincide with a
/// particle.
PhaseSpaceField interpolate_to_grid(const ParticleEnsemble& ensemble, const PhaseSpaceGrid& grid,
                                    const MlsOptions& opts = {});

/// Backward characteristics from each node of `grid` and Lagrange interpolation of W0
/// (`order` points per axis); zero where the foot point leaves the W0 grid.
PhaseSpaceField semi_lagrangian_evolve(const PhaseSpaceField& w0, const PotentialSpec& V, double t, double dt,
                                       const PhaseSpaceGrid& grid, int order = 8);
/// Same with an explicit flow over time t (its inverse is applied to the nodes).
PhaseSpaceField semi_lagrangian_evolve(const PhaseSpaceField& w0, const FlowMap& flow, const PhaseSpaceGrid& grid,
                                       int order = 8);

/// Lagrange interpolation of a sampled field at an arbitrary point (0 outside the grid).
double interpolate_field(const PhaseSpaceField& w, double x, double k, int order = 8);

/// Covariance of the kernel after the flow: Phi Sigma Phi^T with Phi the linear part.
KernelCovariance transformed_covariance(const KernelCovariance& cov, const FlowMap& flow);

/// Exactly evolved WT smoothed with the flow-distorted kernel.
PhaseSpaceField kernel_evolution_reference(const PhaseSpaceField& w_t, const SmoothingParams& params,
                                           const FlowMap& flow);
/// Same computed from the exactly evolved wavefunction, without sampling the WT.
PhaseSpaceField kernel_evolution_reference(const ComplexField1D& u_t, const SmoothingParams& params,
                                           const FlowMap& flow, const PhaseSpaceGrid& grid);

struct ConservationRow {
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
};

/// Quadratures of the integral of W and of H * W for each snapshot.
std::vector<ConservationRow> conservation_report(const std::vector<double>& times,
                                                 const std::vector<PhaseSpaceField>& fields,
                                                 const PolynomialSymbol& hamiltonian);
/// Same quadratures on the particles (each carries one seed cell of area).
ConservationRow ensemble_moments(const ParticleEnsemble& ensemble, const PolynomialSymbol& hamiltonian, double t);

/// dk-marginal of the transported density, averaged over each bin of `x_bins` (bin i is
/// [x_i - h/2, x_i + h/2]).  The seed lattice is carried along as a triangle mesh with linear
/// density, so the projection is exact for that representation and conserves mass.
std::vector<double> mesh_marginal(const ParticleEnsemble& ensemble, const Axis& x_bins);

/// Normalized L1 distance sum|a - b| / sum|b|.
double normalized_l1(std::span<const double> a, std::span<const double> b);

}  // namespace swt
