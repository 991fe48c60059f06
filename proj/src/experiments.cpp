#include "swt/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"
#include "swt/errors.hpp"
#include "swt/io.hpp"
#include "swt/weyl.hpp"

namespace swt {

namespace fs = std::filesystem;

std::vector<double> bin_average(const Axis& src, const std::vector<double>& v, const Axis& bins) {
  if (v.size() != src.count()) throw InvalidArgument("bin_average: sample count differs from the axis");
  const std::size_t n = v.size();
  const double h = src.step();
  // Cumulative integral of the piecewise-linear interpolant at the nodes.
  std::vector<double> cum(n, 0.0);
  for (std::size_t j = 1; j < n; ++j) cum[j] = cum[j - 1] + 0.5 * h * (v[j - 1] + v[j]);
  auto F = [&](double x) {
    const double s = src.index_of(x);
    if (s <= 0.0) return 0.0;
    if (s >= static_cast<double>(n - 1)) return cum[n - 1];
    const auto j = static_cast<std::size_t>(s);
    const double d = (s - static_cast<double>(j)) * h;
    return cum[j] + d * v[j] + d * d / (2.0 * h) * (v[j + 1] - v[j]);
  };
  std::vector<double> out(bins.count());
  const double w = bins.step();
  for (std::size_t i = 0; i < bins.count(); ++i) out[i] = (F(bins[i] + 0.5 * w) - F(bins[i] - 0.5 * w)) / w;
  return out;
}

void write_config_echo(const ExperimentConfig& cfg, const fs::path& out) {
  atomic_write(out / "config.yaml", cfg.to_yaml());
}

namespace {

std::vector<double> squared_modulus(const ComplexField1D& u) {
  std::vector<double> r(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) r[i] = std::norm(u[i]);
  return r;
}

void write_marginals(const fs::path& path, const PhaseSpaceField& w) {
  const auto mx = marginal_k(w), mk = marginal_x(w);
  write_table_csv(path.string() + "_x.csv", {"x", "value"}, {w.grid().x_axis.samples(), mx});
  write_table_csv(path.string() + "_k.csv", {"k", "value"}, {w.grid().k_axis.samples(), mk});
}

/// L1 mass of the negative part over the L1 mass; 0 for a zero field.
double negative_fraction(const PhaseSpaceField& w) {
  double neg = 0.0, all = 0.0;
  for (double v : w.values()) {
    all += std::abs(v);
    if (v < 0.0) neg -= v;
  }
  return all > 0.0 ? neg / all : 0.0;
}

}  // namespace

TransformResult run_transform(const ExperimentConfig& cfg, const fs::path& out) {
  cfg.validate();
  write_config_echo(cfg, out);
  const auto u = cfg.initial_field();
  const auto grid = cfg.phase_grid();
  const auto wt = wigner(u, EpsilonParam(cfg.eps), grid);
  const auto swt = smoothed_wigner(u, cfg.smoothing(), grid);
  const auto spec = spectrogram(u, cfg.spectrogram_params(), grid);

  TransformResult r;
  for (const auto& [name, w] : {std::pair<const char*, const PhaseSpaceField*>{"wigner", &wt},
                                {"swt", &swt},
                                {"spectrogram", &spec}}) {
    write_psf2(out / (std::string(name) + ".psf2"), *w);
    write_marginals(out / (std::string(name) + "_marginal"), *w);
    r.files.push_back(std::string(name) + ".psf2");
  }
  r.max_abs_wigner = wt.max_abs();
  r.min_spectrogram = *std::min_element(spec.values().begin(), spec.values().end());

  r.ridge_deviation = std::numeric_limits<double>::quiet_NaN();
  if (cfg.initial.type == InitialCondition::Type::f_eps && cfg.initial.amplitude != 0.0) {
    r.ridge_deviation = 0.0;
    for (std::size_t i = 0; i < grid.nx(); ++i) {
      const double x = grid.x_axis[i];
      if (f_eps_envelope(x) < 0.5 || std::abs(x) > 2.0) continue;
      std::size_t best = 0;
      for (std::size_t j = 1; j < grid.nk(); ++j)
        if (swt(i, j) > swt(i, best)) best = j;
      r.ridge_deviation = std::max(r.ridge_deviation, std::abs(grid.k_axis[best] - f_eps_ridge(x)));
    }
  }
  const double neg_wt = negative_fraction(wt), neg_swt = negative_fraction(swt);
  r.interference_suppression = neg_swt > 0.0 ? neg_wt / neg_swt : std::numeric_limits<double>::infinity();
  if (neg_wt == 0.0) r.interference_suppression = std::numeric_limits<double>::quiet_NaN();

  nlohmann::json j;
  j["ridge_deviation"] = std::isnan(r.ridge_deviation) ? nlohmann::json() : nlohmann::json(r.ridge_deviation);
  j["interference_suppression"] =
      std::isfinite(r.interference_suppression) ? nlohmann::json(r.interference_suppression) : nlohmann::json();
  j["max_abs_wigner"] = r.max_abs_wigner;
  j["min_spectrogram"] = r.min_spectrogram;
  atomic_write(out / "report.json", j.dump(2) + "\n");
  return r;
}

namespace {

struct GroundTruth {
  std::string method;
  /// |u|^2 bin-averaged per snapshot.
  std::vector<std::vector<double>> marginals;
};

GroundTruth ground_truth(const ExperimentConfig& cfg, const std::vector<double>& times, const Axis& bins) {
  GroundTruth g;
  const auto& V = cfg.potential;
  const bool quadratic = V.polynomial().degree() <= 2;
  if (cfg.initial.type == InitialCondition::Type::gaussian_sum && quadratic) {
    g.method = "closed-form Gaussian packets";
    const auto packets = cfg.initial.packets.empty() ? three_gaussian_packets() : cfg.initial.packets;
    const Axis fine = make_axis(bins.start() - bins.step(), cfg.field_dx / 2.0,
                                static_cast<std::size_t>((bins.length() + 2.0 * bins.step()) / (cfg.field_dx / 2.0)));
    for (double t : times) {
      ComplexField1D u(fine);
      for (const auto& p : packets) u += evolve_gaussian_packet(p, V, cfg.eps, t).sample(fine);
      u *= cfg.initial.amplitude;
      g.marginals.push_back(bin_average(fine, squared_modulus(u), bins));
    }
    return g;
  }
  const auto u0 = cfg.initial_field();
  if (cfg.initial.type == InitialCondition::Type::hermite && V.kind() == PotentialSpec::Kind::harmonic &&
      std::abs(V.omega() - cfg.initial.omega) < 1e-12 * cfg.initial.omega) {
    g.method = "stationary eigenfunction";
    const auto m = bin_average(u0.axis(), squared_modulus(u0), bins);
    g.marginals.assign(times.size(), m);
    return g;
  }
  g.method = "split-step";
  const auto series = split_step_solve(u0, V, cfg.eps, times.back(), cfg.dt, times);
  for (double t : times) {
    const auto it = std::find(series.t.begin(), series.t.end(), t);
    if (it == series.t.end()) throw SolverAbort("split-step did not store t = " + std::to_string(t));
    const auto& u = series.u[static_cast<std::size_t>(it - series.t.begin())];
    g.marginals.push_back(bin_average(u.axis(), squared_modulus(u), bins));
  }
  return g;
}

struct Transported {
  std::vector<ParticleEnsemble> snapshots;  // index 0 is t = 0
};

Transported transport(const ParticleEnsemble& e0, const PotentialSpec& V, const std::vector<double>& times,
                      double dt) {
  Transported r;
  r.snapshots.push_back(e0);
  double t_prev = 0.0;
  for (double t : times) {
    r.snapshots.push_back(propagate(r.snapshots.back(), V, t - t_prev, dt));
    t_prev = t;
  }
  return r;
}

void x_range(const ParticleEnsemble& e, double& lo, double& hi) {
  for (const auto& p : e.positions) {
    lo = std::min(lo, p.x);
    hi = std::max(hi, p.x);
  }
}

RunConservation conservation(const Transported& tr, const std::vector<double>& t_all, const PolynomialSymbol& H,
                             const std::vector<std::vector<double>>& marginals, double bin_width) {
  RunConservation c;
  for (std::size_t i = 0; i < tr.snapshots.size(); ++i) c.rows.push_back(ensemble_moments(tr.snapshots[i], H, t_all[i]));
  const auto& r0 = c.rows.front();
  for (std::size_t i = 0; i < c.rows.size(); ++i) {
    const auto& r = c.rows[i];
    c.mass_drift = std::max(c.mass_drift, std::abs(r.mass - r0.mass) / std::abs(r0.mass));
    c.energy_drift = std::max(c.energy_drift, std::abs(r.energy - r0.energy) / std::max(std::abs(r0.energy), 1e-300));
    double m = 0.0;
    for (double v : marginals[i]) m += v * bin_width;
    c.marginal_mass_drift = std::max(c.marginal_mass_drift, std::abs(m - r0.mass) / std::abs(r0.mass));
  }
  return c;
}

nlohmann::json conservation_json(const RunConservation& c) {
  return {{"mass_drift", c.mass_drift},
          {"energy_drift", c.energy_drift},
          {"marginal_mass_drift", c.marginal_mass_drift}};
}

}  // namespace

CaseStudyReport run_casestudy(const ExperimentConfig& cfg, const fs::path& out) {
  cfg.validate();
  write_config_echo(cfg, out);
  CaseStudyReport rep;
  rep.name = cfg.name;
  const auto times = cfg.snapshot_times();
  std::vector<double> t_all{0.0};
  t_all.insert(t_all.end(), times.begin(), times.end());

  const auto u0 = cfg.initial_field();
  const auto grid = cfg.phase_grid();
  const auto w_swt = smoothed_wigner(u0, cfg.smoothing(), grid);
  const auto w_spec = spectrogram(u0, cfg.spectrogram_params(), grid);
  if (w_swt.max_abs() == 0.0) throw InvalidArgument("initial condition is identically zero");

  const auto e_swt = seed_particles(w_swt, cfg.seed_tolerance, cfg.halo);
  const auto e_spec = seed_particles(w_spec, cfg.seed_tolerance, cfg.halo);
  rep.particles_swt = e_swt.size();
  rep.particles_spectrogram = e_spec.size();
  const auto tr_swt = transport(e_swt, cfg.potential, times, cfg.rk4_dt);
  const auto tr_spec = transport(e_spec, cfg.potential, times, cfg.rk4_dt);

  // One bin axis covering every snapshot of both runs.
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto* tr : {&tr_swt, &tr_spec})
    for (const auto& e : tr->snapshots) x_range(e, lo, hi);
  const double h = cfg.marginal_bin;
  const double start = std::floor(lo / h) * h - h;
  const auto nbins = static_cast<std::size_t>(std::ceil((hi - start) / h)) + 2;
  const Axis bins = make_axis(start, h, nbins);

  std::vector<std::vector<double>> m_swt, m_spec;
  for (std::size_t i = 0; i < t_all.size(); ++i) {
    m_swt.push_back(mesh_marginal(tr_swt.snapshots[i], bins));
    m_spec.push_back(mesh_marginal(tr_spec.snapshots[i], bins));
  }
  const auto truth = ground_truth(cfg, t_all, bins);
  rep.ground_truth = truth.method;

  for (std::size_t i = 0; i < t_all.size(); ++i) {
    SnapshotErrors s;
    s.t = t_all[i];
    s.swt_error = normalized_l1(m_swt[i], truth.marginals[i]);
    s.spectrogram_error = normalized_l1(m_spec[i], truth.marginals[i]);
    s.swt_drift = normalized_l1(m_swt[i], m_swt[0]);
    s.spectrogram_drift = normalized_l1(m_spec[i], m_spec[0]);
    rep.snapshots.push_back(s);
    write_table_csv(out / ("marginal_" + std::to_string(i) + ".csv"), {"x", "swt", "spectrogram", "exact"},
                    {bins.samples(), m_swt[i], m_spec[i], truth.marginals[i]});
  }
  const auto H = SchrodingerSymbol{cfg.potential.polynomial(), cfg.eps}.hamiltonian();
  rep.swt = conservation(tr_swt, t_all, H, m_swt, h);
  rep.spectrogram = conservation(tr_spec, t_all, H, m_spec, h);
  write_conservation_csv(out / "conservation_swt.csv", rep.swt.rows);
  write_conservation_csv(out / "conservation_spectrogram.csv", rep.spectrogram.rows);

  std::vector<double> c_t, c_se, c_pe, c_sd, c_pd;
  for (const auto& s : rep.snapshots) {
    c_t.push_back(s.t);
    c_se.push_back(s.swt_error);
    c_pe.push_back(s.spectrogram_error);
    c_sd.push_back(s.swt_drift);
    c_pd.push_back(s.spectrogram_drift);
  }
  write_table_csv(out / "errors.csv", {"t", "swt_error", "spectrogram_error", "swt_drift", "spectrogram_drift"},
                  {c_t, c_se, c_pe, c_sd, c_pd});

  nlohmann::json j;
  j["name"] = rep.name;
  j["ground_truth"] = rep.ground_truth;
  j["particles"] = {{"swt", rep.particles_swt}, {"spectrogram", rep.particles_spectrogram}};
  j["snapshots"] = nlohmann::json::array();
  for (const auto& s : rep.snapshots)
    j["snapshots"].push_back({{"t", s.t},
                              {"swt_error", s.swt_error},
                              {"spectrogram_error", s.spectrogram_error},
                              {"swt_drift", s.swt_drift},
                              {"spectrogram_drift", s.spectrogram_drift}});
  j["conservation"] = {{"swt", conservation_json(rep.swt)}, {"spectrogram", conservation_json(rep.spectrogram)}};
  atomic_write(out / "report.json", j.dump(2) + "\n");
  return rep;
}

CaseStudyReport run_casestudy(const std::string& name, ExperimentConfig cfg, const fs::path& out) {
  cfg.potential = ExperimentConfig::preset(name).potential;
  cfg.name = name;
  return run_casestudy(cfg, out);
}

EvolveResult run_evolve(const ExperimentConfig& cfg, const fs::path& out) {
  cfg.validate();
  write_config_echo(cfg, out);
  EvolveResult r;
  const auto times = cfg.snapshot_times();
  const auto u0 = cfg.initial_field();
  const auto grid0 = cfg.phase_grid();
  const auto w0 = smoothed_wigner(u0, cfg.smoothing(), grid0);
  if (w0.max_abs() == 0.0) throw InvalidArgument("initial condition is identically zero");
  const auto e0 = seed_particles(w0, cfg.seed_tolerance, cfg.halo);
  const auto tr = transport(e0, cfg.potential, times, cfg.rk4_dt);
  const auto H = SchrodingerSymbol{cfg.potential.polynomial(), cfg.eps}.hamiltonian();

  std::vector<double> t_all{0.0};
  t_all.insert(t_all.end(), times.begin(), times.end());
  for (std::size_t i = 0; i < tr.snapshots.size(); ++i) {
    const auto& e = tr.snapshots[i];
    r.conservation.push_back(ensemble_moments(e, H, t_all[i]));
    // Output grid: the seed grid's node counts over the bounding box of the particles.
    double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, klo = xlo, khi = -xlo;
    for (const auto& p : e.positions) {
      xlo = std::min(xlo, p.x);
      xhi = std::max(xhi, p.x);
      klo = std::min(klo, p.k);
      khi = std::max(khi, p.k);
    }
    const std::size_t nx = grid0.nx(), nk = grid0.nk();
    const PhaseSpaceGrid g{make_axis(xlo, (xhi - xlo) / static_cast<double>(nx - 1), nx),
                           make_axis(klo, (khi - klo) / static_cast<double>(nk - 1), nk)};
    auto w = interpolate_to_grid(e, g);
    const std::string stem = "snapshot_" + std::to_string(i);
    write_psf2(out / (stem + ".psf2"), w);
    write_ensemble_csv(out / (stem + "_ensemble.csv"), e);
    r.files.push_back(stem + ".psf2");
    r.files.push_back(stem + "_ensemble.csv");
  }
  write_conservation_csv(out / "conservation.csv", r.conservation);
  r.files.push_back("conservation.csv");

  const auto series = split_step_solve(u0, cfg.potential, cfg.eps, times.back(), cfg.dt, times);
  write_time_series(out / "wavefunction", series, cfg.eps, cfg.potential);
  r.files.push_back("wavefunction/manifest.json");
  return r;
}

}  // namespace swt
