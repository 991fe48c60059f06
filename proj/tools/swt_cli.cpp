#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "swt/acceptance.hpp"
#include "swt/errors.hpp"
#include "swt/experiments.hpp"

namespace {

struct Overrides {
  std::string config;
  std::string out;
  std::optional<std::size_t> resolution;
  std::optional<double> sigma_x, sigma_k, eps;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "YAML experiment config (see docs/config.md)")->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "output directory (overrides output_dir)");
  cmd->add_option("--resolution", o.resolution, "phase-space nodes per axis (sets nx and nk)")->check(CLI::Range(2, 1 << 14));
  cmd->add_option("--sigma-x", o.sigma_x, "SWT smoothing width in x")->check(CLI::NonNegativeNumber);
  cmd->add_option("--sigma-k", o.sigma_k, "SWT smoothing width in k")->check(CLI::NonNegativeNumber);
  cmd->add_option("--eps", o.eps, "semiclassical parameter")->check(CLI::PositiveNumber);
}

swt::ExperimentConfig resolve(const Overrides& o, const std::string& preset) {
  auto cfg = o.config.empty() ? swt::ExperimentConfig::preset(preset) : swt::ExperimentConfig::load(o.config);
  if (o.resolution) cfg.nx = cfg.nk = *o.resolution;
  if (o.sigma_x) cfg.sigma_x = *o.sigma_x;
  if (o.sigma_k) cfg.sigma_k = *o.sigma_k;
  if (o.eps) cfg.eps = *o.eps;
  if (!o.out.empty()) cfg.output_dir = o.out;
  cfg.validate();
  return cfg;
}

std::string num(double v) {
  if (!std::isfinite(v)) return "n/a";
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Smoothed Wigner transforms, their evolution equations and Liouville case studies"};
  app.require_subcommand(1);

  Overrides o_transform, o_case, o_evolve;
  auto* transform = app.add_subcommand("transform", "WT, SWT and spectrogram of the initial condition");
  add_common(transform, o_transform);

  auto* casestudy = app.add_subcommand("casestudy", "ground truth vs SWT and spectrogram Liouville runs");
  std::string case_name;
  casestudy->add_option("name", case_name, "free, harmonic or uniform")
      ->required()
      ->check(CLI::IsMember({"free", "harmonic", "uniform"}));
  add_common(casestudy, o_case);

  auto* evolve = app.add_subcommand("evolve", "particle evolution of the SWT with snapshots and conservation report");
  add_common(evolve, o_evolve);

  auto* verify = app.add_subcommand("verify", "acceptance criteria and invariant checks");
  std::string verify_out = "verify_out";
  std::vector<int> only;
  verify->add_option("--out", verify_out, "scratch directory for the case-study runs");
  verify->add_option("--only", only, "criterion numbers to run");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*transform) {
      const auto cfg = resolve(o_transform, "transform");
      const auto r = swt::run_transform(cfg, cfg.output_dir);
      std::cout << "wrote";
      for (const auto& f : r.files) std::cout << ' ' << f;
      std::cout << " to " << cfg.output_dir << "\n"
                << "max |WT| " << num(r.max_abs_wigner) << ", min spectrogram " << num(r.min_spectrogram)
                << ", ridge deviation " << num(r.ridge_deviation) << ", interference suppression "
                << num(r.interference_suppression) << "\n";
    } else if (*casestudy) {
      const auto cfg = resolve(o_case, case_name);
      const auto r = swt::run_casestudy(case_name, cfg, cfg.output_dir);
      std::cout << "case " << r.name << ", ground truth: " << r.ground_truth << ", particles " << r.particles_swt
                << " (SWT) / " << r.particles_spectrogram << " (spectrogram)\n";
      std::cout << "t, SWT error, spectrogram error, SWT drift, spectrogram drift\n";
      for (const auto& s : r.snapshots)
        std::cout << num(s.t) << ", " << num(s.swt_error) << ", " << num(s.spectrogram_error) << ", "
                  << num(s.swt_drift) << ", " << num(s.spectrogram_drift) << "\n";
      std::cout << "SWT run: mass drift " << num(std::max(r.swt.mass_drift, r.swt.marginal_mass_drift))
                << ", energy drift " << num(r.swt.energy_drift) << "\n"
                << "report in " << cfg.output_dir << "/report.json\n";
    } else if (*evolve) {
      const auto cfg = resolve(o_evolve, "harmonic");
      const auto r = swt::run_evolve(cfg, cfg.output_dir);
      std::cout << "t, mass, energy\n";
      for (const auto& c : r.conservation) std::cout << num(c.t) << ", " << num(c.mass) << ", " << num(c.energy) << "\n";
      std::cout << r.files.size() << " files in " << cfg.output_dir << "\n";
    } else if (*verify) {
      swt::AcceptanceOptions opts;
      opts.work_dir = verify_out;
      opts.only = only;
      const auto results = swt::run_verification(opts, &std::cout);
      const bool ok = swt::all_gating_passed(results);
      std::cout << (ok ? "verify: all checks passed" : "verify: FAILED") << std::endl;
      return ok ? 0 : 1;
    }
  } catch (const swt::ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
