#include "swt/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "swt/errors.hpp"
#include "swt/io.hpp"

namespace swt {

namespace {

bool same_packets(const std::vector<GaussianPacket>& a, const std::vector<GaussianPacket>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].K != b[i].K || a[i].Lambda != b[i].Lambda || a[i].M != b[i].M) return false;
  return true;
}

bool same_potential(const PotentialSpec& a, const PotentialSpec& b) {
  return a.kind() == b.kind() && a.polynomial().coefficients() == b.polynomial().coefficients();
}

[[noreturn]] void fail(const YAML::Node& node, const std::string& field, const std::string& msg) {
  std::ostringstream o;
  if (node.IsDefined() && !node.Mark().is_null()) o << "line " << node.Mark().line + 1 << ": ";
  o << "field '" << field << "': " << msg;
  throw ParseError(o.str());
}

/// Rejects keys outside `allowed` so that typos do not pass silently.
void check_keys(const YAML::Node& map, const std::string& prefix, const std::set<std::string>& allowed) {
  if (!map.IsMap()) fail(map, prefix.empty() ? "<root>" : prefix, "expected a mapping");
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) fail(kv.first, prefix.empty() ? key : prefix + "." + key, "unknown key");
  }
}

template <class T>
T read(const YAML::Node& map, const std::string& key, const std::string& field, T fallback) {
  const YAML::Node n = map[key];
  if (!n) return fallback;
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    fail(n, field, "cannot convert '" + (n.IsScalar() ? n.Scalar() : std::string("<non-scalar>")) + "'");
  }
}

cplx read_complex(const YAML::Node& map, const std::string& key, const std::string& field, cplx fallback) {
  const YAML::Node n = map[key];
  if (!n) return fallback;
  if (!n.IsSequence() || n.size() != 2) fail(n, field, "expected [re, im]");
  try {
    return {n[0].as<double>(), n[1].as<double>()};
  } catch (const YAML::Exception&) {
    fail(n, field, "expected two numbers");
  }
}

void emit_complex(YAML::Emitter& e, cplx z) {
  e << YAML::Flow << YAML::BeginSeq << z.real() << z.imag() << YAML::EndSeq;
}

PotentialSpec parse_potential(const YAML::Node& n) {
  if (!n.IsMap()) fail(n, "potential", "expected a mapping with 'kind'");
  const auto kind = read<std::string>(n, "kind", "potential.kind", "");
  if (kind == "free") {
    check_keys(n, "potential", {"kind"});
    return PotentialSpec::free();
  }
  if (kind == "uniform_field") {
    check_keys(n, "potential", {"kind", "c"});
    if (!n["c"]) fail(n, "potential.c", "required for uniform_field");
    return PotentialSpec::uniform_field(read<double>(n, "c", "potential.c", 0.0));
  }
  if (kind == "harmonic") {
    check_keys(n, "potential", {"kind", "omega_squared"});
    const double w2 = read<double>(n, "omega_squared", "potential.omega_squared", 0.0);
    if (!(w2 > 0.0)) fail(n["omega_squared"], "potential.omega_squared", "must be > 0");
    return PotentialSpec::harmonic(w2);
  }
  if (kind == "polynomial" || kind == "general_polynomial") {
    check_keys(n, "potential", {"kind", "coefficients"});
    return PotentialSpec::polynomial(
        read<std::vector<double>>(n, "coefficients", "potential.coefficients", std::vector<double>{}));
  }
  fail(n["kind"], "potential.kind", "expected free, uniform_field, harmonic or polynomial, got '" + kind + "'");
}

void emit_potential(YAML::Emitter& e, const PotentialSpec& V) {
  e << YAML::BeginMap;
  const auto& c = V.polynomial().coefficients();
  switch (V.kind()) {
    case PotentialSpec::Kind::free: e << YAML::Key << "kind" << YAML::Value << "free"; break;
    case PotentialSpec::Kind::uniform_field:
      e << YAML::Key << "kind" << YAML::Value << "uniform_field" << YAML::Key << "c" << YAML::Value << c.at(1);
      break;
    case PotentialSpec::Kind::harmonic:
      e << YAML::Key << "kind" << YAML::Value << "harmonic" << YAML::Key << "omega_squared" << YAML::Value
        << 2.0 * c.at(2);
      break;
    case PotentialSpec::Kind::general_polynomial:
      e << YAML::Key << "kind" << YAML::Value << "polynomial" << YAML::Key << "coefficients" << YAML::Value
        << YAML::Flow << c;
      break;
  }
  e << YAML::EndMap;
}

InitialCondition parse_initial(const YAML::Node& n) {
  if (!n.IsMap()) fail(n, "initial_condition", "expected a mapping with 'type'");
  InitialCondition ic;
  const auto type = read<std::string>(n, "type", "initial_condition.type", "");
  ic.amplitude = read<double>(n, "amplitude", "initial_condition.amplitude", 1.0);
  if (type == "f_eps") {
    check_keys(n, "initial_condition", {"type", "amplitude"});
    ic.type = InitialCondition::Type::f_eps;
  } else if (type == "gaussian_sum") {
    check_keys(n, "initial_condition", {"type", "amplitude", "packets"});
    ic.type = InitialCondition::Type::gaussian_sum;
    if (const auto ps = n["packets"]) {
      if (!ps.IsSequence()) fail(ps, "initial_condition.packets", "expected a list");
      for (std::size_t i = 0; i < ps.size(); ++i) {
        const std::string f = "initial_condition.packets[" + std::to_string(i) + "]";
        check_keys(ps[i], f, {"K", "Lambda", "M"});
        GaussianPacket p;
        p.K = read_complex(ps[i], "K", f + ".K", p.K);
        p.Lambda = read_complex(ps[i], "Lambda", f + ".Lambda", p.Lambda);
        p.M = read_complex(ps[i], "M", f + ".M", p.M);
        if (!(p.K.real() > 0.0)) fail(ps[i]["K"], f + ".K", "real part must be > 0");
        ic.packets.push_back(p);
      }
    }
  } else if (type == "hermite") {
    check_keys(n, "initial_condition", {"type", "amplitude", "n", "omega"});
    ic.type = InitialCondition::Type::hermite;
    ic.n = read<int>(n, "n", "initial_condition.n", 0);
    ic.omega = read<double>(n, "omega", "initial_condition.omega", 1.0);
  } else if (type == "file") {
    check_keys(n, "initial_condition", {"type", "amplitude", "path"});
    ic.type = InitialCondition::Type::file;
    ic.path = read<std::string>(n, "path", "initial_condition.path", "");
  } else {
    fail(n["type"], "initial_condition.type", "expected f_eps, gaussian_sum, hermite or file, got '" + type + "'");
  }
  return ic;
}

void emit_initial(YAML::Emitter& e, const InitialCondition& ic) {
  e << YAML::BeginMap << YAML::Key << "type" << YAML::Value << to_string(ic.type);
  e << YAML::Key << "amplitude" << YAML::Value << ic.amplitude;
  switch (ic.type) {
    case InitialCondition::Type::f_eps: break;
    case InitialCondition::Type::gaussian_sum:
      e << YAML::Key << "packets" << YAML::Value << YAML::BeginSeq;
      for (const auto& p : ic.packets) {
        e << YAML::Flow << YAML::BeginMap;
        e << YAML::Key << "K" << YAML::Value;
        emit_complex(e, p.K);
        e << YAML::Key << "Lambda" << YAML::Value;
        emit_complex(e, p.Lambda);
        e << YAML::Key << "M" << YAML::Value;
        emit_complex(e, p.M);
        e << YAML::EndMap;
      }
      e << YAML::EndSeq;
      break;
    case InitialCondition::Type::hermite:
      e << YAML::Key << "n" << YAML::Value << ic.n << YAML::Key << "omega" << YAML::Value << ic.omega;
      break;
    case InitialCondition::Type::file: e << YAML::Key << "path" << YAML::Value << ic.path; break;
  }
  e << YAML::EndMap;
}

void require(bool ok, const std::string& field, const std::string& msg) {
  if (!ok) throw ParseError("field '" + field + "': " + msg);
}

}  // namespace

const char* to_string(InitialCondition::Type type) {
  switch (type) {
    case InitialCondition::Type::f_eps: return "f_eps";
    case InitialCondition::Type::gaussian_sum: return "gaussian_sum";
    case InitialCondition::Type::hermite: return "hermite";
    case InitialCondition::Type::file: return "file";
  }
  return "unknown";
}

bool InitialCondition::operator==(const InitialCondition& o) const {
  return type == o.type && same_packets(packets, o.packets) && n == o.n && omega == o.omega && path == o.path &&
         amplitude == o.amplitude;
}

bool ExperimentConfig::operator==(const ExperimentConfig& o) const {
  return name == o.name && same_potential(potential, o.potential) && eps == o.eps && sigma_x == o.sigma_x &&
         sigma_k == o.sigma_k && spectrogram_sigma_x == o.spectrogram_sigma_x && initial == o.initial &&
         field_x_min == o.field_x_min && field_x_max == o.field_x_max && field_dx == o.field_dx &&
         phase_x_min == o.phase_x_min && phase_x_max == o.phase_x_max && nx == o.nx && k_half == o.k_half &&
         nk == o.nk && times == o.times && t_final == o.t_final && dt == o.dt && rk4_dt == o.rk4_dt &&
         seed_tolerance == o.seed_tolerance && halo == o.halo && marginal_bin == o.marginal_bin &&
         output_dir == o.output_dir;
}

void ExperimentConfig::validate() const {
  auto finite_pos = [](double v) { return std::isfinite(v) && v > 0.0; };
  require(finite_pos(eps), "eps", "must be > 0");
  require(std::isfinite(sigma_x) && sigma_x >= 0.0, "smoothing.sigma_x", "must be >= 0");
  require(std::isfinite(sigma_k) && sigma_k >= 0.0, "smoothing.sigma_k", "must be >= 0");
  require(finite_pos(spectrogram_sigma_x), "smoothing.spectrogram_sigma_x", "must be > 0");
  require(finite_pos(field_dx), "field.dx", "must be > 0");
  require(field_x_max > field_x_min, "field.x_max", "must exceed field.x_min");
  require((field_x_max - field_x_min) / field_dx < 1e7, "field.dx", "too many samples");
  require(phase_x_max > phase_x_min, "phase_space.x_max", "must exceed phase_space.x_min");
  require(phase_x_min >= field_x_min && phase_x_max < field_x_max, "phase_space.x_min",
          "phase-space x range must lie inside the field axis");
  require(nx >= 2 && nk >= 2, "phase_space.nx", "nx and nk must be >= 2");
  require(finite_pos(k_half), "phase_space.k_half", "must be > 0");
  require(finite_pos(t_final), "t_final", "must be > 0");
  for (std::size_t i = 0; i < times.size(); ++i) {
    require(finite_pos(times[i]), "times", "entries must be > 0");
    require(i == 0 || times[i] > times[i - 1], "times", "must be strictly increasing");
  }
  require(finite_pos(dt), "dt", "must be > 0");
  require(finite_pos(rk4_dt), "rk4_dt", "must be > 0");
  require(seed_tolerance > 0.0 && seed_tolerance < 1.0, "seed_tolerance", "must lie in (0, 1)");
  require(halo >= 0, "halo", "must be >= 0");
  require(finite_pos(marginal_bin), "marginal_bin", "must be > 0");
  require(!output_dir.empty(), "output_dir", "must not be empty");
  require(std::isfinite(initial.amplitude), "initial_condition.amplitude", "must be finite");
  if (initial.type == InitialCondition::Type::hermite) {
    require(initial.n >= 0 && initial.n <= max_hermite_order, "initial_condition.n",
            "must lie in [0, " + std::to_string(max_hermite_order) + "]");
    require(finite_pos(initial.omega), "initial_condition.omega", "must be > 0");
  }
  if (initial.type == InitialCondition::Type::file)
    require(!initial.path.empty(), "initial_condition.path", "must not be empty");
}

std::string ExperimentConfig::to_yaml() const {
  YAML::Emitter e;
  e.SetDoublePrecision(17);
  e << YAML::BeginMap;
  e << YAML::Key << "name" << YAML::Value << name;
  e << YAML::Key << "potential" << YAML::Value;
  emit_potential(e, potential);
  e << YAML::Key << "eps" << YAML::Value << eps;
  e << YAML::Key << "smoothing" << YAML::Value << YAML::BeginMap << YAML::Key << "sigma_x" << YAML::Value << sigma_x
    << YAML::Key << "sigma_k" << YAML::Value << sigma_k << YAML::Key << "spectrogram_sigma_x" << YAML::Value
    << spectrogram_sigma_x << YAML::EndMap;
  e << YAML::Key << "initial_condition" << YAML::Value;
  emit_initial(e, initial);
  e << YAML::Key << "field" << YAML::Value << YAML::BeginMap << YAML::Key << "x_min" << YAML::Value << field_x_min
    << YAML::Key << "x_max" << YAML::Value << field_x_max << YAML::Key << "dx" << YAML::Value << field_dx
    << YAML::EndMap;
  e << YAML::Key << "phase_space" << YAML::Value << YAML::BeginMap << YAML::Key << "x_min" << YAML::Value
    << phase_x_min << YAML::Key << "x_max" << YAML::Value << phase_x_max << YAML::Key << "nx" << YAML::Value << nx
    << YAML::Key << "k_half" << YAML::Value << k_half << YAML::Key << "nk" << YAML::Value << nk << YAML::EndMap;
  e << YAML::Key << "times" << YAML::Value << YAML::Flow << times;
  e << YAML::Key << "t_final" << YAML::Value << t_final;
  e << YAML::Key << "dt" << YAML::Value << dt;
  e << YAML::Key << "rk4_dt" << YAML::Value << rk4_dt;
  e << YAML::Key << "seed_tolerance" << YAML::Value << seed_tolerance;
  e << YAML::Key << "halo" << YAML::Value << halo;
  e << YAML::Key << "marginal_bin" << YAML::Value << marginal_bin;
  e << YAML::Key << "output_dir" << YAML::Value << output_dir;
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

ExperimentConfig ExperimentConfig::parse(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::ParserException& ex) {
    throw ParseError("line " + std::to_string(ex.mark.line + 1) + ": " + ex.msg);
  }
  ExperimentConfig c;
  if (root.IsNull()) return c;
  check_keys(root, "",
             {"name", "preset", "potential", "eps", "smoothing", "initial_condition", "field", "phase_space", "times",
              "t_final", "dt", "rk4_dt", "seed_tolerance", "halo", "marginal_bin", "output_dir"});
  if (const auto p = root["preset"]) {
    try {
      c = preset(p.as<std::string>());
    } catch (const InvalidArgument& ex) {
      fail(p, "preset", ex.what());
    }
  }
  c.name = read<std::string>(root, "name", "name", c.name);
  if (const auto n = root["potential"]) {
    try {
      c.potential = parse_potential(n);
    } catch (const InvalidArgument& ex) {
      fail(n, "potential", ex.what());
    }
  }
  c.eps = read<double>(root, "eps", "eps", c.eps);
  if (const auto s = root["smoothing"]) {
    check_keys(s, "smoothing", {"sigma_x", "sigma_k", "spectrogram_sigma_x"});
    c.sigma_x = read<double>(s, "sigma_x", "smoothing.sigma_x", c.sigma_x);
    c.sigma_k = read<double>(s, "sigma_k", "smoothing.sigma_k", c.sigma_k);
    c.spectrogram_sigma_x = read<double>(s, "spectrogram_sigma_x", "smoothing.spectrogram_sigma_x",
                                         c.spectrogram_sigma_x);
  }
  if (const auto n = root["initial_condition"]) c.initial = parse_initial(n);
  if (const auto f = root["field"]) {
    check_keys(f, "field", {"x_min", "x_max", "dx"});
    c.field_x_min = read<double>(f, "x_min", "field.x_min", c.field_x_min);
    c.field_x_max = read<double>(f, "x_max", "field.x_max", c.field_x_max);
    c.field_dx = read<double>(f, "dx", "field.dx", c.field_dx);
  }
  if (const auto g = root["phase_space"]) {
    check_keys(g, "phase_space", {"x_min", "x_max", "nx", "k_half", "nk"});
    c.phase_x_min = read<double>(g, "x_min", "phase_space.x_min", c.phase_x_min);
    c.phase_x_max = read<double>(g, "x_max", "phase_space.x_max", c.phase_x_max);
    c.nx = read<std::size_t>(g, "nx", "phase_space.nx", c.nx);
    c.k_half = read<double>(g, "k_half", "phase_space.k_half", c.k_half);
    c.nk = read<std::size_t>(g, "nk", "phase_space.nk", c.nk);
  }
  c.times = read<std::vector<double>>(root, "times", "times", c.times);
  c.t_final = read<double>(root, "t_final", "t_final", c.t_final);
  c.dt = read<double>(root, "dt", "dt", c.dt);
  c.rk4_dt = read<double>(root, "rk4_dt", "rk4_dt", c.rk4_dt);
  c.seed_tolerance = read<double>(root, "seed_tolerance", "seed_tolerance", c.seed_tolerance);
  c.halo = read<int>(root, "halo", "halo", c.halo);
  c.marginal_bin = read<double>(root, "marginal_bin", "marginal_bin", c.marginal_bin);
  c.output_dir = read<std::string>(root, "output_dir", "output_dir", c.output_dir);
  try {
    c.validate();
  } catch (const ParseError& ex) {
    const std::string what = ex.what();
    const auto q = what.find('\'');
    const auto field = what.substr(q + 1, what.find('\'', q + 1) - q - 1);
    // Walk to the deepest node present on the field path.
    YAML::Node node;
    node.reset(root);
    bool found = false;
    std::stringstream path(field);
    for (std::string part; std::getline(path, part, '.');) {
      if (!node.IsMap() || !node[part]) break;
      node.reset(node[part]);
      found = true;
    }
    if (found) fail(node, field, what.substr(what.find(": ") + 2));
    throw;
  }
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse(ss.str());
  } catch (const ParseError& ex) {
    throw ParseError(path + ": " + ex.what());
  }
}

ExperimentConfig ExperimentConfig::preset(const std::string& name) {
  ExperimentConfig c;
  c.name = name;
  if (name == "free") {
    c.potential = PotentialSpec::free();
    c.eps = 1.0;
    c.sigma_x = c.sigma_k = 0.35;
    c.initial.type = InitialCondition::Type::gaussian_sum;
    c.field_x_min = -8.0;
    c.field_x_max = 8.0;
    c.field_dx = 1.0 / 128.0;
    c.phase_x_min = -3.0;
    c.phase_x_max = 3.0;
    c.k_half = 32.0;
    c.times = {0.25, 0.5, 1.0};
    c.t_final = 1.0;
    c.marginal_bin = 0.1;
  } else if (name == "harmonic") {
    const double w2 = 290.0;
    c.potential = PotentialSpec::harmonic(w2);
    c.eps = 0.7;
    c.sigma_x = 0.35;
    c.sigma_k = 0.95;
    c.initial.type = InitialCondition::Type::hermite;
    c.initial.n = 9;
    c.initial.omega = std::sqrt(w2);
    c.field_x_min = -4.0;
    c.field_x_max = 4.0;
    c.field_dx = 1.0 / 256.0;
    c.phase_x_min = -1.8;
    c.phase_x_max = 1.8;
    c.k_half = 4.5;
    const double period = two_pi / std::sqrt(w2);
    c.times = {period / 8.0, period / 4.0, period / 2.0, period};
    c.t_final = period;
    c.dt = period / 2000.0;
    c.rk4_dt = period / 2000.0;
    c.marginal_bin = 0.02;
  } else if (name == "uniform") {
    c.potential = PotentialSpec::uniform_field(two_pi * 300.0);
    c.eps = 0.7;
    c.sigma_x = c.sigma_k = 0.5;
    c.initial.type = InitialCondition::Type::f_eps;
    c.field_x_min = -32.0;
    c.field_x_max = 16.0;
    c.field_dx = 1.0 / 256.0;
    c.phase_x_min = -3.0;
    c.phase_x_max = 3.0;
    c.k_half = 32.0;
    c.times = {0.025, 0.05, 0.1};
    c.t_final = 0.1;
    c.dt = 1e-4;
    c.rk4_dt = 1e-4;
    c.marginal_bin = 0.05;
  } else if (name == "transform") {
    c.potential = PotentialSpec::free();
    c.eps = 0.7;
    c.sigma_x = c.sigma_k = 0.5;
    c.initial.type = InitialCondition::Type::f_eps;
    c.field_x_min = -4.0;
    c.field_x_max = 4.0;
    c.field_dx = 1.0 / 128.0;
    c.phase_x_min = -3.0;
    c.phase_x_max = 3.0;
    c.k_half = 32.0;
  } else {
    throw InvalidArgument("unknown preset '" + name + "' (free, harmonic, uniform, transform)");
  }
  c.output_dir = "out/" + name;
  return c;
}

Axis ExperimentConfig::field_axis() const {
  const auto n = static_cast<std::size_t>(std::llround((field_x_max - field_x_min) / field_dx));
  return make_axis(field_x_min, field_dx, n);
}

PhaseSpaceGrid ExperimentConfig::phase_grid() const {
  const double target = (phase_x_max - phase_x_min) / static_cast<double>(nx - 1);
  const auto stride = static_cast<std::size_t>(std::max(1.0, std::floor(target / field_dx + 1e-9)));
  return aligned_grid(field_axis(), phase_x_min, phase_x_max, stride, k_half, nk);
}

std::vector<double> ExperimentConfig::snapshot_times() const {
  if (!times.empty()) return times;
  return {t_final / 8.0, t_final / 4.0, t_final / 2.0, t_final};
}

ComplexField1D ExperimentConfig::initial_field() const {
  const Axis axis = field_axis();
  ComplexField1D u(axis);
  switch (initial.type) {
    case InitialCondition::Type::f_eps: u = build_f_eps(eps, axis); break;
    case InitialCondition::Type::gaussian_sum: {
      const auto packets = initial.packets.empty() ? three_gaussian_packets() : initial.packets;
      for (const auto& p : packets) u += p.sample(axis);
      break;
    }
    case InitialCondition::Type::hermite: u = harmonic_eigenfunction(initial.n, initial.omega, eps, axis); break;
    case InitialCondition::Type::file: {
      const auto src = read_psf1(initial.path);
      for (std::size_t i = 0; i < axis.count(); ++i) {
        const double s = src.axis().index_of(axis[i]);
        if (s < 0.0 || s > static_cast<double>(src.size() - 1)) continue;
        const auto j = std::min(static_cast<std::size_t>(s), src.size() - 2);
        const double w = s - static_cast<double>(j);
        u[i] = (1.0 - w) * src[j] + w * src[j + 1];
      }
      break;
    }
  }
  u *= initial.amplitude;
  return u;
}

}  // namespace swt
