#include "swt/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include "json.hpp"
#include <sstream>

#include "swt/errors.hpp"

namespace swt {

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

namespace fs = std::filesystem;

void atomic_write(const fs::path& path, std::string_view bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw InvalidArgument("write to " + tmp.string() + " failed");
  }
  fs::rename(tmp, path);
}

namespace {

class Writer {
 public:
  template <class T>
  void put(T v) {
    char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    s_.append(b, sizeof(T));
  }
  void magic(const char* m) { s_.append(m, 4); }
  const std::string& bytes() const { return s_; }

 private:
  std::string s_;
};

class Reader {
 public:
  explicit Reader(const fs::path& path) : path_(path.string()) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path_);
    s_.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  template <class T>
  T get() {
    if (pos_ + sizeof(T) > s_.size()) throw ParseError(path_ + ": truncated file");
    T v;
    std::memcpy(&v, s_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  void expect_magic(const char* m) {
    if (s_.size() < 4 || s_.compare(0, 4, m) != 0) throw ParseError(path_ + ": bad magic, expected " + m);
    pos_ = 4;
  }
  void expect_end() const {
    if (pos_ != s_.size()) throw ParseError(path_ + ": trailing bytes");
  }
  const std::string& path() const { return path_; }

 private:
  std::string path_, s_;
  std::size_t pos_ = 0;
};

void put_axis(Writer& w, const Axis& a) {
  w.put<double>(a.start());
  w.put<double>(a.step());
  w.put<std::uint64_t>(a.count());
}

Axis get_axis(Reader& r) {
  const double start = r.get<double>(), step = r.get<double>();
  const auto count = r.get<std::uint64_t>();
  return make_axis(start, step, static_cast<std::size_t>(count));
}

std::string format_double(double v) {
  std::ostringstream o;
  o << std::setprecision(17) << v;
  return o.str();
}

}  // namespace

void write_psf1(const fs::path& path, const ComplexField1D& f) {
  Writer w;
  w.magic("PSF1");
  w.put<std::uint32_t>(psf_version);
  put_axis(w, f.axis());
  w.put<std::uint32_t>(2);
  for (std::size_t i = 0; i < f.size(); ++i) {
    w.put<double>(f[i].real());
    w.put<double>(f[i].imag());
  }
  atomic_write(path, w.bytes());
}

ComplexField1D read_psf1(const fs::path& path) {
  Reader r(path);
  r.expect_magic("PSF1");
  if (r.get<std::uint32_t>() != psf_version) throw ParseError(r.path() + ": unsupported version");
  const Axis axis = get_axis(r);
  if (r.get<std::uint32_t>() != 2) throw ParseError(r.path() + ": expected 2 components");
  ComplexField1D f(axis);
  for (std::size_t i = 0; i < axis.count(); ++i) {
    const double re = r.get<double>(), im = r.get<double>();
    f[i] = cplx(re, im);
  }
  r.expect_end();
  return f;
}

void write_psf2(const fs::path& path, const PhaseSpaceField& field) {
  Writer w;
  w.magic("PSF2");
  w.put<std::uint32_t>(psf_version);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(field.kind()));
  put_axis(w, field.grid().x_axis);
  put_axis(w, field.grid().k_axis);
  for (double v : field.values()) w.put<double>(v);
  atomic_write(path, w.bytes());
}

PhaseSpaceField read_psf2(const fs::path& path) {
  Reader r(path);
  r.expect_magic("PSF2");
  if (r.get<std::uint32_t>() != psf_version) throw ParseError(r.path() + ": unsupported version");
  const auto kind = r.get<std::uint32_t>();
  if (kind > static_cast<std::uint32_t>(FieldKind::transported)) throw ParseError(r.path() + ": unknown field kind");
  const Axis xa = get_axis(r), ka = get_axis(r);
  std::vector<double> values(xa.count() * ka.count());
  for (double& v : values) v = r.get<double>();
  r.expect_end();
  return PhaseSpaceField(PhaseSpaceGrid{xa, ka}, static_cast<FieldKind>(kind), std::move(values));
}

void write_table_csv(const fs::path& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size()) throw InvalidArgument("CSV header and column count differ");
  const std::size_t n = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns)
    if (c.size() != n) throw InvalidArgument("CSV columns differ in length");
  std::ostringstream o;
  for (std::size_t j = 0; j < header.size(); ++j) o << (j ? "," : "") << header[j];
  o << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) o << (j ? "," : "") << format_double(columns[j][i]);
    o << '\n';
  }
  atomic_write(path, o.str());
}

void write_field_csv(const fs::path& path, const ComplexField1D& f) {
  std::vector<double> x(f.size()), re(f.size()), im(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    x[i] = f.axis()[i];
    re[i] = f[i].real();
    im[i] = f[i].imag();
  }
  write_table_csv(path, {"x", "re", "im"}, {x, re, im});
}

void write_ensemble_csv(const fs::path& path, const ParticleEnsemble& e) {
  std::vector<double> x(e.size()), k(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    x[i] = e.positions[i].x;
    k[i] = e.positions[i].k;
  }
  write_table_csv(path, {"x", "k", "density"}, {x, k, e.densities});
}

void write_conservation_csv(const fs::path& path, const std::vector<ConservationRow>& rows) {
  std::vector<double> t, m, en;
  for (const auto& r : rows) {
    t.push_back(r.t);
    m.push_back(r.mass);
    en.push_back(r.energy);
  }
  write_table_csv(path, {"t", "mass", "energy"}, {t, m, en});
}

void write_time_series(const fs::path& dir, const TimeSeries& series, double eps, const PotentialSpec& V) {
  if (series.t.size() != series.u.size()) throw InvalidArgument("time series: one field per time");
  nlohmann::json m;
  m["format"] = "PSF1";
  m["eps"] = eps;
  m["potential"] = {{"kind", to_string(V.kind())},
                    {"coefficients", V.polynomial().coefficients()},
                    {"description", V.describe()}};
  m["snapshots"] = nlohmann::json::array();
  for (std::size_t i = 0; i < series.t.size(); ++i) {
    const std::string name = "u_" + std::to_string(i) + ".psf1";
    write_psf1(dir / name, series.u[i]);
    m["snapshots"].push_back({{"t", series.t[i]}, {"file", name}});
  }
  atomic_write(dir / "manifest.json", m.dump(2) + "\n");
}

TimeSeries read_time_series(const fs::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw ParseError("cannot open " + (dir / "manifest.json").string());
  nlohmann::json m;
  try {
    m = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("manifest.json: ") + e.what());
  }
  TimeSeries s;
  for (const auto& snap : m.at("snapshots")) {
    s.t.push_back(snap.at("t").get<double>());
    s.u.push_back(read_psf1(dir / snap.at("file").get<std::string>()));
  }
  return s;
}

}  // namespace swt
