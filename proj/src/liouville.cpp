#include "swt/liouville.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point.hpp>
#include <boost/geometry/index/rtree.hpp>
#include <cmath>
#include <iterator>

#include "swt/errors.hpp"

namespace swt {

namespace bg = boost::geometry;
namespace bgi = boost::geometry::index;

PhasePoint hamilton_rhs(const PotentialSpec& V, double x, double k) { return {two_pi * k, -V.derivative(x) / two_pi}; }

PhasePoint rk4_step(const PotentialSpec& V, PhasePoint p, double h) {
  const auto k1 = hamilton_rhs(V, p.x, p.k);
  const auto k2 = hamilton_rhs(V, p.x + 0.5 * h * k1.x, p.k + 0.5 * h * k1.k);
  const auto k3 = hamilton_rhs(V, p.x + 0.5 * h * k2.x, p.k + 0.5 * h * k2.k);
  const auto k4 = hamilton_rhs(V, p.x + h * k3.x, p.k + h * k3.k);
  return {p.x + h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
          p.k + h / 6.0 * (k1.k + 2.0 * k2.k + 2.0 * k3.k + k4.k)};
}

PhasePoint rk4_flow(const PotentialSpec& V, PhasePoint p, double t, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("RK4 step must be positive");
  if (t == 0.0) return p;
  const auto n = static_cast<long>(std::ceil(std::abs(t) / dt - 1e-12));
  const double h = t / static_cast<double>(n);
  for (long i = 0; i < n; ++i) p = rk4_step(V, p, h);
  return p;
}

namespace {

// Linear part and offset of the exact flow for V = a x^s.
void affine_flow(double a, int s, double t, Mat2& m, PhasePoint& b) {
  b = {0.0, 0.0};
  if (s == 0 || a == 0.0) {
    m = {1.0, two_pi * t, 0.0, 1.0};
    return;
  }
  if (s == 1) {
    m = {1.0, two_pi * t, 0.0, 1.0};
    b = {-0.5 * a * t * t, -a * t / two_pi};
    return;
  }
  if (s == 2) {
    // x'' = -2 a x
    const double w = std::sqrt(2.0 * std::abs(a));
    if (a > 0.0) {
      const double c = std::cos(w * t), sn = std::sin(w * t);
      m = {c, two_pi / w * sn, -w / two_pi * sn, c};
    } else {
      const double c = std::cosh(w * t), sn = std::sinh(w * t);
      m = {c, two_pi / w * sn, w / two_pi * sn, c};
    }
    return;
  }
  throw Unsupported("exact flows exist only for V = a x^s with s in {0, 1, 2}");
}

}  // namespace

PhasePoint exact_flow(double a, int s, double t, double x, double k) {
  Mat2 m;
  PhasePoint b;
  affine_flow(a, s, t, m, b);
  return {m[0] * x + m[1] * k + b.x, m[2] * x + m[3] * k + b.k};
}

FlowMap FlowMap::exact(double a, int s, double t) {
  if (s < 0 || s > 2) throw Unsupported("exact flows exist only for V = a x^s with s in {0, 1, 2}");
  FlowMap f;
  f.kind_ = s == 0 ? Kind::exact_s0 : s == 1 ? Kind::exact_s1 : Kind::exact_s2;
  f.a_ = a;
  f.t_ = t;
  return f;
}

FlowMap FlowMap::for_potential(const PotentialSpec& V, double t, double dt) {
  if (const auto m = V.monomial()) return exact(m->first, m->second, t);
  if (!(dt > 0.0)) throw InvalidArgument("RK4 step must be positive");
  FlowMap f;
  f.kind_ = Kind::numeric;
  f.t_ = t;
  f.dt_ = dt;
  f.V_ = V;
  return f;
}

PhasePoint FlowMap::operator()(PhasePoint p) const {
  switch (kind_) {
    case Kind::exact_s0: return exact_flow(a_, 0, t_, p.x, p.k);
    case Kind::exact_s1: return exact_flow(a_, 1, t_, p.x, p.k);
    case Kind::exact_s2: return exact_flow(a_, 2, t_, p.x, p.k);
    case Kind::numeric: return rk4_flow(V_, p, t_, dt_);
  }
  return p;
}

Mat2 FlowMap::linear() const {
  if (!is_exact()) throw Unsupported("numeric flows have no closed-form linear part");
  Mat2 m;
  PhasePoint b;
  affine_flow(a_, static_cast<int>(kind_), t_, m, b);
  return m;
}

FlowMap FlowMap::inverse() const {
  FlowMap f = *this;
  f.t_ = -t_;
  return f;
}

const char* to_string(FlowMap::Kind kind) {
  switch (kind) {
    case FlowMap::Kind::exact_s0: return "exact_s0";
    case FlowMap::Kind::exact_s1: return "exact_s1";
    case FlowMap::Kind::exact_s2: return "exact_s2";
    case FlowMap::Kind::numeric: return "numeric";
  }
  return "?";
}

ParticleEnsemble seed_particles(const PhaseSpaceField& w0, double tol, int halo) {
  if (!(tol > 0.0)) throw InvalidArgument("seeding tolerance must be positive");
  if (halo < 0) throw InvalidArgument("halo width must be non-negative");
  const auto& g = w0.grid();
  const std::size_t nx = g.nx(), nk = g.nk();
  const double cut = tol * w0.max_abs();
  std::vector<char> core(nx * nk, 0), keep(nx * nk, 0);
  bool any = false;
  for (std::size_t i = 0; i < nx * nk; ++i)
    if (std::abs(w0.values()[i]) > cut) core[i] = 1, any = true;
  if (!any) throw InvalidArgument("seed_particles: field is identically zero");

  const auto h = static_cast<std::ptrdiff_t>(halo);
  for (std::size_t ix = 0; ix < nx; ++ix)
    for (std::size_t ik = 0; ik < nk; ++ik) {
      if (!core[ix * nk + ik]) continue;
      const auto x0 = std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(ix) - h);
      const auto x1 = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(nx) - 1, static_cast<std::ptrdiff_t>(ix) + h);
      const auto k0 = std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(ik) - h);
      const auto k1 = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(nk) - 1, static_cast<std::ptrdiff_t>(ik) + h);
      for (auto a = x0; a <= x1; ++a)
        for (auto b = k0; b <= k1; ++b) keep[static_cast<std::size_t>(a) * nk + static_cast<std::size_t>(b)] = 1;
    }

  ParticleEnsemble e;
  e.seed_grid = g;
  for (std::size_t ix = 0; ix < nx; ++ix)
    for (std::size_t ik = 0; ik < nk; ++ik) {
      if (!keep[ix * nk + ik]) continue;
      e.positions.push_back({g.x_axis[ix], g.k_axis[ik]});
      e.densities.push_back(w0(ix, ik));
      e.seed_nodes.push_back({ix, ik});
    }
  return e;
}

ParticleEnsemble propagate(const ParticleEnsemble& ensemble, const PotentialSpec& V, double t, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("RK4 step must be positive");
  ParticleEnsemble out = ensemble;
  for (auto& p : out.positions) p = rk4_flow(V, p, t, dt);
  return out;
}

ParticleEnsemble propagate(const ParticleEnsemble& ensemble, const FlowMap& flow) {
  ParticleEnsemble out = ensemble;
  for (auto& p : out.positions) p = flow(p);
  return out;
}

namespace {

using BPoint = bg::model::point<double, 2, bg::cs::cartesian>;
using Entry = std::pair<BPoint, std::size_t>;

std::size_t basis_size(int degree) { return static_cast<std::size_t>((degree + 1) * (degree + 2) / 2); }

void fill_basis(int degree, double u, double v, double* row) {
  std::size_t c = 0;
  for (int d = 0; d <= degree; ++d)
    for (int j = 0; j <= d; ++j) row[c++] = std::pow(u, d - j) * std::pow(v, j);
}

}  // namespace

namespace {

PhaseSpaceField interpolate_current_frame(const ParticleEnsemble& ensemble, const PhaseSpaceGrid& grid,
                                          const MlsOptions& opts) {
  const double sx = ensemble.seed_grid.x_axis.step(), sk = ensemble.seed_grid.k_axis.step();
  const std::size_t kn = std::min(opts.neighbours, ensemble.size());

  std::vector<Entry> entries;
  entries.reserve(ensemble.size());
  for (std::size_t i = 0; i < ensemble.size(); ++i)
    entries.emplace_back(BPoint(ensemble.positions[i].x / sx, ensemble.positions[i].k / sk), i);
  const bgi::rtree<Entry, bgi::rstar<16>> tree(entries.begin(), entries.end());

  // distance from each particle to its nearest neighbour
  std::vector<double> spacing(ensemble.size(), 1.0);
  if (ensemble.size() > 1)
    for (std::size_t i = 0; i < ensemble.size(); ++i) {
      std::vector<Entry> nn;
      tree.query(bgi::nearest(entries[i].first, 2), std::back_inserter(nn));
      double d = 0.0;
      for (const auto& e : nn)
        if (e.second != i) d = bg::distance(e.first, entries[i].first);
      spacing[i] = d;
    }

  PhaseSpaceField out(grid, FieldKind::transported);
  std::vector<Entry> nb;
  std::vector<double> dist;
  for (std::size_t ix = 0; ix < grid.nx(); ++ix)
    for (std::size_t ik = 0; ik < grid.nk(); ++ik) {
      const BPoint q(grid.x_axis[ix] / sx, grid.k_axis[ik] / sk);
      nb.clear();
      tree.query(bgi::nearest(q, static_cast<unsigned>(kn)), std::back_inserter(nb));
      dist.resize(nb.size());
      double r1 = INFINITY, rk = 0.0, h = 0.0;
      for (std::size_t j = 0; j < nb.size(); ++j) {
        dist[j] = bg::distance(nb[j].first, q);
        r1 = std::min(r1, dist[j]);
        rk = std::max(rk, dist[j]);
        h = std::max(h, spacing[nb[j].second]);
      }
      if (r1 > opts.hull_margin * std::max(h, 1e-12)) continue;
      if (r1 < 1e-9 || rk == 0.0) {
        const auto j = static_cast<std::size_t>(std::min_element(dist.begin(), dist.end()) - dist.begin());
        out(ix, ik) = ensemble.densities[nb[j].second];
        continue;
      }
      const double R = 1.05 * rk;
      double value = 0.0;
      bool solved = false;
      for (int degree = opts.degree; degree >= 0 && !solved; --degree) {
        const std::size_t m = basis_size(degree);
        if (nb.size() < m) continue;
        Eigen::MatrixXd A(nb.size(), m);
        Eigen::VectorXd b(nb.size());
        std::vector<double> row(m);
        for (std::size_t j = 0; j < nb.size(); ++j) {
          const double r = dist[j] / R;
          const double w = std::pow(1.0 - r, 4) * (4.0 * r + 1.0);
          const double sw = std::sqrt(w);
          fill_basis(degree, (nb[j].first.get<0>() - q.get<0>()) / R, (nb[j].first.get<1>() - q.get<1>()) / R, row.data());
          for (std::size_t c = 0; c < m; ++c) A(j, c) = sw * row[c];
          b(j) = sw * ensemble.densities[nb[j].second];
        }
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
        qr.setThreshold(1e-8);
        if (qr.rank() < static_cast<Eigen::Index>(m)) continue;
        value = qr.solve(b)(0);
        solved = true;
      }
      out(ix, ik) = solved ? value : ensemble.densities[nb.front().second];
    }
  return out;
}

// Weighted least-squares fit of a polynomial of the given degree (falling back to lower
// degrees on degenerate stencils); returns the value at the origin of the offsets.
bool mls_fit(const std::vector<std::array<double, 2>>& offsets, const std::vector<double>& values, double radius,
             int degree, double& value) {
  for (int d = degree; d >= 0; --d) {
    const std::size_t m = basis_size(d);
    std::size_t active = 0;
    for (const auto& o : offsets)
      if (std::hypot(o[0], o[1]) < radius) ++active;
    if (active < m) continue;
    Eigen::MatrixXd A(offsets.size(), m);
    Eigen::VectorXd b(offsets.size());
    std::vector<double> row(m);
    for (std::size_t j = 0; j < offsets.size(); ++j) {
      const double r = std::min(1.0, std::hypot(offsets[j][0], offsets[j][1]) / radius);
      const double sw = std::sqrt(std::pow(1.0 - r, 4) * (4.0 * r + 1.0));
      fill_basis(d, offsets[j][0] / radius, offsets[j][1] / radius, row.data());
      for (std::size_t c = 0; c < m; ++c) A(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(c)) = sw * row[c];
      b(static_cast<Eigen::Index>(j)) = sw * values[j];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    qr.setThreshold(1e-8);
    if (qr.rank() < static_cast<Eigen::Index>(m)) continue;
    value = qr.solve(b)(0);
    return true;
  }
  return false;
}

PhaseSpaceField interpolate_seed_frame(const ParticleEnsemble& ensemble, const PhaseSpaceGrid& grid,
                                       const MlsOptions& opts) {
  const double sx = ensemble.seed_grid.x_axis.step(), sk = ensemble.seed_grid.k_axis.step();
  const auto nx = static_cast<long>(ensemble.seed_grid.nx()), nk = static_cast<long>(ensemble.seed_grid.nk());
  std::vector<long> index(static_cast<std::size_t>(nx * nk), -1);
  for (std::size_t i = 0; i < ensemble.size(); ++i)
    index[ensemble.seed_nodes[i][0] * static_cast<std::size_t>(nk) + ensemble.seed_nodes[i][1]] = static_cast<long>(i);
  auto particle_at = [&](long a, long b) -> long {
    if (a < 0 || b < 0 || a >= nx || b >= nk) return -1;
    return index[static_cast<std::size_t>(a * nk + b)];
  };

  std::vector<Entry> entries;
  entries.reserve(ensemble.size());
  for (std::size_t i = 0; i < ensemble.size(); ++i)
    entries.emplace_back(BPoint(ensemble.positions[i].x / sx, ensemble.positions[i].k / sk), i);
  const bgi::rtree<Entry, bgi::rstar<16>> tree(entries.begin(), entries.end());

  const long r = std::max(1, opts.degree);  // stencil half-width in seed nodes
  PhaseSpaceField out(grid, FieldKind::transported);
  std::vector<Entry> nb;
  std::vector<long> ids;
  std::vector<std::array<double, 2>> offsets;
  std::vector<double> values;
  for (std::size_t ix = 0; ix < grid.nx(); ++ix)
    for (std::size_t ik = 0; ik < grid.nk(); ++ik) {
      const double qx = grid.x_axis[ix] / sx, qk = grid.k_axis[ik] / sk;
      nb.clear();
      tree.query(bgi::nearest(BPoint(qx, qk), 1), std::back_inserter(nb));
      const std::size_t p1 = nb.front().second;
      long ca = static_cast<long>(ensemble.seed_nodes[p1][0]), cb = static_cast<long>(ensemble.seed_nodes[p1][1]);
      double xa = 0.0, xb = 0.0;  // seed-index coordinates of the node
      bool inside = false;
      for (int iter = 0; iter < 6; ++iter) {
        // affine fit  position = b + J (seed - c)  on the stencil around (ca, cb)
        Eigen::Matrix3d N = Eigen::Matrix3d::Zero();
        Eigen::Matrix<double, 3, 2> R = Eigen::Matrix<double, 3, 2>::Zero();
        int count = 0;
        for (long a = ca - r; a <= ca + r; ++a)
          for (long b = cb - r; b <= cb + r; ++b) {
            const long id = particle_at(a, b);
            if (id < 0) continue;
            const Eigen::Vector3d phi(1.0, static_cast<double>(a - ca), static_cast<double>(b - cb));
            const auto& p = ensemble.positions[static_cast<std::size_t>(id)];
            N += phi * phi.transpose();
            R.row(0) += phi(0) * Eigen::RowVector2d(p.x / sx, p.k / sk);
            R.row(1) += phi(1) * Eigen::RowVector2d(p.x / sx, p.k / sk);
            R.row(2) += phi(2) * Eigen::RowVector2d(p.x / sx, p.k / sk);
            ++count;
          }
        if (count < 3) break;
        const Eigen::FullPivLU<Eigen::Matrix3d> lu(N);
        if (lu.rank() < 3) break;
        const Eigen::Matrix<double, 3, 2> C = lu.solve(R);
        const Eigen::Vector2d b0 = C.row(0).transpose();
        Eigen::Matrix2d J;
        J.col(0) = C.row(1).transpose();
        J.col(1) = C.row(2).transpose();
        const Eigen::Vector2d xi = J.fullPivLu().solve(Eigen::Vector2d(qx, qk) - b0);
        xa = static_cast<double>(ca) + xi(0);
        xb = static_cast<double>(cb) + xi(1);
        const long na = std::lround(xa), nbk = std::lround(xb);
        if (na == ca && nbk == cb) {
          inside = particle_at(ca, cb) >= 0;
          break;
        }
        if (particle_at(na, nbk) < 0) break;
        ca = na;
        cb = nbk;
      }
      if (!inside) continue;

      ids.clear();
      offsets.clear();
      values.clear();
      double nearest = INFINITY, nearest_value = 0.0;
      for (long a = ca - r; a <= ca + r; ++a)
        for (long b = cb - r; b <= cb + r; ++b) {
          const long id = particle_at(a, b);
          if (id < 0) continue;
          const double oa = static_cast<double>(a) - xa, ob = static_cast<double>(b) - xb;
          offsets.push_back({oa, ob});
          values.push_back(ensemble.densities[static_cast<std::size_t>(id)]);
          if (std::hypot(oa, ob) < nearest) nearest = std::hypot(oa, ob), nearest_value = values.back();
        }
      if (nearest < 1e-9) {
        out(ix, ik) = nearest_value;
        continue;
      }
      double value = nearest_value;
      mls_fit(offsets, values, static_cast<double>(r) + 1.5, opts.degree, value);
      out(ix, ik) = value;
    }
  return out;
}

}  // namespace

PhaseSpaceField interpolate_to_grid(const ParticleEnsemble& ensemble, const PhaseSpaceGrid& grid, const MlsOptions& opts) {
  if (ensemble.size() == 0) throw InvalidArgument("interpolation from an empty ensemble");
  if (opts.degree < 0 || opts.degree > 3) throw InvalidArgument("MLS degree must be in 0..3");
  return opts.frame == MlsFrame::seed ? interpolate_seed_frame(ensemble, grid, opts)
                                      : interpolate_current_frame(ensemble, grid, opts);
}

double interpolate_field(const PhaseSpaceField& w, double x, double k, int order) {
  if (order < 2) throw InvalidArgument("interpolation order must be at least 2");
  const auto& g = w.grid();
  const double sx = g.x_axis.index_of(x), sk = g.k_axis.index_of(k);
  const double nx = static_cast<double>(g.nx()), nk = static_cast<double>(g.nk());
  if (sx < 0.0 || sk < 0.0 || sx > nx - 1.0 || sk > nk - 1.0) return 0.0;
  const int n = order;
  auto stencil = [n](double s, double count, std::vector<double>& wts) {
    auto base = static_cast<long>(std::floor(s)) - (n / 2 - 1);
    base = std::clamp<long>(base, 0, static_cast<long>(count) - n);
    wts.assign(static_cast<std::size_t>(n), 1.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (j != i) wts[static_cast<std::size_t>(i)] *= (s - static_cast<double>(base + j)) / static_cast<double>(i - j);
    return base;
  };
  std::vector<double> wx, wk;
  const long bx = stencil(sx, nx, wx), bk = stencil(sk, nk, wk);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j)
      row += wk[static_cast<std::size_t>(j)] * w(static_cast<std::size_t>(bx + i), static_cast<std::size_t>(bk + j));
    acc += wx[static_cast<std::size_t>(i)] * row;
  }
  return acc;
}

PhaseSpaceField semi_lagrangian_evolve(const PhaseSpaceField& w0, const PotentialSpec& V, double t, double dt,
                                       const PhaseSpaceGrid& grid, int order) {
  if (!(dt > 0.0)) throw InvalidArgument("RK4 step must be positive");
  PhaseSpaceField out(grid, FieldKind::transported);
  for (std::size_t ix = 0; ix < grid.nx(); ++ix)
    for (std::size_t ik = 0; ik < grid.nk(); ++ik) {
      const auto p = rk4_flow(V, {grid.x_axis[ix], grid.k_axis[ik]}, -t, dt);
      out(ix, ik) = interpolate_field(w0, p.x, p.k, order);
    }
  return out;
}

PhaseSpaceField semi_lagrangian_evolve(const PhaseSpaceField& w0, const FlowMap& flow, const PhaseSpaceGrid& grid,
                                       int order) {
  const FlowMap back = flow.inverse();
  PhaseSpaceField out(grid, FieldKind::transported);
  for (std::size_t ix = 0; ix < grid.nx(); ++ix)
    for (std::size_t ik = 0; ik < grid.nk(); ++ik) {
      const auto p = back({grid.x_axis[ix], grid.k_axis[ik]});
      out(ix, ik) = interpolate_field(w0, p.x, p.k, order);
    }
  return out;
}

KernelCovariance transformed_covariance(const KernelCovariance& c, const FlowMap& flow) {
  const Mat2 m = flow.linear();
  // M S
  const double a = m[0] * c.xx + m[1] * c.xk, b = m[0] * c.xk + m[1] * c.kk;
  const double d = m[2] * c.xx + m[3] * c.xk, e = m[2] * c.xk + m[3] * c.kk;
  return {a * m[0] + b * m[1], a * m[2] + b * m[3], d * m[2] + e * m[3]};
}

PhaseSpaceField kernel_evolution_reference(const PhaseSpaceField& w_t, const SmoothingParams& params,
                                           const FlowMap& flow) {
  if (!flow.is_exact()) throw Unsupported("the distorted-kernel identity needs an exact linear flow");
  auto out = smooth_field(w_t, transformed_covariance(params.covariance(), flow));
  out.set_kind(FieldKind::smoothed);
  return out;
}

PhaseSpaceField kernel_evolution_reference(const ComplexField1D& u_t, const SmoothingParams& params,
                                           const FlowMap& flow, const PhaseSpaceGrid& grid) {
  if (!flow.is_exact()) throw Unsupported("the distorted-kernel identity needs an exact linear flow");
  return gaussian_smoothed_wigner(u_t, params.eps(), transformed_covariance(params.covariance(), flow), grid);
}

std::vector<ConservationRow> conservation_report(const std::vector<double>& times,
                                                 const std::vector<PhaseSpaceField>& fields,
                                                 const PolynomialSymbol& hamiltonian) {
  if (times.size() != fields.size()) throw InvalidArgument("conservation_report: one time per field");
  std::vector<ConservationRow> rows;
  for (std::size_t i = 0; i < fields.size(); ++i)
    rows.push_back({times[i], fields[i].integral(), trace_observable(hamiltonian, fields[i]).real()});
  return rows;
}

ConservationRow ensemble_moments(const ParticleEnsemble& e, const PolynomialSymbol& hamiltonian, double t) {
  const double area = e.seed_grid.cell_area();
  ConservationRow r{t, 0.0, 0.0};
  for (std::size_t i = 0; i < e.size(); ++i) {
    r.mass += e.densities[i] * area;
    r.energy += e.densities[i] * hamiltonian(e.positions[i].x, e.positions[i].k).real() * area;
  }
  return r;
}

namespace {

struct Vertex {
  double x, k, rho;
};

// Keeps the part of the polygon with sign * (x - c) >= 0.
void clip(std::vector<Vertex>& poly, double c, double sign) {
  std::vector<Vertex> out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vertex& p = poly[i];
    const Vertex& q = poly[(i + 1) % n];
    const double dp = sign * (p.x - c), dq = sign * (q.x - c);
    if (dp >= 0.0) out.push_back(p);
    if ((dp >= 0.0) != (dq >= 0.0)) {
      const double s = dp / (dp - dq);
      out.push_back({p.x + s * (q.x - p.x), p.k + s * (q.k - p.k), p.rho + s * (q.rho - p.rho)});
    }
  }
  poly.swap(out);
}

double polygon_integral(const std::vector<Vertex>& poly) {
  double acc = 0.0;
  for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
    const Vertex &a = poly[0], &b = poly[i], &c = poly[i + 1];
    const double area = 0.5 * std::abs((b.x - a.x) * (c.k - a.k) - (c.x - a.x) * (b.k - a.k));
    acc += area * (a.rho + b.rho + c.rho) / 3.0;
  }
  return acc;
}

void deposit(const Vertex& a, const Vertex& b, const Vertex& c, const Axis& bins, std::vector<double>& out) {
  const double h = bins.step(), lo = bins.start() - 0.5 * h;
  const double xmin = std::min({a.x, b.x, c.x}), xmax = std::max({a.x, b.x, c.x});
  const auto n = static_cast<long>(bins.count());
  const long i0 = std::max(0L, static_cast<long>(std::floor((xmin - lo) / h)));
  const long i1 = std::min(n - 1, static_cast<long>(std::floor((xmax - lo) / h)));
  for (long i = i0; i <= i1; ++i) {
    std::vector<Vertex> poly{a, b, c};
    clip(poly, lo + static_cast<double>(i) * h, 1.0);
    if (poly.size() < 3) continue;
    clip(poly, lo + static_cast<double>(i + 1) * h, -1.0);
    if (poly.size() < 3) continue;
    out[static_cast<std::size_t>(i)] += polygon_integral(poly);
  }
}

}  // namespace

std::vector<double> mesh_marginal(const ParticleEnsemble& e, const Axis& bins) {
  const std::size_t nx = e.seed_grid.nx(), nk = e.seed_grid.nk();
  std::vector<long> index(nx * nk, -1);
  for (std::size_t i = 0; i < e.size(); ++i) index[e.seed_nodes[i][0] * nk + e.seed_nodes[i][1]] = static_cast<long>(i);
  std::vector<double> out(bins.count(), 0.0);
  auto vertex = [&](long i) {
    const auto& p = e.positions[static_cast<std::size_t>(i)];
    return Vertex{p.x, p.k, e.densities[static_cast<std::size_t>(i)]};
  };
  for (std::size_t ix = 0; ix + 1 < nx; ++ix)
    for (std::size_t ik = 0; ik + 1 < nk; ++ik) {
      const long i00 = index[ix * nk + ik], i10 = index[(ix + 1) * nk + ik];
      const long i01 = index[ix * nk + ik + 1], i11 = index[(ix + 1) * nk + ik + 1];
      if (i00 < 0 || i10 < 0 || i01 < 0 || i11 < 0) continue;
      const Vertex v00 = vertex(i00), v10 = vertex(i10), v01 = vertex(i01), v11 = vertex(i11);
      deposit(v00, v10, v11, bins, out);
      deposit(v00, v11, v01, bins, out);
    }
  for (double& v : out) v /= bins.step();
  return out;
}

double normalized_l1(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("normalized_l1: size mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::abs(a[i] - b[i]);
    den += std::abs(b[i]);
  }
  return den > 0.0 ? num / den : num;
}

}  // namespace swt
