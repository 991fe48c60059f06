#include "swt/phasespace.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "swt/errors.hpp"
#include "swt/fourier.hpp"

namespace swt {

const char* to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::wigner: return "wigner";
    case FieldKind::smoothed: return "smoothed";
    case FieldKind::spectrogram: return "spectrogram";
    case FieldKind::transported: return "transported";
  }
  return "unknown";
}

template <class T>
BasicPhaseSpaceField<T>::BasicPhaseSpaceField(PhaseSpaceGrid grid, FieldKind kind, std::vector<T> values)
    : grid_(std::move(grid)), kind_(kind), values_(std::move(values)) {
  if (values_.size() != grid_.nx() * grid_.nk())
    throw InvalidArgument("phase-space field has " + std::to_string(values_.size()) + " values for a " +
                          std::to_string(grid_.nx()) + "x" + std::to_string(grid_.nk()) + " grid");
}

template <class T>
double BasicPhaseSpaceField<T>::max_abs() const {
  double m = 0.0;
  for (const T& v : values_) m = std::max(m, std::abs(v));
  return m;
}

template <class T>
T BasicPhaseSpaceField<T>::integral() const {
  T s = T(0);
  for (const T& v : values_) s += v;
  return s * grid_.cell_area();
}

template class BasicPhaseSpaceField<double>;
template class BasicPhaseSpaceField<cplx>;

namespace {

template <class T>
double rel_max_error(const BasicPhaseSpaceField<T>& a, const BasicPhaseSpaceField<T>& b) {
  if (!(a.grid() == b.grid())) throw InvalidArgument("fields live on different grids");
  double num = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) num = std::max(num, std::abs(a.values()[i] - b.values()[i]));
  const double den = b.max_abs();
  return den > 0.0 ? num / den : num;
}

bool near_integer(double v, long long& out) {
  out = std::llround(v);
  return std::abs(v - static_cast<double>(out)) < 1e-8 * std::max(1.0, std::abs(v));
}

// Fraction of |f^|^2 outside the frequency window [lo, hi).
double spectral_leak(const ComplexField1D& f, double lo, double hi) {
  const ComplexField1D spec = forward_ft(f);
  double total = 0.0, outside = 0.0;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const double p = std::norm(spec[i]);
    total += p;
    const double nu = spec.axis()[i];
    if (nu < lo || nu >= hi) outside += p;
  }
  return total > 0.0 ? outside / total : 0.0;
}

}  // namespace

double relative_max_error(const PhaseSpaceField& a, const PhaseSpaceField& b) { return rel_max_error(a, b); }
double relative_max_error(const ComplexPhaseSpaceField& a, const ComplexPhaseSpaceField& b) {
  return rel_max_error(a, b);
}

SmoothingParams::SmoothingParams(double sigma_x, double sigma_k, double eps) : sx_(sigma_x), sk_(sigma_k), eps_(eps) {
  if (!(sigma_x >= 0.0) || !(sigma_k >= 0.0)) throw InvalidArgument("smoothing widths must be non-negative");
  if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
}

SmoothingRegime SmoothingParams::regime() const {
  if (sx_ == 0.0 && sk_ == 0.0) return SmoothingRegime::none;
  const double p = sx_ * sk_;
  if (std::abs(p - 1.0) <= 1e-12) return SmoothingRegime::critical;
  return p < 1.0 ? SmoothingRegime::subcritical : SmoothingRegime::supercritical;
}

KernelCovariance SmoothingParams::covariance() const {
  return {eps_ * sx_ * sx_ / (4.0 * pi), 0.0, eps_ * sk_ * sk_ / (4.0 * pi)};
}

ComplexPhaseSpaceField cross_gaussian_smoothed_wigner(const ComplexField1D& f, const ComplexField1D& g, double eps,
                                                      const KernelCovariance& cov, const PhaseSpaceGrid& grid,
                                                      const TransformOptions& opts) {
  if (!(f.axis() == g.axis())) throw InvalidArgument("f and g must share an axis");
  if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
  if (cov.xx < 0.0 || cov.kk < 0.0 || cov.determinant() < -1e-15 * (cov.xx * cov.kk + 1e-300))
    throw InvalidArgument("kernel covariance is not positive semi-definite");
  if (cov.xx == 0.0 && cov.xk != 0.0) throw InvalidArgument("kernel covariance is not positive semi-definite");

  const FieldKind kind = cov.is_zero() ? FieldKind::wigner : FieldKind::smoothed;
  ComplexPhaseSpaceField out(grid, kind);

  const Axis& fa = f.axis();
  const double dxf = fa.step();
  const bool smooth_x = cov.xx > 0.0;

  // working spacing dxf / u; output x nodes must be working nodes
  const double ratio = grid.x_axis.step() / dxf;
  long long stride = 0, refine = 1;
  if (ratio >= 1.0 - 1e-12) {
    if (!near_integer(ratio, stride)) throw InvalidArgument("grid x-step must be an integer multiple of the field step");
  } else {
    if (!near_integer(1.0 / ratio, refine)) throw InvalidArgument("grid x-step must divide the field step");
    stride = 1;
  }
  std::size_t u = static_cast<std::size_t>(refine);
  if (smooth_x && u < 2) u = 2;
  const long long out_stride = stride * static_cast<long long>(u) / refine;
  const double h = dxf / static_cast<double>(u);

  long long offset = 0;
  if (!near_integer((grid.x_axis.start() - fa.start()) / h, offset))
    throw InvalidArgument("grid x-nodes must coincide with (refined) field nodes");
  const double x_out_lo = grid.x_axis.start();
  const double x_out_hi = grid.x_axis.back();
  if (x_out_lo < fa.start() - 1e-9 * dxf || x_out_hi > fa.back() + 1e-9 * dxf)
    throw OutOfDomain("phase-space grid x-range [" + std::to_string(x_out_lo) + ", " + std::to_string(x_out_hi) +
                      "] exceeds the field axis [" + std::to_string(fa.start()) + ", " + std::to_string(fa.back()) + "]");

  // support of f and g
  double fmax = std::max(f.max_abs(), g.max_abs());
  if (fmax == 0.0) return out;
  std::size_t lo_i = fa.count(), hi_i = 0;
  for (std::size_t i = 0; i < fa.count(); ++i) {
    if (std::max(std::abs(f[i]), std::abs(g[i])) > opts.support_threshold * fmax) {
      lo_i = std::min(lo_i, i);
      hi_i = std::max(hi_i, i);
    }
  }
  const double sup_lo = fa[lo_i] - dxf, sup_hi = fa[hi_i] + dxf;
  const double diameter = sup_hi - sup_lo;

  const Axis& ka = grid.k_axis;
  const std::size_t nk = ka.count();
  const double dk = ka.step();
  const double k_lo = ka.start(), k_hi = ka.start() + static_cast<double>(nk) * dk;
  for (const ComplexField1D* field : {&f, &g}) {
    const double leak = spectral_leak(*field, k_lo / eps, k_hi / eps);
    if (leak > opts.spectral_tolerance)
      throw InvalidArgument("k-axis [" + std::to_string(k_lo) + ", " + std::to_string(k_hi) + ") misses a fraction " +
                            std::to_string(leak) + " of the spectral mass at scale 1/eps");
  }

  // y-sum: dy = 1 / (nk dk), extended by q so that |eps y| covers the support diameter
  const std::size_t q = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(2.0 * diameter * dk / eps)));
  std::size_t nki = q * nk;
  const double dy = 1.0 / (static_cast<double>(nk) * dk);
  const double a_max = eps * dy * static_cast<double>(nki / 2 + 1) / 2.0;

  const double pad = a_max + 8.0 * std::sqrt(cov.xx) + 2.0 * dxf;
  const double w_lo = std::min(x_out_lo, sup_lo) - pad;
  const double w_hi = std::max(x_out_hi, sup_hi) + pad;
  const auto j0 = static_cast<long long>(std::floor((w_lo - fa.start()) / dxf));
  const std::size_t nc = next_fast_size(static_cast<std::size_t>(std::ceil((w_hi - w_lo) / dxf)) + 2);
  const double w_start = fa.start() + static_cast<double>(j0) * dxf;

  std::vector<cplx> fc(nc, cplx(0.0)), gc(nc, cplx(0.0));
  for (std::size_t j = 0; j < nc; ++j) {
    const long long src = j0 + static_cast<long long>(j);
    if (src >= 0 && src < static_cast<long long>(fa.count())) {
      fc[j] = f[static_cast<std::size_t>(src)];
      gc[j] = g[static_cast<std::size_t>(src)];
    }
  }
  std::vector<cplx> F = fourier_upsample(fc, u), G = fourier_upsample(gc, u);
  const std::size_t n = F.size();

  // output x index j -> working index
  const long long first = std::llround((x_out_lo - w_start) / h);
  std::vector<std::size_t> out_idx(grid.nx());
  for (std::size_t j = 0; j < grid.nx(); ++j) out_idx[j] = static_cast<std::size_t>(first + static_cast<long long>(j) * out_stride);

  const FftPlan fwd(n, FftPlan::Direction::forward), bwd(n, FftPlan::Direction::backward);
  fwd.execute(F);
  fwd.execute(G);
  std::vector<double> nu(n);
  for (std::size_t i = 0; i < n; ++i) nu[i] = fft_frequency(i, n, h);

  std::vector<cplx> column(grid.nx() * nki);
  std::vector<cplx> fs(n), gs(n), p(n);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t idx = 0; idx < nki; ++idx) {
    const long long m = static_cast<long long>(idx) - static_cast<long long>(nki / 2);
    const double y = static_cast<double>(m) * dy;
    const double a = 0.5 * eps * y;
    for (std::size_t i = 0; i < n; ++i) {
      const cplx ph = std::polar(1.0, two_pi * nu[i] * a);
      fs[i] = F[i] * ph;
      gs[i] = G[i] * std::conj(ph);
    }
    bwd.execute(fs);
    bwd.execute(gs);
    for (std::size_t i = 0; i < n; ++i) p[i] = fs[i] * std::conj(gs[i]) * (inv_n * inv_n);

    if (smooth_x) {
      fwd.execute(p);
      for (std::size_t i = 0; i < n; ++i) {
        const double z = nu[i];
        p[i] *= std::exp(-2.0 * pi * pi * (cov.xx * z * z - 2.0 * cov.xk * z * y + cov.kk * y * y)) * inv_n;
      }
      bwd.execute(p);
    }
    double ymul = dy;
    if (!smooth_x && cov.kk > 0.0) ymul *= std::exp(-2.0 * pi * pi * cov.kk * y * y);
    const cplx phase = ymul * std::polar(1.0, -two_pi * ka.start() * y * (opts.flip_fourier_sign ? -1.0 : 1.0));
    const long long slot_signed = opts.flip_fourier_sign ? -m : m;
    const auto slot = static_cast<std::size_t>(((slot_signed % static_cast<long long>(nki)) + static_cast<long long>(nki)) %
                                               static_cast<long long>(nki));
    for (std::size_t j = 0; j < grid.nx(); ++j) column[j * nki + slot] = p[out_idx[j]] * phase;
  }

  const FftPlan kfwd(nki, FftPlan::Direction::forward);
  for (std::size_t j = 0; j < grid.nx(); ++j) {
    std::span<cplx> c(column.data() + j * nki, nki);
    kfwd.execute(c);
    for (std::size_t ik = 0; ik < nk; ++ik) out(j, ik) = c[ik * q];
  }
  return out;
}

namespace {

PhaseSpaceField real_part_checked(const ComplexPhaseSpaceField& w, FieldKind kind) {
  const double scale = std::max(1.0, w.max_abs());
  std::vector<double> re(w.values().size());
  double worst = 0.0;
  for (std::size_t i = 0; i < re.size(); ++i) {
    re[i] = w.values()[i].real();
    worst = std::max(worst, std::abs(w.values()[i].imag()));
  }
  if (worst > 1e-10 * scale)
    throw InvalidArgument("transform is not real: imaginary residue " + std::to_string(worst) +
                          " exceeds 1e-10 relative; use the cross transform");
  return PhaseSpaceField(w.grid(), kind, std::move(re));
}

}  // namespace

PhaseSpaceField gaussian_smoothed_wigner(const ComplexField1D& f, double eps, const KernelCovariance& cov,
                                         const PhaseSpaceGrid& grid, const TransformOptions& opts) {
  auto w = cross_gaussian_smoothed_wigner(f, f, eps, cov, grid, opts);
  return real_part_checked(w, w.kind());
}

ComplexPhaseSpaceField cross_wigner(const ComplexField1D& f, const ComplexField1D& g, EpsilonParam eps,
                                    const PhaseSpaceGrid& grid, const TransformOptions& opts) {
  return cross_gaussian_smoothed_wigner(f, g, eps, {}, grid, opts);
}

PhaseSpaceField wigner(const ComplexField1D& f, EpsilonParam eps, const PhaseSpaceGrid& grid,
                       const TransformOptions& opts) {
  return gaussian_smoothed_wigner(f, eps, {}, grid, opts);
}

PhaseSpaceField wigner(const ComplexField1D& f, const ComplexField1D& g, EpsilonParam eps, const PhaseSpaceGrid& grid,
                       const TransformOptions& opts) {
  return real_part_checked(cross_wigner(f, g, eps, grid, opts), FieldKind::wigner);
}

ComplexPhaseSpaceField cross_smoothed_wigner(const ComplexField1D& f, const ComplexField1D& g,
                                             const SmoothingParams& params, const PhaseSpaceGrid& grid,
                                             const TransformOptions& opts) {
  auto w = cross_gaussian_smoothed_wigner(f, g, params.eps(), params.covariance(), grid, opts);
  w.set_kind(FieldKind::smoothed);
  return w;
}

PhaseSpaceField smoothed_wigner(const ComplexField1D& f, const SmoothingParams& params, const PhaseSpaceGrid& grid,
                                const TransformOptions& opts) {
  auto w = gaussian_smoothed_wigner(f, params.eps(), params.covariance(), grid, opts);
  w.set_kind(FieldKind::smoothed);
  return w;
}

PhaseSpaceField spectrogram(const ComplexField1D& f, const SmoothingParams& params, const PhaseSpaceGrid& grid,
                            const TransformOptions& opts) {
  if (params.regime() != SmoothingRegime::critical)
    throw InvalidArgument("spectrogram needs sigma_x * sigma_k = 1, got " +
                          std::to_string(params.sigma_x() * params.sigma_k()));
  auto w = smoothed_wigner(f, params, grid, opts);
  w.set_kind(FieldKind::spectrogram);
  return w;
}

PhaseSpaceField smooth_field(const PhaseSpaceField& w, const KernelCovariance& cov) {
  if (cov.is_zero()) return w;
  const std::size_t nx = w.nx(), nk = w.nk();
  std::vector<cplx> buf(w.values().begin(), w.values().end());
  FftPlan2D(nx, nk, FftPlan::Direction::forward).execute(buf);
  const double hx = w.grid().x_axis.step(), hk = w.grid().k_axis.step();
  const double norm = 1.0 / static_cast<double>(nx * nk);
  for (std::size_t i = 0; i < nx; ++i) {
    const double z = fft_frequency(i, nx, hx);
    for (std::size_t j = 0; j < nk; ++j) {
      const double zeta = fft_frequency(j, nk, hk);
      buf[i * nk + j] *= norm * std::exp(-2.0 * pi * pi * (cov.xx * z * z + 2.0 * cov.xk * z * zeta + cov.kk * zeta * zeta));
    }
  }
  FftPlan2D(nx, nk, FftPlan::Direction::backward).execute(buf);
  std::vector<double> re(buf.size());
  for (std::size_t i = 0; i < buf.size(); ++i) re[i] = buf[i].real();
  return PhaseSpaceField(w.grid(), FieldKind::smoothed, std::move(re));
}

cplx wigner_point_oracle(const ScalarFunction& f, const ScalarFunction& g, double eps, double x, double k,
                         const OracleOptions& opts) {
  const auto m = static_cast<long long>(std::ceil(opts.y_half_width / opts.y_step));
  cplx s = 0.0;
  for (long long i = -m; i <= m; ++i) {
    const double y = static_cast<double>(i) * opts.y_step;
    s += std::polar(1.0, -two_pi * k * y) * f(x + 0.5 * eps * y) * std::conj(g(x - 0.5 * eps * y));
  }
  return s * opts.y_step;
}

cplx wigner_point_oracle(const ComplexField1D& f, const ComplexField1D& g, double eps, std::size_t i, double k) {
  if (!(f.axis() == g.axis())) throw InvalidArgument("f and g must share an axis");
  if (i >= f.size()) throw OutOfDomain("oracle node outside the field axis");
  const double dx = f.axis().step();
  const double dy = 2.0 * dx / eps;
  const auto n = static_cast<long long>(f.size());
  const auto c = static_cast<long long>(i);
  const long long reach = std::min(c, n - 1 - c);
  cplx s = 0.0;
  for (long long m = -reach; m <= reach; ++m)
    s += std::polar(1.0, -two_pi * k * static_cast<double>(m) * dy) * f[static_cast<std::size_t>(c + m)] *
         std::conj(g[static_cast<std::size_t>(c - m)]);
  return s * dy;
}

std::vector<double> marginal_k(const PhaseSpaceField& w) {
  std::vector<double> m(w.nx(), 0.0);
  for (std::size_t i = 0; i < w.nx(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < w.nk(); ++j) s += w(i, j);
    m[i] = s * w.grid().k_axis.step();
  }
  return m;
}

std::vector<double> marginal_x(const PhaseSpaceField& w) {
  std::vector<double> m(w.nk(), 0.0);
  for (std::size_t i = 0; i < w.nx(); ++i)
    for (std::size_t j = 0; j < w.nk(); ++j) m[j] += w(i, j);
  for (double& v : m) v *= w.grid().x_axis.step();
  return m;
}

cplx trace_observable(const PolynomialSymbol& L, const PhaseSpaceField& w) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < w.nx(); ++i) {
    const double x = w.grid().x_axis[i];
    for (std::size_t j = 0; j < w.nk(); ++j) s += L(x, w.grid().k_axis[j]) * w(i, j);
  }
  return s * w.grid().cell_area();
}

PhaseSpaceGrid aligned_grid(const Axis& field_axis, double x_lo, double x_hi, std::size_t stride, double k_half,
                            std::size_t nk) {
  if (stride == 0) throw InvalidArgument("stride must be positive");
  const double dx = field_axis.step();
  const auto i0 = static_cast<long long>(std::floor((x_lo - field_axis.start()) / dx + 1e-9));
  const double step = dx * static_cast<double>(stride);
  const auto count = static_cast<std::size_t>(std::ceil((x_hi - field_axis[0] - static_cast<double>(i0) * dx) / step - 1e-9)) + 1;
  const long long last = i0 + static_cast<long long>((count - 1) * stride);
  if (i0 < 0 || last >= static_cast<long long>(field_axis.count()))
    throw OutOfDomain("requested x-range does not fit inside the field axis");
  return {make_axis(field_axis.start() + static_cast<double>(i0) * dx, step, count), centered_axis(k_half, nk)};
}

}  // namespace swt
