#include "alpha_fluids/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <tuple>

namespace alfl {

AlphaParam::AlphaParam(double alpha) : alpha_(alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("alpha must be a finite nonnegative number");
}

TorusGrid2D::TorusGrid2D(int nx, int ny, double lx, double ly)
    : nx_(nx), ny_(ny), lx_(lx), ly_(ly) {
  if (nx < 4 || ny < 4 || nx % 2 != 0 || ny % 2 != 0)
    throw std::invalid_argument("grid sizes must be even and at least 4, got " +
                                std::to_string(nx) + "x" + std::to_string(ny));
  if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly))
    throw std::invalid_argument("domain periods must be positive");
}

std::size_t TorusGrid2D::index_of_mode(int jx, int jy) const {
  int ix = jx % nx_;
  int iy = jy % ny_;
  if (ix < 0) ix += nx_;
  if (iy < 0) iy += ny_;
  return index(ix, iy);
}

TorusGrid2D make_grid(int nx, int ny, double lx, double ly) {
  return TorusGrid2D(nx, ny, lx, ly);
}

void require_same_grid(const TorusGrid2D& a, const TorusGrid2D& b) {
  if (!(a == b)) throw GridMismatch("fields live on different grids");
}

RealField::RealField(const TorusGrid2D& grid) : grid_(grid), values_(grid.size(), 0.0) {}

RealField::RealField(const TorusGrid2D& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw std::invalid_argument("sample count does not match grid");
}

ScalarField::ScalarField(const TorusGrid2D& grid) : grid_(grid), coeffs_(grid.size()) {}

ScalarField::ScalarField(const TorusGrid2D& grid, std::vector<Complex> coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.size())
    throw std::invalid_argument("coefficient count does not match grid");
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_same_grid(grid_, o.grid_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require_same_grid(grid_, o.grid_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

ScalarField& ScalarField::axpy(double s, const ScalarField& o) {
  require_same_grid(grid_, o.grid_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += s * o.coeffs_[i];
  return *this;
}

double ScalarField::max_abs() const {
  double m2 = 0.0;
  for (const auto& c : coeffs_) m2 = std::max(m2, std::norm(c));
  return std::sqrt(m2);
}

bool ScalarField::all_finite() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Complex& c) {
    return std::isfinite(c.real()) && std::isfinite(c.imag());
  });
}

VectorField::VectorField(ScalarField cx, ScalarField cy) : x(std::move(cx)), y(std::move(cy)) {
  require_same_grid(x.grid(), y.grid());
}

VectorField& VectorField::operator+=(const VectorField& o) {
  x += o.x;
  y += o.y;
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
  x -= o.x;
  y -= o.y;
  return *this;
}

VectorField& VectorField::operator*=(double s) {
  x *= s;
  y *= s;
  return *this;
}

VectorField& VectorField::axpy(double s, const VectorField& o) {
  x.axpy(s, o.x);
  y.axpy(s, o.y);
  return *this;
}

double VectorField::max_abs() const { return std::max(x.max_abs(), y.max_abs()); }

// ---------------------------------------------------------------------------

namespace {

// FFTW planning is not thread safe; execution of an existing plan on new
// arrays is.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(int nx, int ny, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_tuple(nx, ny, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::vector<Complex> a(static_cast<std::size_t>(nx) * ny), b(a.size());
    fftw_plan p = fftw_plan_dft_2d(nx, ny, reinterpret_cast<fftw_complex*>(a.data()),
                                   reinterpret_cast<fftw_complex*>(b.data()), sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (p == nullptr) throw std::runtime_error("FFTW planning failed");
    plans_.emplace(key, p);
    return p;
  }

 private:
  PlanCache() = default;
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

void execute(int nx, int ny, int sign, const Complex* in, Complex* out) {
  fftw_plan p = PlanCache::instance().get(nx, ny, sign);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

void zero_nyquist(ScalarField& f) {
  const auto& g = f.grid();
  const int hx = g.nx() / 2, hy = g.ny() / 2;
  for (int iy = 0; iy < g.ny(); ++iy) f(hx, iy) = 0.0;
  for (int ix = 0; ix < g.nx(); ++ix) f(ix, hy) = 0.0;
}

template <class Symbol>
ScalarField apply_symbol(const ScalarField& f, Symbol&& sym) {
  const auto& g = f.grid();
  ScalarField out(g);
  for (int ix = 0; ix < g.nx(); ++ix)
    for (int iy = 0; iy < g.ny(); ++iy) out(ix, iy) = sym(g.kx(ix), g.ky(iy)) * f(ix, iy);
  zero_nyquist(out);
  return out;
}

ScalarField truncate(ScalarField f, int cx, int cy) {
  const auto& g = f.grid();
  for (int ix = 0; ix < g.nx(); ++ix)
    for (int iy = 0; iy < g.ny(); ++iy)
      if (std::abs(g.mode_x(ix)) > cx || std::abs(g.mode_y(iy)) > cy) f(ix, iy) = 0.0;
  return f;
}

}  // namespace

ScalarField forward(const RealField& f) {
  const auto& g = f.grid();
  std::vector<Complex> in(g.size()), out(g.size());
  auto v = f.values();
  for (std::size_t i = 0; i < in.size(); ++i) in[i] = v[i];
  execute(g.nx(), g.ny(), FFTW_FORWARD, in.data(), out.data());
  const double scale = 1.0 / static_cast<double>(g.size());
  for (auto& c : out) c *= scale;
  return ScalarField(g, std::move(out));
}

RealField inverse(const ScalarField& f) {
  const auto& g = f.grid();
  std::vector<Complex> out(g.size());
  execute(g.nx(), g.ny(), FFTW_BACKWARD, f.coeffs().data(), out.data());
  std::vector<double> vals(g.size());
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = out[i].real();
  return RealField(g, std::move(vals));
}

RealField inverse_padded(const ScalarField& f, int mx, int my) {
  const auto& g = f.grid();
  if (mx < g.nx() || my < g.ny())
    throw std::invalid_argument("padded grid must not be smaller than the source grid");
  TorusGrid2D big(mx, my, g.lx(), g.ly());
  ScalarField padded(big);
  // Nyquist coefficients have no unique signed mode and are dropped.
  for (int ix = 0; ix < g.nx(); ++ix) {
    if (2 * ix == g.nx()) continue;
    for (int iy = 0; iy < g.ny(); ++iy) {
      if (2 * iy == g.ny()) continue;
      padded.mode(g.mode_x(ix), g.mode_y(iy)) = f(ix, iy);
    }
  }
  return inverse(padded);
}

ScalarField dx(const ScalarField& f) {
  return apply_symbol(f, [](double kx, double) { return Complex(0.0, kx); });
}

ScalarField dy(const ScalarField& f) {
  return apply_symbol(f, [](double, double ky) { return Complex(0.0, ky); });
}

ScalarField laplacian(const ScalarField& f) {
  return apply_symbol(f, [](double kx, double ky) { return Complex(-(kx * kx + ky * ky), 0.0); });
}

VectorField laplacian(const VectorField& u) { return {laplacian(u.x), laplacian(u.y)}; }

VectorField gradient(const ScalarField& f) { return {dx(f), dy(f)}; }

VectorField perp_gradient(const ScalarField& f) { return {-dy(f), dx(f)}; }

ScalarField divergence(const VectorField& u) { return dx(u.x) + dy(u.y); }

ScalarField curl(const VectorField& u) { return dx(u.y) - dy(u.x); }

ScalarField inverse_laplacian(const ScalarField& f) {
  return apply_symbol(f, [](double kx, double ky) {
    const double k2 = kx * kx + ky * ky;
    return Complex(k2 > 0.0 ? -1.0 / k2 : 0.0, 0.0);
  });
}

ScalarField dealias_two_thirds(ScalarField f) {
  const int cx = f.grid().nx() / 3, cy = f.grid().ny() / 3;
  return truncate(std::move(f), cx, cy);
}

VectorField dealias_two_thirds(VectorField u) {
  return {dealias_two_thirds(std::move(u.x)), dealias_two_thirds(std::move(u.y))};
}

ScalarField dealias_half(ScalarField f) {
  const int cx = f.grid().nx() / 4, cy = f.grid().ny() / 4;
  return truncate(std::move(f), cx, cy);
}

VectorField dealias_half(VectorField u) {
  return {dealias_half(std::move(u.x)), dealias_half(std::move(u.y))};
}

std::array<int, 2> spectral_support(const ScalarField& f, double rel_tol) {
  const auto& g = f.grid();
  const double thresh = rel_tol * f.max_abs();
  std::array<int, 2> s{-1, -1};
  for (int ix = 0; ix < g.nx(); ++ix)
    for (int iy = 0; iy < g.ny(); ++iy) {
      const double a = std::abs(f(ix, iy));
      if (a > thresh && a > 0.0) {
        s[0] = std::max(s[0], std::abs(g.mode_x(ix)));
        s[1] = std::max(s[1], std::abs(g.mode_y(iy)));
      }
    }
  return s;
}

std::array<int, 2> spectral_support(const VectorField& u, double rel_tol) {
  // Both components share one threshold so that a tiny component is not
  // judged against its own scale.
  const double m = u.max_abs();
  if (m == 0.0) return {-1, -1};
  const double tx = u.x.max_abs() > 0.0 ? rel_tol * m / u.x.max_abs() : 0.0;
  const double ty = u.y.max_abs() > 0.0 ? rel_tol * m / u.y.max_abs() : 0.0;
  auto a = spectral_support(u.x, tx);
  auto b = spectral_support(u.y, ty);
  return {std::max(a[0], b[0]), std::max(a[1], b[1])};
}

ScalarField truncate_to_box(ScalarField f, int sx, int sy) { return truncate(std::move(f), sx, sy); }

VectorField truncate_to_box(VectorField u, int sx, int sy) {
  return {truncate(std::move(u.x), sx, sy), truncate(std::move(u.y), sx, sy)};
}

double hermitian_defect(const ScalarField& f) {
  const auto& g = f.grid();
  const double scale = f.max_abs();
  if (scale == 0.0) return 0.0;
  double d = 0.0;
  for (int ix = 0; ix < g.nx(); ++ix)
    for (int iy = 0; iy < g.ny(); ++iy) {
      const Complex mirror = f.mode(-g.mode_x(ix), -g.mode_y(iy));
      d = std::max(d, std::abs(f(ix, iy) - std::conj(mirror)));
    }
  return d / scale;
}

ScalarField multiply(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid());
  RealField ra = inverse(a);
  RealField rb = inverse(b);
  auto va = ra.values();
  auto vb = rb.values();
  for (std::size_t i = 0; i < va.size(); ++i) va[i] *= vb[i];
  return forward(ra);
}

double l2_inner(const ScalarField& f, const ScalarField& g) {
  require_same_grid(f.grid(), g.grid());
  double s = 0.0;
  auto a = f.coeffs();
  auto b = g.coeffs();
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] * std::conj(b[i])).real();
  return s * f.grid().area();
}

double l2_inner(const VectorField& u, const VectorField& v) {
  return l2_inner(u.x, v.x) + l2_inner(u.y, v.y);
}

double l2_norm(const VectorField& u) { return std::sqrt(l2_inner(u, u)); }

double h1_norm(const VectorField& u) { return hs_norm(u, 1.0); }

double hs_norm(const VectorField& u, double s) {
  const auto& g = u.grid();
  double acc = 0.0;
  for (int ix = 0; ix < g.nx(); ++ix)
    for (int iy = 0; iy < g.ny(); ++iy) {
      const double w = std::pow(1.0 + g.k_squared(ix, iy), s);
      acc += w * (std::norm(u.x(ix, iy)) + std::norm(u.y(ix, iy)));
    }
  return std::sqrt(acc * g.area());
}

double inner_product_alpha(const VectorField& u, const VectorField& v, AlphaParam alpha) {
  require_same_grid(u.grid(), v.grid());
  const auto& g = u.grid();
  const double a2 = alpha.squared();
  double acc = 0.0;
  for (int ix = 0; ix < g.nx(); ++ix)
    for (int iy = 0; iy < g.ny(); ++iy) {
      const double kx = g.kx(ix), ky = g.ky(iy);
      const Complex ux = u.x(ix, iy), uy = u.y(ix, iy);
      const Complex vx = v.x(ix, iy), vy = v.y(ix, iy);
      const double dot = (ux * std::conj(vx) + uy * std::conj(vy)).real();
      const Complex ku = kx * ux + ky * uy;
      const Complex kv = kx * vx + ky * vy;
      acc += (1.0 + a2 * (kx * kx + ky * ky)) * dot + a2 * (ku * std::conj(kv)).real();
    }
  return acc * g.area();
}

double inner_product_alpha_quadrature(const VectorField& u, const VectorField& v,
                                      AlphaParam alpha) {
  require_same_grid(u.grid(), v.grid());
  const auto& g = u.grid();
  const RealField ux = inverse(u.x), uy = inverse(u.y);
  const RealField vx = inverse(v.x), vy = inverse(v.y);
  // Def u = 1/2 (grad u + grad u^T)
  const RealField ux_x = inverse(dx(u.x)), ux_y = inverse(dy(u.x));
  const RealField uy_x = inverse(dx(u.y)), uy_y = inverse(dy(u.y));
  const RealField vx_x = inverse(dx(v.x)), vx_y = inverse(dy(v.x));
  const RealField vy_x = inverse(dx(v.y)), vy_y = inverse(dy(v.y));
  const double a2 = alpha.squared();
  double acc = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double du11 = ux_x.values()[i], du22 = uy_y.values()[i];
    const double du12 = 0.5 * (ux_y.values()[i] + uy_x.values()[i]);
    const double dv11 = vx_x.values()[i], dv22 = vy_y.values()[i];
    const double dv12 = 0.5 * (vx_y.values()[i] + vy_x.values()[i]);
    const double def = du11 * dv11 + du22 * dv22 + 2.0 * du12 * dv12;
    acc += ux.values()[i] * vx.values()[i] + uy.values()[i] * vy.values()[i] + 2.0 * a2 * def;
  }
  return acc * g.area() / static_cast<double>(g.size());
}

std::vector<double> periodic_multiplier_1d(const std::vector<double>& f, double length,
                                           const std::function<Complex(double)>& m) {
  const int n = static_cast<int>(f.size());
  if (n < 4 || n % 2 != 0) throw std::invalid_argument("periodic samples need an even count >= 4");
  std::vector<Complex> a(f.begin(), f.end()), b(a.size());
  execute(n, 1, FFTW_FORWARD, a.data(), b.data());
  for (int i = 0; i < n; ++i) {
    const int j = i < n / 2 ? i : i - n;
    b[i] = i == n / 2 ? Complex(0.0) : b[i] * m(kTwoPi * j / length) / static_cast<double>(n);
  }
  execute(n, 1, FFTW_BACKWARD, b.data(), a.data());
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = a[i].real();
  return out;
}

}  // namespace alfl
