#pragma once

// Fourier representation of real scalar and vector fields on the flat 2D torus.
//
// Coefficients are stored for the full (unreduced) wavevector box, row-major
// over (ix, iy) with ix in [0, nx) and iy in [0, ny).  Storage index ix maps to
// the signed mode jx = ix for ix < nx/2 and jx = ix - nx otherwise, so the
// Nyquist mode is jx = -nx/2.  The forward transform divides by nx*ny, which
// makes stored coefficients equal to the analytic Fourier coefficients
//
//     f(x, y) = sum_k  fhat(k) exp(i (kx x + ky y)),   kx = 2 pi jx / Lx.

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace alfl {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

/// Integer wavevector (jx, jy) on the 2pi-normalized lattice.
struct Wavevector {
  int jx = 0;
  int jy = 0;
  friend bool operator==(const Wavevector&, const Wavevector&) = default;
};

/// Filtering length scale; alpha = 0 turns every alpha-operator into its
/// classical Euler / L2 counterpart.
class AlphaParam {
 public:
  AlphaParam() = default;
  explicit AlphaParam(double alpha);

  double value() const { return alpha_; }
  double squared() const { return alpha_ * alpha_; }

 private:
  double alpha_ = 0.0;
};

class TorusGrid2D {
 public:
  TorusGrid2D(int nx, int ny, double lx = kTwoPi, double ly = kTwoPi);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double lx() const { return lx_; }
  double ly() const { return ly_; }
  double area() const { return lx_ * ly_; }
  std::size_t size() const { return static_cast<std::size_t>(nx_) * ny_; }

  int mode_x(int ix) const { return ix < nx_ / 2 ? ix : ix - nx_; }
  int mode_y(int iy) const { return iy < ny_ / 2 ? iy : iy - ny_; }
  double kx(int ix) const { return (kTwoPi / lx_) * mode_x(ix); }
  double ky(int iy) const { return (kTwoPi / ly_) * mode_y(iy); }
  double k_squared(int ix, int iy) const {
    const double a = kx(ix), b = ky(iy);
    return a * a + b * b;
  }
  bool is_nyquist(int ix, int iy) const { return 2 * ix == nx_ || 2 * iy == ny_; }

  std::size_t index(int ix, int iy) const {
    return static_cast<std::size_t>(ix) * ny_ + iy;
  }
  /// Storage index of signed mode (jx, jy); any integer is wrapped.
  std::size_t index_of_mode(int jx, int jy) const;

  double x(int ix) const { return lx_ * ix / nx_; }
  double y(int iy) const { return ly_ * iy / ny_; }

  friend bool operator==(const TorusGrid2D&, const TorusGrid2D&) = default;

 private:
  int nx_;
  int ny_;
  double lx_;
  double ly_;
};

TorusGrid2D make_grid(int nx, int ny, double lx = kTwoPi, double ly = kTwoPi);

/// Real-space samples f(x_ix, y_iy), row-major like the coefficients.
class RealField {
 public:
  explicit RealField(const TorusGrid2D& grid);
  RealField(const TorusGrid2D& grid, std::vector<double> values);

  template <class F>
  static RealField sample(const TorusGrid2D& grid, F&& f) {
    RealField out(grid);
    for (int ix = 0; ix < grid.nx(); ++ix)
      for (int iy = 0; iy < grid.ny(); ++iy)
        out.values_[grid.index(ix, iy)] = f(grid.x(ix), grid.y(iy));
    return out;
  }

  const TorusGrid2D& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator()(int ix, int iy) const { return values_[grid_.index(ix, iy)]; }
  double& operator()(int ix, int iy) { return values_[grid_.index(ix, iy)]; }

 private:
  TorusGrid2D grid_;
  std::vector<double> values_;
};

/// Fourier coefficients of a real scalar field.
class ScalarField {
 public:
  explicit ScalarField(const TorusGrid2D& grid);
  ScalarField(const TorusGrid2D& grid, std::vector<Complex> coeffs);

  const TorusGrid2D& grid() const { return grid_; }
  std::span<const Complex> coeffs() const { return coeffs_; }
  std::span<Complex> coeffs() { return coeffs_; }

  Complex operator()(int ix, int iy) const { return coeffs_[grid_.index(ix, iy)]; }
  Complex& operator()(int ix, int iy) { return coeffs_[grid_.index(ix, iy)]; }
  Complex mode(int jx, int jy) const { return coeffs_[grid_.index_of_mode(jx, jy)]; }
  Complex& mode(int jx, int jy) { return coeffs_[grid_.index_of_mode(jx, jy)]; }

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double s);
  /// this += s * o
  ScalarField& axpy(double s, const ScalarField& o);

  friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
  friend ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
  friend ScalarField operator*(double s, ScalarField a) { return a *= s; }
  friend ScalarField operator-(ScalarField a) { return a *= -1.0; }

  /// Largest coefficient magnitude.
  double max_abs() const;
  bool all_finite() const;

 private:
  TorusGrid2D grid_;
  std::vector<Complex> coeffs_;
};

/// Fourier coefficients of a real 2-component vector field.
struct VectorField {
  ScalarField x;
  ScalarField y;

  explicit VectorField(const TorusGrid2D& grid) : x(grid), y(grid) {}
  VectorField(ScalarField cx, ScalarField cy);

  const TorusGrid2D& grid() const { return x.grid(); }
  const ScalarField& operator[](int c) const { return c == 0 ? x : y; }
  ScalarField& operator[](int c) { return c == 0 ? x : y; }

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(double s);
  VectorField& axpy(double s, const VectorField& o);

  friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
  friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
  friend VectorField operator*(double s, VectorField a) { return a *= s; }
  friend VectorField operator-(VectorField a) { return a *= -1.0; }

  double max_abs() const;
};

class GridMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

void require_same_grid(const TorusGrid2D& a, const TorusGrid2D& b);

// ---------------------------------------------------------------------------
// Transforms (FFTW-backed; plans are created with FFTW_ESTIMATE so results are
// reproducible bit for bit).

ScalarField forward(const RealField& f);
RealField inverse(const ScalarField& f);

/// Inverse transform onto a zero-padded grid of size (mx, my) >= (nx, ny).
/// Used for alias-free quadrature of higher powers.
RealField inverse_padded(const ScalarField& f, int mx, int my);

// ---------------------------------------------------------------------------
// Exact spectral differentiation.  The Nyquist row and column are zeroed on
// output.

ScalarField dx(const ScalarField& f);
ScalarField dy(const ScalarField& f);
ScalarField laplacian(const ScalarField& f);
VectorField laplacian(const VectorField& u);
VectorField gradient(const ScalarField& f);
/// (-d_y f, d_x f)
VectorField perp_gradient(const ScalarField& f);
ScalarField divergence(const VectorField& u);
/// d_x u_y - d_y u_x
ScalarField curl(const VectorField& u);

/// Inverse Laplacian on the zero-mean subspace (mean mode set to zero).
ScalarField inverse_laplacian(const ScalarField& f);

// ---------------------------------------------------------------------------
// Truncation filters.

/// Zero every mode with |jx| > nx/3 or |jy| > ny/3.
ScalarField dealias_two_thirds(ScalarField f);
VectorField dealias_two_thirds(VectorField u);
/// Zero every mode with |jx| > nx/4 or |jy| > ny/4 (exact cubic products).
ScalarField dealias_half(ScalarField f);
VectorField dealias_half(VectorField u);

/// Largest |jx| and |jy| over coefficients whose magnitude exceeds
/// rel_tol * max_abs().  Returns {-1, -1} for the zero field.
std::array<int, 2> spectral_support(const ScalarField& f, double rel_tol = 0.0);
std::array<int, 2> spectral_support(const VectorField& u, double rel_tol = 0.0);
/// Zero every mode outside |jx| <= sx, |jy| <= sy.
ScalarField truncate_to_box(ScalarField f, int sx, int sy);
VectorField truncate_to_box(VectorField u, int sx, int sy);

/// max_k |c(k) - conj(c(-k))| / max |c|; zero for an exactly real field.
double hermitian_defect(const ScalarField& f);

// ---------------------------------------------------------------------------
// Pseudospectral products (no truncation; callers dealias as needed).

ScalarField multiply(const ScalarField& a, const ScalarField& b);

// ---------------------------------------------------------------------------
// 1D periodic samples (n equispaced points, n even, on a circle of the given
// length).

/// Applies the Fourier multiplier m(k), k the signed angular wavenumber.
/// The Nyquist mode is dropped.
std::vector<double> periodic_multiplier_1d(const std::vector<double>& f, double length,
                                           const std::function<Complex(double)>& m);

// ---------------------------------------------------------------------------
// Integrals and inner products.  All integrals are over the torus (they carry
// the factor S = Lx*Ly).

/// int_T f g
double l2_inner(const ScalarField& f, const ScalarField& g);
double l2_inner(const VectorField& u, const VectorField& v);
double l2_norm(const VectorField& u);
/// sqrt( int |u|^2 + |grad u|^2 )
double h1_norm(const VectorField& u);
/// sqrt( sum_k (1 + |k|^2)^s |u(k)|^2 S )
double hs_norm(const VectorField& u, double s);

/// The alpha-metric  (u, v)_L2 + (alpha^2/2) (L_u g, L_v g)_L2  in Fourier form:
///   S * sum_k [ (1 + a^2 |k|^2) u.conj(v) + a^2 (k.u) conj(k.v) ].
/// The second term vanishes for divergence-free fields.
double inner_product_alpha(const VectorField& u, const VectorField& v, AlphaParam alpha);

/// The same metric by real-space quadrature of u.v + 2 a^2 Def u : Def v.
/// Exact for band-limited inputs whose combined support fits the grid.
double inner_product_alpha_quadrature(const VectorField& u, const VectorField& v,
                                      AlphaParam alpha);

}  // namespace alfl
