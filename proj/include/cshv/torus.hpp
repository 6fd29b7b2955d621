#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

namespace cshv {

/// Uniform periodic grid on the flat torus [0,L1) x [0,L2).  Resolutions are
/// powers of two, at least 16 per direction; nodes sit at (i L1/m1, j L2/m2).
struct TorusGrid {
  double L1 = 1.0, L2 = 1.0;
  int m1 = 128, m2 = 128;

  double area() const { return L1 * L2; }
  double hx() const { return L1 / m1; }
  double hy() const { return L2 / m2; }
  double cell() const { return hx() * hy(); }
  std::size_t size() const { return static_cast<std::size_t>(m1) * m2; }
  bool operator==(const TorusGrid&) const = default;
};

TorusGrid make_grid(double L1, double L2, int m1, int m2);

/// Real samples at the grid nodes, row-major with y as the slow index:
/// values[iy*m1 + ix].
struct ScalarField {
  TorusGrid grid;
  std::vector<double> v;

  ScalarField() = default;
  explicit ScalarField(const TorusGrid& g, double fill = 0.0) : grid(g), v(g.size(), fill) {}
  double& at(int ix, int iy) { return v[static_cast<std::size_t>(iy) * grid.m1 + ix]; }
  double at(int ix, int iy) const { return v[static_cast<std::size_t>(iy) * grid.m1 + ix]; }
  bool finite() const;
};

/// Half-spectrum of a real field (r2c layout): c[ky*(m1/2+1) + kx] with
/// kx = 0..m1/2 and ky = 0..m2-1 (wrapped).  Unnormalized forward transform.
struct SpectralField {
  TorusGrid grid;
  std::vector<std::complex<double>> c;
};

SpectralField fft(const ScalarField& f);
ScalarField ifft(const SpectralField& s);  // includes the 1/(m1 m2) factor

/// Squared angular wavenumber of the (kx, ky) bin (ky wrapped to signed).
double mode_k2(const TorusGrid& g, int kx, int ky);

double integrate(const ScalarField& f);
double mean(const ScalarField& f);
ScalarField mean_zero_project(const ScalarField& f);

/// Spectral solve of Laplace(u) = g with zero-mean data and result.
/// Rejects input whose mean exceeds 1e-8 * area * max|g|.
ScalarField laplacian_inverse_meanzero(const ScalarField& g);

/// Discrete spectral Laplacian (the exact inverse of the solve above on
/// mean-zero fields).
ScalarField laplacian(const ScalarField& f);

/// Spectral partial derivatives; Nyquist modes are zeroed.
std::pair<ScalarField, ScalarField> gradient(const ScalarField& f);

/// H1 pairing  integral(f g + grad f . grad g), computed spectrally.
double h1_inner(const ScalarField& f, const ScalarField& g);

struct VortexPoint {
  double x = 0, y = 0;
  int multiplicity = 1;
};

/// Prescribed zeros per component, reduced modulo the periods.  Requires at
/// least one vortex over all components.
class VortexSet {
 public:
  VortexSet(double L1, double L2, std::vector<std::vector<VortexPoint>> per_component);

  int components() const { return static_cast<int>(points_.size()); }
  const std::vector<VortexPoint>& component(int j) const { return points_[j]; }
  int count(int j) const;  // n_j = total multiplicity of component j (0-based)
  std::vector<int> counts() const;
  double L1() const { return L1_; }
  double L2() const { return L2_; }

 private:
  double L1_, L2_;
  std::vector<std::vector<VortexPoint>> points_;
};

struct Background {
  ScalarField u0;      // mean-zero solution of the source problem
  ScalarField exp_u0;  // exp(u0), strictly positive
  int count = 0;       // n_j
};

struct BackgroundOptions {
  // Dirac regularization width as a multiple of the largest cell size.
  double sigma_factor = 2.0;
};

/// Mean-zero periodic solve of  Laplace(u0) = 4*pi*sum_s delta_{p_s} - 4*pi*n/area
/// with each delta replaced by a periodic Gaussian of width sigma,
/// normalized to unit mass on the grid.  Component index is 0-based.
Background background_function(const TorusGrid& grid, const VortexSet& vortices, int component,
                               const BackgroundOptions& opt = {});

/// Exact-singularity alternative: short-range exponential-integral sums plus
/// a spectrally solved smooth remainder.  u0 carries the true logarithmic
/// dips (capped only where a node coincides with a vortex, where exp(u0)
/// underflows to zero anyway).
Background background_function_ewald(const TorusGrid& grid, const VortexSet& vortices,
                                     int component);

/// Field dump: one-line JSON header (periods, resolution, component) followed
/// by m2 rows of m1 comma-separated samples.
void write_field_csv(const ScalarField& f, const std::string& path, int component);
ScalarField read_field_csv(const std::string& path, int* component = nullptr);

}  // namespace cshv
