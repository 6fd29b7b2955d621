#include "cshv/torus.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

#include "cshv/errors.hpp"
#include "cshv/kernels.hpp"
#include "json.hpp"

namespace cshv {

namespace {

constexpr double kPi = std::numbers::pi;

bool power_of_two(int m) { return m > 0 && (m & (m - 1)) == 0; }

// One FFTW workspace per (m1, m2), cached per thread.  Plan creation is the
// only FFTW call that is not thread-safe, so it is serialized.
struct Spectral {
  int m1, m2;
  std::vector<double> real;
  std::vector<std::complex<double>> cplx;
  fftw_plan fwd = nullptr, bwd = nullptr;

  Spectral(int m1_, int m2_) : m1(m1_), m2(m2_) {
    real.resize(static_cast<std::size_t>(m1) * m2);
    cplx.resize(static_cast<std::size_t>(m2) * (m1 / 2 + 1));
    static std::mutex planner_mutex;
    std::lock_guard<std::mutex> lock(planner_mutex);
    fwd = fftw_plan_dft_r2c_2d(m2, m1, real.data(), reinterpret_cast<fftw_complex*>(cplx.data()),
                               FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r_2d(m2, m1, reinterpret_cast<fftw_complex*>(cplx.data()), real.data(),
                               FFTW_ESTIMATE);
  }
  ~Spectral() {
    static std::mutex planner_mutex;
    std::lock_guard<std::mutex> lock(planner_mutex);
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
  }
};

Spectral& workspace(const TorusGrid& g) {
  thread_local std::map<std::pair<int, int>, std::unique_ptr<Spectral>> cache;
  auto key = std::make_pair(g.m1, g.m2);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_unique<Spectral>(g.m1, g.m2)).first;
  return *it->second;
}

void check_same_grid(const ScalarField& a, const ScalarField& b, const char* who) {
  if (!(a.grid == b.grid)) throw std::invalid_argument(std::string(who) + ": grid mismatch");
}

double wrap_coord(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0) r += period;
  return r;
}

// shortest signed displacement a-b on a circle of the given period
double torus_delta(double a, double b, double period) {
  double d = a - b;
  d -= period * std::round(d / period);
  return d;
}

}  // namespace

TorusGrid make_grid(double L1, double L2, int m1, int m2) {
  if (!(L1 > 0) || !(L2 > 0)) throw std::invalid_argument("make_grid: periods must be positive");
  if (!power_of_two(m1) || !power_of_two(m2) || m1 < 16 || m2 < 16)
    throw std::invalid_argument("make_grid: resolutions must be powers of two, at least 16");
  return TorusGrid{L1, L2, m1, m2};
}

bool ScalarField::finite() const {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

SpectralField fft(const ScalarField& f) {
  Spectral& ws = workspace(f.grid);
  std::copy(f.v.begin(), f.v.end(), ws.real.begin());
  fftw_execute(ws.fwd);
  SpectralField out;
  out.grid = f.grid;
  out.c.assign(ws.cplx.begin(), ws.cplx.end());
  return out;
}

ScalarField ifft(const SpectralField& s) {
  Spectral& ws = workspace(s.grid);
  std::copy(s.c.begin(), s.c.end(), ws.cplx.begin());
  fftw_execute(ws.bwd);
  ScalarField out(s.grid);
  const double scale = 1.0 / (static_cast<double>(s.grid.m1) * s.grid.m2);
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] = ws.real[i] * scale;
  return out;
}

double mode_k2(const TorusGrid& g, int kx, int ky) {
  const int kys = (ky <= g.m2 / 2) ? ky : ky - g.m2;
  const double ax = 2.0 * kPi * kx / g.L1;
  const double ay = 2.0 * kPi * kys / g.L2;
  return ax * ax + ay * ay;
}

double integrate(const ScalarField& f) { return kernels::sum(f.v.data(), f.v.size()) * f.grid.cell(); }

double mean(const ScalarField& f) { return integrate(f) / f.grid.area(); }

ScalarField mean_zero_project(const ScalarField& f) {
  ScalarField out = f;
  kernels::shift(-mean(f), out.v.data(), out.v.size());
  return out;
}

ScalarField laplacian_inverse_meanzero(const ScalarField& g) {
  double amax = 0;
  for (double x : g.v) amax = std::max(amax, std::abs(x));
  if (amax == 0.0) return ScalarField(g.grid);
  if (std::abs(integrate(g)) > 1e-8 * g.grid.area() * amax)
    throw NonMeanZeroError("laplacian_inverse_meanzero: input has nonzero mean");

  SpectralField s = fft(g);
  const int nxr = g.grid.m1 / 2 + 1;
  for (int ky = 0; ky < g.grid.m2; ++ky)
    for (int kx = 0; kx < nxr; ++kx) {
      auto& bin = s.c[static_cast<std::size_t>(ky) * nxr + kx];
      const double k2 = mode_k2(g.grid, kx, ky);
      bin = (k2 == 0.0) ? 0.0 : bin / (-k2);
    }
  return ifft(s);
}

ScalarField laplacian(const ScalarField& f) {
  SpectralField s = fft(f);
  const int nxr = f.grid.m1 / 2 + 1;
  for (int ky = 0; ky < f.grid.m2; ++ky)
    for (int kx = 0; kx < nxr; ++kx)
      s.c[static_cast<std::size_t>(ky) * nxr + kx] *= -mode_k2(f.grid, kx, ky);
  return ifft(s);
}

std::pair<ScalarField, ScalarField> gradient(const ScalarField& f) {
  SpectralField s = fft(f);
  SpectralField sx = s, sy = s;
  const int nxr = f.grid.m1 / 2 + 1;
  for (int ky = 0; ky < f.grid.m2; ++ky) {
    const int kys = (ky <= f.grid.m2 / 2) ? ky : ky - f.grid.m2;
    const double ay = (ky == f.grid.m2 / 2) ? 0.0 : 2.0 * kPi * kys / f.grid.L2;
    for (int kx = 0; kx < nxr; ++kx) {
      const double ax = (kx == f.grid.m1 / 2) ? 0.0 : 2.0 * kPi * kx / f.grid.L1;
      const std::size_t idx = static_cast<std::size_t>(ky) * nxr + kx;
      sx.c[idx] = std::complex<double>(0, ax) * s.c[idx];
      sy.c[idx] = std::complex<double>(0, ay) * s.c[idx];
    }
  }
  return {ifft(sx), ifft(sy)};
}

double h1_inner(const ScalarField& f, const ScalarField& g) {
  check_same_grid(f, g, "h1_inner");
  auto [fx, fy] = gradient(f);
  auto [gx, gy] = gradient(g);
  const std::size_t n = f.v.size();
  const double cell = f.grid.cell();
  return (kernels::dot(f.v.data(), g.v.data(), n) + kernels::dot(fx.v.data(), gx.v.data(), n) +
          kernels::dot(fy.v.data(), gy.v.data(), n)) *
         cell;
}

VortexSet::VortexSet(double L1, double L2, std::vector<std::vector<VortexPoint>> per_component)
    : L1_(L1), L2_(L2), points_(std::move(per_component)) {
  int total = 0;
  for (auto& comp : points_) {
    for (auto& p : comp) {
      if (p.multiplicity < 1) throw std::invalid_argument("VortexSet: multiplicity must be >= 1");
      p.x = wrap_coord(p.x, L1_);
      p.y = wrap_coord(p.y, L2_);
      total += p.multiplicity;
    }
  }
  if (total < 1) throw std::invalid_argument("VortexSet: at least one vortex point is required");
}

int VortexSet::count(int j) const {
  int n = 0;
  for (const auto& p : points_[j]) n += p.multiplicity;
  return n;
}

std::vector<int> VortexSet::counts() const {
  std::vector<int> n(points_.size());
  for (int j = 0; j < components(); ++j) n[j] = count(j);
  return n;
}

Background background_function(const TorusGrid& grid, const VortexSet& vortices, int component,
                               const BackgroundOptions& opt) {
  const auto& pts = vortices.component(component);
  Background bg;
  bg.count = vortices.count(component);
  if (bg.count == 0) {
    bg.u0 = ScalarField(grid);
    bg.exp_u0 = ScalarField(grid, 1.0);
    return bg;
  }

  // resolution warning: nearest pair of distinct vortex points
  const double min_sep_cells = 4.0 * std::max(grid.hx(), grid.hy());
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = a + 1; b < pts.size(); ++b) {
      const double dx = torus_delta(pts[a].x, pts[b].x, grid.L1);
      const double dy = torus_delta(pts[a].y, pts[b].y, grid.L2);
      if (std::hypot(dx, dy) < min_sep_cells) {
        warn("background_function: vortex points closer than 4 grid cells; "
             "increase the resolution to resolve them");
        b = pts.size();
        a = pts.size();
      }
    }

  const double sigma = opt.sigma_factor * std::max(grid.hx(), grid.hy());
  const double cut2 = 81.0 * sigma * sigma;  // exp(-cut/2sigma^2) ~ 2e-18
  const int rx = 1 + static_cast<int>(std::ceil(9.0 * sigma / grid.L1));
  const int ry = 1 + static_cast<int>(std::ceil(9.0 * sigma / grid.L2));

  ScalarField density(grid);
  ScalarField raw(grid);
  for (const auto& p : pts) {
    std::fill(raw.v.begin(), raw.v.end(), 0.0);
    for (int iy = 0; iy < grid.m2; ++iy) {
      const double y = iy * grid.hy();
      for (int ix = 0; ix < grid.m1; ++ix) {
        const double x = ix * grid.hx();
        double acc = 0;
        for (int ny = -ry; ny <= ry; ++ny) {
          const double dy = y - p.y - ny * grid.L2;
          for (int nx = -rx; nx <= rx; ++nx) {
            const double dx = x - p.x - nx * grid.L1;
            const double d2 = dx * dx + dy * dy;
            if (d2 <= cut2) acc += std::exp(-d2 / (2.0 * sigma * sigma));
          }
        }
        raw.at(ix, iy) = acc;
      }
    }
    const double mass = integrate(raw);  // normalize to unit mass on the grid
    kernels::axpy(p.multiplicity / mass, raw.v.data(), density.v.data(), raw.v.size());
  }

  ScalarField rhs(grid);
  const double uniform = 4.0 * kPi * bg.count / grid.area();
  for (std::size_t i = 0; i < rhs.v.size(); ++i) rhs.v[i] = 4.0 * kPi * density.v[i] - uniform;
  bg.u0 = laplacian_inverse_meanzero(rhs);
  bg.exp_u0 = ScalarField(grid);
  kernels::vexp(bg.u0.v.data(), bg.exp_u0.v.data(), bg.u0.v.size());
  return bg;
}

Background background_function_ewald(const TorusGrid& grid, const VortexSet& vortices,
                                     int component) {
  const auto& pts = vortices.component(component);
  Background bg;
  bg.count = vortices.count(component);
  if (bg.count == 0) {
    bg.u0 = ScalarField(grid);
    bg.exp_u0 = ScalarField(grid, 1.0);
    return bg;
  }

  // splitting parameter: reciprocal tail below 1e-16 at the Nyquist shell
  const double knyq = kPi * std::min(grid.m1 / grid.L1, grid.m2 / grid.L2);
  const double eta = knyq / 12.3;

  // smooth remainder, assembled directly in the half-spectrum
  SpectralField s;
  s.grid = grid;
  const int nxr = grid.m1 / 2 + 1;
  s.c.assign(static_cast<std::size_t>(grid.m2) * nxr, {0.0, 0.0});
  const double norm = static_cast<double>(grid.m1) * grid.m2;
  for (int ky = 0; ky < grid.m2; ++ky) {
    if (ky == grid.m2 / 2) continue;
    const int kys = (ky <= grid.m2 / 2) ? ky : ky - grid.m2;
    const double ay = 2.0 * kPi * kys / grid.L2;
    for (int kx = 0; kx < nxr; ++kx) {
      if (kx == grid.m1 / 2) continue;
      const double ax = 2.0 * kPi * kx / grid.L1;
      const double k2 = ax * ax + ay * ay;
      if (k2 == 0.0) continue;
      std::complex<double> structure(0, 0);
      for (const auto& p : pts)
        structure += static_cast<double>(p.multiplicity) *
                     std::exp(std::complex<double>(0, -(ax * p.x + ay * p.y)));
      const double damp = std::exp(-k2 / (4.0 * eta * eta));
      s.c[static_cast<std::size_t>(ky) * nxr + kx] =
          structure * (-4.0 * kPi * damp / (grid.area() * k2)) * norm;
    }
  }
  ScalarField u = ifft(s);

  // short-range sums of E1(eta^2 r^2) over the nearby images
  const double cut2 = 45.0 / (eta * eta);
  const int rx = 1 + static_cast<int>(std::ceil(std::sqrt(cut2) / grid.L1));
  const int ry = 1 + static_cast<int>(std::ceil(std::sqrt(cut2) / grid.L2));
  for (int iy = 0; iy < grid.m2; ++iy) {
    const double y = iy * grid.hy();
    for (int ix = 0; ix < grid.m1; ++ix) {
      const double x = ix * grid.hx();
      double acc = 0;
      for (const auto& p : pts) {
        for (int ny = -ry; ny <= ry; ++ny) {
          const double dy = y - p.y - ny * grid.L2;
          for (int nx = -rx; nx <= rx; ++nx) {
            const double dx = x - p.x - nx * grid.L1;
            double d2 = dx * dx + dy * dy;
            if (d2 > cut2) continue;
            d2 = std::max(d2, 1e-300);  // node-on-vortex: exp(u0) underflows to 0
            acc += -p.multiplicity * std::expint(-eta * eta * d2);
          }
        }
      }
      u.at(ix, iy) -= acc;
    }
  }

  bg.u0 = mean_zero_project(u);
  bg.exp_u0 = ScalarField(grid);
  kernels::vexp(bg.u0.v.data(), bg.exp_u0.v.data(), bg.u0.v.size());
  return bg;
}

void write_field_csv(const ScalarField& f, const std::string& path, int component) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_field_csv: cannot open " + path);
  nlohmann::json header = {{"periods", {f.grid.L1, f.grid.L2}},
                           {"resolution", {f.grid.m1, f.grid.m2}},
                           {"component", component}};
  out << header.dump() << "\n";
  char buf[32];
  for (int iy = 0; iy < f.grid.m2; ++iy) {
    for (int ix = 0; ix < f.grid.m1; ++ix) {
      std::snprintf(buf, sizeof(buf), "%.17g", f.at(ix, iy));
      out << buf << (ix + 1 < f.grid.m1 ? "," : "\n");
    }
  }
}

ScalarField read_field_csv(const std::string& path, int* component) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_field_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("read_field_csv: empty file " + path);
  nlohmann::json header = nlohmann::json::parse(line);
  const TorusGrid grid = make_grid(header["periods"][0], header["periods"][1],
                                   header["resolution"][0], header["resolution"][1]);
  if (component) *component = header.value("component", -1);
  ScalarField f(grid);
  for (int iy = 0; iy < grid.m2; ++iy) {
    if (!std::getline(in, line)) throw std::runtime_error("read_field_csv: truncated " + path);
    std::stringstream ss(line);
    std::string tok;
    for (int ix = 0; ix < grid.m1; ++ix) {
      if (!std::getline(ss, tok, ','))
        throw std::runtime_error("read_field_csv: short row in " + path);
      f.at(ix, iy) = std::stod(tok);
    }
  }
  return f;
}

}  // namespace cshv
