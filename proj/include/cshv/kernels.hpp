#pragma once

#include <cstddef>
#include <string>

namespace cshv::kernels {

/// Dispatch table for the dense field kernels used by the grid modules.
/// Every entry has a scalar reference implementation; on x86-64 an AVX2
/// variant is selected at runtime when the CPU supports it.  Variants are
/// equivalence-tested against the scalar reference in tests/test_kernels.cpp.
struct Ops {
  const char* name;
  double (*sum)(const double* x, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  void (*axpy)(double a, const double* x, double* y, std::size_t n);  // y += a*x
  void (*scal)(double a, double* x, std::size_t n);                   // x *= a
  void (*shift)(double a, double* x, std::size_t n);                  // x += a
  void (*mul)(const double* x, const double* y, double* out, std::size_t n);
  void (*vexp)(const double* x, double* out, std::size_t n);
};

const Ops& scalar_ops();

/// AVX2 table, or nullptr when the binary was built without AVX2 support.
const Ops* avx2_ops();

/// The table selected for this process: AVX2 when compiled in and supported
/// by the CPU, scalar otherwise.  Overridable with CSHV_KERNELS=scalar|avx2
/// in the environment (unsupported requests fall back to scalar).
const Ops& active();

// Convenience forwarders.
inline double sum(const double* x, std::size_t n) { return active().sum(x, n); }
inline double dot(const double* x, const double* y, std::size_t n) { return active().dot(x, y, n); }
inline void axpy(double a, const double* x, double* y, std::size_t n) { active().axpy(a, x, y, n); }
inline void scal(double a, double* x, std::size_t n) { active().scal(a, x, n); }
inline void shift(double a, double* x, std::size_t n) { active().shift(a, x, n); }
inline void mul(const double* x, const double* y, double* out, std::size_t n) { active().mul(x, y, out, n); }
inline void vexp(const double* x, double* out, std::size_t n) { active().vexp(x, out, n); }

}  // namespace cshv::kernels
