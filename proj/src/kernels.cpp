#include "cshv/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>

namespace cshv::kernels {

namespace {

double sum_scalar(const double* x, std::size_t n) {
  // Four partial accumulators; matches the lane structure of the wide
  // variants closely enough that cross-ISA drift stays near round-off.
  double a0 = 0, a1 = 0, a2 = 0, a3 = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    a0 += x[i];
    a1 += x[i + 1];
    a2 += x[i + 2];
    a3 += x[i + 3];
  }
  for (; i < n; ++i) a0 += x[i];
  return (a0 + a1) + (a2 + a3);
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double a0 = 0, a1 = 0, a2 = 0, a3 = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    a0 += x[i] * y[i];
    a1 += x[i + 1] * y[i + 1];
    a2 += x[i + 2] * y[i + 2];
    a3 += x[i + 3] * y[i + 3];
  }
  for (; i < n; ++i) a0 += x[i] * y[i];
  return (a0 + a1) + (a2 + a3);
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scal_scalar(double a, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void shift_scalar(double a, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] += a;
}

void mul_scalar(const double* x, const double* y, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * y[i];
}

void vexp_scalar(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(x[i]);
}

const Ops& pick_active() {
  const Ops* table = &scalar_ops();
#if defined(CSHV_KERNELS_AVX2)
  if (avx2_ops() && __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    table = avx2_ops();
#endif
  if (const char* req = std::getenv("CSHV_KERNELS")) {
    if (std::strcmp(req, "scalar") == 0) table = &scalar_ops();
    if (std::strcmp(req, "avx2") == 0 && avx2_ops()) table = avx2_ops();
  }
  return *table;
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops = {"scalar",     sum_scalar,   dot_scalar, axpy_scalar,
                          scal_scalar,  shift_scalar, mul_scalar, vexp_scalar};
  return ops;
}

#if !defined(CSHV_KERNELS_AVX2)
const Ops* avx2_ops() { return nullptr; }
#endif

const Ops& active() {
  static const Ops& ops = pick_active();
  return ops;
}

}  // namespace cshv::kernels
