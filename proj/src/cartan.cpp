#include "cshv/cartan.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cshv {

std::vector<std::vector<std::int64_t>> cartan_matrix(int N) {
  if (N < 1) throw std::invalid_argument("cartan_matrix: rank must be >= 1");
  std::vector<std::vector<std::int64_t>> K(N, std::vector<std::int64_t>(N, 0));
  for (int j = 0; j < N; ++j) {
    K[j][j] = 2;
    if (j > 0) K[j][j - 1] = -1;
    if (j + 1 < N) K[j][j + 1] = -1;
  }
  return K;
}

RationalMatrix cartan_inverse(int N) {
  if (N < 1) throw std::invalid_argument("cartan_inverse: rank must be >= 1");
  RationalMatrix A(N, RationalVector(N));
  for (int j = 1; j <= N; ++j)
    for (int k = 1; k <= N; ++k)
      A[j - 1][k - 1] = Rational(std::int64_t(std::min(j, k)) * (N + 1 - std::max(j, k)), N + 1);
  return A;
}

RationalVector vortex_weights(int N) {
  if (N < 1) throw std::invalid_argument("vortex_weights: rank must be >= 1");
  RationalVector r(N);
  for (int j = 1; j <= N; ++j) r[j - 1] = Rational(std::int64_t(j) * (N + 1 - j), 2);
  return r;
}

RationalMatrix interaction_matrix(int N) {
  const RationalVector r = vortex_weights(N);
  RationalMatrix M(N, RationalVector(N, Rational(0)));
  for (int j = 0; j < N; ++j) {
    M[j][j] = 2 * r[j] * r[j];
    if (j + 1 < N) {
      M[j][j + 1] = -r[j] * r[j + 1];
      M[j + 1][j] = M[j][j + 1];
    }
  }
  return M;
}

std::vector<double> constraint_offsets(int N, const std::vector<int>& n) {
  if (static_cast<int>(n.size()) != N)
    throw std::invalid_argument("constraint_offsets: vortex count vector has wrong length");
  bool any = false;
  for (int nk : n) {
    if (nk < 0) throw std::invalid_argument("constraint_offsets: negative vortex count");
    any = any || nk > 0;
  }
  if (!any)
    throw std::invalid_argument(
        "constraint_offsets: all vortex counts are zero; the constraints degenerate");
  const RationalMatrix A = cartan_inverse(N);
  std::vector<double> b(N);
  for (int j = 0; j < N; ++j) {
    Rational acc(0);
    for (int k = 0; k < N; ++k) acc += A[j][k] * n[k];
    b[j] = 4.0 * std::numbers::pi * boost::rational_cast<double>(acc);
  }
  return b;
}

double lambda_lower_bound(int N, const std::vector<int>& n, double area) {
  if (area <= 0) throw std::invalid_argument("lambda_lower_bound: area must be positive");
  // column sums of A equal the row sums r_j, so both double sums collapse
  const RationalVector r = vortex_weights(N);
  Rational num(0), den(0);
  for (int j = 0; j < N; ++j) {
    num += r[j] * n[j];
    den += r[j];
  }
  return 16.0 * std::numbers::pi / area * boost::rational_cast<double>(num / den);
}

CartanData make_cartan_data(int N, const std::vector<int>& vortex_counts, double area) {
  CartanData cd;
  cd.N = N;
  cd.K = cartan_matrix(N);
  cd.A = cartan_inverse(N);
  cd.r = vortex_weights(N);
  cd.M = interaction_matrix(N);
  cd.vortex_counts = vortex_counts;
  cd.b = constraint_offsets(N, vortex_counts);
  cd.lambda0 = lambda_lower_bound(N, vortex_counts, area);

  cd.r_ext.assign(N + 2, 0.0);
  for (int j = 1; j <= N; ++j) cd.r_ext[j] = boost::rational_cast<double>(cd.r[j - 1]);
  cd.A_d.assign(N, std::vector<double>(N));
  for (int j = 0; j < N; ++j)
    for (int k = 0; k < N; ++k) cd.A_d[j][k] = boost::rational_cast<double>(cd.A[j][k]);
  return cd;
}

}  // namespace cshv
