#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace cshv {

using Rational = boost::rational<std::int64_t>;
using RationalMatrix = std::vector<std::vector<Rational>>;
using RationalVector = std::vector<Rational>;

/// Cartan matrix of SU(N+1): tri-diagonal, 2 on the diagonal, -1 on the
/// sub/super-diagonals.  Rejects N < 1.
std::vector<std::vector<std::int64_t>> cartan_matrix(int N);

/// Exact inverse A = K^{-1}, a_{jk} = min(j,k) (N+1-max(j,k)) / (N+1).
RationalMatrix cartan_inverse(int N);

/// Row sums of A: r_j = j (N+1-j) / 2 for j = 1..N (0-indexed storage).
RationalVector vortex_weights(int N);

/// M = R K R with R = diag(r): symmetric tri-diagonal, diagonal 2 r_j^2,
/// off-diagonal -r_j r_{j+1}.  Positive definite, and M 1 = r.
RationalMatrix interaction_matrix(int N);

/// b_j = 4*pi * sum_k a_{jk} n_k.  Requires n_k >= 0 with at least one
/// positive entry; all b_j come out strictly positive because A is
/// entrywise positive.
std::vector<double> constraint_offsets(int N, const std::vector<int>& n);

/// Coupling threshold lambda_0 = (16*pi/area) * sum_{ij} a_{ij} n_j / sum_{ij} a_{ij}.
double lambda_lower_bound(int N, const std::vector<int>& n, double area);

/// All exact SU(N+1) data plus the vortex-dependent offsets, converted to
/// double only where downstream grid code consumes them.  Immutable after
/// construction and safe to share across threads.
struct CartanData {
  int N = 0;
  std::vector<std::vector<std::int64_t>> K;
  RationalMatrix A;
  RationalVector r;
  RationalMatrix M;
  std::vector<int> vortex_counts;
  std::vector<double> b;
  double lambda0 = 0;

  // double views with the r_0 = r_{N+1} = 0 convention: weight(0) == 0
  std::vector<double> r_ext;  // size N+2, r_ext[j] = r_j for j=1..N, 0 at ends
  std::vector<std::vector<double>> A_d;

  double weight(int j) const { return (j >= 1 && j <= N) ? r_ext[j] : 0.0; }
};

CartanData make_cartan_data(int N, const std::vector<int>& vortex_counts, double area);

}  // namespace cshv
