#pragma once

#include <utility>
#include <vector>

namespace cshv::tridiag {

/// Tri-diagonal family with unit diagonal: row j carries beta_{j,1} on the
/// sub-diagonal and beta_{j,2} on the super-diagonal, with the conventions
/// beta_{1,1} = beta_{N,2} = 0.  Storage is 1-based (index 0 unused) so the
/// code reads like the recursions it implements.
///
/// The optional split form factors each coefficient into a sign and a
/// nonnegative magnitude, beta_{j,i} = (-1)^{eps_{j,i}} alpha_{j,i}; it is
/// what the derivative formulas and the positivity certificate operate on.
struct TriDiagSpec {
  int N = 0;
  std::vector<double> sub;    // beta_{j,1}, valid j = 2..N
  std::vector<double> super;  // beta_{j,2}, valid j = 1..N-1
  bool has_split = false;
  std::vector<int> eps_sub, eps_super;
  std::vector<double> alpha_sub, alpha_super;

  explicit TriDiagSpec(int n);

  /// Build from signed coefficients (no split form).
  static TriDiagSpec from_beta(std::vector<double> beta_sub, std::vector<double> beta_super);

  /// Build from the sign/magnitude split; beta is recombined exactly.
  static TriDiagSpec from_split(std::vector<double> alpha_sub, std::vector<int> eps_sub,
                                std::vector<double> alpha_super, std::vector<int> eps_super);

  /// Same magnitudes with every sign exponent forced to zero.
  TriDiagSpec with_zero_signs() const;

  double beta1(int j) const { return (j >= 2 && j <= N) ? sub[j] : 0.0; }
  double beta2(int j) const { return (j >= 1 && j <= N - 1) ? super[j] : 0.0; }
  double alpha1(int j) const { return (j >= 2 && j <= N) ? alpha_sub[j] : 0.0; }
  double alpha2(int j) const { return (j >= 1 && j <= N - 1) ? alpha_super[j] : 0.0; }
};

/// Barrier coefficients tau_j in [0,1] for j = k..l.
struct BarrierSpec {
  int k = 1, l = 0;
  std::vector<double> tau;  // tau[j - k] = tau_j

  BarrierSpec(int k_, int l_, std::vector<double> tau_);
  double value(int j) const { return tau[static_cast<std::size_t>(j - k)]; }
};

/// Dense window T_l^{(k)}: identity diagonal plus the beta bands, size
/// (l-k+1)^2.  Throws on index-range violations.
std::vector<std::vector<double>> build_matrix(const TriDiagSpec& spec, int k, int l);

/// Determinant functional F_l^{(k)} evaluated bottom-up in O(l-k) time via
///   F^{(j)} = F^{(j+1)} - beta_{j+1,1} beta_{j,2} F^{(j+2)},
/// with F^{(l)} = F^{(l+1)} = 1 and F^{(j)} = 0 for j >= l+2.  Equals
/// det(build_matrix(spec, k, l)).
double f_value(const TriDiagSpec& spec, int k, int l);

/// Reference determinant by cofactor expansion along the first row.  No
/// pivoting, no scaling; sizes above 12 are rejected.  Kept deliberately
/// independent of f_value so the two can cross-check each other.
double det_cofactor(const std::vector<std::vector<double>>& m);

/// Partial derivatives of F_l^{(k)} in the split form:
///   dF/dalpha_{j+1,1} = -(-1)^{eps_{j,2}+eps_{j+1,1}} alpha_{j,2}   F_l^{(j+2)} F_{j-1}^{(k)}
///   dF/dalpha_{j,2}   = -(-1)^{eps_{j,2}+eps_{j+1,1}} alpha_{j+1,1} F_l^{(j+2)} F_{j-1}^{(k)}
/// Outside k <= j < l both vanish (the boundary conventions give a zero
/// factor).  Returned as {dF/dalpha_{j+1,1}, dF/dalpha_{j,2}}.
std::pair<double, double> f_partials(const TriDiagSpec& spec, int k, int l, int j);

/// Barrier determinant recursion
///   Fbar^{(j)} = Fbar^{(j+1)} - tau_{j+1} (1 - tau_j) Fbar^{(j+2)},
/// nonnegative for any tau in [0,1]^m and exactly zero when tau_k = 0 and
/// tau_l = 1.
double barrier_f(const BarrierSpec& tau, int k, int l);

/// Dense barrier matrix: row j carries tau_j on the sub-diagonal, 1 on the
/// diagonal and (1 - tau_j) on the super-diagonal.
std::vector<std::vector<double>> barrier_matrix(const BarrierSpec& tau, int k, int l);

struct CertificateResult {
  bool hypothesis_ok = false;  // 0 <= alpha_{j,2} < 1-tau_j and 0 <= alpha_{j+1,1} < tau_{j+1}
  double f = 0;                // F_l^{(k)} of the spec as given
  double f_zero_signs = 0;     // same magnitudes, all sign exponents zero
  double f_barrier = 0;        // barrier determinant
};

/// Checks the strict barrier bounds on the split magnitudes; when they hold
/// the chain F >= F_0 > Fbar >= 0 applies and the determinant is positive.
CertificateResult positivity_certificate(const TriDiagSpec& spec, const BarrierSpec& tau, int k,
                                         int l);

/// Thomas elimination for a tri-diagonal system (no pivoting).  Intended for
/// matrices whose determinant positivity has been certified; callers needing
/// robustness on arbitrary input should use a dense factorization instead.
std::vector<double> thomas_solve(const std::vector<double>& sub, const std::vector<double>& diag,
                                 const std::vector<double>& super, std::vector<double> rhs);

}  // namespace cshv::tridiag
