#pragma once

#include <vector>

#include "cshv/cartan.hpp"
#include "cshv/torus.hpp"
#include "cshv/tridiag.hpp"

namespace cshv {

/// Everything the mean-value constraint system needs, reduced to scalars:
/// for a_j = u_j^0 + w_j these are the moments
///   E1_j = int exp(a_j),  E2_j = int exp(2 a_j),  X_j = int exp(a_j + a_{j+1}).
/// Arrays are 1-based (index 0 unused); r carries the r_0 = r_{N+1} = 0
/// convention.  Instances are immutable value types; tests may fill the
/// moments synthetically.
struct ConstraintContext {
  int N = 0;
  double lambda = 0;
  double area = 0;
  std::vector<double> r;   // size N+2
  std::vector<double> b;   // size N+1
  std::vector<double> E1;  // size N+1
  std::vector<double> E2;  // size N+1
  std::vector<double> X;   // size N+1, X[j] couples j and j+1 (X[0] = X[N] = 0)

  /// Positivity and the Cauchy-Schwarz bound E1^2 <= area * E2.
  void validate() const;
};

ConstraintContext make_context(const CartanData& cd, double lambda,
                               const std::vector<ScalarField>& w,
                               const std::vector<Background>& bg);

/// Sign pattern: eps[j] in {0,1}, 1-based.  eps_j = 1 selects the larger
/// quadratic root throughout this module.
using SignPattern = std::vector<int>;
SignPattern all_ones_pattern(int N);
SignPattern all_zeros_pattern(int N);

/// Admissibility of the moment data: lambda E1_j^2 >= 8 b_j E2_j for all j.
bool admissible(const ConstraintContext& ctx);

/// Worst-case margin min_j lambda E1_j^2 / (8 b_j E2_j); admissible iff >= 1.
double admissibility_margin(const ConstraintContext& ctx, int* worst_component = nullptr);

/// Q~_j(s) = E1_j + s r_{j-1} t_{j-1} X_{j-1} + s r_{j+1} t_{j+1} X_j.
double q_tilde(const ConstraintContext& ctx, const std::vector<double>& t, double s, int j);

/// Homotopy residual: phi_j = t_j - [Q~_j - (-1)^{eps_j} sqrt(Q~_j^2 - 8 b_j E2_j / lambda)]
///                              / (4 r_j E2_j).
/// Throws NegativeDiscriminantError when a discriminant goes negative.
std::vector<double> phi(const ConstraintContext& ctx, const std::vector<double>& t, double s,
                        const SignPattern& eps);

/// Jacobian of phi in t: unit diagonal, off-diagonals
///   dphi_j/dt_{j+-1} = -(s r_{j+-1} X / (4 r_j E2_j)) [1 - (-1)^{eps_j} Q~_j / sqrt(disc_j)].
/// Valid at any t with positive discriminants (matches finite differences of
/// phi everywhere, not just at solutions).
tridiag::TriDiagSpec phi_jacobian(const ConstraintContext& ctx, const std::vector<double>& t,
                                  double s, const SignPattern& eps);

/// ds-derivative of phi at fixed t (for the Euler predictor).
std::vector<double> phi_s_derivative(const ConstraintContext& ctx, const std::vector<double>& t,
                                     double s, const SignPattern& eps);

/// Decoupled (s = 0) closed form t_j = [E1_j - (-1)^{eps_j} sqrt(E1_j^2 - 8 b_j E2_j/lambda)]
///                                     / (4 r_j E2_j).
std::vector<double> solve_s0(const ConstraintContext& ctx, const SignPattern& eps);

/// Scaled coefficient data for the nondegeneracy certificate at a solution
/// of phi = 0: conjugating the Jacobian by diag(t) preserves the determinant
/// and puts the off-diagonal magnitudes into the barrier form
///   alpha_{j,1} = s t_{j-1} r_{j-1} X_{j-1} / sqrt(disc_j),
///   alpha_{j,2} = s t_{j+1} r_{j+1} X_j     / sqrt(disc_j),
/// which satisfy alpha_{j,2} < 1 - tau_j and alpha_{j+1,1} < tau_{j+1} with
///   tau_j = t_{j-1} r_{j-1} X_{j-1} / (t_{j-1} r_{j-1} X_{j-1} + t_{j+1} r_{j+1} X_j).
struct CertificateData {
  tridiag::TriDiagSpec spec;
  tridiag::BarrierSpec tau;
};
CertificateData certificate_data(const ConstraintContext& ctx, const std::vector<double>& t,
                                 double s, const SignPattern& eps);

struct ContinuationOptions {
  double initial_step = 0.1;
  double step_floor = 1e-6;
  double newton_tol = 1e-13;  // scaled by (1 + max|t|)
  int newton_max_iters = 50;
  double envelope_constant = 1e3;  // sanity bound of the solution envelope
  bool warn_on_envelope = true;
};

struct ConstraintSolution {
  std::vector<double> t;  // 1-based, t_j = exp(c_j) > 0
  SignPattern eps;
  double s = 0;                  // homotopy parameter reached (1 on success)
  double jacobian_det = 0;       // determinant functional at s
  double residual_norm = 0;      // max-norm of phi at the returned point
  bool certificate_ok = false;   // barrier hypothesis held at the end point
  int steps = 0;                 // accepted continuation steps
  int newton_iterations = 0;     // total corrector iterations
  std::vector<std::pair<double, double>> trace;  // (s, jacobian det) per accepted step
};

/// Predictor-corrector continuation from the s = 0 closed form to s = 1.
/// Tri-diagonal Newton solves use Thomas elimination while the positivity
/// certificate holds, with a dense LU fallback otherwise.  Throws
/// AdmissibilityError when the context is outside the admissible set and
/// StepUnderflowError when the step control collapses.
ConstraintSolution continuation_solve(const ConstraintContext& ctx, const SignPattern& eps,
                                      const ContinuationOptions& opts = {});

}  // namespace cshv
