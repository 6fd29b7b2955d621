#include "cshv/constraint.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

#include "cshv/errors.hpp"
#include "cshv/kernels.hpp"

namespace cshv {

namespace {

double max_abs(const std::vector<double>& v, int from) {
  double m = 0;
  for (std::size_t i = from; i < v.size(); ++i) m = std::max(m, std::abs(v[i]));
  return m;
}

struct RowData {
  double qt;    // Q~_j(s)
  double disc;  // Q~_j^2 - 8 b_j E2_j / lambda
  double root;  // selected quadratic root
};

RowData row_data(const ConstraintContext& ctx, const std::vector<double>& t, double s, int j,
                 int eps_j) {
  RowData rd;
  rd.qt = q_tilde(ctx, t, s, j);
  rd.disc = rd.qt * rd.qt - 8.0 * ctx.b[j] * ctx.E2[j] / ctx.lambda;
  if (rd.disc < 0)
    throw NegativeDiscriminantError("constraint: negative discriminant in component " +
                                        std::to_string(j),
                                    j);
  const double sign = (eps_j & 1) ? -1.0 : 1.0;  // (-1)^eps
  rd.root = (rd.qt - sign * std::sqrt(rd.disc)) / (4.0 * ctx.r[j] * ctx.E2[j]);
  return rd;
}

}  // namespace

void ConstraintContext::validate() const {
  if (N < 1) throw std::invalid_argument("ConstraintContext: N must be >= 1");
  if (!(lambda > 0)) throw std::invalid_argument("ConstraintContext: lambda must be positive");
  for (int j = 1; j <= N; ++j) {
    if (!(E1[j] > 0) || !(E2[j] > 0) || !(b[j] > 0) || !(r[j] > 0))
      throw std::invalid_argument("ConstraintContext: moments must be strictly positive");
    if (j < N && !(X[j] > 0))
      throw std::invalid_argument("ConstraintContext: cross moments must be strictly positive");
    if (E1[j] * E1[j] > area * E2[j] * (1.0 + 1e-12))
      throw std::invalid_argument("ConstraintContext: Cauchy-Schwarz violated (bad quadrature?)");
  }
}

ConstraintContext make_context(const CartanData& cd, double lambda,
                               const std::vector<ScalarField>& w,
                               const std::vector<Background>& bg) {
  const int N = cd.N;
  if (static_cast<int>(w.size()) != N || static_cast<int>(bg.size()) != N)
    throw std::invalid_argument("make_context: field arrays must have N components");
  ConstraintContext ctx;
  ctx.N = N;
  ctx.lambda = lambda;
  ctx.area = w[0].grid.area();
  ctx.r = cd.r_ext;
  ctx.b.assign(N + 1, 0.0);
  for (int j = 1; j <= N; ++j) ctx.b[j] = cd.b[j - 1];
  ctx.E1.assign(N + 1, 0.0);
  ctx.E2.assign(N + 1, 0.0);
  ctx.X.assign(N + 1, 0.0);

  const std::size_t n = w[0].v.size();
  const double cell = w[0].grid.cell();
  std::vector<std::vector<double>> expa(N);
  std::vector<double> sum_field(n);
  for (int j = 0; j < N; ++j) {
    for (std::size_t i = 0; i < n; ++i) sum_field[i] = bg[j].u0.v[i] + w[j].v[i];
    expa[j].resize(n);
    kernels::vexp(sum_field.data(), expa[j].data(), n);
    ctx.E1[j + 1] = kernels::sum(expa[j].data(), n) * cell;
    ctx.E2[j + 1] = kernels::dot(expa[j].data(), expa[j].data(), n) * cell;
  }
  for (int j = 1; j < N; ++j)
    ctx.X[j] = kernels::dot(expa[j - 1].data(), expa[j].data(), n) * cell;
  ctx.validate();
  return ctx;
}

SignPattern all_ones_pattern(int N) { return SignPattern(N + 1, 1); }
SignPattern all_zeros_pattern(int N) { return SignPattern(N + 1, 0); }

double admissibility_margin(const ConstraintContext& ctx, int* worst_component) {
  double worst = std::numeric_limits<double>::infinity();
  int comp = 1;
  for (int j = 1; j <= ctx.N; ++j) {
    const double m = ctx.lambda * ctx.E1[j] * ctx.E1[j] / (8.0 * ctx.b[j] * ctx.E2[j]);
    if (m < worst) {
      worst = m;
      comp = j;
    }
  }
  if (worst_component) *worst_component = comp;
  return worst;
}

bool admissible(const ConstraintContext& ctx) { return admissibility_margin(ctx) >= 1.0; }

double q_tilde(const ConstraintContext& ctx, const std::vector<double>& t, double s, int j) {
  double q = ctx.E1[j];
  if (j - 1 >= 1) q += s * ctx.r[j - 1] * t[j - 1] * ctx.X[j - 1];
  if (j + 1 <= ctx.N) q += s * ctx.r[j + 1] * t[j + 1] * ctx.X[j];
  return q;
}

std::vector<double> phi(const ConstraintContext& ctx, const std::vector<double>& t, double s,
                        const SignPattern& eps) {
  std::vector<double> res(ctx.N + 1, 0.0);
  for (int j = 1; j <= ctx.N; ++j) res[j] = t[j] - row_data(ctx, t, s, j, eps[j]).root;
  return res;
}

tridiag::TriDiagSpec phi_jacobian(const ConstraintContext& ctx, const std::vector<double>& t,
                                  double s, const SignPattern& eps) {
  const int N = ctx.N;
  std::vector<double> sub(N + 1, 0.0), super(N + 1, 0.0);
  std::vector<double> asub(N + 1, 0.0), asuper(N + 1, 0.0);
  std::vector<int> esub(N + 1, 0), esuper(N + 1, 0);
  for (int j = 1; j <= N; ++j) {
    const RowData rd = row_data(ctx, t, s, j, eps[j]);
    if (rd.disc == 0.0)
      throw NegativeDiscriminantError(
          "phi_jacobian: discriminant vanished in component " + std::to_string(j), j);
    const double sign = (eps[j] & 1) ? -1.0 : 1.0;
    const double bracket = 1.0 - sign * rd.qt / std::sqrt(rd.disc);
    const double scale = -bracket / (4.0 * ctx.r[j] * ctx.E2[j]);
    if (j >= 2) sub[j] = s * ctx.r[j - 1] * ctx.X[j - 1] * scale;
    if (j <= N - 1) super[j] = s * ctx.r[j + 1] * ctx.X[j] * scale;
  }
  for (int j = 1; j <= N; ++j) {
    asub[j] = std::abs(sub[j]);
    esub[j] = (sub[j] < 0) ? 1 : 0;
    asuper[j] = std::abs(super[j]);
    esuper[j] = (super[j] < 0) ? 1 : 0;
  }
  return tridiag::TriDiagSpec::from_split(std::move(asub), std::move(esub), std::move(asuper),
                                          std::move(esuper));
}

std::vector<double> phi_s_derivative(const ConstraintContext& ctx, const std::vector<double>& t,
                                     double s, const SignPattern& eps) {
  std::vector<double> d(ctx.N + 1, 0.0);
  for (int j = 1; j <= ctx.N; ++j) {
    const RowData rd = row_data(ctx, t, s, j, eps[j]);
    if (rd.disc == 0.0)
      throw NegativeDiscriminantError(
          "phi_s_derivative: discriminant vanished in component " + std::to_string(j), j);
    const double sign = (eps[j] & 1) ? -1.0 : 1.0;
    const double bracket = 1.0 - sign * rd.qt / std::sqrt(rd.disc);
    double dq = 0;
    if (j - 1 >= 1) dq += ctx.r[j - 1] * t[j - 1] * ctx.X[j - 1];
    if (j + 1 <= ctx.N) dq += ctx.r[j + 1] * t[j + 1] * ctx.X[j];
    d[j] = -dq * bracket / (4.0 * ctx.r[j] * ctx.E2[j]);
  }
  return d;
}

std::vector<double> solve_s0(const ConstraintContext& ctx, const SignPattern& eps) {
  if (!admissible(ctx)) {
    int comp = 1;
    admissibility_margin(ctx, &comp);
    throw AdmissibilityError("solve_s0: context outside the admissible set (component " +
                                 std::to_string(comp) + ")",
                             comp);
  }
  std::vector<double> t(ctx.N + 1, 0.0);
  for (int j = 1; j <= ctx.N; ++j) t[j] = row_data(ctx, t, 0.0, j, eps[j]).root;
  return t;
}

CertificateData certificate_data(const ConstraintContext& ctx, const std::vector<double>& t,
                                 double s, const SignPattern& eps) {
  const int N = ctx.N;
  std::vector<double> asub(N + 1, 0.0), asuper(N + 1, 0.0);
  std::vector<int> esub(N + 1, 0), esuper(N + 1, 0);
  std::vector<double> tau(N, 0.5);  // tau_j at [j-1]; 0.5 is a harmless filler for N = 1
  for (int j = 1; j <= N; ++j) {
    const RowData rd = row_data(ctx, t, s, j, eps[j]);
    const double sq = std::sqrt(std::max(rd.disc, std::numeric_limits<double>::min()));
    if (j >= 2) {
      asub[j] = s * t[j - 1] * ctx.r[j - 1] * ctx.X[j - 1] / sq;
      esub[j] = eps[j] & 1;
    }
    if (j <= N - 1) {
      asuper[j] = s * t[j + 1] * ctx.r[j + 1] * ctx.X[j] / sq;
      esuper[j] = eps[j] & 1;
    }
    const double left = (j - 1 >= 1) ? t[j - 1] * ctx.r[j - 1] * ctx.X[j - 1] : 0.0;
    const double right = (j + 1 <= N) ? t[j + 1] * ctx.r[j + 1] * ctx.X[j] : 0.0;
    if (left + right > 0) tau[j - 1] = left / (left + right);
  }
  return CertificateData{
      tridiag::TriDiagSpec::from_split(std::move(asub), std::move(esub), std::move(asuper),
                                       std::move(esuper)),
      tridiag::BarrierSpec(1, N, std::move(tau))};
}

namespace {

// one Newton corrector pass at fixed s; returns false when it fails to reach
// the tolerance (or wanders out of the positive cone)
bool newton_correct(const ConstraintContext& ctx, const SignPattern& eps, double s,
                    std::vector<double>& t, const ContinuationOptions& opts, bool& thomas_ok,
                    int& iterations) {
  const int N = ctx.N;
  for (int it = 0; it < opts.newton_max_iters; ++it) {
    std::vector<double> res = phi(ctx, t, s, eps);
    if (max_abs(res, 1) < opts.newton_tol * (1.0 + max_abs(t, 1))) return true;
    tridiag::TriDiagSpec jac = phi_jacobian(ctx, t, s, eps);
    ++iterations;

    std::vector<double> step(N, 0.0);
    if (thomas_ok) {
      std::vector<double> sub(N, 0.0), diag(N, 1.0), super(N, 0.0), rhs(N, 0.0);
      for (int j = 1; j <= N; ++j) {
        if (j >= 2) sub[j - 1] = jac.beta1(j);
        if (j <= N - 1) super[j - 1] = jac.beta2(j);
        rhs[j - 1] = -res[j];
      }
      step = tridiag::thomas_solve(sub, diag, super, rhs);
    } else {
      Eigen::MatrixXd J = Eigen::MatrixXd::Identity(N, N);
      Eigen::VectorXd rhs(N);
      for (int j = 1; j <= N; ++j) {
        if (j >= 2) J(j - 1, j - 2) = jac.beta1(j);
        if (j <= N - 1) J(j - 1, j) = jac.beta2(j);
        rhs(j - 1) = -res[j];
      }
      Eigen::VectorXd x = J.partialPivLu().solve(rhs);
      for (int j = 0; j < N; ++j) step[j] = x(j);
    }

    for (int j = 1; j <= N; ++j) {
      t[j] += step[j - 1];
      if (!(t[j] > 0) || !std::isfinite(t[j])) return false;
    }
  }
  return false;
}

}  // namespace

ConstraintSolution continuation_solve(const ConstraintContext& ctx, const SignPattern& eps,
                                      const ContinuationOptions& opts) {
  const int N = ctx.N;
  ConstraintSolution sol;
  sol.eps = eps;
  sol.t = solve_s0(ctx, eps);  // throws AdmissibilityError when outside the set
  sol.s = 0.0;
  sol.trace.emplace_back(0.0, 1.0);

  bool thomas_ok = true;
  double ds = opts.initial_step;
  while (sol.s < 1.0) {
    const double step = std::min(ds, 1.0 - sol.s);
    const double s_new = sol.s + step;
    std::vector<double> t_try = sol.t;
    bool accepted = false;
    try {
      // Euler predictor on the implicit system: J dt/ds = -dphi/ds
      tridiag::TriDiagSpec jac = phi_jacobian(ctx, sol.t, sol.s, eps);
      std::vector<double> dps = phi_s_derivative(ctx, sol.t, sol.s, eps);
      std::vector<double> sub(N, 0.0), diag(N, 1.0), super(N, 0.0), rhs(N, 0.0);
      for (int j = 1; j <= N; ++j) {
        if (j >= 2) sub[j - 1] = jac.beta1(j);
        if (j <= N - 1) super[j - 1] = jac.beta2(j);
        rhs[j - 1] = -dps[j];
      }
      std::vector<double> dtds = tridiag::thomas_solve(sub, diag, super, rhs);
      for (int j = 1; j <= N; ++j) t_try[j] = std::max(sol.t[j] + step * dtds[j - 1], 1e-300);

      accepted = newton_correct(ctx, eps, s_new, t_try, opts, thomas_ok, sol.newton_iterations);
    } catch (const NegativeDiscriminantError&) {
      accepted = false;
    }

    if (!accepted) {
      ds *= 0.5;
      if (ds < opts.step_floor)
        throw StepUnderflowError("continuation_solve: step size underflow at s = " +
                                 std::to_string(sol.s));
      continue;
    }

    sol.t = t_try;
    sol.s = s_new;
    ++sol.steps;
    const CertificateData cert = certificate_data(ctx, sol.t, sol.s, eps);
    const auto check = tridiag::positivity_certificate(cert.spec, cert.tau, 1, N);
    sol.certificate_ok = check.hypothesis_ok;
    sol.jacobian_det = check.f;
    sol.trace.emplace_back(sol.s, check.f);
    if (!check.hypothesis_ok) thomas_ok = false;  // dense fallback from here on
    ds = std::min(opts.initial_step, ds * 2.0);
  }

  sol.residual_norm = max_abs(phi(ctx, sol.t, 1.0, eps), 1);

  if (opts.warn_on_envelope) {
    for (int j = 1; j <= N; ++j) {
      const double scaled = sol.t[j] * std::sqrt(ctx.E2[j]);
      if (scaled < 1.0 / opts.envelope_constant || scaled > opts.envelope_constant)
        warn("continuation_solve: solution component " + std::to_string(j) +
             " outside the sanity envelope (t_j sqrt(E2_j) = " + std::to_string(scaled) + ")");
    }
  }
  return sol;
}

}  // namespace cshv
