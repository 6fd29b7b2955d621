#include "cshv/tridiag.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace cshv::tridiag {

namespace {

void check_window(const TriDiagSpec& spec, int k, int l) {
  if (k < 1 || l > spec.N || k > l) throw std::out_of_range("tridiag: window indices out of range");
}

int sign_of(int eps) { return (eps & 1) ? -1 : 1; }

}  // namespace

TriDiagSpec::TriDiagSpec(int n)
    : N(n), sub(static_cast<std::size_t>(n) + 1, 0.0), super(static_cast<std::size_t>(n) + 1, 0.0) {
  if (n < 1) throw std::invalid_argument("TriDiagSpec: size must be >= 1");
}

TriDiagSpec TriDiagSpec::from_beta(std::vector<double> beta_sub, std::vector<double> beta_super) {
  const int n = static_cast<int>(beta_sub.size()) - 1;
  if (beta_super.size() != beta_sub.size())
    throw std::invalid_argument("TriDiagSpec: band arrays must have equal length");
  TriDiagSpec s(n);
  s.sub = std::move(beta_sub);
  s.super = std::move(beta_super);
  s.sub[1] = 0.0;
  s.super[n] = 0.0;
  return s;
}

TriDiagSpec TriDiagSpec::from_split(std::vector<double> alpha_sub, std::vector<int> eps_sub,
                                    std::vector<double> alpha_super, std::vector<int> eps_super) {
  const int n = static_cast<int>(alpha_sub.size()) - 1;
  if (alpha_super.size() != alpha_sub.size() || eps_sub.size() != alpha_sub.size() ||
      eps_super.size() != alpha_sub.size())
    throw std::invalid_argument("TriDiagSpec: split arrays must have equal length");
  TriDiagSpec s(n);
  s.has_split = true;
  s.alpha_sub = std::move(alpha_sub);
  s.alpha_super = std::move(alpha_super);
  s.eps_sub = std::move(eps_sub);
  s.eps_super = std::move(eps_super);
  s.alpha_sub[1] = 0.0;
  s.alpha_super[n] = 0.0;
  for (int j = 1; j <= n; ++j) {
    if (s.alpha_sub[j] < 0 || s.alpha_super[j] < 0)
      throw std::invalid_argument("TriDiagSpec: split magnitudes must be nonnegative");
    s.sub[j] = sign_of(s.eps_sub[j]) * s.alpha_sub[j];
    s.super[j] = sign_of(s.eps_super[j]) * s.alpha_super[j];
  }
  s.sub[1] = 0.0;
  s.super[n] = 0.0;
  return s;
}

TriDiagSpec TriDiagSpec::with_zero_signs() const {
  if (!has_split) throw std::logic_error("TriDiagSpec: split form not populated");
  return from_split(alpha_sub, std::vector<int>(alpha_sub.size(), 0), alpha_super,
                    std::vector<int>(alpha_super.size(), 0));
}

BarrierSpec::BarrierSpec(int k_, int l_, std::vector<double> tau_) : k(k_), l(l_), tau(std::move(tau_)) {
  if (k < 1 || l < k) throw std::out_of_range("BarrierSpec: bad index range");
  if (tau.size() != static_cast<std::size_t>(l - k + 1))
    throw std::invalid_argument("BarrierSpec: tau length must be l-k+1");
  for (double t : tau)
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("BarrierSpec: tau entries must lie in [0,1]");
}

std::vector<std::vector<double>> build_matrix(const TriDiagSpec& spec, int k, int l) {
  check_window(spec, k, l);
  const int m = l - k + 1;
  std::vector<std::vector<double>> t(m, std::vector<double>(m, 0.0));
  for (int j = k; j <= l; ++j) {
    t[j - k][j - k] = 1.0;
    if (j - 1 >= k) t[j - k][j - 1 - k] = spec.beta1(j);
    if (j + 1 <= l) t[j - k][j + 1 - k] = spec.beta2(j);
  }
  return t;
}

double f_value(const TriDiagSpec& spec, int k, int l) {
  if (l > spec.N || k < 1) throw std::out_of_range("f_value: window indices out of range");
  if (k == l + 1) return 1.0;
  if (k >= l + 2) return 0.0;
  // march j = l-1 .. k keeping the sliding pair (F^{(j+1)}, F^{(j+2)})
  double f2 = 1.0;  // F^{(l+1)}
  double f1 = 1.0;  // F^{(l)}
  for (int j = l - 1; j >= k; --j) {
    const double f0 = f1 - spec.beta1(j + 1) * spec.beta2(j) * f2;
    f2 = f1;
    f1 = f0;
  }
  return f1;
}

double det_cofactor(const std::vector<std::vector<double>>& m) {
  const std::size_t n = m.size();
  if (n > 12) throw std::invalid_argument("det_cofactor: size limit (12) exceeded");
  for (const auto& row : m)
    if (row.size() != n) throw std::invalid_argument("det_cofactor: matrix must be square");
  if (n == 0) return 1.0;
  if (n == 1) return m[0][0];

  // recursive first-row expansion on an index-mapped submatrix
  struct Expand {
    const std::vector<std::vector<double>>& a;
    double run(std::vector<std::size_t> rows, std::vector<std::size_t> cols) {
      const std::size_t sz = rows.size();
      if (sz == 1) return a[rows[0]][cols[0]];
      double det = 0.0;
      double sign = 1.0;
      const std::vector<std::size_t> sub_rows(rows.begin() + 1, rows.end());
      for (std::size_t c = 0; c < sz; ++c) {
        const double pivot = a[rows[0]][cols[c]];
        if (pivot != 0.0) {
          std::vector<std::size_t> sub_cols;
          sub_cols.reserve(sz - 1);
          for (std::size_t cc = 0; cc < sz; ++cc)
            if (cc != c) sub_cols.push_back(cols[cc]);
          det += sign * pivot * run(sub_rows, sub_cols);
        }
        sign = -sign;
      }
      return det;
    }
  } expand{m};

  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  return expand.run(idx, idx);
}

std::pair<double, double> f_partials(const TriDiagSpec& spec, int k, int l, int j) {
  if (!spec.has_split) throw std::logic_error("f_partials: split form not populated");
  check_window(spec, k, l);
  if (j < k || j >= l) return {0.0, 0.0};  // F_{j-1}^{(k)} or F_l^{(j+2)} vanishes
  const double common = f_value(spec, j + 2, l) * f_value(spec, k, j - 1);
  const double s = sign_of(spec.eps_super[j] + spec.eps_sub[j + 1]);
  return {-s * spec.alpha2(j) * common, -s * spec.alpha1(j + 1) * common};
}

double barrier_f(const BarrierSpec& tau, int k, int l) {
  if (k < tau.k || l > tau.l || k > l) throw std::out_of_range("barrier_f: window outside tau range");
  double f2 = 1.0, f1 = 1.0;
  for (int j = l - 1; j >= k; --j) {
    const double f0 = f1 - tau.value(j + 1) * (1.0 - tau.value(j)) * f2;
    f2 = f1;
    f1 = f0;
  }
  return f1;
}

std::vector<std::vector<double>> barrier_matrix(const BarrierSpec& tau, int k, int l) {
  if (k < tau.k || l > tau.l || k > l)
    throw std::out_of_range("barrier_matrix: window outside tau range");
  const int m = l - k + 1;
  std::vector<std::vector<double>> t(m, std::vector<double>(m, 0.0));
  for (int j = k; j <= l; ++j) {
    t[j - k][j - k] = 1.0;
    if (j - 1 >= k) t[j - k][j - 1 - k] = tau.value(j);
    if (j + 1 <= l) t[j - k][j + 1 - k] = 1.0 - tau.value(j);
  }
  return t;
}

CertificateResult positivity_certificate(const TriDiagSpec& spec, const BarrierSpec& tau, int k,
                                         int l) {
  if (!spec.has_split) throw std::logic_error("positivity_certificate: split form not populated");
  check_window(spec, k, l);
  CertificateResult res;
  res.hypothesis_ok = true;
  for (int j = k; j < l; ++j) {
    if (!(spec.alpha2(j) >= 0.0 && spec.alpha2(j) < 1.0 - tau.value(j))) res.hypothesis_ok = false;
    if (!(spec.alpha1(j + 1) >= 0.0 && spec.alpha1(j + 1) < tau.value(j + 1)))
      res.hypothesis_ok = false;
  }
  res.f = f_value(spec, k, l);
  res.f_zero_signs = f_value(spec.with_zero_signs(), k, l);
  res.f_barrier = barrier_f(tau, k, l);
  return res;
}

std::vector<double> thomas_solve(const std::vector<double>& sub, const std::vector<double>& diag,
                                 const std::vector<double>& super, std::vector<double> rhs) {
  const std::size_t n = diag.size();
  if (sub.size() != n || super.size() != n || rhs.size() != n)
    throw std::invalid_argument("thomas_solve: band/rhs size mismatch");
  if (n == 0) return rhs;
  std::vector<double> c(n, 0.0);
  double piv = diag[0];
  if (piv == 0.0) throw std::runtime_error("thomas_solve: zero pivot");
  c[0] = (n > 1) ? super[0] / piv : 0.0;
  rhs[0] /= piv;
  for (std::size_t i = 1; i < n; ++i) {
    piv = diag[i] - sub[i] * c[i - 1];
    if (piv == 0.0) throw std::runtime_error("thomas_solve: zero pivot");
    if (i + 1 < n) c[i] = super[i] / piv;
    rhs[i] = (rhs[i] - sub[i] * rhs[i - 1]) / piv;
  }
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c[i] * rhs[i + 1];
  return rhs;
}

}  // namespace cshv::tridiag
