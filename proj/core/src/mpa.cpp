#include "asepkpz/mpa.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace asepkpz {

namespace {

void check_mpa_params(const ModelParams& p) {
  if (!(p.q >= 0.0 && p.q < 1.0))
    throw std::invalid_argument("representation requires q in [0, 1)");
  if (!(p.rho_a > 0.0 && p.rho_a < 1.0 && p.rho_b > 0.0 && p.rho_b < 1.0))
    throw std::invalid_argument("representation requires densities strictly inside (0, 1)");
  if (!(p.rho_b < p.rho_a))
    throw std::invalid_argument("representation requires rho_b < rho_a (finite normalization)");
}

void check_n_max(int n_max) {
  if (n_max < 2) throw std::invalid_argument("n_max must be >= 2");
  if (n_max > (1 << 26)) throw std::invalid_argument("n_max too large");
}

// Row vector in the height basis with an extracted log scale. Slots 0 and
// n_max+1 stay zero so bidiagonal products need no edge cases.
struct ScaledVec {
  std::vector<double> x;
  double log_scale = 0.0;
};

// Normalizes the vector to unit max-norm. Returns false when it vanished.
bool renormalize(ScaledVec& vec) {
  double m = 0.0;
  for (double t : vec.x) m = std::max(m, std::abs(t));
  if (m == 0.0) return false;
  for (double& t : vec.x) t /= m;
  vec.log_scale += std::log(m);
  return true;
}

ScaledVec left_boundary_row(const TruncatedMpa& mpa) {
  ScaledVec row;
  row.x.assign(mpa.n_max + 2, 0.0);
  for (int n = 1; n <= mpa.n_max; ++n) row.x[n] = mpa.w[n];
  if (!renormalize(row))
    throw std::runtime_error("left boundary vector vanished (rho_a at the boundary?)");
  return row;
}

// y = x * D (row through the bidiagonal upper matrix).
void row_times_d(const TruncatedMpa& mpa, const std::vector<double>& x, std::vector<double>& y) {
  y.assign(mpa.n_max + 2, 0.0);
  for (int n = 1; n <= mpa.n_max; ++n)
    y[n] = x[n] * mpa.diag_d[n] + x[n - 1] * mpa.off_d[n - 1];
}

// y = x * E (row through the bidiagonal lower matrix).
void row_times_e(const TruncatedMpa& mpa, const std::vector<double>& x, std::vector<double>& y) {
  y.assign(mpa.n_max + 2, 0.0);
  for (int n = 1; n <= mpa.n_max; ++n)
    y[n] = x[n] * mpa.diag_e[n] + x[n + 1] * mpa.off_e[n];
}

// y = x * (D + E).
void row_times_de(const TruncatedMpa& mpa, const std::vector<double>& x, std::vector<double>& y) {
  y.assign(mpa.n_max + 2, 0.0);
  for (int n = 1; n <= mpa.n_max; ++n)
    y[n] = x[n] * (mpa.diag_d[n] + mpa.diag_e[n]) + x[n - 1] * mpa.off_d[n - 1] +
           x[n + 1] * mpa.off_e[n];
}

// y = (D + E) * x (column through the bulk matrix).
void de_times_col(const TruncatedMpa& mpa, const std::vector<double>& x, std::vector<double>& y) {
  y.assign(mpa.n_max + 2, 0.0);
  for (int n = 1; n <= mpa.n_max; ++n)
    y[n] = (mpa.diag_d[n] + mpa.diag_e[n]) * x[n] + mpa.off_d[n] * x[n + 1] +
           mpa.off_e[n - 1] * x[n - 1];
}

// y = D * x.
void d_times_col(const TruncatedMpa& mpa, const std::vector<double>& x, std::vector<double>& y) {
  y.assign(mpa.n_max + 2, 0.0);
  for (int n = 1; n <= mpa.n_max; ++n)
    y[n] = mpa.diag_d[n] * x[n] + mpa.off_d[n] * x[n + 1];
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  const std::size_t m = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < m; ++i) s += a[i] * b[i];
  return s;
}

double log_positive_dot(const ScaledVec& row, const std::vector<double>& v,
                        const char* what) {
  const double s = dot(row.x, v);
  if (!(s > 0.0))
    throw std::runtime_error(std::string(what) + ": contraction is not positive");
  return row.log_scale + std::log(s);
}

}  // namespace

double rep_param_e(const ModelParams& p) {
  if (!(p.alpha > 0.0)) throw std::invalid_argument("rep_param_e requires alpha > 0");
  if (!(p.rho_a > 0.0 && p.rho_a < 1.0))
    throw std::invalid_argument("rep_param_e requires rho_a in (0, 1)");
  return (p.gamma / p.alpha) * (p.rho_a / (1.0 - p.rho_a));
}

double rep_param_d(const ModelParams& p) {
  if (!(p.beta > 0.0)) throw std::invalid_argument("rep_param_d requires beta > 0");
  if (!(p.rho_b > 0.0 && p.rho_b < 1.0))
    throw std::invalid_argument("rep_param_d requires rho_b in (0, 1)");
  return p.delta * (1.0 - p.rho_b) / (p.beta * p.rho_b);
}

TruncatedMpa build_representation(const ModelParams& params, int n_max) {
  check_mpa_params(params);
  check_n_max(n_max);
  if (!params.liggett)
    throw std::invalid_argument(
        "build_representation requires Liggett-family rates; use "
        "build_general_representation otherwise");
  TruncatedMpa mpa;
  mpa.params = params;
  mpa.d = params.q;
  mpa.e = params.q;
  mpa.n_max = n_max;
  mpa.diag_d.assign(n_max + 2, 0.0);
  mpa.off_d.assign(n_max + 2, 0.0);
  mpa.diag_e.assign(n_max + 2, 0.0);
  mpa.off_e.assign(n_max + 2, 0.0);
  mpa.w.assign(n_max + 2, 0.0);
  mpa.v.assign(n_max + 2, 0.0);

  const double r = (1.0 - params.rho_a) / params.rho_a;
  const double s = params.rho_b / (1.0 - params.rho_b);
  for (int n = 1; n <= n_max; ++n) {
    const double qn = q_int(n, params.q);
    mpa.diag_d[n] = qn;
    mpa.diag_e[n] = qn;
    if (n < n_max) {
      mpa.off_d[n] = qn;
      mpa.off_e[n] = q_int(n + 1, params.q);
    }
    mpa.w[n] = std::pow(r, n);
    mpa.v[n] = std::pow(s, n) * qn;
  }
  return mpa;
}

TruncatedMpa build_general_representation(const ModelParams& params, double d,
                                          double e, int n_max) {
  check_mpa_params(params);
  check_n_max(n_max);
  TruncatedMpa mpa;
  mpa.params = params;
  mpa.d = d;
  mpa.e = e;
  mpa.n_max = n_max;
  mpa.diag_d.assign(n_max + 2, 0.0);
  mpa.off_d.assign(n_max + 2, 0.0);
  mpa.diag_e.assign(n_max + 2, 0.0);
  mpa.off_e.assign(n_max + 2, 0.0);
  mpa.w.assign(n_max + 2, 0.0);
  mpa.v.assign(n_max + 2, 0.0);

  const double q = params.q;
  const double inv = 1.0 / (1.0 - q);
  const double r = (1.0 - params.rho_a) / params.rho_a;
  const double s = params.rho_b / (1.0 - params.rho_b);
  const double ed = e * d;
  for (int n = 1; n <= n_max; ++n) {
    const double qn1 = std::pow(q, n - 1);
    mpa.diag_d[n] = (1.0 - d * qn1) * inv;
    mpa.diag_e[n] = (1.0 - e * qn1) * inv;
    if (n < n_max) {
      mpa.off_d[n] = (1.0 - std::pow(q, n)) * inv;
      mpa.off_e[n] = (1.0 - ed * qn1) * inv;
    }
    mpa.w[n] = std::pow(r, n);
    // v_n = s^n (ed; q)_{n-1} / (q; q)_{n-1}, built by its n -> n+1 ratio.
    mpa.v[n] = (n == 1) ? s
                        : mpa.v[n - 1] * s * (1.0 - ed * std::pow(q, n - 2)) /
                              (1.0 - std::pow(q, n - 1));
  }
  return mpa;
}

double log_normalization(const TruncatedMpa& mpa, int ell) {
  if (ell < 0) throw std::invalid_argument("log_normalization: ell must be >= 0");
  ScaledVec row = left_boundary_row(mpa);
  std::vector<double> next(mpa.n_max + 2, 0.0);
  for (int i = 0; i < ell; ++i) {
    row_times_de(mpa, row.x, next);
    row.x.swap(next);
    if (!renormalize(row))
      throw std::runtime_error("log_normalization: state vector vanished");
  }
  return log_positive_dot(row, mpa.v, "log_normalization");
}

double normalization(const TruncatedMpa& mpa, int ell) {
  return std::exp(log_normalization(mpa, ell));
}

double stationary_probability(const TruncatedMpa& mpa, std::span<const std::uint8_t> tau) {
  if (tau.empty()) throw std::invalid_argument("stationary_probability: empty configuration");
  ScaledVec row = left_boundary_row(mpa);
  std::vector<double> next(mpa.n_max + 2, 0.0);
  for (const std::uint8_t occ : tau) {
    if (occ > 1) throw std::invalid_argument("stationary_probability: tau entries must be 0/1");
    if (occ)
      row_times_d(mpa, row.x, next);
    else
      row_times_e(mpa, row.x, next);
    row.x.swap(next);
    if (!renormalize(row)) return 0.0;  // configuration weight vanished exactly
  }
  const double num = dot(row.x, mpa.v);
  if (num == 0.0) return 0.0;
  if (num < 0.0)
    throw std::runtime_error("stationary_probability: negative weight (representation misuse)");
  const double log_z = log_normalization(mpa, static_cast<int>(tau.size()));
  return std::exp(row.log_scale + std::log(num) - log_z);
}

double current(const TruncatedMpa& mpa, int ell) {
  if (ell < 1) throw std::invalid_argument("current: ell must be >= 1");
  return std::exp(log_normalization(mpa, ell - 1) - log_normalization(mpa, ell));
}

std::vector<double> density_profile(const TruncatedMpa& mpa, int ell) {
  if (ell < 1) throw std::invalid_argument("density_profile: ell must be >= 1");
  if (static_cast<long long>(ell) * (mpa.n_max + 2) > (1LL << 27))
    throw std::invalid_argument("density_profile: ell * n_max too large to store the sweep");

  // Forward rows F_i = <W|(D+E)^i, i = 0..ell-1.
  std::vector<ScaledVec> fwd(ell);
  fwd[0] = left_boundary_row(mpa);
  std::vector<double> tmp(mpa.n_max + 2, 0.0);
  for (int i = 1; i < ell; ++i) {
    row_times_de(mpa, fwd[i - 1].x, tmp);
    fwd[i].x = tmp;
    fwd[i].log_scale = fwd[i - 1].log_scale;
    if (!renormalize(fwd[i])) throw std::runtime_error("density_profile: row vanished");
  }
  // Backward columns B_i = (D+E)^{ell-i} |V>, i = ell..1.
  std::vector<ScaledVec> bwd(ell + 1);
  bwd[ell].x.assign(mpa.n_max + 2, 0.0);
  for (int n = 1; n <= mpa.n_max; ++n) bwd[ell].x[n] = mpa.v[n];
  if (!renormalize(bwd[ell])) throw std::runtime_error("density_profile: right vector vanished");
  for (int i = ell - 1; i >= 1; --i) {
    de_times_col(mpa, bwd[i + 1].x, tmp);
    bwd[i].x = tmp;
    bwd[i].log_scale = bwd[i + 1].log_scale;
    if (!renormalize(bwd[i])) throw std::runtime_error("density_profile: column vanished");
  }

  // Z from any split; use the last stored pair.
  double log_z;
  if (ell == 1) {
    log_z = log_positive_dot(fwd[0], bwd[1].x, "density_profile") + bwd[1].log_scale;
  } else {
    const double s = dot(fwd[ell - 1].x, bwd[ell - 1].x);
    if (!(s > 0.0)) throw std::runtime_error("density_profile: normalization not positive");
    log_z = fwd[ell - 1].log_scale + bwd[ell - 1].log_scale + std::log(s);
  }

  std::vector<double> profile(ell);
  std::vector<double> dcol(mpa.n_max + 2, 0.0);
  for (int i = 1; i <= ell; ++i) {
    d_times_col(mpa, bwd[i].x, dcol);
    const double s = dot(fwd[i - 1].x, dcol);
    profile[i - 1] =
        s <= 0.0 ? 0.0
                 : std::exp(fwd[i - 1].log_scale + bwd[i].log_scale + std::log(s) - log_z);
  }
  return profile;
}

namespace {

double rel_residual(double lhs, double rhs, double scale) {
  return std::abs(lhs - rhs) / std::max(1.0, scale);
}

}  // namespace

AlgebraResidual verify_algebra(const TruncatedMpa& mpa) {
  const ModelParams& p = mpa.params;
  const double q = p.q;
  AlgebraResidual res;
  res.rows_checked = std::max(0, mpa.n_max - 2);

  for (int n = 1; n <= mpa.n_max - 2; ++n) {
    // Tridiagonal entries of DE, ED, D + E in row n.
    for (int j = std::max(1, n - 1); j <= n + 1; ++j) {
      double de, ed, sum;
      if (j == n - 1) {
        de = mpa.diag_d[n] * mpa.off_e[n - 1];
        ed = mpa.off_e[n - 1] * mpa.diag_d[n - 1];
        sum = mpa.off_e[n - 1];
      } else if (j == n) {
        de = mpa.diag_d[n] * mpa.diag_e[n] + mpa.off_d[n] * mpa.off_e[n];
        ed = mpa.off_e[n - 1] * mpa.off_d[n - 1] + mpa.diag_e[n] * mpa.diag_d[n];
        sum = mpa.diag_d[n] + mpa.diag_e[n];
      } else {
        de = mpa.off_d[n] * mpa.diag_e[n + 1];
        ed = mpa.diag_e[n] * mpa.off_d[n];
        sum = mpa.off_d[n];
      }
      const double scale = std::max({std::abs(de), std::abs(q * ed), std::abs(sum)});
      res.max_bulk = std::max(res.max_bulk, rel_residual(de - q * ed, sum, scale));
    }

    // (beta D - delta E)|V> = |V>, component n.
    const double dv = mpa.diag_d[n] * mpa.v[n] + mpa.off_d[n] * mpa.v[n + 1];
    const double ev = mpa.diag_e[n] * mpa.v[n] + mpa.off_e[n - 1] * mpa.v[n - 1];
    const double v_scale =
        std::max({std::abs(p.beta * dv), std::abs(p.delta * ev), std::abs(mpa.v[n])});
    res.max_v = std::max(res.max_v, rel_residual(p.beta * dv - p.delta * ev, mpa.v[n], v_scale));

    // <W|(alpha E - gamma D) = <W|, component n.
    const double we = mpa.w[n] * mpa.diag_e[n] + mpa.w[n + 1] * mpa.off_e[n];
    const double wd = mpa.w[n] * mpa.diag_d[n] + mpa.w[n - 1] * mpa.off_d[n - 1];
    const double w_scale =
        std::max({std::abs(p.alpha * we), std::abs(p.gamma * wd), std::abs(mpa.w[n])});
    res.max_w = std::max(res.max_w, rel_residual(p.alpha * we - p.gamma * wd, mpa.w[n], w_scale));
  }
  return res;
}

RecursionReport verify_appendix_recursions(const ModelParams& params, double d,
                                           double e, int n_terms) {
  if (n_terms < 1) throw std::invalid_argument("verify_appendix_recursions: n_terms >= 1");
  if (!(params.rho_a > 0.0 && params.rho_a < 1.0 && params.rho_b > 0.0 && params.rho_b < 1.0))
    throw std::invalid_argument("verify_appendix_recursions: densities must lie in (0, 1)");
  const double q = params.q;
  const double ed = e * d;
  const double r = (1.0 - params.rho_a) / params.rho_a;
  const double s = params.rho_b / (1.0 - params.rho_b);

  RecursionReport rep;
  rep.n_terms = n_terms;

  // v_n by its ratio, up to n_terms + 1; v[0] = 0 by convention.
  std::vector<double> v(n_terms + 2, 0.0);
  v[1] = s;
  for (int n = 2; n <= n_terms + 1; ++n)
    v[n] = v[n - 1] * s * (1.0 - ed * std::pow(q, n - 2)) / (1.0 - std::pow(q, n - 1));

  double u_prev = 0.0;
  for (int n = 1; n <= n_terms; ++n) {
    const double qn1 = std::pow(q, n - 1);
    const double qn = std::pow(q, n);
    const double e_n = 1.0 - e * qn1;
    const double d_n = 1.0 - d * qn1;
    const double eo_n = 1.0 - ed * qn1;
    const double do_n = 1.0 - qn;

    // x_{n+1} = q x_n + 1 - q for both coefficient families.
    rep.max_coefficient = std::max(
        rep.max_coefficient,
        rel_residual(1.0 - e * qn, q * e_n + 1.0 - q, std::max(std::abs(e * qn), 1.0)));
    rep.max_coefficient = std::max(
        rep.max_coefficient,
        rel_residual(1.0 - d * qn, q * d_n + 1.0 - q, std::max(std::abs(d * qn), 1.0)));

    // u_n: recursion vs closed form vs step product.
    const double u_rec = q * u_prev + (1.0 - q) * (1.0 - ed * std::pow(q, 2 * n - 2));
    const double u_closed = (1.0 - qn) * (1.0 - ed * qn1);
    const double u_scale = std::max(std::abs(u_rec), std::abs(u_closed));
    rep.max_u = std::max(rep.max_u, rel_residual(u_rec, u_closed, u_scale));
    rep.max_u = std::max(rep.max_u, rel_residual(do_n * eo_n, u_closed, u_scale));
    u_prev = u_rec;

    // Left-boundary recursion solved by w_n = r^n (do_0 = 1 - q^0 = 0).
    const double w_nm1 = std::pow(r, n - 1);
    const double w_n = w_nm1 * r;
    const double w_np1 = w_n * r;
    const double do_nm1 = 1.0 - qn1;
    const double w_lhs = params.alpha * (w_n * e_n + w_np1 * eo_n) -
                         params.gamma * (w_n * d_n + w_nm1 * do_nm1);
    const double w_rhs =
        (params.alpha / params.rho_a - params.gamma / (1.0 - params.rho_a)) * w_n;
    const double w_scale = std::max({std::abs(params.alpha * w_n * e_n),
                                     std::abs(params.alpha * w_np1 * eo_n),
                                     std::abs(params.gamma * w_n * d_n),
                                     std::abs(params.gamma * w_nm1 * do_nm1),
                                     std::abs(w_rhs)});
    rep.max_w = std::max(rep.max_w, rel_residual(w_lhs, w_rhs, w_scale));

    // Right-boundary recursion solved by the closed-form v_n (eo_0 = 0,
    // moot here since v_0 = 0).
    const double eo_nm1 = (n == 1) ? 0.0 : 1.0 - ed * std::pow(q, n - 2);
    const double v_lhs = params.beta * (d_n * v[n] + do_n * v[n + 1]) -
                         params.delta * (e_n * v[n] + eo_nm1 * v[n - 1]);
    const double v_rhs =
        (params.beta / (1.0 - params.rho_b) - params.delta / params.rho_b) * v[n];
    const double v_scale = std::max({std::abs(params.beta * d_n * v[n]),
                                     std::abs(params.beta * do_n * v[n + 1]),
                                     std::abs(params.delta * e_n * v[n]),
                                     std::abs(params.delta * eo_nm1 * v[n - 1]),
                                     std::abs(v_rhs)});
    rep.max_v = std::max(rep.max_v, rel_residual(v_lhs, v_rhs, v_scale));
  }
  return rep;
}

int adapt_truncation(const ModelParams& params, int ell, double rel_tol) {
  if (ell < 0) throw std::invalid_argument("adapt_truncation: ell must be >= 0");
  if (!(rel_tol > 0.0)) throw std::invalid_argument("adapt_truncation: rel_tol must be > 0");
  const bool liggett = params.liggett;
  const double d = liggett ? params.q : rep_param_d(params);
  const double e = liggett ? params.q : rep_param_e(params);

  int n = 16;
  TruncatedMpa mpa = liggett ? build_representation(params, n)
                             : build_general_representation(params, d, e, n);
  double log_z = log_normalization(mpa, ell);
  for (int round = 0; round < 20; ++round) {
    const int n2 = 2 * n;
    mpa = liggett ? build_representation(params, n2)
                  : build_general_representation(params, d, e, n2);
    const double log_z2 = log_normalization(mpa, ell);
    if (std::abs(std::expm1(log_z2 - log_z)) < rel_tol) return n;
    n = n2;
    log_z = log_z2;
  }
  throw std::runtime_error(
      "adapt_truncation: normalization did not stabilize after 20 doublings "
      "(densities too close together?)");
}

}  // namespace asepkpz
