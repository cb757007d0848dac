#pragma once

// Matrix product representation of the open ASEP stationary state.
//
// P(tau) = <W| prod_i (tau_i D + (1 - tau_i) E) |V> / Z_ell with
// Z_ell = <W| (D + E)^ell |V>. D and E are bidiagonal in the height basis
// |n>, n >= 1, truncated at n_max:
//
//   D[n][n] = diag_d[n],  D[n][n+1] = off_d[n],
//   E[n][n] = diag_e[n],  E[n+1][n] = off_e[n].
//
// Liggett-family representation: all four coefficient arrays are q-integers,
//   diag_d[n] = off_d[n] = diag_e[n] = [n]_q, off_e[n] = [n+1]_q,
//   w[n] = ((1-rho_a)/rho_a)^n, v[n] = (rho_b/(1-rho_b))^n [n]_q.
//
// General two-parameter family (d, e):
//   diag_d[n] = (1 - d q^{n-1})/(1-q),  off_d[n] = (1 - q^n)/(1-q),
//   diag_e[n] = (1 - e q^{n-1})/(1-q),  off_e[n] = (1 - e d q^{n-1})/(1-q),
//   w[n] = ((1-rho_a)/rho_a)^n,
//   v[n] = (rho_b/(1-rho_b))^n (ed; q)_{n-1} / (q; q)_{n-1},
// which reduces to the Liggett form at d = e = q. The closed-form w and v
// solve the boundary recursions when e = (gamma/alpha) rho_a/(1-rho_a) and
// d = delta (1-rho_b) / (beta rho_b), and also for the alternative pair
// d = rho_a/(rho_a - 1), e = (rho_b - 1)/rho_b.
//
// Everything is stored as coefficient arrays; no dense matrices are formed.
// Normalizations are accumulated in log space with per-step rescaling.

#include <cstdint>
#include <span>
#include <vector>

#include "asepkpz/params.hpp"

namespace asepkpz {

struct TruncatedMpa {
  ModelParams params;
  double d = 0.0;
  double e = 0.0;
  int n_max = 0;
  // Index n runs 1..n_max; slot 0 is kept zero so the eo_0 = do_0 = 0 and
  // w_0 = v_0 = 0 conventions fall out of the indexing.
  std::vector<double> diag_d, off_d, diag_e, off_e;
  std::vector<double> w, v;
};

struct AlgebraResidual {
  // Largest relative residual of p DE - q ED = D + E over the block of rows
  // unaffected by truncation, and of the boundary-vector relations
  // (beta D - delta E)|V> = |V> and <W|(alpha E - gamma D) = <W|.
  // Each entry is normalized by max(1, largest |term| entering it).
  double max_bulk = 0.0;
  double max_v = 0.0;
  double max_w = 0.0;
  int rows_checked = 0;
};

struct RecursionReport {
  // Relative residuals of the coefficient recursions x_{n+1} = q x_n + 1 - q,
  // of the step-product recursion u_n = q u_{n-1} + (1-q)(1 - ed q^{2n-2})
  // against both its closed form and do_n * eo_n, and of the boundary
  // recursions solved by the closed-form w_n and v_n.
  double max_coefficient = 0.0;
  double max_u = 0.0;
  double max_w = 0.0;
  double max_v = 0.0;
  int n_terms = 0;
};

// Representation parameters induced by the rates (require alpha > 0, beta > 0
// and interior densities).
double rep_param_e(const ModelParams& params);
double rep_param_d(const ModelParams& params);

// Liggett-family representation. Requires params.liggett, interior densities
// with rho_b < rho_a (finiteness of Z), n_max >= 2.
TruncatedMpa build_representation(const ModelParams& params, int n_max);

// General (d, e) representation with the closed-form boundary vectors.
TruncatedMpa build_general_representation(const ModelParams& params, double d,
                                          double e, int n_max);

// log Z_ell; ell = 0 gives log <W|V>.
double log_normalization(const TruncatedMpa& mpa, int ell);

// Z_ell itself; may overflow to +inf for large ell (use the log form then).
double normalization(const TruncatedMpa& mpa, int ell);

// Stationary probability of the configuration tau (entries 0/1).
double stationary_probability(const TruncatedMpa& mpa, std::span<const std::uint8_t> tau);

// Stationary current j = Z_{ell-1} / Z_ell through the chain of length ell.
double current(const TruncatedMpa& mpa, int ell);

// Site densities <tau_i>, i = 1..ell.
std::vector<double> density_profile(const TruncatedMpa& mpa, int ell);

// Checks the quadratic algebra and boundary relations on the representation,
// over rows/components 1..n_max-2 (entries a truncated product cannot
// corrupt). Residuals should sit at rounding level; a corrupted coefficient
// shows up many orders of magnitude above it.
AlgebraResidual verify_algebra(const TruncatedMpa& mpa);

// Checks the coefficient-level recursions of the general family for
// n = 1..n_terms at the given (d, e) and the rates/densities in params.
RecursionReport verify_appendix_recursions(const ModelParams& params, double d,
                                           double e, int n_terms);

// Smallest n_max in the doubling schedule 16, 32, ... whose doubling changes
// Z_ell by less than rel_tol relatively. Throws after 20 doublings.
int adapt_truncation(const ModelParams& params, int ell, double rel_tol);

}  // namespace asepkpz
