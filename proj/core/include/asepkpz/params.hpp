#pragma once

// Model parameters of the open ASEP on ell sites and the weak-asymmetry
// scaling that connects it to the KPZ fixed-interval limit.
//
// Conventions: the right hop rate p is fixed to 1 throughout. Boundary rates
// are alpha (inject at site 1), gamma (eject at site 1), delta (inject at
// site ell), beta (eject at site ell). Effective boundary densities
// rho_a (left) and rho_b (right) are tied to the rates by
//
//   alpha/rho_a - gamma/(1 - rho_a) = 1 - q,
//   beta/(1 - rho_b) - delta/rho_b = 1 - q.
//
// The Liggett subfamily alpha + gamma/q = 1, beta + delta/q = 1 corresponds to
// alpha = rho_a, gamma = q(1 - rho_a), delta = q rho_b, beta = 1 - rho_b.

#include <cstdint>

namespace asepkpz {

struct ModelParams {
  double q = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
  double rho_a = 0.0;
  double rho_b = 0.0;
  bool liggett = false;
  int ell = 1;
};

struct ScalingParams {
  double epsilon = 0.0;
  double L = 0.0;
  double u = 0.0;
  double v = 0.0;
  // Derived lattice quantities.
  double q = 0.0;
  int ell = 0;
  double rho_a = 0.0;
  double rho_b = 0.0;
};

struct WeakAsymmetry {
  ScalingParams scaling;
  ModelParams params;
};

// q-deformed integer [n]_q = (1 - q^n)/(1 - q) = 1 + q + ... + q^{n-1},
// for integer n >= 0 and q in [0, 1). Satisfies [n+1]_q = q [n]_q + 1.
double q_int(int n, double q);

// q-Pochhammer (a; q)_k = prod_{j=0}^{k-1} (1 - a q^j); empty product is 1.
double q_pochhammer(double a, double q, int k);

// Liggett-family rates from boundary densities. rho_a, rho_b in [0, 1],
// q in [0, 1). Density ordering is NOT enforced here; consumers that need
// rho_b < rho_a (matrix-product / walk representations) check it themselves.
ModelParams from_densities(double rho_a, double rho_b, double q, int ell = 1);

// Effective densities from general nonnegative rates by solving the two
// density equations above for the root in [0, 1]. Sets the liggett flag when
// the rates satisfy the Liggett conditions to 1e-12. Throws
// std::invalid_argument when a boundary is degenerate (both rates zero) or no
// admissible root exists.
ModelParams from_rates(double alpha, double beta, double gamma, double delta,
                       double q, int ell = 1);

// Weak-asymmetry lattice parameters at scale epsilon: q = exp(-epsilon),
// ell = round(4 L / epsilon^2), rho_a = 1/2 + u epsilon / 4,
// rho_b = 1/2 - v epsilon / 4. Requires epsilon > 0, L > 0, u + v > 0, and
// rejects epsilon values pushing a density onto or past the boundary of
// (0, 1) (no clamping).
WeakAsymmetry weak_asymmetry(double epsilon, double L, double u, double v);

}  // namespace asepkpz
