#include "asepkpz/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace asepkpz {

namespace {

constexpr double kRootTol = 1e-12;
constexpr double kLiggettTol = 1e-12;

void check_q(double q) {
  if (!(q >= 0.0 && q < 1.0)) throw std::invalid_argument("q must lie in [0, 1)");
}

void check_ell(int ell) {
  if (ell < 1) throw std::invalid_argument("ell must be a positive integer");
}

// Roots of A x^2 + B x + C = 0 with A != 0, computed with the sign trick to
// avoid cancellation. Requires a nonnegative discriminant.
void solve_quadratic(double A, double B, double C, double& x1, double& x2) {
  const double disc = B * B - 4.0 * A * C;
  if (disc < 0.0) throw std::invalid_argument("no real root for the density equation");
  const double s = std::sqrt(disc);
  const double t = -0.5 * (B + (B >= 0.0 ? s : -s));
  if (t != 0.0) {
    x1 = t / A;
    x2 = C / t;
  } else {
    x1 = 0.0;
    x2 = -B / A;
  }
}

// Picks the root of the density equation lying in [0, 1]. Exactly one is
// expected for nondegenerate rates; two in-range roots are reported as
// ambiguous rather than guessed at.
double pick_unit_interval_root(double x1, double x2, const char* side) {
  const bool ok1 = x1 >= -kRootTol && x1 <= 1.0 + kRootTol;
  const bool ok2 = x2 >= -kRootTol && x2 <= 1.0 + kRootTol;
  if (ok1 && ok2 && std::abs(x1 - x2) > kRootTol)
    throw std::invalid_argument(std::string("ambiguous density root on the ") + side +
                                " boundary");
  if (!ok1 && !ok2)
    throw std::invalid_argument(std::string("no density root in [0, 1] on the ") + side +
                                " boundary");
  double x = ok1 ? x1 : x2;
  if (x < 0.0) x = 0.0;
  if (x > 1.0) x = 1.0;
  return x;
}

}  // namespace

double q_int(int n, double q) {
  if (n < 0) throw std::invalid_argument("q_int: n must be >= 0");
  check_q(q);
  if (n == 0) return 0.0;
  if (q == 0.0) return 1.0;
  return (1.0 - std::pow(q, n)) / (1.0 - q);
}

double q_pochhammer(double a, double q, int k) {
  if (k < 0) throw std::invalid_argument("q_pochhammer: k must be >= 0");
  check_q(q);
  double prod = 1.0;
  double aq = a;
  for (int j = 0; j < k; ++j) {
    prod *= 1.0 - aq;
    aq *= q;
  }
  return prod;
}

ModelParams from_densities(double rho_a, double rho_b, double q, int ell) {
  check_q(q);
  check_ell(ell);
  if (!(rho_a >= 0.0 && rho_a <= 1.0) || !(rho_b >= 0.0 && rho_b <= 1.0))
    throw std::invalid_argument("boundary densities must lie in [0, 1]");
  ModelParams p;
  p.q = q;
  p.rho_a = rho_a;
  p.rho_b = rho_b;
  p.alpha = rho_a;
  p.gamma = q * (1.0 - rho_a);
  p.delta = q * rho_b;
  p.beta = 1.0 - rho_b;
  p.liggett = true;
  p.ell = ell;
  return p;
}

ModelParams from_rates(double alpha, double beta, double gamma, double delta,
                       double q, int ell) {
  check_q(q);
  check_ell(ell);
  if (alpha < 0.0 || beta < 0.0 || gamma < 0.0 || delta < 0.0)
    throw std::invalid_argument("rates must be nonnegative");

  const double drive = 1.0 - q;
  ModelParams p;
  p.q = q;
  p.alpha = alpha;
  p.beta = beta;
  p.gamma = gamma;
  p.delta = delta;
  p.ell = ell;

  // Left boundary: alpha/rho - gamma/(1 - rho) = 1 - q.
  if (alpha == 0.0 && gamma == 0.0) {
    throw std::invalid_argument("degenerate left boundary: alpha = gamma = 0");
  } else if (gamma == 0.0) {
    // The equation is linear; the quadratic form would pick up a spurious
    // root at rho = 1.
    const double rho = alpha / drive;
    if (rho > 1.0 + kRootTol)
      throw std::invalid_argument("no density root in [0, 1] on the left boundary");
    p.rho_a = std::min(rho, 1.0);
  } else if (alpha == 0.0) {
    throw std::invalid_argument("no density root in [0, 1] on the left boundary");
  } else {
    double x1, x2;
    solve_quadratic(drive, -(drive + alpha + gamma), alpha, x1, x2);
    p.rho_a = pick_unit_interval_root(x1, x2, "left");
  }

  // Right boundary: beta/(1 - rho) - delta/rho = 1 - q.
  if (beta == 0.0 && delta == 0.0) {
    throw std::invalid_argument("degenerate right boundary: beta = delta = 0");
  } else if (delta == 0.0) {
    const double rho = 1.0 - beta / drive;
    if (rho < -kRootTol)
      throw std::invalid_argument("no density root in [0, 1] on the right boundary");
    p.rho_b = std::max(rho, 0.0);
  } else if (beta == 0.0) {
    throw std::invalid_argument("no density root in [0, 1] on the right boundary");
  } else {
    double x1, x2;
    solve_quadratic(drive, beta + delta - drive, -delta, x1, x2);
    p.rho_b = pick_unit_interval_root(x1, x2, "right");
  }

  if (q > 0.0) {
    p.liggett = std::abs(alpha + gamma / q - 1.0) <= kLiggettTol &&
                std::abs(beta + delta / q - 1.0) <= kLiggettTol;
  } else {
    // q -> 0 limit of the Liggett family: gamma = delta = 0 with
    // alpha = rho_a, beta = 1 - rho_b, which hold automatically here.
    p.liggett = gamma == 0.0 && delta == 0.0;
  }
  return p;
}

WeakAsymmetry weak_asymmetry(double epsilon, double L, double u, double v) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (!(L > 0.0)) throw std::invalid_argument("L must be > 0");
  if (!(u + v > 0.0)) throw std::invalid_argument("u + v must be positive");

  ScalingParams s;
  s.epsilon = epsilon;
  s.L = L;
  s.u = u;
  s.v = v;
  s.q = std::exp(-epsilon);
  const double ell_real = 4.0 * L / (epsilon * epsilon);
  const long long ell = std::llround(ell_real);
  if (ell < 1) throw std::invalid_argument("epsilon too coarse: round(4 L / epsilon^2) < 1");
  if (ell > 100000000LL) throw std::invalid_argument("epsilon too fine: lattice would exceed 1e8 sites");
  s.ell = static_cast<int>(ell);
  s.rho_a = 0.5 + u * epsilon / 4.0;
  s.rho_b = 0.5 - v * epsilon / 4.0;
  // Densities must stay strictly inside (0, 1); reject rather than clamp.
  if (!(s.rho_a > 0.0 && s.rho_a < 1.0 && s.rho_b > 0.0 && s.rho_b < 1.0))
    throw std::invalid_argument("epsilon pushes a boundary density out of (0, 1)");

  WeakAsymmetry result;
  result.scaling = s;
  result.params = from_densities(s.rho_a, s.rho_b, s.q, s.ell);
  return result;
}

}  // namespace asepkpz
