#include "asepkpz/walks.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "asepkpz/mpa.hpp"

namespace asepkpz {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
const double kLog2 = std::log(2.0);

void check_walk_params(const ModelParams& p) {
  if (!p.liggett)
    throw std::invalid_argument("walk measure is defined for Liggett-family rates only");
  if (!(p.q >= 0.0 && p.q < 1.0))
    throw std::invalid_argument("walk measure requires q in [0, 1)");
  if (!(p.rho_a > 0.0 && p.rho_a < 1.0 && p.rho_b > 0.0 && p.rho_b < 1.0))
    throw std::invalid_argument("walk measure requires densities strictly inside (0, 1)");
  if (!(p.rho_b < p.rho_a))
    throw std::invalid_argument("walk measure requires rho_b < rho_a");
}

}  // namespace

double walk_weight(const ModelParams& params, std::span<const int> n) {
  check_walk_params(params);
  if (n.empty()) throw std::invalid_argument("walk_weight: empty walk");
  const double log_r = std::log((1.0 - params.rho_a) / params.rho_a);
  const double log_s = std::log(params.rho_b / (1.0 - params.rho_b));

  if (n.front() < 1) return kNegInf;
  double lw = n.front() * log_r + n.back() * log_s + std::log(q_int(n.front(), params.q));
  for (std::size_t i = 1; i < n.size(); ++i) {
    if (n[i] < 1) return kNegInf;
    const int step = n[i] - n[i - 1];
    if (step < -1 || step > 1) return kNegInf;
    if (step == 0) lw += kLog2;
    lw += std::log(q_int(n[i], params.q));
  }
  return lw;
}

PartitionTable build_partition_table(const ModelParams& params, int n_max) {
  check_walk_params(params);
  const int ell = params.ell;
  if (ell < 0) throw std::invalid_argument("build_partition_table: ell must be >= 0");
  if (n_max == 0) n_max = adapt_truncation(params, ell, 1e-12);
  if (n_max < 2) throw std::invalid_argument("build_partition_table: n_max must be >= 2");
  if (static_cast<long long>(ell + 1) * (n_max + 1) > (1LL << 27))
    throw std::invalid_argument("build_partition_table: ell * n_max too large");

  PartitionTable table;
  table.params = params;
  table.ell = ell;
  table.n_max = n_max;

  const double log_r = std::log((1.0 - params.rho_a) / params.rho_a);
  const double log_s = std::log(params.rho_b / (1.0 - params.rho_b));
  std::vector<double> log_qint(n_max + 2, kNegInf);
  for (int k = 1; k <= n_max + 1; ++k) log_qint[k] = std::log(q_int(k, params.q));

  const std::size_t stride = n_max + 1;
  table.log_r.assign(static_cast<std::size_t>(ell + 1) * stride, kNegInf);
  auto at = [&](int i, int k) -> double& {
    return table.log_r[static_cast<std::size_t>(i) * stride + k];
  };
  for (int k = 1; k <= n_max; ++k) at(ell, k) = k * log_s + log_qint[k];

  table.step_prob.assign(static_cast<std::size_t>(ell) * stride * 3, 0.0);
  for (int i = ell - 1; i >= 0; --i) {
    for (int k = 1; k <= n_max; ++k) {
      const double t_down = (k > 1) ? at(i + 1, k - 1) : kNegInf;
      const double t_flat = kLog2 + at(i + 1, k);
      const double t_up = (k < n_max) ? at(i + 1, k + 1) : kNegInf;
      const double m = std::max({t_down, t_flat, t_up});
      if (m == kNegInf) continue;  // row stays -inf; unreachable height
      const double e_down = std::exp(t_down - m);
      const double e_flat = std::exp(t_flat - m);
      const double e_up = std::exp(t_up - m);
      const double total = e_down + e_flat + e_up;
      at(i, k) = log_qint[k] + m + std::log(total);
      double* p = &table.step_prob[(static_cast<std::size_t>(i) * stride + k) * 3];
      p[0] = e_down / total;
      p[1] = e_flat / total;
      p[2] = e_up / total;
    }
  }

  // Fold in the left boundary weight and normalize the initial law.
  double m0 = kNegInf;
  std::vector<double> init_log(stride, kNegInf);
  for (int k = 1; k <= n_max; ++k) {
    init_log[k] = k * log_r + at(0, k);
    m0 = std::max(m0, init_log[k]);
  }
  if (m0 == kNegInf) throw std::runtime_error("build_partition_table: empty walk measure");
  table.init_prob.assign(stride, 0.0);
  double total0 = 0.0;
  for (int k = 1; k <= n_max; ++k) {
    table.init_prob[k] = std::exp(init_log[k] - m0);
    total0 += table.init_prob[k];
  }
  for (int k = 1; k <= n_max; ++k) table.init_prob[k] /= total0;
  table.log_z = m0 + std::log(total0);

  // Same sum as the matrix-product normalization at this truncation; any
  // disagreement means one of the two is wrong.
  const TruncatedMpa mpa = build_representation(params, n_max);
  const double log_z_mpa = log_normalization(mpa, ell);
  if (std::abs(std::expm1(table.log_z - log_z_mpa)) > 1e-10)
    throw std::runtime_error(
        "build_partition_table: partition total disagrees with the "
        "matrix-product normalization");
  return table;
}

std::vector<int> sample_walk(const PartitionTable& table, RandomStream& rng,
                             double* log_prob) {
  const std::size_t stride = table.n_max + 1;
  std::vector<int> walk(table.ell + 1);
  double lp = 0.0;

  double u = rng.uniform01();
  double cum = 0.0;
  int cur = table.n_max;  // fallback: last height with positive mass
  for (int k = 1; k <= table.n_max; ++k) {
    cum += table.init_prob[k];
    if (u < cum) {
      cur = k;
      break;
    }
  }
  if (table.init_prob[cur] == 0.0)
    for (int k = table.n_max; k >= 1; --k)
      if (table.init_prob[k] > 0.0) {
        cur = k;
        break;
      }
  walk[0] = cur;
  lp += std::log(table.init_prob[cur]);

  for (int i = 0; i < table.ell; ++i) {
    const double* p = &table.step_prob[(static_cast<std::size_t>(i) * stride + cur) * 3];
    const double r = rng.uniform01();
    int choice;
    if (r < p[0])
      choice = 0;
    else if (r < p[0] + p[1])
      choice = 1;
    else
      choice = 2;
    if (p[choice] == 0.0) {  // rounding fell on a zero-mass edge
      choice = p[1] > 0.0 ? 1 : (p[0] > 0.0 ? 0 : 2);
    }
    lp += std::log(p[choice]);
    cur += choice - 1;
    walk[i + 1] = cur;
  }
  if (log_prob) *log_prob = lp;
  return walk;
}

std::vector<std::uint8_t> sample_tau_given_walk(std::span<const int> n, RandomStream& rng) {
  if (n.size() < 2) throw std::invalid_argument("sample_tau_given_walk: walk too short");
  std::vector<std::uint8_t> tau(n.size() - 1);
  for (std::size_t i = 1; i < n.size(); ++i) {
    const int step = n[i] - n[i - 1];
    if (step > 0)
      tau[i - 1] = 1;
    else if (step < 0)
      tau[i - 1] = 0;
    else
      tau[i - 1] = rng.uniform01() < 0.5 ? 1 : 0;
  }
  return tau;
}

JointWalk sample_joint(const PartitionTable& table, RandomStream& rng) {
  JointWalk jw;
  jw.n = sample_walk(table, rng);
  const std::size_t len = jw.n.size();
  jw.m.assign(len, 0);
  jw.tau.assign(len - 1, 0);
  for (std::size_t i = 1; i < len; ++i) {
    const int step = jw.n[i] - jw.n[i - 1];
    int sigma = 0;
    if (step > 0) {
      jw.tau[i - 1] = 1;
    } else if (step < 0) {
      jw.tau[i - 1] = 0;
    } else {
      sigma = rng.uniform01() < 0.5 ? 1 : -1;
      jw.tau[i - 1] = sigma > 0 ? 1 : 0;
    }
    jw.m[i] = jw.m[i - 1] + sigma;
  }
  return jw;
}

RescaledPath rescale_joint(const JointWalk& jw, double epsilon, double L, int grid_m) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("rescale_joint: epsilon must be > 0");
  if (!(L > 0.0)) throw std::invalid_argument("rescale_joint: L must be > 0");
  if (grid_m < 1) throw std::invalid_argument("rescale_joint: grid must have >= 2 points");
  const int ell = static_cast<int>(jw.n.size()) - 1;
  if (ell < 1 || std::llround(4.0 * L / (epsilon * epsilon)) != ell)
    throw std::invalid_argument("rescale_joint: walk length does not match (epsilon, L)");

  const double half_eps = 0.5 * epsilon;
  const double shift = 0.5 * std::log(epsilon * epsilon / 4.0);
  const double lattice_per_x = 4.0 / (epsilon * epsilon);

  RescaledPath path;
  path.x.resize(grid_m + 1);
  path.u.resize(grid_m + 1);
  path.v.resize(grid_m + 1);
  for (int j = 0; j <= grid_m; ++j) {
    const double x = L * j / grid_m;
    double t = x * lattice_per_x;
    if (t < 0.0) t = 0.0;
    if (t > ell) t = ell;  // rounding of ell can leave 4L/eps^2 slightly outside
    const int k = std::min(static_cast<int>(t), ell - 1);
    const double frac = t - k;
    path.x[j] = x;
    path.u[j] = half_eps * (jw.n[k] * (1.0 - frac) + jw.n[k + 1] * frac) + shift;
    path.v[j] = half_eps * (jw.m[k] * (1.0 - frac) + jw.m[k + 1] * frac);
  }
  return path;
}

}  // namespace asepkpz
