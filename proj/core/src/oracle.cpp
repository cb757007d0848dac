#include "asepkpz/oracle.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace asepkpz {

double GeneratorMatrix::total_exit_rate(int state) const {
  double total = 0.0;
  for (const auto& [to, rate] : outgoing[state]) {
    (void)to;
    total += rate;
  }
  return total;
}

GeneratorMatrix build_generator(const ModelParams& params) {
  const int ell = params.ell;
  if (ell < 1 || ell > 14)
    throw std::invalid_argument("build_generator: ell must lie in [1, 14]");
  GeneratorMatrix gen;
  gen.ell = ell;
  gen.dim = 1 << ell;
  gen.outgoing.assign(gen.dim, {});

  const double p = 1.0;
  for (int s = 0; s < gen.dim; ++s) {
    auto& out = gen.outgoing[s];
    // Bulk hops between sites i and i+1 (bits i-1 and i).
    for (int b = 0; b + 1 < ell; ++b) {
      const bool left = (s >> b) & 1;
      const bool right = (s >> (b + 1)) & 1;
      if (left && !right && p > 0.0) out.emplace_back(s ^ (3 << b), p);
      if (!left && right && params.q > 0.0) out.emplace_back(s ^ (3 << b), params.q);
    }
    // Left boundary (site 1).
    if (!(s & 1)) {
      if (params.alpha > 0.0) out.emplace_back(s | 1, params.alpha);
    } else {
      if (params.gamma > 0.0) out.emplace_back(s & ~1, params.gamma);
    }
    // Right boundary (site ell).
    const int top = 1 << (ell - 1);
    if (!(s & top)) {
      if (params.delta > 0.0) out.emplace_back(s | top, params.delta);
    } else {
      if (params.beta > 0.0) out.emplace_back(s & ~top, params.beta);
    }
  }
  return gen;
}

namespace {

// Number of strongly connected components with no outgoing edge (closed
// classes). A unique stationary law exists iff this count is 1.
int count_closed_classes(const GeneratorMatrix& gen) {
  const int n = gen.dim;
  // Iterative Tarjan.
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<char> on_stack(n, 0);
  std::vector<int> stack;
  int next_index = 0, n_comp = 0;

  struct Frame {
    int v;
    std::size_t edge;
  };
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.edge < gen.outgoing[f.v].size()) {
        const int w = gen.outgoing[f.v][f.edge].first;
        ++f.edge;
        if (index[w] == -1) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
      } else {
        const int v = f.v;
        call.pop_back();
        if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
        if (low[v] == index[v]) {
          for (;;) {
            const int w = stack.back();
            stack.pop_back();
            on_stack[w] = 0;
            comp[w] = n_comp;
            if (w == v) break;
          }
          ++n_comp;
        }
      }
    }
  }

  std::vector<char> closed(n_comp, 1);
  for (int v = 0; v < n; ++v)
    for (const auto& [w, rate] : gen.outgoing[v]) {
      (void)rate;
      if (comp[w] != comp[v]) closed[comp[v]] = 0;
    }
  int count = 0;
  for (char c : closed) count += c;
  return count;
}

}  // namespace

std::vector<double> stationary_solve(const GeneratorMatrix& gen) {
  const int n = gen.dim;
  const int closed = count_closed_classes(gen);
  if (closed != 1)
    throw std::invalid_argument("stationary_solve: chain has " + std::to_string(closed) +
                                " closed classes; stationary law is not unique");

  // A = Q^T acting on column distributions; replace the last row by the
  // normalization sum(pi) = 1.
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (int s = 0; s < n; ++s) {
    double exit = 0.0;
    for (const auto& [t, rate] : gen.outgoing[s]) {
      A(t, s) += rate;
      exit += rate;
    }
    A(s, s) -= exit;
  }
  const Eigen::MatrixXd QT = A;
  A.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;

  Eigen::VectorXd pi = A.partialPivLu().solve(b);

  const double residual = (QT * pi).lpNorm<Eigen::Infinity>();
  if (!(residual < 1e-12))
    throw std::runtime_error("stationary_solve: residual " + std::to_string(residual) +
                             " exceeds 1e-12");
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    if (pi(i) < -1e-12)
      throw std::runtime_error("stationary_solve: negative stationary mass");
    if (pi(i) < 0.0) pi(i) = 0.0;
    sum += pi(i);
  }
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = pi(i) / sum;
  return out;
}

std::uint64_t WalkTable::encode(const std::vector<int>& heights) {
  std::uint64_t key = static_cast<std::uint64_t>(heights.at(0)) & 0xffff;
  for (std::size_t i = 1; i < heights.size(); ++i) {
    const int step = heights[i] - heights[i - 1] + 1;  // 0, 1, 2
    key |= static_cast<std::uint64_t>(step) << (16 + 2 * (i - 1));
  }
  return key;
}

std::vector<int> WalkTable::decode(std::uint64_t key, int ell) {
  std::vector<int> heights(ell + 1);
  heights[0] = static_cast<int>(key & 0xffff);
  for (int i = 1; i <= ell; ++i) {
    const int step = static_cast<int>((key >> (16 + 2 * (i - 1))) & 3) - 1;
    heights[i] = heights[i - 1] + step;
  }
  return heights;
}

double WalkTable::probability(const std::vector<int>& heights) const {
  if (static_cast<int>(heights.size()) != ell + 1) return 0.0;
  const std::uint64_t key = encode(heights);
  const auto it = std::lower_bound(
      walks.begin(), walks.end(), key,
      [](const std::pair<std::uint64_t, double>& e, std::uint64_t k) { return e.first < k; });
  if (it == walks.end() || it->first != key) return 0.0;
  return it->second;
}

WalkMeasure enumerate_walk_measure(const ModelParams& params, int n_max) {
  const int ell = params.ell;
  if (ell < 1 || ell > 10)
    throw std::invalid_argument("enumerate_walk_measure: ell must lie in [1, 10]");
  if (n_max < 1 || n_max > 40)
    throw std::invalid_argument("enumerate_walk_measure: n_max must lie in [1, 40]");
  if (!(params.rho_a > 0.0 && params.rho_a < 1.0 && params.rho_b > 0.0 && params.rho_b < 1.0))
    throw std::invalid_argument("enumerate_walk_measure: densities must lie in (0, 1)");

  const double r = (1.0 - params.rho_a) / params.rho_a;
  const double s = params.rho_b / (1.0 - params.rho_b);
  std::vector<double> qint(n_max + 2);
  for (int n = 0; n <= n_max + 1; ++n) qint[n] = q_int(n, params.q);
  std::vector<double> s_pow(n_max + 1), r_pow(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    s_pow[n] = std::pow(s, n);
    r_pow[n] = std::pow(r, n);
  }

  WalkMeasure out;
  out.table.ell = ell;
  out.table.n_max = n_max;
  out.tau_marginal.assign(std::size_t{1} << ell, 0.0);

  // Walk enumeration: 3-way DFS carrying the partial weight
  // r^{n_0} * prod_{steps so far} [n_left]_q v(n_left, n_right).
  std::vector<int> heights(ell + 1);
  double total = 0.0;
  {
    struct Node {
      int pos;
      int height;
      double weight;
      int branch;  // next step choice to try: 0 down, 1 flat, 2 up
    };
    std::vector<Node> stack;
    for (int n0 = 1; n0 <= n_max; ++n0) {
      stack.clear();
      stack.push_back({0, n0, r_pow[n0], 0});
      heights[0] = n0;
      while (!stack.empty()) {
        Node& node = stack.back();
        if (node.pos == ell) {
          const double omega = node.weight * qint[node.height] * s_pow[node.height];
          total += omega;
          out.table.walks.emplace_back(WalkTable::encode(heights), omega);
          stack.pop_back();
          continue;
        }
        if (node.branch > 2) {
          stack.pop_back();
          continue;
        }
        const int step = node.branch - 1;
        ++node.branch;
        const int next = node.height + step;
        if (next < 1 || next > n_max) continue;
        const double v = (step == 0) ? 2.0 : 1.0;
        const double w = node.weight * qint[node.height] * v;
        if (w < 1e-300) continue;  // underflow pruning
        heights[node.pos + 1] = next;
        stack.push_back({node.pos + 1, next, w, 0});
      }
    }
  }
  if (!(total > 0.0))
    throw std::runtime_error("enumerate_walk_measure: total weight vanished");
  out.table.total_weight = total;
  for (auto& [key, w] : out.table.walks) w /= total;
  std::sort(out.table.walks.begin(), out.table.walks.end());

  // Occupation marginal: joint (walk, tau) DFS. A flat step splits into
  // tau = 0 and tau = 1 with half the flat weight each, so the v factor
  // drops out and each joint path carries boundary * prod [n_i]_q.
  {
    struct Node {
      int pos;
      int height;
      std::uint64_t mask;
      double weight;
      int branch;  // 0: down/tau=0, 1: flat/tau=0, 2: flat/tau=1, 3: up/tau=1
    };
    std::vector<Node> stack;
    double check_total = 0.0;
    for (int n0 = 1; n0 <= n_max; ++n0) {
      stack.clear();
      stack.push_back({0, n0, 0, r_pow[n0], 0});
      while (!stack.empty()) {
        Node& node = stack.back();
        if (node.pos == ell) {
          const double w = node.weight * qint[node.height] * s_pow[node.height];
          out.tau_marginal[node.mask] += w;
          check_total += w;
          stack.pop_back();
          continue;
        }
        if (node.branch > 3) {
          stack.pop_back();
          continue;
        }
        const int b = node.branch;
        ++node.branch;
        const int step = (b == 0) ? -1 : (b == 3) ? 1 : 0;
        const int tau = (b >= 2) ? 1 : 0;
        const int next = node.height + step;
        if (next < 1 || next > n_max) continue;
        const double w = node.weight * qint[node.height];
        if (w < 1e-300) continue;
        const std::uint64_t mask = node.mask | (static_cast<std::uint64_t>(tau) << node.pos);
        stack.push_back({node.pos + 1, next, mask, w, 0});
      }
    }
    if (std::abs(check_total / total - 1.0) > 1e-10)
      throw std::runtime_error("enumerate_walk_measure: joint and walk totals disagree");
    for (double& p : out.tau_marginal) p /= check_total;
  }
  return out;
}

}  // namespace asepkpz
