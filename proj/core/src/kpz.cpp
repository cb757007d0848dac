#include "asepkpz/kpz.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

#include "asepkpz/numerics.hpp"
#include "asepkpz/observables.hpp"
#include "asepkpz/parallel.hpp"
#include "asepkpz/params.hpp"
#include "asepkpz/walks.hpp"

namespace asepkpz {

namespace {

void check_uv(double u, double v) {
  const bool trivial = (u == 0.0 && v == 0.0);
  if (!trivial && !(u + v > 0.0)) throw std::invalid_argument("u+v must be positive");
}

std::vector<int> probe_indices(std::span<const double> probes, double L, int grid_m) {
  std::vector<int> idx(probes.size());
  const double dx = L / grid_m;
  for (std::size_t j = 0; j < probes.size(); ++j) {
    if (!(probes[j] >= 0.0 && probes[j] <= L * (1.0 + 1e-12)))
      throw std::invalid_argument("probe location outside [0, L]");
    idx[j] = static_cast<int>(std::clamp<long long>(std::llround(probes[j] / dx), 0, grid_m));
  }
  return idx;
}

}  // namespace

double WeightedEnsemble::ess() const {
  return effective_sample_size(log_weight);
}

PathSample sample_brownian(int grid_m, double L, double sigma2, RandomStream& rng) {
  if (grid_m < 1) throw std::invalid_argument("sample_brownian: grid must have >= 2 points");
  if (!(L > 0.0)) throw std::invalid_argument("sample_brownian: L must be > 0");
  if (!(sigma2 > 0.0)) throw std::invalid_argument("sample_brownian: sigma2 must be > 0");
  PathSample path;
  path.L = L;
  path.values.resize(grid_m + 1);
  path.values[0] = 0.0;
  const double sd = std::sqrt(sigma2 * L / grid_m);
  for (int i = 1; i <= grid_m; ++i) path.values[i] = path.values[i - 1] + sd * rng.normal();
  return path;
}

double rn_log_weight_X(const PathSample& path, double u, double v, double* log_s1_out) {
  const int m = path.grid_m();
  if (m < 1) throw std::invalid_argument("rn_log_weight_X: degenerate grid");
  if (path.values[0] != 0.0)
    throw std::invalid_argument("rn_log_weight_X: path must start at 0");
  const double dx = path.dx();
  // Trapezoid terms of S1 = int exp(-2X): endpoints carry half weight.
  double peak = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= m; ++i) peak = std::max(peak, -2.0 * path.values[i]);
  double acc = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double c = (i == 0 || i == m) ? 0.5 : 1.0;
    acc += c * std::exp(-2.0 * path.values[i] - peak);
  }
  const double log_s1 = peak + std::log(acc) + std::log(dx);
  // S2 = exp(2X(L)) S1 term by term, so no second pass is needed.
  const double log_s2 = 2.0 * path.values[m] + log_s1;
  if (log_s1_out) *log_s1_out = log_s1;
  return -u * log_s1 - v * log_s2;
}

namespace {

WeightedEnsemble sample_ensemble_impl(double u, double v, double L, int grid_m,
                                      std::int64_t n_samples, RandomStream& rng,
                                      std::span<const double> probes, bool with_w) {
  check_uv(u, v);
  if (n_samples < 1) throw std::invalid_argument("ensemble needs n_samples >= 1");
  if (grid_m < 1) throw std::invalid_argument("ensemble needs grid_m >= 1");
  if (!(L > 0.0)) throw std::invalid_argument("ensemble needs L > 0");
  const std::vector<int> idx = probe_indices(probes, L, grid_m);

  WeightedEnsemble ens;
  ens.L = L;
  ens.u = u;
  ens.v = v;
  ens.probes.assign(probes.begin(), probes.end());
  ens.values.assign(n_samples, std::vector<double>(idx.size(), 0.0));
  ens.log_weight.assign(n_samples, 0.0);
  ens.log_s1.assign(n_samples, 0.0);
  if (with_w) ens.aux.assign(static_cast<std::size_t>(n_samples) * idx.size(), 0.0);

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  parallel_for(n_samples, [&](std::int64_t k) {
    RandomStream sub = rng.substream(static_cast<std::uint64_t>(k));
    const PathSample x = sample_brownian(grid_m, L, 0.5, sub);
    double log_s1 = 0.0;
    ens.log_weight[k] = rn_log_weight_X(x, u, v, &log_s1);
    ens.log_s1[k] = log_s1;
    if (with_w) {
      const PathSample w = sample_brownian(grid_m, L, 1.0, sub);
      for (std::size_t j = 0; j < idx.size(); ++j) {
        const double wj = inv_sqrt2 * w.values[idx[j]];
        ens.values[k][j] = wj + x.values[idx[j]];
        ens.aux[static_cast<std::size_t>(k) * idx.size() + j] = wj;
      }
    } else {
      for (std::size_t j = 0; j < idx.size(); ++j) ens.values[k][j] = x.values[idx[j]];
    }
  });

  ens.low_ess_warning = ens.ess() < 0.01 * static_cast<double>(n_samples);
  return ens;
}

}  // namespace

WeightedEnsemble sample_X_ensemble(double u, double v, double L, int grid_m,
                                   std::int64_t n_samples, RandomStream& rng,
                                   std::span<const double> probes) {
  return sample_ensemble_impl(u, v, L, grid_m, n_samples, rng, probes, false);
}

WeightedEnsemble sample_H_ensemble(double u, double v, double L, int grid_m,
                                   std::int64_t n_samples, RandomStream& rng,
                                   std::span<const double> probes) {
  return sample_ensemble_impl(u, v, L, grid_m, n_samples, rng, probes, true);
}

double resample_zero_mode_offset(double log_s1, double u, double v, RandomStream& rng) {
  if (!(u + v > 0.0)) throw std::invalid_argument("u+v must be positive");
  const double g = rng.gamma(u + v);
  return 0.5 * (log_s1 - std::log(g));
}

PathSample resample_zero_mode(const PathSample& x_path, double u, double v,
                              RandomStream& rng) {
  double log_s1 = 0.0;
  rn_log_weight_X(x_path, u, v, &log_s1);
  const double u0 = resample_zero_mode_offset(log_s1, u, v, rng);
  PathSample out = x_path;
  for (double& t : out.values) t += u0;
  return out;
}

namespace {

struct SeriesSpec {
  bool mean = false;  // mean vs variance
  int field = 0;      // 0 = H_end, 1 = V_end, 2 = U_end, 3 = X_end
};

SeriesSpec parse_observable(const std::string& name) {
  SeriesSpec s;
  if (name == "mean_H_end") return {true, 0};
  if (name == "var_H_end") return {false, 0};
  if (name == "var_V_end") return {false, 1};
  if (name == "mean_V_end") return {true, 1};
  if (name == "mean_U_end") return {true, 2};
  if (name == "var_U_end") return {false, 2};
  if (name == "mean_X_end") return {true, 3};
  if (name == "var_X_end") return {false, 3};
  throw std::invalid_argument("unknown observable: " + name);
}

}  // namespace

std::vector<ConvergenceRow> convergence_study(double u, double v, double L,
                                              std::span<const double> epsilons,
                                              std::span<const std::string> observables,
                                              std::int64_t n_samples, int grid_m,
                                              RandomStream& rng) {
  if (!(u + v > 0.0)) throw std::invalid_argument("u+v must be positive");
  if (epsilons.empty()) throw std::invalid_argument("convergence_study: no epsilons");
  if (observables.empty()) throw std::invalid_argument("convergence_study: no observables");
  if (n_samples < 2) throw std::invalid_argument("convergence_study: n_samples >= 2");
  std::vector<SeriesSpec> specs;
  for (const auto& name : observables) specs.push_back(parse_observable(name));
  const bool need_u =
      std::any_of(specs.begin(), specs.end(), [](const SeriesSpec& s) { return s.field >= 2; });

  // Discrete side: per epsilon, endpoint statistics of the rescaled walks.
  // fields[e][f][k]: f indexes H, V, U, X at x = L for sample k.
  const std::size_t n_eps = epsilons.size();
  std::vector<std::array<std::vector<double>, 4>> fields(n_eps);
  for (std::size_t e = 0; e < n_eps; ++e) {
    const double eps = epsilons[e];
    const WeakAsymmetry wa = weak_asymmetry(eps, L, u, v);
    const PartitionTable table = build_partition_table(wa.params);
    for (auto& f : fields[e]) f.assign(n_samples, 0.0);
    RandomStream eps_stream = rng.substream(1000 + e);
    const double half_eps = 0.5 * eps;
    const double shift = 0.5 * std::log(eps * eps / 4.0);
    auto& fe = fields[e];
    parallel_for(n_samples, [&](std::int64_t k) {
      RandomStream sub = eps_stream.substream(static_cast<std::uint64_t>(k));
      const JointWalk jw = sample_joint(table, sub);
      const double u_0 = half_eps * jw.n.front() + shift;
      const double u_end = half_eps * jw.n.back() + shift;
      const double v_end = half_eps * jw.m.back();
      fe[0][k] = u_end - u_0 + v_end;
      fe[1][k] = v_end;
      fe[2][k] = u_end;
      fe[3][k] = u_end - u_0;
    });
  }

  // Continuum side: one weighted ensemble probed at the endpoint.
  const double probes[1] = {L};
  RandomStream cont_stream = rng.substream(1);
  WeightedEnsemble ens = sample_H_ensemble(u, v, L, grid_m, n_samples, cont_stream, probes);
  std::array<std::vector<double>, 4> cont;
  for (auto& f : cont) f.assign(n_samples, 0.0);
  RandomStream zero_stream = rng.substream(2);
  for (std::int64_t k = 0; k < n_samples; ++k) {
    const double h_end = ens.values[k][0];
    const double v_end = ens.aux[static_cast<std::size_t>(k)];
    cont[0][k] = h_end;
    cont[1][k] = v_end;
    cont[3][k] = h_end - v_end;  // the X path endpoint
  }
  if (need_u) {
    for (std::int64_t k = 0; k < n_samples; ++k) {
      RandomStream sub = zero_stream.substream(static_cast<std::uint64_t>(k));
      const double u0 = resample_zero_mode_offset(ens.log_s1[k], u, v, sub);
      cont[2][k] = u0 + cont[3][k];
    }
  }

  std::vector<ConvergenceRow> rows;
  const std::vector<double> no_weights;
  for (std::size_t o = 0; o < observables.size(); ++o) {
    const SeriesSpec s = specs[o];
    std::vector<double> xs, ys, sigmas;
    for (std::size_t e = 0; e < n_eps; ++e) {
      const auto& series = fields[e][s.field];
      const Estimate est = s.mean ? weighted_mean(series, no_weights)
                                  : weighted_variance(series, no_weights);
      rows.push_back({std::string(observables[o]), "discrete", epsilons[e], est.value,
                      est.stderr_, est.n_effective});
      xs.push_back(epsilons[e]);
      ys.push_back(est.value);
      sigmas.push_back(est.stderr_);
    }
    if (n_eps >= 2) {
      const LineFit fit = fit_line_weighted(xs, ys, sigmas);
      rows.push_back({std::string(observables[o]), "extrapolated", 0.0, fit.intercept,
                      fit.intercept_stderr, static_cast<double>(n_eps)});
    }
    const Estimate cest = s.mean ? weighted_mean(cont[s.field], ens.log_weight)
                                 : weighted_variance(cont[s.field], ens.log_weight);
    rows.push_back({std::string(observables[o]), "continuum", 0.0, cest.value, cest.stderr_,
                    cest.n_effective});
  }
  return rows;
}

}  // namespace asepkpz
