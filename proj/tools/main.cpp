// Command-line front end: stationary measures of the open asymmetric
// exclusion chain (exact, matrix-product, walk-sampled, simulated) and the
// matching continuum interval samplers.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "asepkpz/config.hpp"
#include "asepkpz/dynamics.hpp"
#include "asepkpz/kpz.hpp"
#include "asepkpz/mpa.hpp"
#include "asepkpz/observables.hpp"
#include "asepkpz/oracle.hpp"
#include "asepkpz/parallel.hpp"
#include "asepkpz/params.hpp"
#include "asepkpz/report.hpp"
#include "asepkpz/rng.hpp"
#include "asepkpz/version.hpp"
#include "asepkpz/walks.hpp"

namespace {

using namespace asepkpz;

// Model inputs accepted by most subcommands. CLI flags override config
// file entries; whichever parameter family is present decides the route.
struct ModelOptions {
  std::string config_path;
  std::optional<double> q, alpha, beta, gamma, delta, rho_a, rho_b;
  std::optional<double> epsilon, big_l, u, v;
  std::optional<long long> ell;

  CLI::Option* opt_q = nullptr;
};

void add_model_flags(CLI::App* cmd, ModelOptions& m, bool with_scaling) {
  cmd->add_option("--config", m.config_path, "key=value parameter file");
  cmd->add_option("--q", m.q, "asymmetry, left-hop rate");
  cmd->add_option("--alpha", m.alpha, "left injection rate");
  cmd->add_option("--beta", m.beta, "right ejection rate");
  cmd->add_option("--gamma", m.gamma, "left ejection rate");
  cmd->add_option("--delta", m.delta, "right injection rate");
  cmd->add_option("--rho-a", m.rho_a, "left boundary density");
  cmd->add_option("--rho-b", m.rho_b, "right boundary density");
  cmd->add_option("--ell", m.ell, "number of sites");
  if (with_scaling) {
    cmd->add_option("--epsilon", m.epsilon, "weak asymmetry scale, q = exp(-epsilon)");
    cmd->add_option("--L", m.big_l, "interval length");
    cmd->add_option("--u", m.u, "left boundary parameter");
    cmd->add_option("--v", m.v, "right boundary parameter");
  }
}

// Merges config file values under CLI overrides into one key->value view.
std::map<std::string, double> merged_values(const ModelOptions& m) {
  std::map<std::string, double> vals;
  if (!m.config_path.empty()) vals = load_config(m.config_path);
  auto put = [&vals](const char* key, const std::optional<double>& v) {
    if (v) vals[key] = *v;
  };
  put("q", m.q);
  put("alpha", m.alpha);
  put("beta", m.beta);
  put("gamma", m.gamma);
  put("delta", m.delta);
  put("rho_a", m.rho_a);
  put("rho_b", m.rho_b);
  put("epsilon", m.epsilon);
  put("L", m.big_l);
  put("u", m.u);
  put("v", m.v);
  if (m.ell) vals["ell"] = static_cast<double>(*m.ell);
  return vals;
}

bool has(const std::map<std::string, double>& vals, const char* key) {
  return vals.count(key) != 0;
}

double get(const std::map<std::string, double>& vals, const char* key) {
  return vals.at(key);
}

// Builds ModelParams from whichever family is given. Throws
// invalid_argument on missing or conflicting inputs.
ModelParams resolve_model(const std::map<std::string, double>& vals) {
  const int ell = has(vals, "ell") ? static_cast<int>(get(vals, "ell")) : 1;
  if (has(vals, "epsilon")) {
    if (!(has(vals, "L") && has(vals, "u") && has(vals, "v")))
      throw std::invalid_argument("epsilon mode needs --L, --u and --v");
    return weak_asymmetry(get(vals, "epsilon"), get(vals, "L"), get(vals, "u"),
                          get(vals, "v"))
        .params;
  }
  const double q = has(vals, "q") ? get(vals, "q") : 0.0;
  const bool have_rates = has(vals, "alpha") || has(vals, "beta") || has(vals, "gamma") ||
                          has(vals, "delta");
  const bool have_densities = has(vals, "rho_a") && has(vals, "rho_b");
  if (have_rates) {
    auto rate = [&vals](const char* key) { return has(vals, key) ? get(vals, key) : 0.0; };
    ModelParams p = from_rates(rate("alpha"), rate("beta"), rate("gamma"), rate("delta"),
                               q, ell);
    if (have_densities) {
      if (std::abs(p.rho_a - get(vals, "rho_a")) > 1e-9 ||
          std::abs(p.rho_b - get(vals, "rho_b")) > 1e-9)
        throw std::invalid_argument(
            "rates and densities were both given and disagree");
    }
    return p;
  }
  if (have_densities)
    return from_densities(get(vals, "rho_a"), get(vals, "rho_b"), q, ell);
  throw std::invalid_argument("give either boundary rates, densities, or --epsilon mode");
}

std::optional<WeakAsymmetry> resolve_scaling(const std::map<std::string, double>& vals) {
  if (!has(vals, "epsilon")) return std::nullopt;
  if (!(has(vals, "L") && has(vals, "u") && has(vals, "v")))
    throw std::invalid_argument("epsilon mode needs --L, --u and --v");
  return weak_asymmetry(get(vals, "epsilon"), get(vals, "L"), get(vals, "u"),
                        get(vals, "v"));
}

void echo_params(Report& report, const ModelParams& p) {
  report.params["q"] = p.q;
  report.params["alpha"] = p.alpha;
  report.params["beta"] = p.beta;
  report.params["gamma"] = p.gamma;
  report.params["delta"] = p.delta;
  report.params["rho_a"] = p.rho_a;
  report.params["rho_b"] = p.rho_b;
  report.params["ell"] = p.ell;
  report.params["liggett"] = p.liggett ? 1.0 : 0.0;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open output file: " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  ~Timer() {
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                         .count();
    std::fprintf(stderr, "runtime_seconds %.3f\n", s);
  }
};

// ---------------------------------------------------------------- dynamics

struct DynamicsArgs {
  ModelOptions model;
  double burn_in = -1.0;  // < 0: pick 10 * ell^2 / max(1-q, 0.1)
  long long samples = 1000;
  double thin = 0.0;
  std::uint64_t seed = 1;
  std::string out, format = "json";
};

int run_dynamics(const DynamicsArgs& a) {
  const ModelParams p = resolve_model(merged_values(a.model));
  double burn_in = a.burn_in;
  if (burn_in < 0.0)
    burn_in = 10.0 * p.ell * p.ell / std::max(1.0 - p.q, 0.1);
  RandomStream rng(a.seed, 0);
  const auto snaps = sample_stationary_dynamics(p, burn_in, static_cast<int>(a.samples),
                                                a.thin, rng);
  Output out(a.out);
  if (a.format == "csv") {
    out.stream() << "sample";
    for (int i = 1; i <= p.ell; ++i) out.stream() << ",s" << i;
    out.stream() << "\n";
    for (std::size_t k = 0; k < snaps.size(); ++k) {
      out.stream() << k;
      for (auto occ : snaps[k]) out.stream() << ',' << int(occ);
      out.stream() << "\n";
    }
    return 0;
  }
  Report report;
  report.tool_version = kToolVersion;
  report.subcommand = "dynamics";
  report.seed = a.seed;
  echo_params(report, p);
  report.params["burn_in"] = burn_in;
  report.params["samples"] = static_cast<double>(a.samples);
  std::vector<double> site(snaps.size());
  for (int i = 0; i < p.ell; ++i) {
    for (std::size_t k = 0; k < snaps.size(); ++k) site[k] = snaps[k][i];
    const Estimate est = weighted_mean(site, {});
    char name[32];
    std::snprintf(name, sizeof(name), "density_%d", i + 1);
    report.observables.push_back({name, est.value, est.stderr_, est.n_effective});
  }
  std::vector<double> total(snaps.size());
  for (std::size_t k = 0; k < snaps.size(); ++k) {
    double n = 0;
    for (auto occ : snaps[k]) n += occ;
    total[k] = n;
  }
  const Estimate tot = weighted_mean(total, {});
  report.observables.push_back({"mean_occupation", tot.value, tot.stderr_, tot.n_effective});
  out.stream() << report_to_json(report);
  return 0;
}

// --------------------------------------------------------------------- mpa

struct MpaArgs {
  ModelOptions model;
  int n_max = 0;
  double rel_tol = 1e-12;
  bool profile = false;
  bool verify = false;
  std::string out;
};

int run_mpa(const MpaArgs& a) {
  const ModelParams p = resolve_model(merged_values(a.model));
  const int n_max = a.n_max > 0 ? a.n_max : adapt_truncation(p, p.ell, a.rel_tol);
  const TruncatedMpa mpa = p.liggett
                               ? build_representation(p, n_max)
                               : build_general_representation(p, rep_param_d(p),
                                                              rep_param_e(p), n_max);
  Report report;
  report.tool_version = kToolVersion;
  report.subcommand = "mpa";
  report.seed = 0;
  echo_params(report, p);
  report.params["n_max"] = n_max;
  const double log_z = log_normalization(mpa, p.ell);
  report.observables.push_back({"log_Z", log_z, 0.0, 0.0});
  report.observables.push_back({"current", current(mpa, p.ell), 0.0, 0.0});
  if (a.profile) {
    const std::vector<double> prof = density_profile(mpa, p.ell);
    for (int i = 0; i < p.ell; ++i) {
      char name[32];
      std::snprintf(name, sizeof(name), "density_%d", i + 1);
      report.observables.push_back({name, prof[i], 0.0, 0.0});
    }
  }
  if (a.verify) {
    const AlgebraResidual res = verify_algebra(mpa);
    report.diagnostics["residual_bulk"] = res.max_bulk;
    report.diagnostics["residual_right_vector"] = res.max_v;
    report.diagnostics["residual_left_vector"] = res.max_w;
    report.diagnostics["rows_checked"] = res.rows_checked;
  }
  Output out(a.out);
  out.stream() << report_to_json(report);
  return 0;
}

// ------------------------------------------------------------------ oracle

struct OracleArgs {
  ModelOptions model;
  std::string compare = "mpa";
  long long samples = 20000;
  double burn_in = -1.0;
  double thin = 0.0;
  std::uint64_t seed = 1;
  int n_max = 0;
  std::string out;
};

int run_oracle(const OracleArgs& a) {
  const ModelParams p = resolve_model(merged_values(a.model));
  const GeneratorMatrix gen = build_generator(p);
  const std::vector<double> pi = stationary_solve(gen);

  Report report;
  report.tool_version = kToolVersion;
  report.subcommand = "oracle";
  report.seed = a.seed;
  echo_params(report, p);
  for (int i = 0; i < p.ell; ++i) {
    double dens = 0.0;
    for (std::size_t s = 0; s < pi.size(); ++s)
      if ((s >> i) & 1u) dens += pi[s];
    char name[32];
    std::snprintf(name, sizeof(name), "density_%d", i + 1);
    report.observables.push_back({name, dens, 0.0, 0.0});
  }

  if (a.compare == "mpa") {
    const int n_max = a.n_max > 0 ? a.n_max : adapt_truncation(p, p.ell, 1e-12);
    const TruncatedMpa mpa = p.liggett
                                 ? build_representation(p, n_max)
                                 : build_general_representation(p, rep_param_d(p),
                                                                rep_param_e(p), n_max);
    double max_diff = 0.0;
    std::vector<std::uint8_t> tau(p.ell);
    for (std::size_t s = 0; s < pi.size(); ++s) {
      for (int i = 0; i < p.ell; ++i) tau[i] = (s >> i) & 1u;
      max_diff = std::max(max_diff, std::abs(pi[s] - stationary_probability(mpa, tau)));
    }
    report.diagnostics["max_abs_diff"] = max_diff;
  } else if (a.compare == "walks") {
    const int n_max = a.n_max > 0 ? a.n_max : 40;
    const WalkMeasure wm = enumerate_walk_measure(p, n_max);
    double max_diff = 0.0;
    for (std::size_t s = 0; s < pi.size(); ++s)
      max_diff = std::max(max_diff, std::abs(pi[s] - wm.tau_marginal[s]));
    report.diagnostics["max_abs_diff"] = max_diff;
  } else if (a.compare == "dynamics") {
    double burn_in = a.burn_in;
    if (burn_in < 0.0) burn_in = 10.0 * p.ell * p.ell / std::max(1.0 - p.q, 0.1);
    RandomStream rng(a.seed, 0);
    const auto snaps = sample_stationary_dynamics(p, burn_in, static_cast<int>(a.samples),
                                                  a.thin, rng);
    std::vector<double> freq(pi.size(), 0.0);
    for (const auto& tau : snaps) {
      std::size_t s = 0;
      for (int i = 0; i < p.ell; ++i) s |= static_cast<std::size_t>(tau[i]) << i;
      freq[s] += 1.0;
    }
    double tv = 0.0;
    for (std::size_t s = 0; s < pi.size(); ++s)
      tv += std::abs(freq[s] / snaps.size() - pi[s]);
    report.diagnostics["tv_distance"] = 0.5 * tv;
    report.params["samples"] = static_cast<double>(a.samples);
    report.params["burn_in"] = burn_in;
  } else if (a.compare != "none") {
    throw std::invalid_argument("--compare must be one of mpa, walks, dynamics, none");
  }

  Output out(a.out);
  out.stream() << report_to_json(report);
  return 0;
}

// ------------------------------------------------------------------- walks

struct WalksArgs {
  ModelOptions model;
  long long samples = 10000;
  std::uint64_t seed = 1;
  int grid = 64;
  int n_max = 0;
  std::string format = "moments";  // moments | paths | raw
  std::string out;
};

int run_walks(const WalksArgs& a) {
  const auto vals = merged_values(a.model);
  const std::optional<WeakAsymmetry> scaling = resolve_scaling(vals);
  const ModelParams p = scaling ? scaling->params : resolve_model(vals);
  if (a.samples < 1) throw std::invalid_argument("--samples must be >= 1");
  const PartitionTable table = build_partition_table(p, a.n_max);
  RandomStream rng(a.seed, 0);

  Output out(a.out);
  if (a.format == "paths") {
    if (!scaling)
      throw std::invalid_argument("paths output needs --epsilon scaling parameters");
    out.stream() << "sample,x,U_eps,V_eps,H_eps\n";
    for (long long k = 0; k < a.samples; ++k) {
      RandomStream sub = rng.substream(static_cast<std::uint64_t>(k));
      const JointWalk jw = sample_joint(table, sub);
      const RescaledPath path =
          rescale_joint(jw, scaling->scaling.epsilon, scaling->scaling.L, a.grid);
      for (std::size_t j = 0; j < path.x.size(); ++j) {
        const double h = path.u[j] - path.u[0] + path.v[j];
        out.stream() << k << ',' << fmt_g17(path.x[j]) << ',' << fmt_g17(path.u[j]) << ','
                     << fmt_g17(path.v[j]) << ',' << fmt_g17(h) << "\n";
      }
    }
    return 0;
  }
  if (a.format == "raw") {
    out.stream() << "sample,i,n,m,tau\n";
    for (long long k = 0; k < a.samples; ++k) {
      RandomStream sub = rng.substream(static_cast<std::uint64_t>(k));
      const JointWalk jw = sample_joint(table, sub);
      for (std::size_t i = 0; i < jw.n.size(); ++i) {
        out.stream() << k << ',' << i << ',' << jw.n[i] << ',' << jw.m[i] << ','
                     << (i > 0 ? int(jw.tau[i - 1]) : -1) << "\n";
      }
    }
    return 0;
  }
  if (a.format != "moments")
    throw std::invalid_argument("--format must be one of moments, paths, raw");

  // Aggregated endpoint moments.
  std::vector<double> h_end(a.samples), v_end(a.samples), u_end(a.samples),
      n0(a.samples), dens(a.samples);
  parallel_for(a.samples, [&](std::int64_t k) {
    RandomStream sub = rng.substream(static_cast<std::uint64_t>(k));
    const JointWalk jw = sample_joint(table, sub);
    n0[k] = jw.n.front();
    double occ = 0.0;
    for (auto t : jw.tau) occ += t;
    dens[k] = p.ell > 0 ? occ / p.ell : 0.0;
    if (scaling) {
      const double eps = scaling->scaling.epsilon;
      const double shift = 0.5 * std::log(eps * eps / 4.0);
      const double u0 = 0.5 * eps * jw.n.front() + shift;
      const double ue = 0.5 * eps * jw.n.back() + shift;
      const double ve = 0.5 * eps * jw.m.back();
      u_end[k] = ue;
      v_end[k] = ve;
      h_end[k] = ue - u0 + ve;
    }
  });

  Report report;
  report.tool_version = kToolVersion;
  report.subcommand = "walks";
  report.seed = a.seed;
  echo_params(report, p);
  report.params["samples"] = static_cast<double>(a.samples);
  report.params["n_max"] = table.n_max;
  if (scaling) {
    report.params["epsilon"] = scaling->scaling.epsilon;
    report.params["L"] = scaling->scaling.L;
    report.params["u"] = scaling->scaling.u;
    report.params["v"] = scaling->scaling.v;
  }
  auto push = [&report](const char* name, const Estimate& est) {
    report.observables.push_back({name, est.value, est.stderr_, est.n_effective});
  };
  push("mean_n0", weighted_mean(n0, {}));
  push("mean_density", weighted_mean(dens, {}));
  if (scaling) {
    push("mean_U_end", weighted_mean(u_end, {}));
    push("var_U_end", weighted_variance(u_end, {}));
    push("mean_V_end", weighted_mean(v_end, {}));
    push("var_V_end", weighted_variance(v_end, {}));
    push("mean_H_end", weighted_mean(h_end, {}));
    push("var_H_end", weighted_variance(h_end, {}));
  }
  report.diagnostics["log_Z"] = table.log_z;
  out.stream() << report_to_json(report);
  return 0;
}

// -------------------------------------------------------------- kpz-sample

struct KpzArgs {
  double u = 0.0, v = 0.0, big_l = 1.0;
  int grid = 1024;
  long long samples = 100000;
  std::uint64_t seed = 1;
  std::string mode = "H";
  std::string format = "json";  // json | paths
  std::string out;
};

int run_kpz_sample(const KpzArgs& a) {
  if (a.mode != "X" && a.mode != "H" && a.mode != "U")
    throw std::invalid_argument("--mode must be X, H or U");
  if (a.samples < 1) throw std::invalid_argument("--samples must be >= 1");
  const bool trivial = (a.u == 0.0 && a.v == 0.0);
  if (!trivial && !(a.u + a.v > 0.0)) throw std::invalid_argument("u+v must be positive");
  if (a.mode == "U" && trivial)
    throw std::invalid_argument("mode U needs u+v strictly positive");
  RandomStream rng(a.seed, 0);
  Output out(a.out);

  if (a.format == "paths") {
    out.stream() << "sample,x,value,log_weight\n";
    const double dx = a.big_l / a.grid;
    for (long long k = 0; k < a.samples; ++k) {
      RandomStream sub = rng.substream(static_cast<std::uint64_t>(k));
      PathSample x = sample_brownian(a.grid, a.big_l, 0.5, sub);
      x.log_weight = rn_log_weight_X(x, a.u, a.v);
      PathSample emit = x;
      if (a.mode == "H") {
        const PathSample w = sample_brownian(a.grid, a.big_l, 1.0, sub);
        const double c = 1.0 / std::sqrt(2.0);
        for (int i = 0; i <= a.grid; ++i) emit.values[i] = x.values[i] + c * w.values[i];
      } else if (a.mode == "U") {
        emit = resample_zero_mode(x, a.u, a.v, sub);
      }
      for (int i = 0; i <= a.grid; ++i)
        out.stream() << k << ',' << fmt_g17(i * dx) << ',' << fmt_g17(emit.values[i]) << ','
                     << fmt_g17(emit.log_weight) << "\n";
    }
    return 0;
  }
  if (a.format != "json") throw std::invalid_argument("--format must be json or paths");

  // Aggregate mode: endpoint and midpoint statistics from probe values.
  const std::vector<double> probes = {0.5 * a.big_l, a.big_l};
  WeightedEnsemble ens =
      (a.mode == "X")
          ? sample_X_ensemble(a.u, a.v, a.big_l, a.grid, a.samples, rng, probes)
          : sample_H_ensemble(a.u, a.v, a.big_l, a.grid, a.samples, rng, probes);
  std::vector<double> mid(a.samples), end(a.samples);
  for (long long k = 0; k < a.samples; ++k) {
    mid[k] = ens.values[k][0];
    end[k] = ens.values[k][1];
  }
  if (a.mode == "U") {
    // X ensemble carries log S1; shift by the resampled zero mode.
    RandomStream zero_stream = rng.substream(static_cast<std::uint64_t>(a.samples) + 7);
    for (long long k = 0; k < a.samples; ++k) {
      RandomStream sub = zero_stream.substream(static_cast<std::uint64_t>(k));
      const double u0 = resample_zero_mode_offset(ens.log_s1[k], a.u, a.v, sub);
      const double w_mid = ens.aux[static_cast<std::size_t>(k) * 2];
      const double w_end = ens.aux[static_cast<std::size_t>(k) * 2 + 1];
      mid[k] = mid[k] - w_mid + u0;
      end[k] = end[k] - w_end + u0;
    }
  }
  const char* label = a.mode.c_str();
  Report report;
  report.tool_version = kToolVersion;
  report.subcommand = "kpz-sample";
  report.seed = a.seed;
  report.params["u"] = a.u;
  report.params["v"] = a.v;
  report.params["L"] = a.big_l;
  report.params["grid"] = a.grid;
  report.params["samples"] = static_cast<double>(a.samples);
  auto push = [&report](const std::string& name, const Estimate& est) {
    report.observables.push_back({name, est.value, est.stderr_, est.n_effective});
  };
  push(std::string("mean_") + label + "_mid", weighted_mean(mid, ens.log_weight));
  push(std::string("var_") + label + "_mid", weighted_variance(mid, ens.log_weight));
  push(std::string("mean_") + label + "_end", weighted_mean(end, ens.log_weight));
  push(std::string("var_") + label + "_end", weighted_variance(end, ens.log_weight));
  report.diagnostics["ess"] = ens.ess();
  if (ens.low_ess_warning)
    report.warnings.push_back("effective sample size below 1% of the sample count");
  Output out2(a.out);
  out2.stream() << report_to_json(report);
  return 0;
}

// ---------------------------------------------------------------- converge

struct ConvergeArgs {
  double u = 1.0, v = 1.0, big_l = 1.0;
  std::string epsilons = "0.4,0.2,0.1";
  std::string observables = "mean_H_end,var_H_end,var_V_end";
  long long samples = 100000;
  int grid = 1024;
  std::uint64_t seed = 1;
  std::string format = "csv";
  std::string out;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

int run_converge(const ConvergeArgs& a) {
  std::vector<double> eps;
  for (const auto& tok : split_list(a.epsilons)) {
    char* end = nullptr;
    const double e = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
      throw std::invalid_argument("bad epsilon value: " + tok);
    eps.push_back(e);
  }
  const std::vector<std::string> obs = split_list(a.observables);
  RandomStream rng(a.seed, 0);
  const std::vector<ConvergenceRow> rows =
      convergence_study(a.u, a.v, a.big_l, eps, obs, a.samples, a.grid, rng);

  Output out(a.out);
  if (a.format == "csv") {
    out.stream() << "observable,source,epsilon,estimate,stderr,n_effective\n";
    for (const auto& r : rows)
      out.stream() << r.observable << ',' << r.source << ',' << fmt_g17(r.epsilon) << ','
                   << fmt_g17(r.estimate) << ',' << fmt_g17(r.stderr_) << ','
                   << fmt_g17(r.n_effective) << "\n";
    return 0;
  }
  if (a.format != "json") throw std::invalid_argument("--format must be csv or json");
  Report report;
  report.tool_version = kToolVersion;
  report.subcommand = "converge";
  report.seed = a.seed;
  report.params["u"] = a.u;
  report.params["v"] = a.v;
  report.params["L"] = a.big_l;
  report.params["grid"] = a.grid;
  report.params["samples"] = static_cast<double>(a.samples);
  for (std::size_t i = 0; i < eps.size(); ++i)
    report.params["epsilon_" + std::to_string(i)] = eps[i];
  for (const auto& r : rows) {
    std::string name = r.observable + "[" + r.source;
    if (r.source == "discrete") name += ",eps=" + fmt_g17(r.epsilon);
    name += "]";
    report.observables.push_back({name, r.estimate, r.stderr_, r.n_effective});
    if (r.source == "continuum") report.diagnostics["ess_" + r.observable] = r.n_effective;
  }
  out.stream() << report_to_json(report);
  return 0;
}

// ------------------------------------------------------------------ verify

struct VerifyArgs {
  ModelOptions model;
  int n_max = 64;
  int n_terms = 50;
  std::string out;
};

int run_verify(const VerifyArgs& a) {
  const ModelParams p = resolve_model(merged_values(a.model));
  Report report;
  report.tool_version = kToolVersion;
  report.subcommand = "verify";
  report.seed = 0;
  echo_params(report, p);
  report.params["n_max"] = a.n_max;
  report.params["n_terms"] = a.n_terms;

  const TruncatedMpa mpa = p.liggett
                               ? build_representation(p, a.n_max)
                               : build_general_representation(p, rep_param_d(p),
                                                              rep_param_e(p), a.n_max);
  const AlgebraResidual res = verify_algebra(mpa);
  report.diagnostics["residual_bulk"] = res.max_bulk;
  report.diagnostics["residual_right_vector"] = res.max_v;
  report.diagnostics["residual_left_vector"] = res.max_w;
  report.diagnostics["rows_checked"] = res.rows_checked;

  // Recursion families at the representation's own (d, e) and at the
  // alternative root pair, which satisfies the same boundary recursions.
  const double d1 = mpa.d, e1 = mpa.e;
  const RecursionReport r1 = verify_appendix_recursions(p, d1, e1, a.n_terms);
  report.diagnostics["recursion_coeff"] = r1.max_coefficient;
  report.diagnostics["recursion_u"] = r1.max_u;
  report.diagnostics["recursion_w"] = r1.max_w;
  report.diagnostics["recursion_v"] = r1.max_v;
  const double d2 = p.rho_a / (p.rho_a - 1.0);
  const double e2 = (p.rho_b - 1.0) / p.rho_b;
  const RecursionReport r2 = verify_appendix_recursions(p, d2, e2, a.n_terms);
  report.diagnostics["recursion_alt_coeff"] = r2.max_coefficient;
  report.diagnostics["recursion_alt_u"] = r2.max_u;
  report.diagnostics["recursion_alt_w"] = r2.max_w;
  report.diagnostics["recursion_alt_v"] = r2.max_v;

  Output out(a.out);
  out.stream() << report_to_json(report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Stationary measure toolkit for the open exclusion chain and its "
      "weak-asymmetry interval limit"};
  app.set_version_flag("--version", asepkpz::kToolVersion);
  app.require_subcommand(1);

  DynamicsArgs dyn;
  auto* cmd_dyn = app.add_subcommand("dynamics", "continuous-time simulation sampler");
  add_model_flags(cmd_dyn, dyn.model, true);
  cmd_dyn->add_option("--burn-in", dyn.burn_in, "relaxation time before sampling");
  cmd_dyn->add_option("--samples", dyn.samples, "number of snapshots");
  cmd_dyn->add_option("--thin", dyn.thin, "time between snapshots (default ell)");
  cmd_dyn->add_option("--seed", dyn.seed, "random seed");
  cmd_dyn->add_option("--out", dyn.out, "output path (default stdout)");
  cmd_dyn->add_option("--format", dyn.format, "json | csv");

  MpaArgs mpa;
  auto* cmd_mpa = app.add_subcommand("mpa", "matrix-product normalization and profile");
  add_model_flags(cmd_mpa, mpa.model, true);
  cmd_mpa->add_option("--n-max", mpa.n_max, "basis truncation (0 = automatic)");
  cmd_mpa->add_option("--rel-tol", mpa.rel_tol, "truncation tolerance for --n-max 0");
  cmd_mpa->add_flag("--profile", mpa.profile, "include the density profile");
  cmd_mpa->add_flag("--verify", mpa.verify, "include algebra residuals");
  cmd_mpa->add_option("--out", mpa.out, "output path (default stdout)");

  OracleArgs ora;
  auto* cmd_ora = app.add_subcommand("oracle", "exact solve of the master equation");
  add_model_flags(cmd_ora, ora.model, false);
  cmd_ora->add_option("--compare", ora.compare, "mpa | walks | dynamics | none");
  cmd_ora->add_option("--samples", ora.samples, "snapshots for --compare dynamics");
  cmd_ora->add_option("--burn-in", ora.burn_in, "relaxation time for --compare dynamics");
  cmd_ora->add_option("--thin", ora.thin, "snapshot spacing for --compare dynamics");
  cmd_ora->add_option("--seed", ora.seed, "random seed");
  cmd_ora->add_option("--n-max", ora.n_max, "truncation for the compared sampler");
  cmd_ora->add_option("--out", ora.out, "output path (default stdout)");

  WalksArgs wal;
  auto* cmd_wal = app.add_subcommand("walks", "reweighted walk sampler");
  add_model_flags(cmd_wal, wal.model, true);
  cmd_wal->add_option("--samples", wal.samples, "number of walks");
  cmd_wal->add_option("--seed", wal.seed, "random seed");
  cmd_wal->add_option("--grid", wal.grid, "output grid intervals for paths");
  cmd_wal->add_option("--n-max", wal.n_max, "height truncation (0 = automatic)");
  cmd_wal->add_option("--format", wal.format, "moments | paths | raw");
  cmd_wal->add_option("--out", wal.out, "output path (default stdout)");

  KpzArgs kpz;
  auto* cmd_kpz = app.add_subcommand("kpz-sample", "continuum interval sampler");
  cmd_kpz->add_option("--u", kpz.u, "left boundary parameter");
  cmd_kpz->add_option("--v", kpz.v, "right boundary parameter");
  cmd_kpz->add_option("--L", kpz.big_l, "interval length");
  cmd_kpz->add_option("--grid", kpz.grid, "grid intervals");
  cmd_kpz->add_option("--samples", kpz.samples, "number of paths");
  cmd_kpz->add_option("--seed", kpz.seed, "random seed");
  cmd_kpz->add_option("--mode", kpz.mode, "X | H | U");
  cmd_kpz->add_option("--format", kpz.format, "json | paths");
  cmd_kpz->add_option("--out", kpz.out, "output path (default stdout)");

  ConvergeArgs conv;
  auto* cmd_conv = app.add_subcommand("converge", "discrete to continuum comparison");
  cmd_conv->add_option("--u", conv.u, "left boundary parameter");
  cmd_conv->add_option("--v", conv.v, "right boundary parameter");
  cmd_conv->add_option("--L", conv.big_l, "interval length");
  cmd_conv->add_option("--epsilons", conv.epsilons, "comma list, e.g. 0.4,0.2,0.1");
  cmd_conv->add_option("--observables", conv.observables, "comma list of observables");
  cmd_conv->add_option("--samples", conv.samples, "samples per source");
  cmd_conv->add_option("--grid", conv.grid, "continuum grid intervals");
  cmd_conv->add_option("--seed", conv.seed, "random seed");
  cmd_conv->add_option("--format", conv.format, "csv | json");
  cmd_conv->add_option("--out", conv.out, "output path (default stdout)");

  VerifyArgs ver;
  auto* cmd_ver = app.add_subcommand("verify", "representation and recursion residuals");
  add_model_flags(cmd_ver, ver.model, false);
  cmd_ver->add_option("--n-max", ver.n_max, "basis truncation for residuals");
  cmd_ver->add_option("--n-terms", ver.n_terms, "recursion terms to check");
  cmd_ver->add_option("--out", ver.out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    Timer timer;
    if (cmd_dyn->parsed()) return run_dynamics(dyn);
    if (cmd_mpa->parsed()) return run_mpa(mpa);
    if (cmd_ora->parsed()) return run_oracle(ora);
    if (cmd_wal->parsed()) return run_walks(wal);
    if (cmd_kpz->parsed()) return run_kpz_sample(kpz);
    if (cmd_conv->parsed()) return run_converge(conv);
    if (cmd_ver->parsed()) return run_verify(ver);
    std::fprintf(stderr, "error: no subcommand\n");
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
