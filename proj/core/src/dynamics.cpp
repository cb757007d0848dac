#include "asepkpz/dynamics.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace asepkpz {

Simulator::Simulator(const ModelParams& params, std::vector<std::uint8_t> initial)
    : params_(params), state_{std::move(initial), 0.0} {
  const int ell = params_.ell;
  if (ell < 1) throw std::invalid_argument("Simulator: ell must be >= 1");
  if (state_.tau.empty()) state_.tau.assign(ell, 0);
  if (static_cast<int>(state_.tau.size()) != ell)
    throw std::invalid_argument("Simulator: initial configuration has wrong length");
  for (auto occ : state_.tau)
    if (occ > 1) throw std::invalid_argument("Simulator: occupations must be 0/1");
  n_bonds_ = ell - 1;
  rates_.assign(2 * n_bonds_ + 4, 0.0);
  rebuild_rates();
}

void Simulator::rebuild_rates() {
  for (int i = 0; i < n_bonds_; ++i) refresh_bond(i);
  refresh_boundary();
}

void Simulator::refresh_bond(int i) {
  if (i < 0 || i >= n_bonds_) return;
  const auto& tau = state_.tau;
  rates_[i] = (tau[i] == 1 && tau[i + 1] == 0) ? 1.0 : 0.0;
  rates_[n_bonds_ + i] = (tau[i] == 0 && tau[i + 1] == 1) ? params_.q : 0.0;
}

void Simulator::refresh_boundary() {
  const auto& tau = state_.tau;
  const int last = params_.ell - 1;
  const int base = 2 * n_bonds_;
  rates_[base + 0] = tau[0] == 0 ? params_.alpha : 0.0;
  rates_[base + 1] = tau[0] == 1 ? params_.gamma : 0.0;
  rates_[base + 2] = tau[last] == 0 ? params_.delta : 0.0;
  rates_[base + 3] = tau[last] == 1 ? params_.beta : 0.0;
}

double Simulator::total_rate() const {
  return std::accumulate(rates_.begin(), rates_.end(), 0.0);
}

Event Simulator::step(RandomStream& rng) {
  const double total = total_rate();
  if (!(total > 0.0)) throw std::runtime_error("Simulator: absorbing state, no enabled event");
  const double dt = rng.exponential() / total;

  const double target = rng.uniform01() * total;
  double cum = 0.0;
  int pick = -1;
  for (int i = 0; i < static_cast<int>(rates_.size()); ++i) {
    cum += rates_[i];
    if (target < cum) {
      pick = i;
      break;
    }
  }
  if (pick < 0) {  // rounding slipped past the end; take the last enabled entry
    for (int i = static_cast<int>(rates_.size()) - 1; i >= 0; --i)
      if (rates_[i] > 0.0) {
        pick = i;
        break;
      }
  }

  auto& tau = state_.tau;
  const int last = params_.ell - 1;
  const int base = 2 * n_bonds_;
  Event ev{EventKind::RightHop, 0, dt};
  if (pick < n_bonds_) {
    const int i = pick;
    tau[i] = 0;
    tau[i + 1] = 1;
    ev = {EventKind::RightHop, i, dt};
    refresh_bond(i - 1);
    refresh_bond(i);
    refresh_bond(i + 1);
    if (i == 0 || i + 1 == last) refresh_boundary();
  } else if (pick < 2 * n_bonds_) {
    const int i = pick - n_bonds_;
    tau[i] = 1;
    tau[i + 1] = 0;
    ev = {EventKind::LeftHop, i, dt};
    refresh_bond(i - 1);
    refresh_bond(i);
    refresh_bond(i + 1);
    if (i == 0 || i + 1 == last) refresh_boundary();
  } else {
    switch (pick - base) {
      case 0:
        tau[0] = 1;
        ev = {EventKind::InjectLeft, 0, dt};
        break;
      case 1:
        tau[0] = 0;
        ev = {EventKind::EjectLeft, 0, dt};
        break;
      case 2:
        tau[last] = 1;
        ev = {EventKind::InjectRight, last, dt};
        break;
      default:
        tau[last] = 0;
        ev = {EventKind::EjectRight, last, dt};
        break;
    }
    refresh_bond(0);
    refresh_bond(last - 1);
    refresh_boundary();
  }
  state_.t += dt;
  return ev;
}

std::vector<double> height_profile(const std::vector<std::uint8_t>& tau) {
  std::vector<double> h(tau.size() + 1);
  double n_tot = 0.0;
  for (auto occ : tau) n_tot += occ;
  h[0] = -2.0 * n_tot;
  for (std::size_t i = 0; i < tau.size(); ++i) h[i + 1] = h[i] + (tau[i] ? 1.0 : -1.0);
  return h;
}

namespace {

void revert(std::vector<std::uint8_t>& tau, const Event& ev, int last) {
  switch (ev.kind) {
    case EventKind::RightHop:
      tau[ev.site] = 1;
      tau[ev.site + 1] = 0;
      break;
    case EventKind::LeftHop:
      tau[ev.site] = 0;
      tau[ev.site + 1] = 1;
      break;
    case EventKind::InjectLeft:
      tau[0] = 0;
      break;
    case EventKind::EjectLeft:
      tau[0] = 1;
      break;
    case EventKind::InjectRight:
      tau[last] = 0;
      break;
    case EventKind::EjectRight:
      tau[last] = 1;
      break;
  }
}

}  // namespace

std::vector<std::vector<std::uint8_t>> sample_stationary_dynamics(
    const ModelParams& params, double burn_in_time, int n_samples, double thin_time,
    RandomStream& rng, std::vector<std::uint8_t> initial) {
  if (n_samples < 0) throw std::invalid_argument("sample_stationary_dynamics: n_samples < 0");
  if (burn_in_time < 0.0)
    throw std::invalid_argument("sample_stationary_dynamics: burn_in_time < 0");
  const double thin = thin_time > 0.0 ? thin_time : static_cast<double>(params.ell);

  Simulator sim(params, std::move(initial));
  std::vector<std::vector<std::uint8_t>> out;
  out.reserve(n_samples);
  int k = 0;
  double next_t = burn_in_time;
  const int last = params.ell - 1;
  while (k < n_samples) {
    const Event ev = sim.step(rng);
    if (next_t < sim.state().t) {
      // Sample times in the holding interval saw the pre-event state.
      std::vector<std::uint8_t> before = sim.state().tau;
      revert(before, ev, last);
      while (k < n_samples && next_t < sim.state().t) {
        out.push_back(before);
        ++k;
        next_t = burn_in_time + k * thin;
      }
    }
  }
  return out;
}

}  // namespace asepkpz
