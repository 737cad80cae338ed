#include "noma/network_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <set>

namespace noma {

double CellPowerVector::total() const { return std::accumulate(q_.begin(), q_.end(), 0.0); }

double CellPowerVector::cell_total(std::size_t i) const {
  auto c = cell(i);
  return std::accumulate(c.begin(), c.end(), 0.0);
}

NetworkTopology::NetworkTopology(Params params)
    : cells_(params.num_cells),
      subchannels_(params.num_subchannels),
      bandwidth_(params.bandwidth_hz),
      noise_(params.noise_power_w),
      budget_(std::move(params.budget_w)),
      groups_(std::move(params.groups)) {
  if (cells_ == 0 || subchannels_ == 0) throw std::invalid_argument("topology: need at least one cell and subchannel");
  if (!(bandwidth_ > 0.0) || !std::isfinite(bandwidth_)) throw std::invalid_argument("topology: bandwidth must be > 0");
  if (!(noise_ > 0.0) || !std::isfinite(noise_)) throw std::invalid_argument("topology: noise power must be > 0");
  if (budget_.size() != cells_) throw std::invalid_argument("topology: one power budget per cell required");
  for (double b : budget_)
    if (!(b > 0.0) || !std::isfinite(b)) throw std::invalid_argument("topology: power budgets must be > 0");
  if (groups_.size() != cells_ * subchannels_)
    throw std::invalid_argument("topology: expected num_cells * num_subchannels groups");

  std::set<std::size_t> ids;
  for (auto& g : groups_) {
    if (g.empty()) throw std::invalid_argument("topology: every (cell, subchannel) group needs a user");
    for (const auto& u : g) {
      if (!ids.insert(u.id).second) throw std::invalid_argument("topology: user ids must be unique");
      if (!(u.own_gain > 0.0) || !std::isfinite(u.own_gain))
        throw std::invalid_argument("topology: own channel gains must be > 0");
      if (u.cross_gain.size() != cells_) throw std::invalid_argument("topology: one cross gain per BS required");
      for (double c : u.cross_gain)
        if (!(c >= 0.0) || !std::isfinite(c)) throw std::invalid_argument("topology: cross gains must be >= 0");
    }
    std::stable_sort(g.begin(), g.end(),
                     [](const UserChannel& a, const UserChannel& b) { return a.own_gain < b.own_gain; });
  }
}

std::size_t NetworkTopology::group_id(std::size_t i, std::size_t m) const {
  if (i >= cells_ || m >= subchannels_) throw std::out_of_range("topology: group index out of range");
  return i * subchannels_ + m;
}

std::size_t NetworkTopology::num_users() const {
  std::size_t n = 0;
  for (const auto& g : groups_) n += g.size();
  return n;
}

void NetworkTopology::check_shape(const CellPowerVector& q) const {
  if (q.num_cells() != cells_ || q.num_subchannels() != subchannels_)
    throw std::invalid_argument("cell power vector: shape does not match topology");
  for (double v : q.values())
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("cell power vector: entries must be finite and >= 0");
}

RateDemands uniform_demands(const NetworkTopology& topology, double rate_bps) {
  if (!(rate_bps > 0.0)) throw std::invalid_argument("rate demand must be > 0");
  return topology.make_per_user<RateDemandTag>(rate_bps);
}

void check_demands(const NetworkTopology& topology, const RateDemands& demands) {
  topology.check_shape(demands, "rate demands");
  for (const auto& g : demands.groups())
    for (double r : g)
      if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("rate demands must be finite and > 0");
}

namespace {

const UserChannel& user_at(const NetworkTopology& topology, const UserIndex& user) {
  auto g = topology.group(user.cell, user.subchannel);
  if (user.position >= g.size()) throw std::out_of_range("user position out of range");
  return g[user.position];
}

double stronger_power(std::span<const double> p, std::size_t j) {
  double s = 0.0;
  for (std::size_t n = j + 1; n < p.size(); ++n) s += p[n];
  return s;
}

}  // namespace

double interference_plus_noise(const NetworkTopology& topology, const CellPowerVector& q, const UserIndex& user) {
  const auto& u = user_at(topology, user);
  double z = topology.noise_power();
  for (std::size_t k = 0; k < topology.num_cells(); ++k)
    if (k != user.cell) z += q(k, user.subchannel) * u.cross_gain[k];
  return z;
}

double effective_interference(const NetworkTopology& topology, const CellPowerVector& q, const UserIndex& user) {
  auto g = topology.group(user.cell, user.subchannel);
  if (user.position >= g.size()) throw std::out_of_range("user position out of range");
  double h = 0.0;
  for (std::size_t l = user.position; l < g.size(); ++l) {
    UserIndex decoder{user.cell, user.subchannel, l};
    h = std::max(h, interference_plus_noise(topology, q, decoder) / g[l].own_gain);
  }
  return h;
}

EffectiveInterference effective_interference(const NetworkTopology& topology, const CellPowerVector& q) {
  topology.check_shape(q);
  auto h = topology.make_per_user<EffectiveInterferenceTag>();
  for (std::size_t g = 0; g < topology.num_groups(); ++g) {
    auto [i, m] = topology.group_index(g);
    auto users = topology.group(g);
    auto out = h.group(g);
    // Suffix max from the strongest user down.
    double running = 0.0;
    for (std::size_t l = users.size(); l-- > 0;) {
      running = std::max(running, interference_plus_noise(topology, q, {i, m, l}) / users[l].own_gain);
      out[l] = running;
    }
  }
  return h;
}

double sic_rate(double bandwidth, double own_power, double stronger_power, double interference) {
  return bandwidth * std::log1p(own_power / (stronger_power + interference)) / std::numbers::ln2;
}

double achievable_rate(const NetworkTopology& topology, const UserPowerAllocation& p, const CellPowerVector& q,
                       const UserIndex& user) {
  auto pg = p.group(topology.group_id(user.cell, user.subchannel));
  if (user.position >= pg.size()) throw std::out_of_range("user position out of range");
  double h = effective_interference(topology, q, user);
  return sic_rate(topology.bandwidth(), pg[user.position], stronger_power(pg, user.position), h);
}

double achievable_rate_by_decoders(const NetworkTopology& topology, const UserPowerAllocation& p,
                                   const CellPowerVector& q, const UserIndex& user) {
  auto g = topology.group(user.cell, user.subchannel);
  auto pg = p.group(topology.group_id(user.cell, user.subchannel));
  if (user.position >= pg.size()) throw std::out_of_range("user position out of range");
  double rate = std::numeric_limits<double>::infinity();
  const double above = stronger_power(pg, user.position);
  for (std::size_t l = user.position; l < g.size(); ++l) {
    double z = interference_plus_noise(topology, q, {user.cell, user.subchannel, l});
    rate = std::min(rate, sic_rate(topology.bandwidth(), pg[user.position], above, z / g[l].own_gain));
  }
  return rate;
}

std::vector<std::vector<RateConstraintStatus>> check_rate_constraint(const NetworkTopology& topology,
                                                                     const UserPowerAllocation& p,
                                                                     const CellPowerVector& q,
                                                                     const RateDemands& demands) {
  topology.check_shape(p, "user power allocation");
  topology.check_shape(demands, "rate demands");
  auto h = effective_interference(topology, q);
  std::vector<std::vector<RateConstraintStatus>> out(topology.num_groups());
  for (std::size_t g = 0; g < topology.num_groups(); ++g) {
    auto pg = p.group(g);
    auto rg = demands.group(g);
    auto hg = h.group(g);
    out[g].resize(pg.size());
    for (std::size_t j = 0; j < pg.size(); ++j) {
      double required = std::expm1(rg[j] / topology.bandwidth() * std::numbers::ln2) * (stronger_power(pg, j) + hg[j]);
      double slack = pg[j] - required;
      out[g][j] = {slack >= -1e-9 * required, slack};
    }
  }
  return out;
}

CellPowerVector group_totals(const NetworkTopology& topology, const UserPowerAllocation& p) {
  topology.check_shape(p, "user power allocation");
  CellPowerVector q(topology.num_cells(), topology.num_subchannels());
  for (std::size_t g = 0; g < topology.num_groups(); ++g) {
    auto [i, m] = topology.group_index(g);
    auto pg = p.group(g);
    q(i, m) = std::accumulate(pg.begin(), pg.end(), 0.0);
  }
  return q;
}

double rate_factor(double rate_bps, double bandwidth) { return std::exp2(rate_bps / bandwidth); }

}  // namespace noma
