#include "noma/sum_power_min.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace noma {

namespace {

void check_group_inputs(std::span<const double> demands, std::span<const double> interference, double bandwidth) {
  if (demands.size() != interference.size() || demands.empty())
    throw std::invalid_argument("group inputs: demands and interference must have the same non-zero size");
  if (!(bandwidth > 0.0)) throw std::invalid_argument("group inputs: bandwidth must be > 0");
}

}  // namespace

double minimum_group_power(std::span<const double> demands, std::span<const double> interference, double bandwidth) {
  check_group_inputs(demands, interference, bandwidth);
  double total = 0.0;
  double weaker = 1.0;  // 2^{sum_{s<j} R_s / B}
  for (std::size_t j = 0; j < demands.size(); ++j) {
    double factor = rate_factor(demands[j], bandwidth);
    total += (factor - 1.0) * weaker * interference[j];
    weaker *= factor;
  }
  return total;
}

std::vector<double> min_power_user_allocation(std::span<const double> demands, std::span<const double> interference,
                                              double bandwidth) {
  check_group_inputs(demands, interference, bandwidth);
  const std::size_t n = demands.size();
  std::vector<double> p(n);
  double stacked = 0.0;
  for (std::size_t j = n; j-- > 0;) {
    double factor = rate_factor(demands[j], bandwidth);
    double next = factor * stacked + (factor - 1.0) * interference[j];
    p[j] = next - stacked;
    stacked = next;
  }
  return p;
}

UserPowerAllocation min_power_user_allocation(const NetworkTopology& topology, const RateDemands& demands,
                                              const EffectiveInterference& interference) {
  topology.check_shape(demands, "rate demands");
  topology.check_shape(interference, "effective interference");
  auto p = topology.make_per_user<UserPowerTag>();
  for (std::size_t g = 0; g < topology.num_groups(); ++g) {
    auto pg = min_power_user_allocation(demands.group(g), interference.group(g), topology.bandwidth());
    std::copy(pg.begin(), pg.end(), p.group(g).begin());
  }
  return p;
}

double interference_map(const NetworkTopology& topology, const RateDemands& demands, const CellPowerVector& q,
                        std::size_t cell, std::size_t subchannel) {
  auto users = topology.group(cell, subchannel);
  std::vector<double> h(users.size());
  double running = 0.0;
  for (std::size_t l = users.size(); l-- > 0;) {
    running = std::max(running, interference_plus_noise(topology, q, {cell, subchannel, l}) / users[l].own_gain);
    h[l] = running;
  }
  return minimum_group_power(demands.group(topology.group_id(cell, subchannel)), h, topology.bandwidth());
}

CellPowerVector interference_map(const NetworkTopology& topology, const RateDemands& demands, const CellPowerVector& q) {
  topology.check_shape(q);
  topology.check_shape(demands, "rate demands");
  CellPowerVector f(topology.num_cells(), topology.num_subchannels());
  for (std::size_t i = 0; i < topology.num_cells(); ++i)
    for (std::size_t m = 0; m < topology.num_subchannels(); ++m) f(i, m) = interference_map(topology, demands, q, i, m);
  return f;
}

bool FixedPointReport::feasible() const {
  return converged && std::all_of(budget_feasible.begin(), budget_feasible.end(), [](bool b) { return b; });
}

CellPowerVector default_initial_power(const NetworkTopology& topology) {
  CellPowerVector q(topology.num_cells(), topology.num_subchannels());
  for (std::size_t i = 0; i < topology.num_cells(); ++i)
    for (std::size_t m = 0; m < topology.num_subchannels(); ++m)
      q(i, m) = topology.budget(i) / static_cast<double>(topology.num_subchannels());
  return q;
}

namespace {

struct ResidualCheck {
  double max_abs = 0.0;
  double relative_sum_change = 0.0;
};

ResidualCheck fixed_point_residual(const CellPowerVector& q, const CellPowerVector& f) {
  ResidualCheck r;
  auto qv = q.values();
  auto fv = f.values();
  for (std::size_t k = 0; k < qv.size(); ++k) r.max_abs = std::max(r.max_abs, std::abs(qv[k] - fv[k]));
  double sq = q.total();
  double sf = f.total();
  double scale = std::max(std::abs(sq), std::abs(sf));
  r.relative_sum_change = scale > 0.0 ? std::abs(sq - sf) / scale : 0.0;
  return r;
}

}  // namespace

FixedPointReport dpc_spm(const NetworkTopology& topology, const RateDemands& demands,
                         const std::optional<CellPowerVector>& initial, const FixedPointOptions& options) {
  if (!(options.tolerance > 0.0)) throw std::invalid_argument("dpc_spm: tolerance must be > 0");
  if (options.max_iterations < 1) throw std::invalid_argument("dpc_spm: max_iterations must be >= 1");
  check_demands(topology, demands);

  CellPowerVector q = initial ? *initial : default_initial_power(topology);
  topology.check_shape(q);
  const double budget_sum = std::accumulate(topology.budgets().begin(), topology.budgets().end(), 0.0);

  FixedPointReport report;
  report.trace.push_back(q.total());

  for (std::size_t t = 1; t <= options.max_iterations; ++t) {
    if (options.order == UpdateOrder::gauss_seidel) {
      for (std::size_t i = 0; i < topology.num_cells(); ++i)
        for (std::size_t m = 0; m < topology.num_subchannels(); ++m)
          q(i, m) = interference_map(topology, demands, q, i, m);
    } else {
      q = interference_map(topology, demands, q);
    }
    report.iterations = t;
    report.trace.push_back(q.total());

    const double total = q.total();
    if (!std::isfinite(total) || total > options.divergence_factor * budget_sum) break;

    auto check = fixed_point_residual(q, interference_map(topology, demands, q));
    report.residual = check.max_abs;
    if (check.max_abs <= options.tolerance && check.relative_sum_change <= options.relative_tolerance) {
      report.converged = true;
      break;
    }
  }

  if (!report.converged && std::isfinite(q.total()))
    report.residual = fixed_point_residual(q, interference_map(topology, demands, q)).max_abs;
  report.budget_feasible.resize(topology.num_cells());
  for (std::size_t i = 0; i < topology.num_cells(); ++i)
    report.budget_feasible[i] = q.cell_total(i) <= topology.budget(i);
  report.q_star = std::move(q);
  return report;
}

UserPowerAllocation assemble_full_solution(const NetworkTopology& topology, const RateDemands& demands,
                                           const CellPowerVector& q_star, double relative_tolerance) {
  check_demands(topology, demands);
  auto f = interference_map(topology, demands, q_star);
  for (std::size_t k = 0; k < f.values().size(); ++k) {
    double a = q_star.values()[k];
    double b = f.values()[k];
    if (std::abs(a - b) > relative_tolerance * std::max(a, b))
      throw std::invalid_argument("assemble_full_solution: q is not a fixed point of the interference map");
  }
  return min_power_user_allocation(topology, demands, effective_interference(topology, q_star));
}

}  // namespace noma
