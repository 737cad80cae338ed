#include "noma/rate_max_single_cell.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "noma/network_model.hpp"
#include "noma/sum_power_min.hpp"

namespace noma {

InfeasibleGroupError::InfeasibleGroupError(double required_power, double offered_power)
    : std::runtime_error("group infeasible: requires " + std::to_string(required_power) + " W, offered " +
                         std::to_string(offered_power) + " W"),
      required_(required_power),
      offered_(offered_power) {}

GroupFeasibility single_cell_feasible(std::span<const double> demands, std::span<const double> interference,
                                      double total_power, double bandwidth) {
  double required = minimum_group_power(demands, interference, bandwidth);
  bool ok = total_power >= required - 1e-12 * std::max(required, std::abs(total_power));
  return {ok, required};
}

SingleCellAllocation optimal_single_cell_allocation(std::span<const double> demands,
                                                    std::span<const double> interference, double total_power,
                                                    double bandwidth) {
  auto check = single_cell_feasible(demands, interference, total_power, bandwidth);
  if (!check.feasible) throw InfeasibleGroupError(check.required_power, total_power);

  const std::size_t n = demands.size();
  SingleCellAllocation out;
  out.power.resize(n);
  // stacked = power of users j..n-1; weaker users are pinned to their demand.
  double stacked = total_power;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    double factor = rate_factor(demands[j], bandwidth);
    double next = (stacked - (factor - 1.0) * interference[j]) / factor;
    out.power[j] = stacked - next;
    stacked = next;
  }
  out.power[n - 1] = stacked;
  double strong_rate = sic_rate(bandwidth, stacked, 0.0, interference[n - 1]);
  out.strong_user_short = strong_rate < demands[n - 1] * (1.0 - 1e-9);
  return out;
}

double optimal_single_cell_rate(std::span<const double> demands, std::span<const double> interference,
                                double total_power, double bandwidth) {
  auto check = single_cell_feasible(demands, interference, total_power, bandwidth);
  if (!check.feasible) throw InfeasibleGroupError(check.required_power, total_power);

  const std::size_t n = demands.size();
  const double strong_h = interference[n - 1];
  double weak_rate = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j) weak_rate += demands[j];

  double snr = total_power / (std::exp2(weak_rate / bandwidth) * strong_h);
  double tail = 0.0;  // sum_{l=j}^{n-2} R_l, built from the strongest weak user down
  for (std::size_t j = n - 1; j-- > 0;) {
    tail += demands[j];
    snr -= (rate_factor(demands[j], bandwidth) - 1.0) * interference[j] / (std::exp2(tail / bandwidth) * strong_h);
  }
  return bandwidth * std::log1p(snr) / std::numbers::ln2 + weak_rate;
}

double negative_group_sum_rate(std::span<const double> power, std::span<const double> interference,
                               double bandwidth) {
  double rate = 0.0;
  double above = 0.0;
  for (std::size_t j = power.size(); j-- > 0;) {
    rate += sic_rate(bandwidth, power[j], above, interference[j]);
    above += power[j];
  }
  return -rate;
}

std::vector<double> negative_group_sum_rate_hessian(std::span<const double> power,
                                                    std::span<const double> interference, double bandwidth) {
  const std::size_t n = power.size();
  std::vector<double> stacked(n + 1, 0.0);
  for (std::size_t j = n; j-- > 0;) stacked[j] = stacked[j + 1] + power[j];

  const double c = bandwidth / std::numbers::ln2;
  std::vector<double> diag(n);
  double acc = c / std::pow(stacked[0] + interference[0], 2);
  diag[0] = acc;
  for (std::size_t l = 1; l < n; ++l) {
    acc += c / std::pow(stacked[l] + interference[l], 2) - c / std::pow(stacked[l] + interference[l - 1], 2);
    diag[l] = acc;
  }
  std::vector<double> hess(n * n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t l = 0; l < n; ++l) hess[j * n + l] = diag[std::min(j, l)];
  return hess;
}

}  // namespace noma
