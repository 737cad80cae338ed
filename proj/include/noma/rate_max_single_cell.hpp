#pragma once

#include <span>
#include <stdexcept>
#include <vector>

namespace noma {

/// A group cannot meet its demands with the offered total power.
class InfeasibleGroupError : public std::runtime_error {
 public:
  InfeasibleGroupError(double required_power, double offered_power);
  double required_power() const { return required_; }
  double offered_power() const { return offered_; }

 private:
  double required_;
  double offered_;
};

struct GroupFeasibility {
  bool feasible = false;
  /// Minimum total power meeting every demand (W).
  double required_power = 0.0;
};

/// Feasibility of one group with total power `total_power` at fixed H.
/// A total within 1e-12 relative of the requirement counts as feasible.
GroupFeasibility single_cell_feasible(std::span<const double> demands, std::span<const double> interference,
                                      double total_power, double bandwidth);

struct SingleCellAllocation {
  std::vector<double> power;
  /// Strongest user below its own demand; only reachable through rounding at the feasibility boundary.
  bool strong_user_short = false;
};

/// Sum-rate optimal split of `total_power` inside one group.
///
/// Every weaker user gets exactly its demand; the remainder goes to the
/// strongest user. Tied H values are split by the same recursion.
/// Throws InfeasibleGroupError when the group is infeasible.
SingleCellAllocation optimal_single_cell_allocation(std::span<const double> demands,
                                                    std::span<const double> interference, double total_power,
                                                    double bandwidth);

/// Optimal group sum rate (bit/s) at the allocation above, in closed form.
double optimal_single_cell_rate(std::span<const double> demands, std::span<const double> interference,
                                double total_power, double bandwidth);

/// Negative group sum rate -sum_j r_j(p) with H fixed (bit/s).
double negative_group_sum_rate(std::span<const double> power, std::span<const double> interference,
                               double bandwidth);

/// Analytic Hessian of `negative_group_sum_rate` in row-major order.
/// Entry (j, l) only depends on min(j, l).
std::vector<double> negative_group_sum_rate_hessian(std::span<const double> power,
                                                    std::span<const double> interference, double bandwidth);

}  // namespace noma
