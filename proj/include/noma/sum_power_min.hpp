#pragma once

#include <optional>
#include <span>
#include <vector>

#include "noma/network_model.hpp"

namespace noma {

/// Minimum total power that meets every demand of one group at fixed H:
/// sum_j (2^{R_j/B} - 1) 2^{sum_{s<j} R_s/B} H_j.
double minimum_group_power(std::span<const double> demands, std::span<const double> interference, double bandwidth);

/// Per-user powers of one group with every rate constraint tight.
///
/// Users are in ascending-gain order. Solved from the strongest user down:
/// the power stacked from user j upward is b_j = 2^{R_j/B} b_{j+1} + (2^{R_j/B} - 1) H_j.
std::vector<double> min_power_user_allocation(std::span<const double> demands, std::span<const double> interference,
                                              double bandwidth);

/// Closed-form minimum-power allocation of every group at the given H.
UserPowerAllocation min_power_user_allocation(const NetworkTopology& topology, const RateDemands& demands,
                                              const EffectiveInterference& interference);

/// f_im(q): minimum power of group (i, m) when the other BSs transmit q.
double interference_map(const NetworkTopology& topology, const RateDemands& demands, const CellPowerVector& q,
                        std::size_t cell, std::size_t subchannel);

/// f(q) for every group.
CellPowerVector interference_map(const NetworkTopology& topology, const RateDemands& demands, const CellPowerVector& q);

enum class UpdateOrder {
  /// Ascending (i, m), each update sees the freshest values.
  gauss_seidel,
  /// Every entry updated from the previous iterate.
  jacobi,
};

struct FixedPointOptions {
  /// Max |q - f(q)| at exit (W).
  double tolerance = 1e-8;
  /// Relative sum-power change between q and f(q).
  double relative_tolerance = 1e-10;
  std::size_t max_iterations = 10000;
  UpdateOrder order = UpdateOrder::gauss_seidel;
  /// Iterates whose sum exceeds this multiple of the summed budgets are treated as divergent.
  double divergence_factor = 1e12;
};

struct FixedPointReport {
  CellPowerVector q_star;
  std::size_t iterations = 0;
  double residual = 0.0;
  std::vector<bool> budget_feasible;
  bool converged = false;
  /// Sum power of the initial point followed by one entry per sweep.
  std::vector<double> trace;

  /// Converged and every cell within budget.
  bool feasible() const;
};

/// Q_i / M on every subchannel.
CellPowerVector default_initial_power(const NetworkTopology& topology);

/// Fixed-point iteration q <- f(q) for the sum-power minimization.
///
/// Non-convergence is reported, never thrown; a fixed point above some
/// budget leaves `budget_feasible` false for that cell.
FixedPointReport dpc_spm(const NetworkTopology& topology, const RateDemands& demands,
                         const std::optional<CellPowerVector>& initial = std::nullopt,
                         const FixedPointOptions& options = {});

/// Per-user powers at a fixed point: H(q*), then the closed form per group.
/// Throws std::invalid_argument when some |q - f(q)| exceeds `relative_tolerance * max(q, f(q))`.
UserPowerAllocation assemble_full_solution(const NetworkTopology& topology, const RateDemands& demands,
                                           const CellPowerVector& q_star, double relative_tolerance = 1e-6);

}  // namespace noma
