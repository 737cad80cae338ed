#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "noma/network_model.hpp"

// Brute-force and numerical validators. Nothing here calls the solvers; the
// few closed-form pieces needed (interference, per-group minimum power) are
// re-derived locally.
namespace noma::oracle {

/// Instance exceeds the size an exhaustive oracle accepts.
class OracleSizeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Finite differences lost to cancellation; a larger step is needed.
class StepTooSmallError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kNoneFound = "none found at this resolution";

struct GridPowerResult {
  bool found = false;
  std::string status;
  CellPowerVector q;
  UserPowerAllocation p;
  double sum_power = 0.0;
  std::size_t points_evaluated = 0;
};

/// Exhaustive search of q on {0, d, 2d, ...} up to each budget for the
/// feasible point of least total power. Ties go to the lexicographically
/// first grid coordinate. Accepts at most 2 cells, 2 subchannels, 3 users per
/// group and `max_points` grid points.
GridPowerResult grid_power_min(const NetworkTopology& topology, const RateDemands& demands, double resolution,
                               std::size_t max_points = 50'000'000);

struct GridRateResult {
  bool found = false;
  std::string status;
  std::vector<double> power;
  double sum_rate = 0.0;
  std::size_t points_evaluated = 0;
};

/// Exhaustive search over splits of `total_power` on a d-grid (the strongest
/// user takes the remainder) for the largest sum rate meeting every demand.
/// At most 3 users.
GridRateResult grid_rate_max_group(std::span<const double> demands, std::span<const double> interference,
                                   double total_power, double bandwidth, double resolution);

struct HessianCheck {
  std::size_t dimension = 0;
  /// Row-major symmetrized estimate.
  std::vector<double> hessian;
  std::vector<double> leading_minors;
  double max_asymmetry = 0.0;
  bool positive_semidefinite = false;
};

/// Central-difference Hessian of `f` at `point` and a PSD verdict from its
/// leading principal minors (each >= `tolerance`). A step <= 0 selects
/// 1e-5 times the largest |coordinate|. Off-diagonal entries use unequal steps
/// per axis so that (j,l) and (l,j) are independent estimates; their relative
/// disagreement above 1e-4 throws StepTooSmallError, as does an estimate no
/// larger than ten times the rounding level of the differences.
HessianCheck fd_hessian_psd(const std::function<double(std::span<const double>)>& f, std::span<const double> point,
                            double step = 0.0, double tolerance = -1e-6);

struct Counterexample {
  std::string property;
  std::vector<double> q;
  /// Second point for monotonicity, empty otherwise.
  std::vector<double> q_other;
  double lambda = 0.0;
  std::string detail;
};

struct ProbeReport {
  std::size_t trials = 0;
  std::vector<Counterexample> counterexamples;
  std::size_t count(const std::string& property) const;
};

struct ProbeOptions {
  /// Random points are log-uniform in [scale * 1e-3, scale] per coordinate, with some exact zeros.
  double scale = 1.0;
  /// Scalability factors are drawn log-uniform in (1, max_lambda].
  double max_lambda = 10.0;
};

using VectorMap = std::function<std::vector<double>(std::span<const double>)>;

/// Randomized test of positivity, monotonicity and scalability of `map`.
ProbeReport standard_function_probe(const VectorMap& map, std::size_t dimension, std::size_t trials,
                                    std::uint64_t seed, const ProbeOptions& options = {});

}  // namespace noma::oracle
