#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "noma/interior_point.hpp"
#include "noma/network_model.hpp"
#include "noma/sum_power_min.hpp"

namespace noma {

/// The rate-maximization problem has no feasible point (or the given start is not one).
class InfeasibleProblemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The per-BS convex subproblem has an empty feasible region.
class InfeasibleSubproblemError : public std::runtime_error {
 public:
  InfeasibleSubproblemError(std::string family, const std::string& detail)
      : std::runtime_error("subproblem infeasible (" + family + "): " + detail), family_(std::move(family)) {}
  /// "power-cap" or "budget".
  const std::string& constraint_family() const { return family_; }

 private:
  std::string family_;
};

/// Own variables of one BS: q_im per subchannel and x_ijm per user.
struct CellState {
  std::vector<double> q;
  std::vector<std::vector<double>> x;
};

CellState cell_state(const NetworkTopology& topology, const CellPowerVector& q, const AuxiliaryVector& x,
                     std::size_t cell);

/// Q_im: largest q_im that keeps every other cell's users within their frozen x.
/// +infinity when no other cell's user hears BS i on subchannel m.
double power_cap(const NetworkTopology& topology, const CellPowerVector& q, const AuxiliaryVector& x,
                 std::size_t cell, std::size_t subchannel);

/// Per-BS objective split K = F - G with F, G convex (bit/s).
///
/// F = -sum_m B log2(x_strong + q_m / 2^{S_m} - sum_weak c_j x_j) and
/// G = -sum_m B log2(x_strong). The negative sum rate of the cell also
/// carries the constant -sum of the weaker users' demands.
struct DcParts {
  double convex = 0.0;
  double concave = 0.0;
  double weak_demand = 0.0;

  double difference() const { return convex - concave; }
  /// Negative sum rate of the cell, F - G - sum_weak R.
  double objective() const { return convex - concave - weak_demand; }
};

/// Throws std::domain_error when a log argument is not positive.
DcParts dc_objective_parts(const NetworkTopology& topology, const RateDemands& demands, const CellState& state,
                           std::size_t cell);

/// Gradient of G with respect to x: -B / (ln2 x) on strongest users, 0 elsewhere.
std::vector<std::vector<double>> dc_concave_gradient(const NetworkTopology& topology, const CellState& state,
                                                     std::size_t cell);

/// F(q, x) - G(x_lin) - grad G(x_lin)^T (x - x_lin) - sum_weak R; majorizes the cell objective.
double dc_surrogate(const NetworkTopology& topology, const RateDemands& demands, const CellState& state,
                    const std::vector<std::vector<double>>& x_lin, std::size_t cell);

/// Sum over cells of the negative sum-rate objective at (q, x).
double multicell_objective(const NetworkTopology& topology, const RateDemands& demands, const CellPowerVector& q,
                           const AuxiliaryVector& x);

struct DcIterate {
  std::vector<double> q;
  std::vector<std::vector<double>> x;
  /// Surrogate value at the returned point (bit/s).
  double objective_value = 0.0;
  std::size_t inner_iterations = 0;
  double stationarity = 0.0;
  /// Largest constraint violation, relative to the constraint's scale.
  double feasibility_residual = 0.0;
  bool solver_converged = false;
};

struct SubproblemOptions {
  ipm::Options ipm;
};

/// Minimizes the linearized DC surrogate of BS `cell` over its own (q, x).
///
/// Other cells' powers are read from `q` (they fix H for this cell); the
/// caps and the cell budget bound q. `warm_start` must be feasible. When the
/// solver cannot beat the warm start, the warm start is returned.
DcIterate solve_convex_subproblem(const NetworkTopology& topology, const RateDemands& demands,
                                  const CellPowerVector& q, std::size_t cell,
                                  const std::vector<std::vector<double>>& x_lin, const std::vector<double>& caps,
                                  const CellState& warm_start, const SubproblemOptions& options = {});

struct SrmStart {
  CellPowerVector q;
  AuxiliaryVector x;
};

/// Largest violation of the transformed problem's constraints, each relative to its scale.
double srm_constraint_violation(const NetworkTopology& topology, const RateDemands& demands, const SrmStart& point);

/// Fixed point scaled by one common factor until the tightest budget binds;
/// x is H(q) inflated per group until q_im = sum_j a_j x_j.
/// Throws InfeasibleProblemError when the demands are not satisfiable.
SrmStart default_srm_start(const NetworkTopology& topology, const RateDemands& demands,
                           const FixedPointOptions& spm_options = {});

/// Random feasible start around the power-minimizing fixed point; falls back
/// to `default_srm_start` when rejection sampling fails.
SrmStart random_srm_start(const NetworkTopology& topology, const RateDemands& demands, std::mt19937_64& rng,
                          const FixedPointOptions& spm_options = {});

struct SrmOptions {
  /// Outer stopping threshold on |sum K change|, in bit/s per Hz of subchannel bandwidth.
  double epsilon = 1e-3;
  std::size_t max_outer_iterations = 200;
  std::size_t max_inner_iterations = 100;
  SubproblemOptions subproblem;
  /// Lower x to H(q) once the outer loop stops.
  bool tighten_on_exit = true;
};

struct SrmReport {
  CellPowerVector q;
  AuxiliaryVector x;
  UserPowerAllocation p;
  /// Sum of achievable rates at (p, q), bit/s.
  double sum_rate = 0.0;
  std::size_t outer_iterations = 0;
  std::size_t dc_iterations = 0;
  std::size_t solver_iterations = 0;
  /// Negative sum-rate objective: start, one entry per outer sweep, then the tightened exit point.
  std::vector<double> trace;
  bool converged = false;
  std::string diagnostic;
};

/// Distributed DC power control for sum-rate maximization.
/// Throws InfeasibleProblemError when the start violates the constraints by more than 1e-7.
SrmReport dpc_srm(const NetworkTopology& topology, const RateDemands& demands,
                  const std::optional<SrmStart>& start = std::nullopt, const SrmOptions& options = {});

/// Best of `starts` runs: the default start followed by random feasible starts.
SrmReport dpc_srm_multistart(const NetworkTopology& topology, const RateDemands& demands, std::size_t starts,
                             std::uint64_t seed, const SrmOptions& options = {});

}  // namespace noma
