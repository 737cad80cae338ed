#include "noma/rate_max_multicell.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "noma/rate_max_single_cell.hpp"

namespace noma {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Weights of one group derived from its demands.
///   a_j: constraint weights, q >= sum_j a_j x_j
///   c_j: weak-user weights inside the strong user's log argument
struct GroupCoefficients {
  std::vector<double> a;
  std::vector<double> c;
  double inv_weak_factor = 1.0;  // 2^{-sum_weak R / B}
  double weak_demand = 0.0;
};

GroupCoefficients group_coefficients(std::span<const double> demands, double bandwidth) {
  const std::size_t n = demands.size();
  GroupCoefficients gc;
  gc.a.resize(n);
  gc.c.assign(n, 0.0);
  double weaker = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    double f = rate_factor(demands[j], bandwidth);
    gc.a[j] = (f - 1.0) * weaker;
    weaker *= f;
  }
  double tail = 1.0;  // prod_{l=j}^{n-2} 2^{R_l/B}
  for (std::size_t j = n - 1; j-- > 0;) {
    double f = rate_factor(demands[j], bandwidth);
    tail *= f;
    gc.c[j] = (f - 1.0) / tail;
    gc.weak_demand += demands[j];
  }
  gc.inv_weak_factor = 1.0 / tail;
  return gc;
}

double log_argument(const GroupCoefficients& gc, double q, std::span<const double> x) {
  const std::size_t n = x.size();
  double arg = x[n - 1] + q * gc.inv_weak_factor;
  for (std::size_t j = 0; j + 1 < n; ++j) arg -= gc.c[j] * x[j];
  return arg;
}

double log2_nats(double v) { return std::log(v) / std::numbers::ln2; }

void check_cell_state(const NetworkTopology& topology, const CellState& state, std::size_t cell) {
  if (cell >= topology.num_cells()) throw std::out_of_range("cell index out of range");
  if (state.q.size() != topology.num_subchannels() || state.x.size() != topology.num_subchannels())
    throw std::invalid_argument("cell state: one entry per subchannel required");
  for (std::size_t m = 0; m < topology.num_subchannels(); ++m)
    if (state.x[m].size() != topology.group_size(cell, m))
      throw std::invalid_argument("cell state: x does not match the group size");
}

std::vector<double> cell_interference(const NetworkTopology& topology, const CellPowerVector& q, std::size_t cell,
                                      std::size_t m) {
  auto users = topology.group(cell, m);
  std::vector<double> h(users.size());
  double running = 0.0;
  for (std::size_t l = users.size(); l-- > 0;) {
    running = std::max(running, interference_plus_noise(topology, q, {cell, m, l}) / users[l].own_gain);
    h[l] = running;
  }
  return h;
}

}  // namespace

CellState cell_state(const NetworkTopology& topology, const CellPowerVector& q, const AuxiliaryVector& x,
                     std::size_t cell) {
  CellState s;
  for (std::size_t m = 0; m < topology.num_subchannels(); ++m) {
    s.q.push_back(q(cell, m));
    auto xg = x.group(topology.group_id(cell, m));
    s.x.emplace_back(xg.begin(), xg.end());
  }
  return s;
}

double power_cap(const NetworkTopology& topology, const CellPowerVector& q, const AuxiliaryVector& x,
                 std::size_t cell, std::size_t subchannel) {
  topology.check_shape(q);
  topology.check_shape(x, "auxiliary vector");
  if (cell >= topology.num_cells() || subchannel >= topology.num_subchannels())
    throw std::out_of_range("power_cap: index out of range");
  double cap = kInf;
  for (std::size_t n = 0; n < topology.num_cells(); ++n) {
    if (n == cell) continue;
    auto users = topology.group(n, subchannel);
    auto xn = x.group(topology.group_id(n, subchannel));
    for (std::size_t l = 0; l < users.size(); ++l) {
      const double cross = users[l].cross_gain[cell];
      if (!(cross > 0.0)) continue;
      double others = topology.noise_power();
      for (std::size_t k = 0; k < topology.num_cells(); ++k)
        if (k != cell && k != n) others += q(k, subchannel) * users[l].cross_gain[k];
      // Every user j <= l is decoded by l, so the binding x is the smallest over j <= l.
      for (std::size_t j = 0; j <= l; ++j)
        cap = std::min(cap, (users[l].own_gain * xn[j] - others) / cross);
    }
  }
  return cap;
}

DcParts dc_objective_parts(const NetworkTopology& topology, const RateDemands& demands, const CellState& state,
                           std::size_t cell) {
  check_cell_state(topology, state, cell);
  DcParts parts;
  const double bw = topology.bandwidth();
  for (std::size_t m = 0; m < topology.num_subchannels(); ++m) {
    auto gc = group_coefficients(demands.group(topology.group_id(cell, m)), bw);
    double arg = log_argument(gc, state.q[m], state.x[m]);
    double strong = state.x[m].back();
    if (!(arg > 0.0) || !(strong > 0.0)) throw std::domain_error("dc_objective_parts: non-positive log argument");
    parts.convex -= bw * log2_nats(arg);
    parts.concave -= bw * log2_nats(strong);
    parts.weak_demand += gc.weak_demand;
  }
  return parts;
}

std::vector<std::vector<double>> dc_concave_gradient(const NetworkTopology& topology, const CellState& state,
                                                     std::size_t cell) {
  check_cell_state(topology, state, cell);
  std::vector<std::vector<double>> grad;
  for (const auto& xm : state.x) {
    std::vector<double> g(xm.size(), 0.0);
    g.back() = -topology.bandwidth() / (std::numbers::ln2 * xm.back());
    grad.push_back(std::move(g));
  }
  return grad;
}

double dc_surrogate(const NetworkTopology& topology, const RateDemands& demands, const CellState& state,
                    const std::vector<std::vector<double>>& x_lin, std::size_t cell) {
  auto parts = dc_objective_parts(topology, demands, state, cell);
  if (x_lin.size() != state.x.size()) throw std::invalid_argument("dc_surrogate: linearization point shape");
  const double bw = topology.bandwidth();
  double g_lin = 0.0;
  double linear = 0.0;
  for (std::size_t m = 0; m < state.x.size(); ++m) {
    const double strong = x_lin[m].back();
    if (!(strong > 0.0)) throw std::domain_error("dc_surrogate: linearization point must be > 0");
    g_lin -= bw * log2_nats(strong);
    linear -= bw / (std::numbers::ln2 * strong) * (state.x[m].back() - strong);
  }
  return parts.convex - g_lin - linear - parts.weak_demand;
}

double multicell_objective(const NetworkTopology& topology, const RateDemands& demands, const CellPowerVector& q,
                           const AuxiliaryVector& x) {
  double total = 0.0;
  for (std::size_t i = 0; i < topology.num_cells(); ++i)
    total += dc_objective_parts(topology, demands, cell_state(topology, q, x, i), i).objective();
  return total;
}

DcIterate solve_convex_subproblem(const NetworkTopology& topology, const RateDemands& demands,
                                  const CellPowerVector& q, std::size_t cell,
                                  const std::vector<std::vector<double>>& x_lin, const std::vector<double>& caps,
                                  const CellState& warm_start, const SubproblemOptions& options) {
  check_cell_state(topology, warm_start, cell);
  check_cell_state(topology, CellState{warm_start.q, x_lin}, cell);
  const std::size_t M = topology.num_subchannels();
  if (caps.size() != M) throw std::invalid_argument("solve_convex_subproblem: one cap per subchannel required");
  for (const auto& xm : x_lin)
    for (double v : xm)
      if (!(v > 0.0)) throw std::invalid_argument("solve_convex_subproblem: linearization point must be > 0");

  const double budget = topology.budget(cell);
  std::vector<GroupCoefficients> coeff;
  std::vector<std::vector<double>> H;
  std::vector<double> required(M);
  std::vector<double> cap(M);
  for (std::size_t m = 0; m < M; ++m) {
    coeff.push_back(group_coefficients(demands.group(topology.group_id(cell, m)), topology.bandwidth()));
    H.push_back(cell_interference(topology, q, cell, m));
    required[m] = std::inner_product(coeff[m].a.begin(), coeff[m].a.end(), H[m].begin(), 0.0);
    cap[m] = std::max(caps[m], 0.0);
    if (required[m] > cap[m] * (1.0 + 1e-9))
      throw InfeasibleSubproblemError("power-cap", "subchannel " + std::to_string(m) + " needs " +
                                                       std::to_string(required[m]) + " W above its cap");
  }
  if (std::accumulate(required.begin(), required.end(), 0.0) > budget * (1.0 + 1e-9))
    throw InfeasibleSubproblemError("budget", "minimum powers exceed the cell budget");

  // Subchannels whose feasible set is a single point are pinned at (required, H).
  constexpr double kPinned = 1e-12;
  std::vector<bool> pinned(M, false);
  double budget_left = budget;
  for (std::size_t m = 0; m < M; ++m)
    if (cap[m] - required[m] <= kPinned * required[m]) {
      pinned[m] = true;
      budget_left -= required[m];
    }
  double free_required = 0.0;
  for (std::size_t m = 0; m < M; ++m)
    if (!pinned[m]) free_required += required[m];
  if (budget_left - free_required <= kPinned * budget) pinned.assign(M, true);
  std::vector<std::size_t> free;
  for (std::size_t m = 0; m < M; ++m)
    if (!pinned[m]) free.push_back(m);

  CellState sol;
  sol.q = required;
  sol.x = H;
  DcIterate out;
  out.solver_converged = true;

  if (!free.empty()) {
    // Strictly feasible anchor: each free q halfway into its slack, x = (1 + eta) H.
    const double share = (budget_left - free_required) / static_cast<double>(free.size());
    std::vector<double> q_anchor(M);
    double eta = 1.0;
    for (std::size_t m : free) {
      q_anchor[m] = required[m] + 0.5 * std::min(cap[m] - required[m], share);
      eta = std::min(eta, 0.5 * (q_anchor[m] / required[m] - 1.0));
    }

    // Variables per free subchannel: q_m / q_anchor_m, then x_mj / H_mj.
    std::vector<std::size_t> q_idx(M);
    std::vector<std::vector<std::size_t>> x_idx(M);
    std::vector<double> scale;
    std::size_t n = 0;
    for (std::size_t m : free) {
      q_idx[m] = n++;
      scale.push_back(q_anchor[m]);
      for (double h : H[m]) {
        x_idx[m].push_back(n++);
        scale.push_back(h);
      }
    }
    const auto nn = static_cast<Eigen::Index>(n);

    // arg_m = w_m^T z; objective / (B / ln2) = sum_m -ln(arg_m) + x_strong / x_lin_strong.
    std::vector<Eigen::VectorXd> w;
    Eigen::VectorXd linear = Eigen::VectorXd::Zero(nn);
    for (std::size_t m : free) {
      const std::size_t N = H[m].size();
      Eigen::VectorXd wm = Eigen::VectorXd::Zero(nn);
      wm[q_idx[m]] = scale[q_idx[m]] * coeff[m].inv_weak_factor;
      for (std::size_t j = 0; j + 1 < N; ++j) wm[x_idx[m][j]] = -coeff[m].c[j] * scale[x_idx[m][j]];
      wm[x_idx[m][N - 1]] = scale[x_idx[m][N - 1]];
      linear[x_idx[m][N - 1]] = scale[x_idx[m][N - 1]] / x_lin[m][N - 1];
      w.push_back(std::move(wm));
    }

    ipm::ConvexObjective obj;
    obj.in_domain = [&](const Eigen::VectorXd& z) {
      for (const auto& wm : w)
        if (!(wm.dot(z) > 0.0)) return false;
      return true;
    };
    obj.value = [&](const Eigen::VectorXd& z) {
      double v = linear.dot(z);
      for (const auto& wm : w) v -= std::log(wm.dot(z));
      return v;
    };
    obj.gradient = [&](const Eigen::VectorXd& z) {
      Eigen::VectorXd g = linear;
      for (const auto& wm : w) g -= wm / wm.dot(z);
      return g;
    };
    obj.hessian = [&](const Eigen::VectorXd& z) {
      Eigen::MatrixXd h = Eigen::MatrixXd::Zero(z.size(), z.size());
      for (const auto& wm : w) {
        double a = wm.dot(z);
        h += wm * wm.transpose() / (a * a);
      }
      return h;
    };

    std::vector<std::pair<Eigen::VectorXd, double>> rows;
    for (std::size_t m : free) {
      for (std::size_t j = 0; j < H[m].size(); ++j) {
        Eigen::VectorXd r = Eigen::VectorXd::Zero(nn);
        r[x_idx[m][j]] = -1.0;
        rows.emplace_back(r, -1.0);
      }
      Eigen::VectorXd weighted = Eigen::VectorXd::Zero(nn);
      for (std::size_t j = 0; j < H[m].size(); ++j) weighted[x_idx[m][j]] = coeff[m].a[j] * scale[x_idx[m][j]];
      weighted[q_idx[m]] = -scale[q_idx[m]];
      rows.emplace_back(weighted, 0.0);
      if (std::isfinite(cap[m])) {
        Eigen::VectorXd r = Eigen::VectorXd::Zero(nn);
        r[q_idx[m]] = scale[q_idx[m]];
        rows.emplace_back(r, cap[m]);
      }
    }
    Eigen::VectorXd budget_row = Eigen::VectorXd::Zero(nn);
    for (std::size_t m : free) budget_row[q_idx[m]] = scale[q_idx[m]];
    rows.emplace_back(budget_row, budget_left);

    Eigen::MatrixXd A(static_cast<Eigen::Index>(rows.size()), nn);
    Eigen::VectorXd b(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      A.row(static_cast<Eigen::Index>(r)) = rows[r].first.transpose();
      b[static_cast<Eigen::Index>(r)] = rows[r].second;
    }

    Eigen::VectorXd anchor(nn);
    Eigen::VectorXd warm(nn);
    for (std::size_t m : free) {
      anchor[q_idx[m]] = 1.0;
      warm[q_idx[m]] = warm_start.q[m] / scale[q_idx[m]];
      for (std::size_t j = 0; j < H[m].size(); ++j) {
        anchor[x_idx[m][j]] = 1.0 + eta;
        warm[x_idx[m][j]] = warm_start.x[m][j] / scale[x_idx[m][j]];
      }
    }
    // Start near the warm point when the segment toward the anchor is strictly feasible.
    Eigen::VectorXd start = 0.9 * warm + 0.1 * anchor;
    if (!((b - A * start).minCoeff() > 0.0 && obj.in_domain(start))) start = anchor;

    ipm::Result res = ipm::minimize(obj, A, b, start, options.ipm);
    out.inner_iterations = res.iterations;
    out.stationarity = res.stationarity;
    out.solver_converged = res.converged;
    for (std::size_t m : free) {
      sol.q[m] = res.z[q_idx[m]] * scale[q_idx[m]];
      for (std::size_t j = 0; j < H[m].size(); ++j) sol.x[m][j] = res.z[x_idx[m][j]] * scale[x_idx[m][j]];
    }
  }

  for (std::size_t m = 0; m < M; ++m) {
    double weighted = 0.0;
    for (std::size_t j = 0; j < H[m].size(); ++j) {
      sol.x[m][j] = std::max(sol.x[m][j], H[m][j]);
      weighted += coeff[m].a[j] * sol.x[m][j];
    }
    sol.q[m] = std::max(sol.q[m], weighted);
  }

  auto violation = [&](const CellState& s) {
    double v = 0.0;
    double total = 0.0;
    for (std::size_t m = 0; m < M; ++m) {
      double weighted = 0.0;
      for (std::size_t j = 0; j < H[m].size(); ++j) {
        v = std::max(v, (H[m][j] - s.x[m][j]) / H[m][j]);
        weighted += coeff[m].a[j] * s.x[m][j];
      }
      v = std::max(v, (weighted - s.q[m]) / std::max(weighted, s.q[m]));
      if (s.q[m] > cap[m]) v = std::max(v, (s.q[m] - cap[m]) / s.q[m]);
      total += s.q[m];
    }
    return std::max(v, (total - budget) / budget);
  };

  out.feasibility_residual = violation(sol);
  out.objective_value = dc_surrogate(topology, demands, sol, x_lin, cell);

  if (violation(warm_start) <= 1e-7) {
    try {
      double warm_value = dc_surrogate(topology, demands, warm_start, x_lin, cell);
      bool sol_ok = std::isfinite(out.objective_value) && out.feasibility_residual <= 1e-7;
      if (!sol_ok || out.objective_value > warm_value) {
        out.q = warm_start.q;
        out.x = warm_start.x;
        out.objective_value = warm_value;
        out.feasibility_residual = violation(warm_start);
        return out;
      }
    } catch (const std::domain_error&) {
      // Warm point outside the objective's domain; keep the solver's point.
    }
  }
  out.q = std::move(sol.q);
  out.x = std::move(sol.x);
  return out;
}

double srm_constraint_violation(const NetworkTopology& topology, const RateDemands& demands, const SrmStart& point) {
  topology.check_shape(point.q);
  topology.check_shape(point.x, "auxiliary vector");
  auto H = effective_interference(topology, point.q);
  double v = 0.0;
  for (std::size_t g = 0; g < topology.num_groups(); ++g) {
    auto [i, m] = topology.group_index(g);
    auto gc = group_coefficients(demands.group(g), topology.bandwidth());
    auto xg = point.x.group(g);
    auto hg = H.group(g);
    double weighted = 0.0;
    for (std::size_t j = 0; j < xg.size(); ++j) {
      v = std::max(v, (hg[j] - xg[j]) / hg[j]);
      weighted += gc.a[j] * xg[j];
    }
    v = std::max(v, (weighted - point.q(i, m)) / std::max(weighted, point.q(i, m)));
  }
  for (std::size_t i = 0; i < topology.num_cells(); ++i)
    v = std::max(v, (point.q.cell_total(i) - topology.budget(i)) / topology.budget(i));
  return std::max(v, 0.0);
}

namespace {

/// x = H(q) scaled per group by `inflation(g)` in [1, q_g / f_g(q)].
template <class Inflation>
AuxiliaryVector inflated_auxiliary(const NetworkTopology& topology, const RateDemands& demands,
                                   const CellPowerVector& q, Inflation inflation) {
  auto H = effective_interference(topology, q);
  auto f = interference_map(topology, demands, q);
  auto x = topology.make_per_user<AuxiliaryTag>();
  for (std::size_t g = 0; g < topology.num_groups(); ++g) {
    auto [i, m] = topology.group_index(g);
    double room = std::max(1.0, q(i, m) / f(i, m));
    double factor = 1.0 + inflation(g) * (room - 1.0);
    for (std::size_t j = 0; j < x.group(g).size(); ++j) x.group(g)[j] = H.group(g)[j] * factor;
  }
  return x;
}

CellPowerVector feasible_fixed_point(const NetworkTopology& topology, const RateDemands& demands,
                                     const FixedPointOptions& spm_options) {
  auto spm = dpc_spm(topology, demands, std::nullopt, spm_options);
  if (!spm.feasible()) throw InfeasibleProblemError("rate demands cannot be met within the power budgets");
  return spm.q_star;
}

}  // namespace

SrmStart default_srm_start(const NetworkTopology& topology, const RateDemands& demands,
                           const FixedPointOptions& spm_options) {
  CellPowerVector q = feasible_fixed_point(topology, demands, spm_options);
  double lambda = kInf;
  for (std::size_t i = 0; i < topology.num_cells(); ++i) lambda = std::min(lambda, topology.budget(i) / q.cell_total(i));
  lambda = std::max(lambda, 1.0);
  for (double& v : q.values()) v *= lambda;
  auto x = inflated_auxiliary(topology, demands, q, [](std::size_t) { return 1.0; });
  return {std::move(q), std::move(x)};
}

SrmStart random_srm_start(const NetworkTopology& topology, const RateDemands& demands, std::mt19937_64& rng,
                          const FixedPointOptions& spm_options) {
  const CellPowerVector base = feasible_fixed_point(topology, demands, spm_options);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int attempt = 0; attempt < 50; ++attempt) {
    CellPowerVector q = base;
    for (std::size_t i = 0; i < topology.num_cells(); ++i) {
      std::vector<double> weight(topology.num_subchannels());
      for (double& wgt : weight) wgt = 0.05 + unit(rng);
      double wsum = std::accumulate(weight.begin(), weight.end(), 0.0);
      double room = std::max(0.0, topology.budget(i) - base.cell_total(i)) * unit(rng);
      for (std::size_t m = 0; m < topology.num_subchannels(); ++m) q(i, m) += room * weight[m] / wsum;
    }
    auto f = interference_map(topology, demands, q);
    bool ok = true;
    for (std::size_t k = 0; k < f.values().size(); ++k) ok = ok && q.values()[k] >= f.values()[k];
    if (!ok) continue;
    std::vector<double> inflation(topology.num_groups());
    for (double& v : inflation) v = unit(rng);
    auto x = inflated_auxiliary(topology, demands, q, [&](std::size_t g) { return inflation[g]; });
    return {std::move(q), std::move(x)};
  }
  return default_srm_start(topology, demands, spm_options);
}

SrmReport dpc_srm(const NetworkTopology& topology, const RateDemands& demands, const std::optional<SrmStart>& start,
                  const SrmOptions& options) {
  check_demands(topology, demands);
  if (!(options.epsilon > 0.0)) throw std::invalid_argument("dpc_srm: epsilon must be > 0");
  SrmStart point = start ? *start : default_srm_start(topology, demands);
  if (srm_constraint_violation(topology, demands, point) > 1e-7)
    throw InfeasibleProblemError("dpc_srm: initial point violates the constraints");

  const double outer_tol = options.epsilon * topology.bandwidth();
  const double inner_tol = outer_tol / 10.0;

  SrmReport report;
  double previous = multicell_objective(topology, demands, point.q, point.x);
  report.trace.push_back(previous);

  bool failed = false;
  for (std::size_t t = 1; t <= options.max_outer_iterations && !failed; ++t) {
    for (std::size_t i = 0; i < topology.num_cells() && !failed; ++i) {
      std::vector<double> caps(topology.num_subchannels());
      for (std::size_t m = 0; m < topology.num_subchannels(); ++m) caps[m] = power_cap(topology, point.q, point.x, i, m);

      CellState current = cell_state(topology, point.q, point.x, i);
      double k_current = dc_objective_parts(topology, demands, current, i).objective();
      auto x_lin = current.x;
      for (std::size_t k = 0; k < options.max_inner_iterations; ++k) {
        DcIterate next;
        try {
          next = solve_convex_subproblem(topology, demands, point.q, i, x_lin, caps, current, options.subproblem);
        } catch (const std::exception& e) {
          report.diagnostic = "cell " + std::to_string(i) + ": " + e.what();
          failed = true;
          break;
        }
        ++report.dc_iterations;
        report.solver_iterations += next.inner_iterations;
        CellState candidate{next.q, next.x};
        double k_next = dc_objective_parts(topology, demands, candidate, i).objective();
        if (!(k_next <= k_current)) break;
        double change = k_current - k_next;
        current = std::move(candidate);
        k_current = k_next;
        x_lin = current.x;
        if (change <= inner_tol) break;
      }
      for (std::size_t m = 0; m < topology.num_subchannels(); ++m) {
        point.q(i, m) = current.q[m];
        auto xg = point.x.group(topology.group_id(i, m));
        std::copy(current.x[m].begin(), current.x[m].end(), xg.begin());
      }
    }
    double value = multicell_objective(topology, demands, point.q, point.x);
    report.trace.push_back(value);
    report.outer_iterations = t;
    if (!failed && std::abs(previous - value) <= outer_tol) {
      report.converged = true;
      break;
    }
    previous = value;
  }

  if (options.tighten_on_exit) {
    auto H = effective_interference(topology, point.q);
    point.x = AuxiliaryVector(H.groups());
    report.trace.push_back(multicell_objective(topology, demands, point.q, point.x));
  }

  auto H = effective_interference(topology, point.q);
  report.p = topology.make_per_user<UserPowerTag>();
  try {
    for (std::size_t g = 0; g < topology.num_groups(); ++g) {
      auto [i, m] = topology.group_index(g);
      auto alloc = optimal_single_cell_allocation(demands.group(g), H.group(g), point.q(i, m), topology.bandwidth());
      std::copy(alloc.power.begin(), alloc.power.end(), report.p.group(g).begin());
    }
  } catch (const InfeasibleGroupError& e) {
    report.converged = false;
    report.diagnostic = std::string("assembly: ") + e.what();
  }
  double rate = 0.0;
  for (std::size_t g = 0; g < topology.num_groups(); ++g) {
    auto [i, m] = topology.group_index(g);
    for (std::size_t j = 0; j < report.p.group(g).size(); ++j)
      rate += achievable_rate(topology, report.p, point.q, {i, m, j});
  }
  report.sum_rate = rate;
  report.q = std::move(point.q);
  report.x = std::move(point.x);
  return report;
}

SrmReport dpc_srm_multistart(const NetworkTopology& topology, const RateDemands& demands, std::size_t starts,
                             std::uint64_t seed, const SrmOptions& options) {
  if (starts < 1) throw std::invalid_argument("dpc_srm_multistart: need at least one start");
  SrmReport best = dpc_srm(topology, demands, std::nullopt, options);
  std::mt19937_64 rng(seed);
  for (std::size_t s = 1; s < starts; ++s) {
    SrmReport candidate = dpc_srm(topology, demands, random_srm_start(topology, demands, rng), options);
    bool better = candidate.converged && (!best.converged || candidate.sum_rate > best.sum_rate);
    if (better) best = std::move(candidate);
  }
  return best;
}

}  // namespace noma
