#include "noma/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace noma::oracle {

namespace {

double local_interference(const NetworkTopology& topo, const CellPowerVector& q, std::size_t cell, std::size_t m,
                          std::size_t user) {
  const UserChannel& u = topo.group(cell, m)[user];
  double total = topo.noise_power();
  for (std::size_t k = 0; k < topo.num_cells(); ++k)
    if (k != cell) total += q(k, m) * u.cross_gain[k];
  return total / u.own_gain;
}

std::vector<double> local_effective(const NetworkTopology& topo, const CellPowerVector& q, std::size_t cell,
                                    std::size_t m) {
  const std::size_t n = topo.group_size(cell, m);
  std::vector<double> h(n);
  for (std::size_t j = 0; j < n; ++j) {
    double worst = 0.0;
    for (std::size_t l = j; l < n; ++l) worst = std::max(worst, local_interference(topo, q, cell, m, l));
    h[j] = worst;
  }
  return h;
}

/// Powers meeting every SINR target with equality, solved strongest first.
std::vector<double> tight_powers(std::span<const double> demands, std::span<const double> h, double bandwidth) {
  const std::size_t n = demands.size();
  std::vector<double> p(n);
  double above = 0.0;
  for (std::size_t j = n; j-- > 0;) {
    double sinr = std::pow(2.0, demands[j] / bandwidth) - 1.0;
    p[j] = sinr * (above + h[j]);
    above += p[j];
  }
  return p;
}

bool meets_demands(std::span<const double> p, std::span<const double> demands, std::span<const double> h,
                   double bandwidth) {
  double above = 0.0;
  for (std::size_t j = p.size(); j-- > 0;) {
    if (p[j] < 0.0) return false;
    double rate = bandwidth * std::log2(1.0 + p[j] / (above + h[j]));
    if (rate < demands[j] * (1.0 - 1e-9)) return false;
    above += p[j];
  }
  return true;
}

std::string number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string join(std::span<const double> v) {
  std::ostringstream os;
  os.precision(17);
  os << '[';
  for (std::size_t k = 0; k < v.size(); ++k) os << (k ? ", " : "") << v[k];
  os << ']';
  return os.str();
}

}  // namespace

GridPowerResult grid_power_min(const NetworkTopology& topology, const RateDemands& demands, double resolution,
                               std::size_t max_points) {
  if (!(resolution > 0.0)) throw std::invalid_argument("grid_power_min: resolution must be > 0");
  if (topology.num_cells() > 2 || topology.num_subchannels() > 2)
    throw OracleSizeError("grid_power_min: at most 2 cells and 2 subchannels");
  for (std::size_t g = 0; g < topology.num_groups(); ++g)
    if (topology.group(g).size() > 3) throw OracleSizeError("grid_power_min: at most 3 users per group");
  topology.check_shape(demands, "demands");

  const std::size_t I = topology.num_cells();
  const std::size_t M = topology.num_subchannels();
  const std::size_t D = I * M;
  std::vector<std::size_t> steps(D);
  double points = 1.0;
  for (std::size_t d = 0; d < D; ++d) {
    steps[d] = static_cast<std::size_t>(std::floor(topology.budget(d / M) / resolution * (1.0 + 1e-12))) + 1;
    points *= static_cast<double>(steps[d]);
  }
  if (points > static_cast<double>(max_points)) throw OracleSizeError("grid_power_min: grid too large");

  GridPowerResult out;
  out.status = kNoneFound;
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> idx(D, 0);
  CellPowerVector q(I, M);
  auto feasible = [&]() {
    for (std::size_t i = 0; i < I; ++i) {
      double cell_sum = 0.0;
      for (std::size_t m = 0; m < M; ++m) cell_sum += q(i, m);
      if (cell_sum > topology.budget(i) * (1.0 + 1e-12)) return false;
      for (std::size_t m = 0; m < M; ++m) {
        auto h = local_effective(topology, q, i, m);
        auto p = tight_powers(demands.group(topology.group_id(i, m)), h, topology.bandwidth());
        double need = 0.0;
        for (double v : p) need += v;
        if (q(i, m) < need * (1.0 - 1e-12)) return false;
      }
    }
    return true;
  };

  while (true) {
    double sum = 0.0;
    for (std::size_t d = 0; d < D; ++d) {
      q.values()[d] = static_cast<double>(idx[d]) * resolution;
      sum += q.values()[d];
    }
    ++out.points_evaluated;
    bool skip_rest_of_row = sum >= best;
    if (!skip_rest_of_row && feasible()) {
      best = sum;
      out.found = true;
      out.q = q;
      skip_rest_of_row = true;
    }
    // Odometer, last coordinate fastest; larger last coordinates only add power.
    if (skip_rest_of_row) idx[D - 1] = steps[D - 1] - 1;
    std::size_t d = D;
    while (d > 0 && ++idx[d - 1] == steps[d - 1]) idx[--d] = 0;
    if (d == 0) break;
  }

  if (out.found) {
    out.status = "found";
    out.sum_power = best;
    out.p = topology.make_per_user<UserPowerTag>();
    for (std::size_t i = 0; i < I; ++i)
      for (std::size_t m = 0; m < M; ++m) {
        auto h = local_effective(topology, out.q, i, m);
        const std::size_t g = topology.group_id(i, m);
        auto p = tight_powers(demands.group(g), h, topology.bandwidth());
        double used = 0.0;
        for (double v : p) used += v;
        p.back() += out.q(i, m) - used;
        std::copy(p.begin(), p.end(), out.p.group(g).begin());
      }
  }
  return out;
}

GridRateResult grid_rate_max_group(std::span<const double> demands, std::span<const double> interference,
                                   double total_power, double bandwidth, double resolution) {
  if (!(resolution > 0.0)) throw std::invalid_argument("grid_rate_max_group: resolution must be > 0");
  const std::size_t n = demands.size();
  if (n == 0 || n > 3) throw OracleSizeError("grid_rate_max_group: 1 to 3 users");
  if (interference.size() != n) throw std::invalid_argument("grid_rate_max_group: size mismatch");

  GridRateResult out;
  out.status = kNoneFound;
  const auto steps = static_cast<std::size_t>(std::floor(total_power / resolution * (1.0 + 1e-12))) + 1;
  std::vector<double> p(n, 0.0);

  auto consider = [&]() {
    ++out.points_evaluated;
    double weak = 0.0;
    for (std::size_t j = 0; j + 1 < n; ++j) weak += p[j];
    p[n - 1] = total_power - weak;
    if (p[n - 1] < -1e-12 * total_power) return;
    p[n - 1] = std::max(p[n - 1], 0.0);
    if (!meets_demands(p, demands, interference, bandwidth)) return;
    double rate = 0.0, above = 0.0;
    for (std::size_t j = n; j-- > 0;) {
      rate += bandwidth * std::log2(1.0 + p[j] / (above + interference[j]));
      above += p[j];
    }
    if (!out.found || rate > out.sum_rate) {
      out.found = true;
      out.sum_rate = rate;
      out.power = p;
    }
  };

  if (n == 1) {
    consider();
  } else if (n == 2) {
    for (std::size_t a = 0; a < steps; ++a) {
      p[0] = static_cast<double>(a) * resolution;
      consider();
    }
  } else {
    for (std::size_t a = 0; a < steps; ++a) {
      p[0] = static_cast<double>(a) * resolution;
      for (std::size_t b = 0; a + b < steps; ++b) {
        p[1] = static_cast<double>(b) * resolution;
        consider();
      }
    }
  }
  if (out.found) out.status = "found";
  return out;
}

HessianCheck fd_hessian_psd(const std::function<double(std::span<const double>)>& f, std::span<const double> point,
                            double step, double tolerance) {
  const std::size_t n = point.size();
  if (n == 0) throw std::invalid_argument("fd_hessian_psd: empty point");
  if (!(step > 0.0)) {
    double scale = 0.0;
    for (double v : point) scale = std::max(scale, std::abs(v));
    step = 1e-5 * (scale > 0.0 ? scale : 1.0);
  }
  std::vector<double> x(point.begin(), point.end());
  auto eval = [&](std::size_t j, double dj, std::size_t l, double dl) {
    std::vector<double> y = x;
    y[j] += dj;
    y[l] += dl;
    return f(y);
  };

  const double a = step;
  const double b = 1.5 * step;
  const double f0 = f(x);
  Eigen::MatrixXd raw(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) {
    raw(j, j) = (eval(j, a, j, 0.0) - 2.0 * f0 + eval(j, -a, j, 0.0)) / (a * a);
    for (std::size_t l = 0; l < n; ++l) {
      if (l == j) continue;
      // Step a on the row axis, b on the column axis.
      raw(j, l) = (eval(j, a, l, b) - eval(j, a, l, -b) - eval(j, -a, l, b) + eval(j, -a, l, -b)) / (4.0 * a * b);
    }
  }

  HessianCheck out;
  out.dimension = n;
  const double magnitude = std::max(raw.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  // Rounding in the four-point numerators; estimates below ten times this carry no digits.
  const double noise = 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(f0), 1e-300) / (a * a);
  if (magnitude < 10.0 * noise)
    throw StepTooSmallError("fd_hessian_psd: differences at rounding level; use a larger step");
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t l = j + 1; l < n; ++l)
      out.max_asymmetry = std::max(out.max_asymmetry, std::abs(raw(j, l) - raw(l, j)) / magnitude);
  if (out.max_asymmetry > 1e-4)
    throw StepTooSmallError("fd_hessian_psd: asymmetry " + std::to_string(out.max_asymmetry) +
                            " indicates cancellation; use a larger step");

  const Eigen::MatrixXd sym = 0.5 * (raw + raw.transpose());
  out.hessian.assign(sym.data(), sym.data() + n * n);  // symmetric, so layout order is irrelevant
  out.positive_semidefinite = true;
  for (std::size_t k = 1; k <= n; ++k) {
    double minor = sym.topLeftCorner(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)).determinant();
    out.leading_minors.push_back(minor);
    if (!(minor >= tolerance)) out.positive_semidefinite = false;
  }
  return out;
}

std::size_t ProbeReport::count(const std::string& property) const {
  return static_cast<std::size_t>(std::count_if(counterexamples.begin(), counterexamples.end(),
                                                [&](const Counterexample& c) { return c.property == property; }));
}

ProbeReport standard_function_probe(const VectorMap& map, std::size_t dimension, std::size_t trials,
                                    std::uint64_t seed, const ProbeOptions& options) {
  if (trials < 1) throw std::invalid_argument("standard_function_probe: trials must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto random_point = [&]() {
    std::vector<double> q(dimension);
    for (double& v : q) v = unit(rng) < 0.1 ? 0.0 : options.scale * std::pow(10.0, -3.0 * unit(rng));
    return q;
  };

  ProbeReport report;
  report.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<double> q = random_point();
    std::vector<double> fq = map(q);

    for (std::size_t k = 0; k < dimension; ++k)
      if (!(fq[k] > 0.0)) {
        report.counterexamples.push_back(
            {"positivity", q, {}, 0.0, "f(q)[" + std::to_string(k) + "] = " + number(fq[k])});
        break;
      }

    std::vector<double> larger = q;
    for (double& v : larger) v += unit(rng) < 0.3 ? 0.0 : options.scale * unit(rng);
    std::vector<double> f_larger = map(larger);
    for (std::size_t k = 0; k < dimension; ++k)
      if (f_larger[k] < fq[k]) {
        report.counterexamples.push_back({"monotonicity", q, larger, 0.0,
                                          "f(q')[" + std::to_string(k) + "] < f(q)[" + std::to_string(k) + "]: " +
                                              join(f_larger) + " vs " + join(fq)});
        break;
      }

    const double lambda = std::pow(options.max_lambda, unit(rng));
    if (!(lambda > 1.0)) continue;
    std::vector<double> scaled = q;
    for (double& v : scaled) v *= lambda;
    std::vector<double> f_scaled = map(scaled);
    for (std::size_t k = 0; k < dimension; ++k)
      if (!(lambda * fq[k] > f_scaled[k])) {
        report.counterexamples.push_back({"scalability", q, {}, lambda,
                                          "lambda f(q)[" + std::to_string(k) + "] = " +
                                              number(lambda * fq[k]) + " not > f(lambda q)[" + std::to_string(k) +
                                              "] = " + number(f_scaled[k])});
        break;
      }
  }
  return report;
}

}  // namespace noma::oracle
