#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "noma/sum_power_min.hpp"
#include "test_support.hpp"

using namespace noma;
using noma::testing::random_topology;
using noma::testing::uniform;

namespace {

NetworkTopology symmetric_two_cell(double budget = 10.0) {
  NetworkTopology::Params p;
  p.num_cells = 2;
  p.num_subchannels = 1;
  p.bandwidth_hz = 1.0;
  p.noise_power_w = 0.1;
  p.budget_w = {budget, budget};
  p.groups = {{{0, 0.5, {0.0, 0.1}}, {1, 1.0, {0.0, 0.2}}}, {{2, 0.5, {0.1, 0.0}}, {3, 1.0, {0.2, 0.0}}}};
  return NetworkTopology(std::move(p));
}

// Independent evaluation of f_im: the explicit product-sum with H recomputed here.
double reference_map(const NetworkTopology& topo, const RateDemands& r, const CellPowerVector& q, std::size_t i,
                     std::size_t m) {
  auto users = topo.group(i, m);
  auto dem = r.group(topo.group_id(i, m));
  const std::size_t n = users.size();
  double total = 0.0;
  double prefix = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double h = 0.0;
    for (std::size_t l = j; l < n; ++l) {
      double inter = topo.noise_power();
      for (std::size_t k = 0; k < topo.num_cells(); ++k)
        if (k != i) inter += q(k, m) * users[l].cross_gain[k];
      h = std::max(h, inter / users[l].own_gain);
    }
    total += (std::exp2(dem[j]) - 1.0) * std::exp2(prefix) * h;
    prefix += dem[j];
  }
  return total;
}

}  // namespace

TEST_CASE("closed-form powers of the worked examples") {
  auto p2 = min_power_user_allocation(std::vector{1.0, 1.0}, std::vector{3.0, 1.0}, 1.0);
  CHECK(p2[0] == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(p2[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(minimum_group_power(std::vector{1.0, 1.0}, std::vector{3.0, 1.0}, 1.0) == doctest::Approx(5.0));

  auto p3 = min_power_user_allocation(std::vector{1.0, 1.0, 1.0}, std::vector{7.0, 3.0, 1.0}, 1.0);
  CHECK(p3[0] == 12.0);
  CHECK(p3[1] == 4.0);
  CHECK(p3[2] == 1.0);
  CHECK(minimum_group_power(std::vector{1.0, 1.0, 1.0}, std::vector{7.0, 3.0, 1.0}, 1.0) == 17.0);

  auto p1 = min_power_user_allocation(std::vector{1.0}, std::vector{2.0}, 1.0);
  CHECK(p1[0] == 2.0);
}

TEST_CASE("interference map of the symmetric instance") {
  auto topo = symmetric_two_cell();
  auto r = uniform_demands(topo, 1.0);
  CellPowerVector q(2, 1, 1.0);
  CHECK(interference_map(topo, r, q, 0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CellPowerVector zero(2, 1, 0.0);
  CHECK(interference_map(topo, r, zero, 0, 0) == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("fixed point of the symmetric instance") {
  auto topo = symmetric_two_cell();
  auto r = uniform_demands(topo, 1.0);
  auto rep = dpc_spm(topo, r);
  REQUIRE(rep.converged);
  CHECK(rep.feasible());
  CHECK(rep.q_star(0, 0) == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(rep.q_star(1, 0) == doctest::Approx(1.0).epsilon(1e-7));
  auto p = assemble_full_solution(topo, r, rep.q_star);
  for (std::size_t g = 0; g < 2; ++g) {
    CHECK(p.group(g)[0] == doctest::Approx(0.7).epsilon(1e-7));
    CHECK(p.group(g)[1] == doctest::Approx(0.3).epsilon(1e-7));
  }
}

TEST_CASE("single cell converges in one sweep") {
  NetworkTopology::Params pr;
  pr.num_cells = 1;
  pr.num_subchannels = 1;
  pr.bandwidth_hz = 1.0;
  pr.noise_power_w = 0.1;
  pr.budget_w = {10.0};
  pr.groups = {{{0, 0.5, {0.0}}, {1, 1.0, {0.0}}}};
  NetworkTopology topo(std::move(pr));
  auto r = uniform_demands(topo, 1.0);
  auto rep = dpc_spm(topo, r);
  REQUIRE(rep.converged);
  CHECK(rep.iterations <= 2);
  CHECK(rep.q_star(0, 0) == doctest::Approx(0.4).epsilon(1e-12));
  auto p = assemble_full_solution(topo, r, rep.q_star);
  CHECK(p.group(0)[0] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(p.group(0)[1] == doctest::Approx(0.1).epsilon(1e-12));

  auto tiny = uniform_demands(topo, 1e-9);
  auto rt = dpc_spm(topo, tiny);
  auto pt = assemble_full_solution(topo, tiny, rt.q_star);
  CHECK(pt.group(0)[0] < 1e-9);
  CHECK(pt.group(0)[1] < 1e-9);
}

TEST_CASE("different starts reach the same fixed point") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    auto topo = random_topology(rng, {.cells = 3, .subchannels = 2, .min_users = 2, .max_users = 3});
    auto r = noma::testing::random_demands(rng, topo, 0.1, 0.5);
    FixedPointOptions opt;
    auto a = dpc_spm(topo, r, CellPowerVector(3, 2, 0.0), opt);
    auto b = dpc_spm(topo, r, default_initial_power(topo), opt);
    REQUIRE(a.converged);
    REQUIRE(b.converged);
    for (std::size_t k = 0; k < a.q_star.values().size(); ++k)
      CHECK(std::abs(a.q_star.values()[k] - b.q_star.values()[k]) <= 2 * opt.tolerance);
  }
}

TEST_CASE("jacobi order reaches the same fixed point") {
  auto topo = symmetric_two_cell();
  auto r = uniform_demands(topo, 1.0);
  FixedPointOptions opt;
  opt.order = UpdateOrder::jacobi;
  auto rep = dpc_spm(topo, r, std::nullopt, opt);
  REQUIRE(rep.converged);
  CHECK(rep.q_star(0, 0) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("infeasible demands are reported, not thrown") {
  auto topo = symmetric_two_cell(1.0);
  auto r = uniform_demands(topo, 1.0);
  // The fixed point needs 1 W per cell; budgets of 0.5 W are too small.
  auto small = symmetric_two_cell(0.5);
  auto rep = dpc_spm(small, r);
  CHECK(rep.converged);
  CHECK_FALSE(rep.feasible());
  CHECK_FALSE(rep.budget_feasible[0]);

  // Cross gains above own gains with large demands have no fixed point at all.
  NetworkTopology::Params pr;
  pr.num_cells = 2;
  pr.num_subchannels = 1;
  pr.bandwidth_hz = 1.0;
  pr.noise_power_w = 0.1;
  pr.budget_w = {1.0, 1.0};
  pr.groups = {{{0, 1.0, {0.0, 2.0}}}, {{1, 1.0, {2.0, 0.0}}}};
  NetworkTopology diverging(std::move(pr));
  auto bad = dpc_spm(diverging, uniform_demands(diverging, 3.0));
  CHECK_FALSE(bad.converged);
}

TEST_CASE("inconsistent fixed point is rejected by assembly") {
  auto topo = symmetric_two_cell();
  auto r = uniform_demands(topo, 1.0);
  CHECK_THROWS_AS(assemble_full_solution(topo, r, CellPowerVector(2, 1, 3.0)), std::invalid_argument);
}

TEST_CASE("property: interference map matches the explicit product sum") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 200; ++trial) {
    auto topo = random_topology(rng, {.cells = 3, .subchannels = 2, .min_users = 1, .max_users = 4});
    auto r = noma::testing::random_demands(rng, topo);
    auto q = noma::testing::random_power(rng, topo, 4.0);
    auto f = interference_map(topo, r, q);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t m = 0; m < 2; ++m) CHECK(noma::testing::close_rel(f(i, m), reference_map(topo, r, q, i, m), 1e-12));
  }
}

TEST_CASE("property: standard interference function") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    auto topo = random_topology(rng, {.cells = 3, .subchannels = 2, .min_users = 1, .max_users = 3});
    auto r = noma::testing::random_demands(rng, topo);
    auto q2 = noma::testing::random_power(rng, topo, 3.0);
    auto q1 = q2;
    for (double& v : q1.values()) v += uniform(rng, 0.0, 1.0);
    const double lambda = uniform(rng, 1.0 + 1e-3, 10.0);
    auto scaled = q2;
    for (double& v : scaled.values()) v *= lambda;
    auto f1 = interference_map(topo, r, q1);
    auto f2 = interference_map(topo, r, q2);
    auto fs = interference_map(topo, r, scaled);
    for (std::size_t k = 0; k < f1.values().size(); ++k) {
      CHECK(f2.values()[k] > 0.0);
      CHECK(f1.values()[k] >= f2.values()[k]);
      CHECK(lambda * f2.values()[k] > fs.values()[k]);
    }
  }
}

TEST_CASE("property: the fixed point is the component-wise minimum") {
  std::mt19937_64 rng(24);
  int accepted = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto topo = random_topology(rng, {.cells = 2, .subchannels = 2, .min_users = 2, .max_users = 3});
    auto r = noma::testing::random_demands(rng, topo, 0.1, 0.6);
    auto rep = dpc_spm(topo, r);
    REQUIRE(rep.converged);
    for (int s = 0; s < 50; ++s) {
      CellPowerVector cand = rep.q_star;
      for (double& v : cand.values()) v *= uniform(rng, 0.7, 2.0);
      auto f = interference_map(topo, r, cand);
      bool self_feasible = true;
      for (std::size_t k = 0; k < f.values().size(); ++k) self_feasible &= cand.values()[k] >= f.values()[k];
      for (std::size_t i = 0; i < topo.num_cells(); ++i) self_feasible &= cand.cell_total(i) <= topo.budget(i);
      if (!self_feasible) continue;
      ++accepted;
      for (std::size_t k = 0; k < f.values().size(); ++k)
        CHECK(cand.values()[k] >= rep.q_star.values()[k] * (1.0 - 1e-9));
    }
  }
  CHECK(accepted > 100);
}

TEST_CASE("property: equal demands give strictly decreasing powers") {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + trial % 3;
    auto h = noma::testing::random_descending_interference(rng, n);
    // Strictly descending H required for strict ordering; nudge ties apart.
    for (std::size_t j = 0; j + 1 < n; ++j) h[j] = std::max(h[j], h[j + 1] * (1.0 + 1e-6));
    std::vector<double> r(n, uniform(rng, 0.05, 2.0));
    auto p = min_power_user_allocation(r, h, 1.0);
    for (std::size_t j = 1; j < n; ++j) CHECK(p[j - 1] > p[j]);
  }
}

TEST_CASE("property: rates are tight at the assembled solution") {
  std::mt19937_64 rng(26);
  for (int trial = 0; trial < 50; ++trial) {
    auto topo = random_topology(rng, {.cells = 3, .subchannels = 2, .min_users = 1, .max_users = 3});
    auto r = noma::testing::random_demands(rng, topo, 0.1, 0.6);
    auto rep = dpc_spm(topo, r);
    REQUIRE(rep.converged);
    auto p = assemble_full_solution(topo, r, rep.q_star);
    auto q = group_totals(topo, p);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t m = 0; m < 2; ++m)
        for (std::size_t j = 0; j < topo.group_size(i, m); ++j) {
          double rate = achievable_rate(topo, p, q, {i, m, j});
          CHECK(noma::testing::close_rel(rate, r.group(topo.group_id(i, m))[j], 1e-7));
        }
  }
}

TEST_CASE("property: the trace from zero rises monotonically") {
  std::mt19937_64 rng(27);
  for (int trial = 0; trial < 50; ++trial) {
    auto topo = random_topology(rng, {.cells = 3, .subchannels = 2, .min_users = 2, .max_users = 3});
    auto r = noma::testing::random_demands(rng, topo, 0.1, 0.6);
    auto rep = dpc_spm(topo, r, CellPowerVector(3, 2, 0.0));
    REQUIRE(rep.converged);
    REQUIRE(rep.trace.size() >= 2);
    for (std::size_t k = 1; k < rep.trace.size(); ++k) CHECK(rep.trace[k] >= rep.trace[k - 1]);
    CHECK(rep.trace.back() == doctest::Approx(rep.q_star.total()).epsilon(1e-9));
  }
}
