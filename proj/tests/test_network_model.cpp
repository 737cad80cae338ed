#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "noma/network_model.hpp"
#include "test_support.hpp"

using namespace noma;
using noma::testing::random_topology;
using noma::testing::uniform;

namespace {

// Two cells, one subchannel, two users per cell; cell 0 is the cell under test.
NetworkTopology two_cell_example() {
  NetworkTopology::Params p;
  p.num_cells = 2;
  p.num_subchannels = 1;
  p.bandwidth_hz = 1.0;
  p.noise_power_w = 0.1;
  p.budget_w = {10.0, 10.0};
  p.groups = {{{0, 0.5, {0.0, 0.1}}, {1, 1.0, {0.0, 0.2}}}, {{2, 0.5, {0.1, 0.0}}, {3, 1.0, {0.2, 0.0}}}};
  return NetworkTopology(std::move(p));
}

NetworkTopology single_group(std::vector<double> gains, double noise = 0.1) {
  NetworkTopology::Params p;
  p.num_cells = 1;
  p.num_subchannels = 1;
  p.bandwidth_hz = 1.0;
  p.noise_power_w = noise;
  p.budget_w = {100.0};
  std::vector<UserChannel> users;
  for (std::size_t j = 0; j < gains.size(); ++j) users.push_back({j, gains[j], {0.0}});
  p.groups = {users};
  return NetworkTopology(std::move(p));
}

}  // namespace

TEST_CASE("effective interference takes the worst decoder") {
  auto topo = two_cell_example();
  CellPowerVector q(2, 1);
  q(1, 0) = 1.0;
  CHECK(effective_interference(topo, q, {0, 0, 0}) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(effective_interference(topo, q, {0, 0, 1}) == doctest::Approx(0.3).epsilon(1e-12));
  q(1, 0) = 0.0;
  CHECK(effective_interference(topo, q, {0, 0, 0}) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(effective_interference(topo, q, {0, 0, 1}) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("single cell interference is noise only and ignores q") {
  auto topo = single_group({0.5, 1.0});
  for (double qv : {0.0, 3.0, 100.0}) {
    CellPowerVector q(1, 1, qv);
    auto h = effective_interference(topo, q);
    CHECK(h.group(0)[0] == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(h.group(0)[1] == doctest::Approx(0.1).epsilon(1e-12));
  }
}

TEST_CASE("unknown user index throws") {
  auto topo = two_cell_example();
  CellPowerVector q(2, 1);
  CHECK_THROWS(effective_interference(topo, q, {0, 0, 2}));
  CHECK_THROWS(effective_interference(topo, q, {2, 0, 0}));
  CHECK_THROWS(effective_interference(topo, q, {0, 1, 0}));
}

TEST_CASE("users are sorted by own gain with ties kept in id order") {
  NetworkTopology::Params p;
  p.num_cells = 1;
  p.num_subchannels = 1;
  p.bandwidth_hz = 1.0;
  p.noise_power_w = 0.1;
  p.budget_w = {1.0};
  p.groups = {{{7, 2.0, {0.0}}, {3, 1.0, {0.0}}, {5, 1.0, {0.0}}}};
  NetworkTopology topo(std::move(p));
  auto g = topo.group(0, 0);
  CHECK(g[0].id == 3);
  CHECK(g[1].id == 5);
  CHECK(g[2].id == 7);
}

TEST_CASE("invalid topologies are rejected") {
  auto make = [](auto mutate) {
    NetworkTopology::Params p;
    p.num_cells = 1;
    p.num_subchannels = 1;
    p.bandwidth_hz = 1.0;
    p.noise_power_w = 0.1;
    p.budget_w = {1.0};
    p.groups = {{{0, 1.0, {0.0}}}};
    mutate(p);
    return NetworkTopology(std::move(p));
  };
  CHECK_NOTHROW(make([](auto&) {}));
  CHECK_THROWS(make([](auto& p) { p.noise_power_w = 0.0; }));
  CHECK_THROWS(make([](auto& p) { p.bandwidth_hz = -1.0; }));
  CHECK_THROWS(make([](auto& p) { p.budget_w = {0.0}; }));
  CHECK_THROWS(make([](auto& p) { p.groups[0][0].own_gain = 0.0; }));
  CHECK_THROWS(make([](auto& p) { p.groups[0].clear(); }));
  CHECK_THROWS(make([](auto& p) { p.groups.push_back(p.groups[0]); }));
  CHECK_THROWS(make([](auto& p) { p.groups[0][0].cross_gain = {}; }));
}

TEST_CASE("rates of the worked examples") {
  auto one = single_group({1.0}, 1.0);
  UserPowerAllocation p1(std::vector<std::vector<double>>{{1.0}});
  CellPowerVector q1(1, 1, 1.0);
  CHECK(achievable_rate(one, p1, q1, {0, 0, 0}) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(sic_rate(1.0, 4.0, 1.0, 3.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sic_rate(1.0, 1.0, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sic_rate(1.0, 0.0, 1.0, 3.0) == 0.0);

  // Own gains (1/3, 1) with unit noise give H = (3, 1).
  auto two = single_group({1.0 / 3.0, 1.0}, 1.0);
  UserPowerAllocation p({{4.0, 1.0}});
  CellPowerVector q(1, 1, 5.0);
  CHECK(achievable_rate(two, p, q, {0, 0, 0}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(achievable_rate(two, p, q, {0, 0, 1}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rate constraint slack") {
  auto two = single_group({1.0 / 3.0, 1.0}, 1.0);
  RateDemands r({{1.0, 1.0}});
  CellPowerVector q(1, 1, 5.0);
  auto tight = check_rate_constraint(two, UserPowerAllocation({{4.0, 1.0}}), q, r);
  CHECK(tight[0][0].satisfied);
  CHECK(tight[0][1].satisfied);
  CHECK(tight[0][0].slack_w == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(tight[0][1].slack_w) < 1e-12);

  auto short_strong = check_rate_constraint(two, UserPowerAllocation({{4.0, 0.9}}), q, r);
  CHECK_FALSE(short_strong[0][1].satisfied);
  CHECK(short_strong[0][1].slack_w == doctest::Approx(-0.1).epsilon(1e-12));

  RateDemands tiny({{1e-12, 1e-12}});
  auto any = check_rate_constraint(two, UserPowerAllocation({{1e-6, 1e-6}}), q, tiny);
  CHECK(any[0][0].satisfied);
  CHECK(any[0][1].satisfied);
}

TEST_CASE("group of one user is allowed") {
  auto one = single_group({2.0}, 0.5);
  CellPowerVector q(1, 1, 3.0);
  CHECK(effective_interference(one, q, {0, 0, 0}) == doctest::Approx(0.25));
  UserPowerAllocation p(std::vector<std::vector<double>>{{3.0}});
  CHECK(achievable_rate(one, p, q, {0, 0, 0}) == doctest::Approx(std::log2(13.0)));
}

TEST_CASE("property: H is non-increasing along the sorted index") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    auto topo = random_topology(rng, {.cells = 3, .subchannels = 2, .min_users = 1, .max_users = 4});
    auto q = noma::testing::random_power(rng, topo, 5.0);
    auto h = effective_interference(topo, q);
    for (std::size_t g = 0; g < h.num_groups(); ++g)
      for (std::size_t j = 1; j < h.group(g).size(); ++j) CHECK(h.group(g)[j - 1] >= h.group(g)[j]);
  }
}

TEST_CASE("property: H is monotone in q and strictly sub-homogeneous") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    auto topo = random_topology(rng, {.cells = 3, .subchannels = 2, .min_users = 1, .max_users = 3});
    auto q2 = noma::testing::random_power(rng, topo, 5.0);
    auto q1 = q2;
    for (double& v : q1.values()) v += uniform(rng, 0.0, 2.0);
    const double lambda = uniform(rng, 1.0 + 1e-3, 10.0);
    auto scaled = q2;
    for (double& v : scaled.values()) v *= lambda;

    auto h1 = effective_interference(topo, q1);
    auto h2 = effective_interference(topo, q2);
    auto hs = effective_interference(topo, scaled);
    for (std::size_t g = 0; g < h1.num_groups(); ++g)
      for (std::size_t j = 0; j < h1.group(g).size(); ++j) {
        CHECK(h1.group(g)[j] >= h2.group(g)[j]);
        CHECK(lambda * h2.group(g)[j] > hs.group(g)[j]);
      }
  }
}

TEST_CASE("property: rate equals the minimum over decoders") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    auto topo = random_topology(rng, {.cells = 2, .subchannels = 2, .min_users = 1, .max_users = 4});
    auto p = topo.make_per_user<UserPowerTag>();
    for (auto& g : p.groups())
      for (double& v : g) v = uniform(rng, 0.0, 3.0);
    auto q = group_totals(topo, p);
    for (std::size_t i = 0; i < topo.num_cells(); ++i)
      for (std::size_t m = 0; m < topo.num_subchannels(); ++m)
        for (std::size_t j = 0; j < topo.group_size(i, m); ++j) {
          double a = achievable_rate(topo, p, q, {i, m, j});
          double b = achievable_rate_by_decoders(topo, p, q, {i, m, j});
          CHECK(noma::testing::close_rel(a, b, 1e-12));
        }
  }
}

TEST_CASE("group totals and containers") {
  auto topo = two_cell_example();
  UserPowerAllocation p({{1.0, 2.0}, {0.5, 0.25}});
  auto q = group_totals(topo, p);
  CHECK(q(0, 0) == 3.0);
  CHECK(q(1, 0) == 0.75);
  CHECK(q.total() == 3.75);
  CHECK(q.cell_total(1) == 0.75);
  CHECK_THROWS(topo.check_shape(UserPowerAllocation(std::vector<std::vector<double>>{{1.0}}), "p"));
  CHECK(rate_factor(2.0, 1.0) == doctest::Approx(4.0));
  CHECK_THROWS(check_demands(topo, RateDemands({{1.0, 0.0}, {1.0, 1.0}})));
  CHECK_NOTHROW(check_demands(topo, uniform_demands(topo, 1.0)));
}
