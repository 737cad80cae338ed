#include "noma/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "noma/rate_max_multicell.hpp"
#include "noma/sum_power_min.hpp"

namespace noma::scenario {

namespace {

using nlohmann::json;

/// Reads keys of one JSON object and rejects any key never asked for.
class ObjectReader {
 public:
  ObjectReader(const json& object, std::string context) : object_(object), context_(std::move(context)) {
    if (!object_.is_object()) throw ConfigError(where("") + "expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return object_.contains(key);
  }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return object_.at(key);
  }

  template <class T>
  T get(const std::string& key, T fallback) {
    if (!has(key)) return fallback;
    try {
      return object_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(where(key) + "wrong type");
    }
  }

  void finish() const {
    for (const auto& item : object_.items())
      if (!seen_.count(item.key())) throw ConfigError(where(item.key()) + "unknown key");
  }

  std::string where(const std::string& key) const {
    std::string path = context_.empty() ? key : (key.empty() ? context_ : context_ + "." + key);
    return "config" + (path.empty() ? std::string() : " '" + path + "'") + ": ";
  }

 private:
  const json& object_;
  std::string context_;
  std::set<std::string> seen_;
};

std::vector<double> number_or_list(const json& value, const std::string& what) {
  try {
    if (value.is_number()) return {value.get<double>()};
    return value.get<std::vector<double>>();
  } catch (const json::exception&) {
    throw ConfigError("config '" + what + "': expected a number or a list of numbers");
  }
}

void require(bool condition, const std::string& message) {
  if (!condition) throw ConfigError("config: " + message);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

Layout parse_layout(const std::string& name) {
  if (name == "three-site") return Layout::three_site;
  if (name == "hex") return Layout::hex;
  if (name == "custom") return Layout::custom;
  throw ConfigError("config 'layout': expected three-site, hex or custom");
}

std::vector<std::vector<UserChannel>> parse_groups(const json& value) {
  if (!value.is_array()) throw ConfigError("config 'groups': expected a list of groups");
  std::vector<std::vector<UserChannel>> groups;
  std::size_t next_id = 0;
  for (std::size_t g = 0; g < value.size(); ++g) {
    if (!value[g].is_array()) throw ConfigError("config 'groups': each group must be a list of users");
    std::vector<UserChannel> users;
    for (std::size_t u = 0; u < value[g].size(); ++u) {
      ObjectReader r(value[g][u], "groups[" + std::to_string(g) + "][" + std::to_string(u) + "]");
      UserChannel ch;
      ch.id = r.get<std::size_t>("id", next_id);
      ch.own_gain = r.get<double>("own_gain", 0.0);
      ch.cross_gain = r.get<std::vector<double>>("cross_gain", {});
      r.finish();
      next_id = std::max(next_id, ch.id + 1);
      users.push_back(std::move(ch));
    }
    groups.push_back(std::move(users));
  }
  return groups;
}

void validate(const ScenarioConfig& c) {
  require(c.cells >= 1, "cells must be >= 1");
  require(c.users_per_cell >= 1 && c.users_per_subchannel >= 1, "user counts must be >= 1");
  require(c.users_per_cell % c.users_per_subchannel == 0, "users_per_subchannel must divide users_per_cell");
  require(c.subchannels == c.users_per_cell / c.users_per_subchannel,
          "subchannels must equal users_per_cell / users_per_subchannel");
  require(finite_positive(c.inter_site_distance_m), "inter_site_distance_m must be > 0");
  require(finite_positive(c.bandwidth_hz), "bandwidth_hz must be > 0");
  require(std::isfinite(c.noise_dbm), "noise_dbm must be finite");
  require(!c.power_sweep_dbm.empty(), "power_sweep_dbm must not be empty");
  for (double q : c.power_sweep_dbm) require(std::isfinite(q), "power_sweep_dbm entries must be finite");
  require(!c.rate_bps.empty(), "rate_bps must not be empty");
  for (double r : c.rate_bps) require(finite_positive(r), "rate_bps entries must be > 0");
  require(std::isfinite(c.pathloss.intercept_db), "pathloss.intercept_db must be finite");
  require(finite_positive(c.pathloss.slope_db_per_decade), "pathloss.slope_db_per_decade must be > 0");
  require(std::isfinite(c.shadowing_std_db) && c.shadowing_std_db >= 0.0, "shadowing_std_db must be >= 0");
  require(std::isfinite(c.antenna_gain_dbi), "antenna_gain_dbi must be finite");
  require(finite_positive(c.min_distance_m) && c.min_distance_m < c.inter_site_distance_m / std::sqrt(3.0),
          "min_distance_m must be > 0 and inside the cell");
  require(c.seeds >= 1, "seeds must be >= 1");
  require(c.multistart >= 1, "multistart must be >= 1");
  require(finite_positive(c.tolerances.spm_tolerance_w), "tolerances.spm_tolerance_w must be > 0");
  require(finite_positive(c.tolerances.srm_epsilon), "tolerances.srm_epsilon must be > 0");
  require(c.tolerances.spm_max_iterations >= 1 && c.tolerances.srm_max_outer_iterations >= 1,
          "iteration limits must be >= 1");
  if (c.layout == Layout::three_site) require(c.cells == 3, "the three-site layout has 3 cells");
  if (c.layout == Layout::custom) require(c.sites_m.size() == c.cells, "sites_m must list one site per cell");
  if (c.groups) {
    require(c.groups->size() == c.cells * c.subchannels, "groups must list cells * subchannels groups");
    for (const auto& g : *c.groups) {
      require(!g.empty(), "every group needs at least one user");
      for (const auto& u : g) {
        require(finite_positive(u.own_gain), "own_gain must be > 0");
        require(u.cross_gain.size() == c.cells, "cross_gain needs one entry per cell");
        for (double x : u.cross_gain) require(std::isfinite(x) && x >= 0.0, "cross_gain entries must be >= 0");
      }
    }
  } else {
    require(c.rate_bps.size() == 1 || c.rate_bps.size() == c.cells * c.users_per_cell,
            "rate_bps needs 1 or cells * users_per_cell entries");
  }
}

/// Pointy-top hexagon of circumradius r centred at the origin.
bool inside_hexagon(double x, double y, double r) {
  return std::abs(x) <= r * std::sqrt(3.0) / 2.0 && std::abs(y) + std::abs(x) / std::sqrt(3.0) <= r;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << content;
}

void validate_row(SummaryRow& row, const NetworkTopology& topology, const RateDemands& demands,
                  const UserPowerAllocation& p, const CellPowerVector& q) {
  for (std::size_t i = 0; i < topology.num_cells(); ++i)
    if (q.cell_total(i) > topology.budget(i) * (1.0 + 1e-9)) row.validated = false;
  for (std::size_t g = 0; g < topology.num_groups(); ++g) {
    auto [i, m] = topology.group_index(g);
    double total = 0.0;
    for (std::size_t j = 0; j < p.group(g).size(); ++j) {
      if (p.group(g)[j] < 0.0) row.validated = false;
      total += p.group(g)[j];
      if (achievable_rate(topology, p, q, {i, m, j}) < demands.group(g)[j] * (1.0 - 1e-6)) row.validated = false;
    }
    if (std::abs(total - q(i, m)) > 1e-9 * q(i, m)) row.validated = false;
  }
  if (!row.validated && row.note.empty()) row.note = "validation failed";
}

void record_allocation(RunArtifacts& out, const SummaryRow& row, const NetworkTopology& topology,
                       const RateDemands& demands, const UserPowerAllocation& p, const CellPowerVector& q) {
  for (std::size_t g = 0; g < topology.num_groups(); ++g) {
    auto [i, m] = topology.group_index(g);
    for (std::size_t j = 0; j < p.group(g).size(); ++j)
      out.allocations.push_back({row.seed, row.q_dbm, i, m, j, topology.group(g)[j].id, p.group(g)[j],
                                 achievable_rate(topology, p, q, {i, m, j}), demands.group(g)[j]});
  }
}

double total_rate(const NetworkTopology& topology, const UserPowerAllocation& p, const CellPowerVector& q) {
  double rate = 0.0;
  for (std::size_t g = 0; g < topology.num_groups(); ++g) {
    auto [i, m] = topology.group_index(g);
    for (std::size_t j = 0; j < p.group(g).size(); ++j) rate += achievable_rate(topology, p, q, {i, m, j});
  }
  return rate;
}

}  // namespace

ScenarioConfig parse_config(const json& document) {
  ObjectReader r(document, "");
  ScenarioConfig c;
  c.layout = parse_layout(r.get<std::string>("layout", "three-site"));
  if (r.has("sites_m")) {
    try {
      for (const auto& xy : r.raw("sites_m").get<std::vector<std::vector<double>>>()) {
        if (xy.size() != 2) throw ConfigError("config 'sites_m': each site is [x, y]");
        c.sites_m.push_back({xy[0], xy[1]});
      }
    } catch (const json::exception&) {
      throw ConfigError("config 'sites_m': expected a list of [x, y]");
    }
  }
  std::size_t default_cells = c.layout == Layout::custom ? c.sites_m.size() : 3;
  c.cells = r.get<std::size_t>("cells", default_cells);
  c.inter_site_distance_m = r.get<double>("inter_site_distance_m", c.inter_site_distance_m);
  c.users_per_cell = r.get<std::size_t>("users_per_cell", c.users_per_cell);
  c.users_per_subchannel = r.get<std::size_t>("users_per_subchannel", c.users_per_subchannel);
  require(c.users_per_subchannel >= 1, "users_per_subchannel must be >= 1");
  c.subchannels = r.get<std::size_t>("subchannels", c.users_per_cell / c.users_per_subchannel);
  c.bandwidth_hz = r.get<double>("bandwidth_hz", c.bandwidth_hz);
  c.noise_dbm = r.get<double>("noise_dbm", c.noise_dbm);
  if (r.has("power_sweep_dbm")) c.power_sweep_dbm = number_or_list(r.raw("power_sweep_dbm"), "power_sweep_dbm");
  if (r.has("rate_bps")) c.rate_bps = number_or_list(r.raw("rate_bps"), "rate_bps");
  if (r.has("pathloss")) {
    ObjectReader pl(r.raw("pathloss"), "pathloss");
    c.pathloss.intercept_db = pl.get<double>("intercept_db", c.pathloss.intercept_db);
    c.pathloss.slope_db_per_decade = pl.get<double>("slope_db_per_decade", c.pathloss.slope_db_per_decade);
    pl.finish();
  }
  c.shadowing_std_db = r.get<double>("shadowing_std_db", c.shadowing_std_db);
  c.antenna_gain_dbi = r.get<double>("antenna_gain_dbi", c.antenna_gain_dbi);
  c.min_distance_m = r.get<double>("min_distance_m", c.min_distance_m);
  c.pairing = parse_pairing(r.get<std::string>("pairing", to_string(c.pairing)));
  c.seed = r.get<std::uint64_t>("seed", c.seed);
  c.seeds = r.get<std::size_t>("seeds", c.seeds);
  c.algorithm = parse_algorithm(r.get<std::string>("algorithm", to_string(c.algorithm)));
  if (r.has("tolerances")) {
    ObjectReader t(r.raw("tolerances"), "tolerances");
    c.tolerances.spm_tolerance_w = t.get<double>("spm_tolerance_w", c.tolerances.spm_tolerance_w);
    c.tolerances.spm_max_iterations = t.get<std::size_t>("spm_max_iterations", c.tolerances.spm_max_iterations);
    c.tolerances.srm_epsilon = t.get<double>("srm_epsilon", c.tolerances.srm_epsilon);
    c.tolerances.srm_max_outer_iterations =
        t.get<std::size_t>("srm_max_outer_iterations", c.tolerances.srm_max_outer_iterations);
    t.finish();
  }
  c.multistart = r.get<std::size_t>("multistart", c.multistart);
  if (r.has("groups")) c.groups = parse_groups(r.raw("groups"));
  r.finish();
  validate(c);
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("config: cannot open " + path.string());
  json document;
  try {
    is >> document;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: parse error: ") + e.what());
  }
  return parse_config(document);
}

std::string to_string(Pairing pairing) {
  switch (pairing) {
    case Pairing::ss: return "SS";
    case Pairing::sw: return "SW";
    case Pairing::sm: return "SM";
  }
  return "?";
}

std::string to_string(Algorithm algorithm) {
  return algorithm == Algorithm::power_min ? "power-min" : "rate-max";
}

Pairing parse_pairing(const std::string& name) {
  if (name == "SS") return Pairing::ss;
  if (name == "SW") return Pairing::sw;
  if (name == "SM") return Pairing::sm;
  throw ConfigError("config 'pairing': expected SS, SW or SM");
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "power-min") return Algorithm::power_min;
  if (name == "rate-max") return Algorithm::rate_max;
  throw ConfigError("config 'algorithm': expected power-min or rate-max");
}

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double path_loss_db(double distance_km, const PathLossModel& model) {
  if (!(distance_km > 0.0)) throw std::domain_error("path_loss_db: distance must be > 0");
  return model.intercept_db + model.slope_db_per_decade * std::log10(distance_km);
}

double link_gain(double distance_m, double shadow_db, const ScenarioConfig& config) {
  double db = config.antenna_gain_dbi - path_loss_db(distance_m / 1000.0, config.pathloss) + shadow_db;
  return std::pow(10.0, db / 10.0);
}

std::vector<Point> site_positions(const ScenarioConfig& config) {
  const double d = config.inter_site_distance_m;
  const Point a1{d, 0.0};
  const Point a2{d / 2.0, d * std::sqrt(3.0) / 2.0};
  switch (config.layout) {
    case Layout::custom: return config.sites_m;
    case Layout::three_site: return {{0.0, 0.0}, a1, a2};
    case Layout::hex: break;
  }
  // Lattice points u a1 + v a2 ordered by ring, then by angle.
  struct Candidate {
    int ring;
    double angle;
    Point p;
  };
  std::vector<Candidate> candidates;
  int rings = 0;
  while (static_cast<std::size_t>(3 * rings * (rings + 1) + 1) < config.cells) ++rings;
  for (int u = -rings; u <= rings; ++u)
    for (int v = -rings; v <= rings; ++v) {
      int ring = std::max({std::abs(u), std::abs(v), std::abs(u + v)});
      if (ring > rings) continue;
      Point p{u * a1.x + v * a2.x, u * a1.y + v * a2.y};
      double angle = ring == 0 ? 0.0 : std::atan2(p.y, p.x);
      if (angle < 0.0) angle += 2.0 * std::numbers::pi;
      candidates.push_back({ring, angle, p});
    }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return a.ring != b.ring ? a.ring < b.ring : a.angle < b.angle;
  });
  std::vector<Point> sites;
  for (std::size_t k = 0; k < config.cells; ++k) sites.push_back(candidates[k].p);
  return sites;
}

double site_distance(const ScenarioConfig& config, const Point& user, std::size_t site) {
  const auto sites = site_positions(config);
  const Point s = sites.at(site);
  if (config.layout != Layout::three_site) return std::hypot(user.x - s.x, user.y - s.y);
  // Three-site torus: periods a1 + a2 and 2 a2 - a1.
  const double d = config.inter_site_distance_m;
  const Point u1{1.5 * d, d * std::sqrt(3.0) / 2.0};
  const Point u2{0.0, d * std::sqrt(3.0)};
  double best = std::numeric_limits<double>::infinity();
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b)
      best = std::min(best, std::hypot(user.x - s.x - a * u1.x - b * u2.x, user.y - s.y - a * u1.y - b * u2.y));
  return best;
}

std::vector<std::vector<std::size_t>> pair_users(std::span<const std::size_t> ascending_users, Pairing method,
                                                 std::size_t group_size) {
  const std::size_t n = ascending_users.size();
  if (group_size == 0 || n == 0 || n % group_size != 0)
    throw std::invalid_argument("pair_users: group size must divide the user count");
  const std::size_t K = n / group_size;
  // rank r = 0 is the strongest user.
  auto by_rank = [&](std::size_t r) { return ascending_users[n - 1 - r]; };
  std::vector<std::vector<std::size_t>> groups(K);
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t t = 0; t < group_size; ++t) {
      std::size_t rank = 0;
      switch (method) {
        case Pairing::ss: rank = k * group_size + t; break;
        case Pairing::sm: rank = t * K + k; break;
        case Pairing::sw: rank = t * K + (t % 2 == 0 ? k : K - 1 - k); break;
      }
      groups[k].push_back(by_rank(rank));
    }
    std::reverse(groups[k].begin(), groups[k].end());
  }
  return groups;
}

std::vector<std::vector<UserChannel>> drop_users(const ScenarioConfig& config, std::uint64_t seed) {
  const auto sites = site_positions(config);
  const double radius = config.inter_site_distance_m / std::sqrt(3.0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> box(-radius, radius);
  std::normal_distribution<double> shadow(0.0, 1.0);

  std::vector<std::vector<UserChannel>> users(config.cells);
  for (std::size_t c = 0; c < config.cells; ++c) {
    for (std::size_t k = 0; k < config.users_per_cell; ++k) {
      double x = 0.0, y = 0.0;
      do {
        x = box(rng);
        y = box(rng);
      } while (!inside_hexagon(x, y, radius) || std::hypot(x, y) < config.min_distance_m);
      const Point at{sites[c].x + x, sites[c].y + y};
      UserChannel u;
      u.id = c * config.users_per_cell + k;
      u.cross_gain.resize(config.cells);
      for (std::size_t s = 0; s < config.cells; ++s) {
        double d = std::max(site_distance(config, at, s), config.min_distance_m);
        u.cross_gain[s] = link_gain(d, config.shadowing_std_db * shadow(rng), config);
      }
      u.own_gain = u.cross_gain[c];
      users[c].push_back(std::move(u));
    }
  }
  return users;
}

NetworkTopology generate_channels(const ScenarioConfig& config, std::uint64_t seed, std::optional<double> budget_dbm) {
  NetworkTopology::Params params;
  params.num_cells = config.cells;
  params.num_subchannels = config.subchannels;
  params.bandwidth_hz = config.bandwidth_hz;
  params.noise_power_w = dbm_to_watt(config.noise_dbm);
  params.budget_w.assign(config.cells, dbm_to_watt(budget_dbm.value_or(config.power_sweep_dbm.front())));
  if (config.groups) {
    params.groups = *config.groups;
    return NetworkTopology(std::move(params));
  }
  for (auto& cell_users : drop_users(config, seed)) {
    std::vector<std::size_t> order(cell_users.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return cell_users[a].own_gain < cell_users[b].own_gain; });
    for (const auto& members : pair_users(order, config.pairing, config.users_per_subchannel)) {
      std::vector<UserChannel> group;
      for (std::size_t k : members) group.push_back(cell_users[k]);
      params.groups.push_back(std::move(group));
    }
  }
  return NetworkTopology(std::move(params));
}

RateDemands scenario_demands(const ScenarioConfig& config, const NetworkTopology& topology) {
  auto demands = topology.make_per_user<RateDemandTag>();
  for (std::size_t g = 0; g < topology.num_groups(); ++g)
    for (std::size_t j = 0; j < topology.group(g).size(); ++j) {
      std::size_t id = topology.group(g)[j].id;
      if (config.rate_bps.size() == 1) {
        demands.group(g)[j] = config.rate_bps.front();
      } else {
        if (id >= config.rate_bps.size()) throw ConfigError("config 'rate_bps': no entry for user " + std::to_string(id));
        demands.group(g)[j] = config.rate_bps[id];
      }
    }
  return demands;
}

bool RunArtifacts::all_validated() const {
  return std::all_of(summary.begin(), summary.end(), [](const SummaryRow& r) { return r.validated; });
}

RunArtifacts run_scenario(const ScenarioConfig& config) {
  validate(config);
  RunArtifacts out;
  for (std::size_t s = 0; s < config.seeds; ++s) {
    const std::uint64_t seed = config.seed + s;
    for (std::size_t k = 0; k < config.power_sweep_dbm.size(); ++k) {
      const double q_dbm = config.power_sweep_dbm[k];
      NetworkTopology topology = generate_channels(config, seed, q_dbm);
      RateDemands demands = scenario_demands(config, topology);

      SummaryRow row;
      row.seed = seed;
      row.q_dbm = q_dbm;
      row.algorithm = config.algorithm;
      row.pairing = config.pairing;
      row.trace_file = "traces/" + to_string(config.algorithm) + "_" + to_string(config.pairing) + "_seed" +
                       std::to_string(seed) + "_q" + std::to_string(k);
      TraceTable trace{row.trace_file, config.algorithm == Algorithm::power_min ? "W" : "bit/s", {}};

      if (config.algorithm == Algorithm::power_min) {
        FixedPointOptions opts;
        opts.tolerance = config.tolerances.spm_tolerance_w;
        opts.max_iterations = config.tolerances.spm_max_iterations;
        auto report = dpc_spm(topology, demands, std::nullopt, opts);
        trace.objective = report.trace;
        row.iterations = report.iterations;
        row.sum_power_w = report.q_star.total();
        row.converged = report.feasible();
        row.sum_rate_bps = std::numeric_limits<double>::quiet_NaN();
        if (!report.converged) row.note = "fixed point not reached";
        else if (!report.feasible()) row.note = "budget exceeded";
        if (row.converged) {
          try {
            auto p = assemble_full_solution(topology, demands, report.q_star);
            row.sum_rate_bps = total_rate(topology, p, report.q_star);
            validate_row(row, topology, demands, p, report.q_star);
            record_allocation(out, row, topology, demands, p, report.q_star);
          } catch (const std::invalid_argument& e) {
            row.validated = false;
            row.note = e.what();
          }
        }
      } else {
        try {
          SrmOptions opts;
          opts.epsilon = config.tolerances.srm_epsilon;
          opts.max_outer_iterations = config.tolerances.srm_max_outer_iterations;
          SrmReport report = config.multistart > 1
                                 ? dpc_srm_multistart(topology, demands, config.multistart, seed, opts)
                                 : dpc_srm(topology, demands, std::nullopt, opts);
          trace.objective = report.trace;
          row.iterations = report.outer_iterations;
          row.sum_power_w = report.q.total();
          row.sum_rate_bps = report.sum_rate;
          row.converged = report.converged;
          row.note = report.diagnostic;
          if (row.converged) {
            validate_row(row, topology, demands, report.p, report.q);
            record_allocation(out, row, topology, demands, report.p, report.q);
          }
        } catch (const InfeasibleProblemError& e) {
          row.converged = false;
          row.sum_power_w = std::numeric_limits<double>::quiet_NaN();
          row.sum_rate_bps = std::numeric_limits<double>::quiet_NaN();
          row.note = e.what();
        }
      }
      out.summary.push_back(std::move(row));
      out.traces.push_back(std::move(trace));
    }
  }
  return out;
}

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string summary_csv(const RunArtifacts& artifacts) {
  std::string out =
      "seed,Q (dBm),algorithm,pairing,sum_power (W),sum_rate (bit/s),iterations,converged,trace_file,validated,note\n";
  for (const auto& r : artifacts.summary) {
    out += std::to_string(r.seed) + "," + format_number(r.q_dbm) + "," + to_string(r.algorithm) + "," +
           to_string(r.pairing) + "," + format_number(r.sum_power_w) + "," + format_number(r.sum_rate_bps) + "," +
           std::to_string(r.iterations) + "," + (r.converged ? "true" : "false") + "," + r.trace_file + ".csv," +
           (r.validated ? "true" : "false") + "," + csv_field(r.note) + "\n";
  }
  return out;
}

std::string trace_csv(const TraceTable& trace) {
  std::string out = "iteration,objective (" + trace.objective_unit + ")\n";
  for (std::size_t k = 0; k < trace.objective.size(); ++k)
    out += std::to_string(k) + "," + format_number(trace.objective[k]) + "\n";
  return out;
}

std::string allocations_csv(const RunArtifacts& artifacts) {
  std::string out = "seed,Q (dBm),cell,subchannel,position,user_id,power (W),rate (bit/s),demand (bit/s)\n";
  for (const auto& a : artifacts.allocations)
    out += std::to_string(a.seed) + "," + format_number(a.q_dbm) + "," + std::to_string(a.cell) + "," +
           std::to_string(a.subchannel) + "," + std::to_string(a.position) + "," + std::to_string(a.user_id) + "," +
           format_number(a.power_w) + "," + format_number(a.rate_bps) + "," + format_number(a.demand_bps) + "\n";
  return out;
}

json to_json(const RunArtifacts& artifacts) {
  json summary = json::array();
  for (const auto& r : artifacts.summary)
    summary.push_back({{"seed", r.seed},
                       {"q_dbm", r.q_dbm},
                       {"algorithm", to_string(r.algorithm)},
                       {"pairing", to_string(r.pairing)},
                       {"sum_power_w", r.sum_power_w},
                       {"sum_rate_bps", r.sum_rate_bps},
                       {"iterations", r.iterations},
                       {"converged", r.converged},
                       {"trace_file", r.trace_file + ".json"},
                       {"validated", r.validated},
                       {"note", r.note}});
  json allocations = json::array();
  for (const auto& a : artifacts.allocations)
    allocations.push_back({{"seed", a.seed},
                           {"q_dbm", a.q_dbm},
                           {"cell", a.cell},
                           {"subchannel", a.subchannel},
                           {"position", a.position},
                           {"user_id", a.user_id},
                           {"power_w", a.power_w},
                           {"rate_bps", a.rate_bps},
                           {"demand_bps", a.demand_bps}});
  return {{"summary", summary}, {"allocations", allocations}};
}

void write_artifacts(const RunArtifacts& artifacts, const std::filesystem::path& directory, OutputFormat format) {
  if (format == OutputFormat::csv) {
    write_file(directory / "summary.csv", summary_csv(artifacts));
    write_file(directory / "allocations.csv", allocations_csv(artifacts));
    for (const auto& t : artifacts.traces) write_file(directory / (t.file + ".csv"), trace_csv(t));
    return;
  }
  write_file(directory / "summary.json", to_json(artifacts).dump(2) + "\n");
  for (const auto& t : artifacts.traces) {
    json doc = {{"objective_unit", t.objective_unit}, {"objective", t.objective}};
    write_file(directory / (t.file + ".json"), doc.dump(2) + "\n");
  }
}

std::vector<Fixture> builtin_fixtures() {
  std::vector<Fixture> fixtures;

  ScenarioConfig two_cell;
  two_cell.layout = Layout::custom;
  two_cell.cells = 2;
  two_cell.sites_m = {{0.0, 0.0}, {800.0, 0.0}};
  two_cell.users_per_cell = 2;
  two_cell.users_per_subchannel = 2;
  two_cell.subchannels = 1;
  two_cell.bandwidth_hz = 1.0;
  two_cell.noise_dbm = 20.0;  // 0.1 W
  two_cell.power_sweep_dbm = {40.0};
  two_cell.rate_bps = {1.0};
  two_cell.algorithm = Algorithm::power_min;
  two_cell.groups = std::vector<std::vector<UserChannel>>{
      {{0, 0.5, {0.0, 0.1}}, {1, 1.0, {0.0, 0.2}}},
      {{2, 0.5, {0.1, 0.0}}, {3, 1.0, {0.2, 0.0}}},
  };
  fixtures.push_back({"symmetric-two-cell-power-min", two_cell, "sum_power_w", 2.0, 1e-6});

  ScenarioConfig single;
  single.layout = Layout::custom;
  single.cells = 1;
  single.sites_m = {{0.0, 0.0}};
  single.users_per_cell = 2;
  single.users_per_subchannel = 2;
  single.subchannels = 1;
  single.bandwidth_hz = 1.0;
  single.noise_dbm = 30.0;  // 1 W, so H = (2, 1)
  single.power_sweep_dbm = {40.0};
  single.rate_bps = {1.0};
  single.algorithm = Algorithm::rate_max;
  single.groups = std::vector<std::vector<UserChannel>>{{{0, 0.5, {0.0}}, {1, 1.0, {0.0}}}};
  fixtures.push_back({"single-cell-rate-max", single, "sum_rate_bps", 1.0 + std::log2(5.0), 1e-6});
  return fixtures;
}

FixtureResult run_fixture(const Fixture& fixture) {
  RunArtifacts artifacts = run_scenario(fixture.config);
  const SummaryRow& row = artifacts.summary.front();
  FixtureResult result{fixture.name, fixture.metric == "sum_power_w" ? row.sum_power_w : row.sum_rate_bps,
                       fixture.expected, false};
  result.passed = row.converged && row.validated && std::abs(result.value - fixture.expected) <= fixture.tolerance;
  return result;
}

}  // namespace noma::scenario
