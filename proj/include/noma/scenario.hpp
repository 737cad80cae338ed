#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "noma/network_model.hpp"

namespace noma::scenario {

/// Malformed or out-of-range scenario configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Layout { three_site, hex, custom };
enum class Pairing { ss, sw, sm };
enum class Algorithm { power_min, rate_max };
enum class OutputFormat { csv, json };

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct PathLossModel {
  double intercept_db = 128.1;
  double slope_db_per_decade = 37.6;
};

struct Tolerances {
  /// Fixed-point residual bound for power minimization (W).
  double spm_tolerance_w = 1e-8;
  std::size_t spm_max_iterations = 10000;
  /// Outer stopping threshold for rate maximization, bit/s per Hz.
  double srm_epsilon = 1e-3;
  std::size_t srm_max_outer_iterations = 200;
};

struct ScenarioConfig {
  Layout layout = Layout::three_site;
  std::size_t cells = 3;
  double inter_site_distance_m = 800.0;
  /// Only for the custom layout; users are dropped within inter_site_distance_m / sqrt(3) of each site.
  std::vector<Point> sites_m;
  std::size_t users_per_cell = 4;
  std::size_t users_per_subchannel = 2;
  std::size_t subchannels = 2;
  double bandwidth_hz = 1e6;
  double noise_dbm = -114.0;
  std::vector<double> power_sweep_dbm{46.0};
  /// One value for every user, or one per user in id order (cell-major).
  std::vector<double> rate_bps{3e5};
  PathLossModel pathloss;
  double shadowing_std_db = 8.0;
  double antenna_gain_dbi = 14.0;
  double min_distance_m = 10.0;
  Pairing pairing = Pairing::sw;
  std::uint64_t seed = 1;
  std::size_t seeds = 1;
  Algorithm algorithm = Algorithm::power_min;
  Tolerances tolerances;
  std::size_t multistart = 1;
  /// Explicit channels, groups[i * subchannels + m]; replaces geometry and pairing.
  std::optional<std::vector<std::vector<UserChannel>>> groups;
};

/// Parses a configuration document. Unknown keys and invalid values throw ConfigError.
ScenarioConfig parse_config(const nlohmann::json& document);
ScenarioConfig load_config(const std::filesystem::path& path);

std::string to_string(Pairing pairing);
std::string to_string(Algorithm algorithm);
Pairing parse_pairing(const std::string& name);
Algorithm parse_algorithm(const std::string& name);

/// 10^{(dbm - 30) / 10}.
double dbm_to_watt(double dbm);

/// intercept + slope * log10(d), d in km.
double path_loss_db(double distance_km, const PathLossModel& model);

/// Linear gain for a link: 10^{(antenna_gain - path_loss(d) + shadow) / 10}.
double link_gain(double distance_m, double shadow_db, const ScenarioConfig& config);

/// Site coordinates of the configured layout.
std::vector<Point> site_positions(const ScenarioConfig& config);

/// User-to-site distance; the three-site layout measures on a torus so every site has six neighbors.
double site_distance(const ScenarioConfig& config, const Point& user, std::size_t site);

/// Splits users listed weakest first into groups of `group_size`, each group weakest first.
///
/// With K = n / group_size groups, the users are cut into group_size tiers of K
/// (strongest tier first, each tier strongest first). Group k takes
///   ss: the k-th block of consecutive users from the top;
///   sm: the k-th user of every tier;
///   sw: the k-th user of even tiers and the k-th weakest of odd tiers.
std::vector<std::vector<std::size_t>> pair_users(std::span<const std::size_t> ascending_users, Pairing method,
                                                 std::size_t group_size);

/// Per-user channels of one drop: users[c][k] is user k of cell c, id c * users_per_cell + k.
std::vector<std::vector<UserChannel>> drop_users(const ScenarioConfig& config, std::uint64_t seed);

/// Drop, pair and assemble the topology with every budget set to `budget_dbm`
/// (defaults to the first sweep entry). Deterministic in (config, seed).
NetworkTopology generate_channels(const ScenarioConfig& config, std::uint64_t seed,
                                  std::optional<double> budget_dbm = std::nullopt);

RateDemands scenario_demands(const ScenarioConfig& config, const NetworkTopology& topology);

struct TraceTable {
  std::string file;
  std::string objective_unit;
  std::vector<double> objective;
};

struct SummaryRow {
  std::uint64_t seed = 0;
  double q_dbm = 0.0;
  Algorithm algorithm = Algorithm::power_min;
  Pairing pairing = Pairing::sw;
  double sum_power_w = 0.0;
  double sum_rate_bps = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::string trace_file;
  /// Converged rows only: every rate within 1e-6 relative of its demand and every budget met.
  bool validated = true;
  std::string note;
};

struct AllocationRow {
  std::uint64_t seed = 0;
  double q_dbm = 0.0;
  std::size_t cell = 0;
  std::size_t subchannel = 0;
  std::size_t position = 0;
  std::size_t user_id = 0;
  double power_w = 0.0;
  double rate_bps = 0.0;
  double demand_bps = 0.0;
};

struct RunArtifacts {
  std::vector<SummaryRow> summary;
  std::vector<TraceTable> traces;
  std::vector<AllocationRow> allocations;

  bool all_validated() const;
};

/// Every seed in [seed, seed + seeds) and every sweep entry, in that order.
RunArtifacts run_scenario(const ScenarioConfig& config);

/// Shortest round-trip decimal text of `v`.
std::string format_number(double v);

std::string summary_csv(const RunArtifacts& artifacts);
std::string trace_csv(const TraceTable& trace);
std::string allocations_csv(const RunArtifacts& artifacts);
nlohmann::json to_json(const RunArtifacts& artifacts);

/// Writes summary, allocations and one file per trace under `directory`.
void write_artifacts(const RunArtifacts& artifacts, const std::filesystem::path& directory, OutputFormat format);

struct Fixture {
  std::string name;
  ScenarioConfig config;
  /// "sum_power_w" or "sum_rate_bps".
  std::string metric;
  double expected = 0.0;
  double tolerance = 0.0;
};

struct FixtureResult {
  std::string name;
  double value = 0.0;
  double expected = 0.0;
  bool passed = false;
};

/// Analytic instances with known answers.
std::vector<Fixture> builtin_fixtures();
FixtureResult run_fixture(const Fixture& fixture);

}  // namespace noma::scenario
