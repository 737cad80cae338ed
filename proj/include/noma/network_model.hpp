#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace noma {

/// Location of a (cell, subchannel) group.
struct GroupIndex {
  std::size_t cell = 0;
  std::size_t subchannel = 0;

  friend bool operator==(const GroupIndex&, const GroupIndex&) = default;
};

/// A user addressed by its group and its position in the ascending-gain order.
struct UserIndex {
  std::size_t cell = 0;
  std::size_t subchannel = 0;
  std::size_t position = 0;
};

/// One served user: linear power gains to its own BS and to every BS.
///
/// `cross_gain[k]` is |h_kjm|^2 from BS k to this user on the user's
/// subchannel; the entry for the serving cell is ignored.
struct UserChannel {
  std::size_t id = 0;
  double own_gain = 0.0;
  std::vector<double> cross_gain;
};

/// Per-user quantity laid out group by group, users in ascending own-gain order.
template <class Tag>
class PerUser {
 public:
  PerUser() = default;
  explicit PerUser(std::vector<std::vector<double>> groups) : groups_(std::move(groups)) {}

  std::size_t num_groups() const { return groups_.size(); }
  std::span<const double> group(std::size_t g) const { return groups_.at(g); }
  std::span<double> group(std::size_t g) { return groups_.at(g); }
  const std::vector<std::vector<double>>& groups() const { return groups_; }
  std::vector<std::vector<double>>& groups() { return groups_; }

 private:
  std::vector<std::vector<double>> groups_;
};

using UserPowerAllocation = PerUser<struct UserPowerTag>;
using RateDemands = PerUser<struct RateDemandTag>;
/// Interference proxy x (W-equivalent), one entry per user.
using AuxiliaryVector = PerUser<struct AuxiliaryTag>;
/// Effective interference H (W-equivalent), one entry per user.
using EffectiveInterference = PerUser<struct EffectiveInterferenceTag>;

/// Total transmit power q_im of every BS on every subchannel (W).
class CellPowerVector {
 public:
  CellPowerVector() = default;
  CellPowerVector(std::size_t num_cells, std::size_t num_subchannels, double fill = 0.0)
      : cells_(num_cells), subchannels_(num_subchannels), q_(num_cells * num_subchannels, fill) {}

  std::size_t num_cells() const { return cells_; }
  std::size_t num_subchannels() const { return subchannels_; }
  double& operator()(std::size_t i, std::size_t m) { return q_.at(i * subchannels_ + m); }
  double operator()(std::size_t i, std::size_t m) const { return q_.at(i * subchannels_ + m); }
  std::span<const double> values() const { return q_; }
  std::span<double> values() { return q_; }
  std::span<const double> cell(std::size_t i) const {
    return std::span<const double>(q_).subspan(i * subchannels_, subchannels_);
  }
  std::span<double> cell(std::size_t i) { return std::span<double>(q_).subspan(i * subchannels_, subchannels_); }
  double total() const;
  double cell_total(std::size_t i) const;

 private:
  std::size_t cells_ = 0;
  std::size_t subchannels_ = 0;
  std::vector<double> q_;
};

/// Immutable multi-cell NOMA downlink: groups, gains, noise, budgets.
///
/// Users of each group are sorted by own gain at construction (stable on
/// the caller's order, so ties keep the original id order).
class NetworkTopology {
 public:
  struct Params {
    std::size_t num_cells = 0;
    std::size_t num_subchannels = 0;
    double bandwidth_hz = 0.0;
    double noise_power_w = 0.0;
    std::vector<double> budget_w;
    /// groups[i * num_subchannels + m]; any order, sorted on construction.
    std::vector<std::vector<UserChannel>> groups;
  };

  explicit NetworkTopology(Params params);

  std::size_t num_cells() const { return cells_; }
  std::size_t num_subchannels() const { return subchannels_; }
  std::size_t num_groups() const { return groups_.size(); }
  double bandwidth() const { return bandwidth_; }
  double noise_power() const { return noise_; }
  double budget(std::size_t i) const { return budget_.at(i); }
  std::span<const double> budgets() const { return budget_; }

  std::size_t group_id(std::size_t i, std::size_t m) const;
  GroupIndex group_index(std::size_t g) const { return {g / subchannels_, g % subchannels_}; }
  std::span<const UserChannel> group(std::size_t i, std::size_t m) const { return groups_[group_id(i, m)]; }
  std::span<const UserChannel> group(std::size_t g) const { return groups_.at(g); }
  std::size_t group_size(std::size_t i, std::size_t m) const { return group(i, m).size(); }
  std::size_t num_users() const;

  /// Zero-filled per-user container shaped like this topology.
  template <class Tag>
  PerUser<Tag> make_per_user(double fill = 0.0) const {
    std::vector<std::vector<double>> v;
    v.reserve(groups_.size());
    for (const auto& g : groups_) v.emplace_back(g.size(), fill);
    return PerUser<Tag>(std::move(v));
  }

  /// Throws std::invalid_argument when `values` is not shaped like this topology.
  template <class Tag>
  void check_shape(const PerUser<Tag>& values, const char* what) const {
    bool ok = values.num_groups() == groups_.size();
    for (std::size_t g = 0; ok && g < groups_.size(); ++g) ok = values.group(g).size() == groups_[g].size();
    if (!ok) throw std::invalid_argument(std::string(what) + ": shape does not match topology");
  }
  void check_shape(const CellPowerVector& q) const;

 private:
  std::size_t cells_;
  std::size_t subchannels_;
  double bandwidth_;
  double noise_;
  std::vector<double> budget_;
  std::vector<std::vector<UserChannel>> groups_;
};

/// Uniform demand `rate_bps` for every user.
RateDemands uniform_demands(const NetworkTopology& topology, double rate_bps);

/// Validates R > 0 for every user and the shape against `topology`.
void check_demands(const NetworkTopology& topology, const RateDemands& demands);

/// Inter-cell interference plus noise seen by user `position` of group (i, m).
double interference_plus_noise(const NetworkTopology& topology, const CellPowerVector& q, const UserIndex& user);

/// H_ijm: worst normalized interference over every user that must decode user j.
double effective_interference(const NetworkTopology& topology, const CellPowerVector& q, const UserIndex& user);

/// H for every user of every group.
EffectiveInterference effective_interference(const NetworkTopology& topology, const CellPowerVector& q);

/// Rate of user j given its own power, the power stacked above it and H (bit/s).
double sic_rate(double bandwidth, double own_power, double stronger_power, double interference);

/// r_ijm = B log2(1 + p_j / (sum_{n>j} p_n + H_j)).
double achievable_rate(const NetworkTopology& topology, const UserPowerAllocation& p, const CellPowerVector& q,
                       const UserIndex& user);

/// Same quantity as `achievable_rate`, evaluated as min over decoders l >= j of r_iljm.
double achievable_rate_by_decoders(const NetworkTopology& topology, const UserPowerAllocation& p,
                                   const CellPowerVector& q, const UserIndex& user);

struct RateConstraintStatus {
  bool satisfied = false;
  /// p_j - (2^{R/B} - 1)(sum_{n>j} p_n + H_j), in W.
  double slack_w = 0.0;
};

/// Linear rate constraint for every user, grouped like the topology.
/// `satisfied` tolerates a shortfall of 1e-9 relative to the required power.
std::vector<std::vector<RateConstraintStatus>> check_rate_constraint(const NetworkTopology& topology,
                                                                     const UserPowerAllocation& p,
                                                                     const CellPowerVector& q,
                                                                     const RateDemands& demands);

/// q_im = sum_j p_ijm for every group.
CellPowerVector group_totals(const NetworkTopology& topology, const UserPowerAllocation& p);

/// 2^{R/B}, the SINR factor of a demand.
double rate_factor(double rate_bps, double bandwidth);

}  // namespace noma
