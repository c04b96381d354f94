#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "locsim/core_model.hpp"

namespace locsim {

enum class PolicyId { mdvf, ldf, mw_aoi, max_deficit };

/// Accepts "mdvf", "ldf", "mw-aoi", "max-deficit". Throws ConfigError otherwise.
PolicyId parse_policy(std::string_view name);
std::string_view policy_name(PolicyId id);

/// MDVF and the max-deficit policy steer by deficits and need in-range targets.
bool uses_deficits(PolicyId id);
bool uses_epsilon(PolicyId id);

/// d_i(t) = (xbar_i* t - X_i(t)) / p_i, in expected transmissions.
struct DeficitState {
    std::vector<double> d;
    std::int64_t t = 0;  // completed intervals

    double mean() const;
};

/// Clients by 0-based index, highest priority first. Fixed for one interval.
struct PriorityOrder {
    std::vector<std::size_t> clients;

    std::size_t size() const { return clients.size(); }
    /// 1-based ids in priority order.
    std::vector<int> ids() const;
    bool operator==(const PriorityOrder&) const = default;
};

// Priority keys. MDVF: lower is better. All others: higher is better.
double mdvf_key(const ClientParams& client, double deficit, double epsilon);
double ldf_key(const ClientParams& client, std::int64_t t, std::int64_t delivered);
double mwaoi_key(const ClientParams& client, std::int64_t age, double debt, double weight_v);
double max_deficit_key(double deficit);

struct PolicyState {
    PolicyId policy = PolicyId::mdvf;
    double epsilon = 0.0;
    double aoi_weight = 1.0;         // V in the MW-AoI weight
    DeficitState deficit;            // empty unless uses_deficits(policy)
    std::vector<std::int64_t> delivered;  // X_i(t)
    std::vector<std::int64_t> age;        // AoI in intervals, measured at interval start

    static PolicyState initial(PolicyId policy, std::size_t n, double epsilon,
                               double aoi_weight = 1.0);

    std::int64_t completed_intervals() const { return completed_; }

    /// Folds one interval's outcomes into every counter the policy keeps.
    void advance(std::span<const std::uint8_t> delivered_now, std::span<const double> xbar_star,
                 std::span<const ClientParams> clients);

private:
    std::int64_t completed_ = 0;
};

/// Priority order for interval t (1-based); `state` must hold t-1 completed
/// intervals. Stable: equal keys keep ascending client id.
PriorityOrder interval_order(const PolicyState& state, std::span<const ClientParams> clients,
                             std::int64_t t);

/// Highest-priority client with pending[i] != 0; nullopt means idle.
std::optional<std::size_t> select_next(const PriorityOrder& order,
                                       std::span<const std::uint8_t> pending);

/// d_i += (xbar_i* - 1{delivered_i}) / p_i and t += 1.
DeficitState update_deficits(DeficitState state, std::span<const std::uint8_t> delivered,
                             std::span<const double> xbar_star,
                             std::span<const ClientParams> clients);

} // namespace locsim
