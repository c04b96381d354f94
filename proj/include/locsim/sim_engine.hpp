#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "locsim/core_model.hpp"
#include "locsim/policies.hpp"

namespace locsim {

inline constexpr std::int32_t kIdleSlot = -1;

/// Outcome of one interval.
struct IntervalRecord {
    std::vector<std::uint8_t> delivered;  // per client
    std::vector<std::uint32_t> attempts;  // per client
    std::vector<std::int32_t> slots;      // length tau; 0-based client or kIdleSlot
};

/// Per-interval record of a whole run, stored flat in interval-major order.
/// Intervals are 1-based in the accessors.
struct Trace {
    PolicyId policy = PolicyId::mdvf;
    std::uint64_t seed = 0;
    double epsilon = 0.0;
    std::size_t num_clients = 0;
    int tau = 0;

    std::vector<std::uint8_t> delivered;
    std::vector<std::uint32_t> attempts;
    std::vector<std::int32_t> slots;
    /// d_i(t) at the end of each interval; empty for policies without deficits.
    std::vector<double> deficits;

    std::int64_t horizon() const {
        return num_clients == 0 ? 0 : static_cast<std::int64_t>(delivered.size() / num_clients);
    }
    bool has_deficits() const { return !deficits.empty(); }

    bool delivered_at(std::int64_t t, std::size_t i) const { return delivered[index(t, i)] != 0; }
    std::uint32_t attempts_at(std::int64_t t, std::size_t i) const { return attempts[index(t, i)]; }
    std::int32_t slot_at(std::int64_t t, int s) const {
        return slots[static_cast<std::size_t>(t - 1) * static_cast<std::size_t>(tau) +
                     static_cast<std::size_t>(s)];
    }
    double deficit_at(std::int64_t t, std::size_t i) const { return deficits[index(t, i)]; }

    void append(const IntervalRecord& record, std::span<const double> deficit_after = {});

private:
    std::size_t index(std::int64_t t, std::size_t i) const {
        return static_cast<std::size_t>(t - 1) * num_clients + i;
    }
};

/// Little-endian binary image of a trace. Equal traces give equal bytes.
std::string serialize(const Trace& trace);

/// Simulates interval t: one priority order, tau slots of work-conserving
/// transmissions, then the policy state absorbs the outcomes.
IntervalRecord step_interval(const SystemConfig& config, const ScheduleTargets& targets,
                             PolicyState& state, std::int64_t t);

struct RunOptions {
    double aoi_weight = 1.0;  // V for mw-aoi
};

/// Runs config.horizon intervals from a cold start. Throws
/// InfeasibleTargetsError for mdvf / max-deficit when a target is outside [0, 1].
Trace run(const SystemConfig& config, const ScheduleTargets& targets, PolicyId policy,
          const RunOptions& options = {});
Trace run(const SystemConfig& config, PolicyId policy, const RunOptions& options = {});

} // namespace locsim
