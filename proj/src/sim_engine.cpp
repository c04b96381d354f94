#include "locsim/sim_engine.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <type_traits>

#include "locsim/channel.hpp"
#include "locsim/errors.hpp"

namespace locsim {

void Trace::append(const IntervalRecord& record, std::span<const double> deficit_after) {
    delivered.insert(delivered.end(), record.delivered.begin(), record.delivered.end());
    attempts.insert(attempts.end(), record.attempts.begin(), record.attempts.end());
    slots.insert(slots.end(), record.slots.begin(), record.slots.end());
    deficits.insert(deficits.end(), deficit_after.begin(), deficit_after.end());
}

namespace {

template <typename T>
void put(std::string& out, T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    char buf[sizeof(T)];
    std::memcpy(buf, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
    out.append(buf, sizeof(T));
}

template <typename T>
void put_all(std::string& out, const std::vector<T>& values) {
    put(out, static_cast<std::uint64_t>(values.size()));
    for (const T& v : values) put(out, v);
}

} // namespace

std::string serialize(const Trace& trace) {
    std::string out;
    out.append("LOCTRACE", 8);
    put(out, static_cast<std::uint32_t>(trace.policy));
    put(out, trace.seed);
    put(out, trace.epsilon);
    put(out, static_cast<std::uint64_t>(trace.num_clients));
    put(out, static_cast<std::int32_t>(trace.tau));
    put_all(out, trace.delivered);
    put_all(out, trace.attempts);
    put_all(out, trace.slots);
    put_all(out, trace.deficits);
    return out;
}

IntervalRecord step_interval(const SystemConfig& config, const ScheduleTargets& targets,
                             PolicyState& state, std::int64_t t) {
    const std::size_t n = config.size();
    const PriorityOrder order = interval_order(state, config.clients, t);

    IntervalRecord rec;
    rec.delivered.assign(n, 0);
    rec.attempts.assign(n, 0);
    rec.slots.assign(static_cast<std::size_t>(config.tau), kIdleSlot);

    std::vector<std::uint8_t> pending(n, 1);
    for (int s = 0; s < config.tau; ++s) {
        const auto next = select_next(order, pending);
        if (!next) break;  // every packet of this interval is delivered
        const std::size_t i = *next;
        rec.slots[static_cast<std::size_t>(s)] = static_cast<std::int32_t>(i);
        const ChannelKey key{config.seed, static_cast<std::uint32_t>(i),
                             static_cast<std::uint64_t>(t), rec.attempts[i]};
        ++rec.attempts[i];
        if (channel_outcome(key, config.clients[i].p)) {
            rec.delivered[i] = 1;
            pending[i] = 0;
        }
    }

    state.advance(rec.delivered, targets.xbar_star, config.clients);
    return rec;
}

Trace run(const SystemConfig& config, const ScheduleTargets& targets, PolicyId policy,
          const RunOptions& options) {
    config.validate();
    if (uses_deficits(policy) && !targets.targets_in_range()) {
        throw InfeasibleTargetsError(std::string(policy_name(policy)) +
                                     ": targets outside [0, 1], deficits cannot be tracked");
    }

    Trace trace;
    trace.policy = policy;
    trace.seed = config.seed;
    trace.epsilon = config.epsilon;
    trace.num_clients = config.size();
    trace.tau = config.tau;
    const auto h = static_cast<std::size_t>(config.horizon);
    trace.delivered.reserve(h * config.size());
    trace.attempts.reserve(h * config.size());
    trace.slots.reserve(h * static_cast<std::size_t>(config.tau));
    if (uses_deficits(policy)) trace.deficits.reserve(h * config.size());

    auto state = PolicyState::initial(policy, config.size(), config.epsilon, options.aoi_weight);
    for (std::int64_t t = 1; t <= config.horizon; ++t) {
        const auto rec = step_interval(config, targets, state, t);
        trace.append(rec, state.deficit.d);
    }
    return trace;
}

Trace run(const SystemConfig& config, PolicyId policy, const RunOptions& options) {
    return run(config, compute_targets(config), policy, options);
}

} // namespace locsim
