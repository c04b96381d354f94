#include "locsim/policies.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "locsim/errors.hpp"

namespace locsim {

PolicyId parse_policy(std::string_view name) {
    if (name == "mdvf") return PolicyId::mdvf;
    if (name == "ldf") return PolicyId::ldf;
    if (name == "mw-aoi") return PolicyId::mw_aoi;
    if (name == "max-deficit") return PolicyId::max_deficit;
    throw ConfigError("unknown policy '" + std::string(name) +
                      "' (expected mdvf, ldf, mw-aoi or max-deficit)");
}

std::string_view policy_name(PolicyId id) {
    switch (id) {
    case PolicyId::mdvf: return "mdvf";
    case PolicyId::ldf: return "ldf";
    case PolicyId::mw_aoi: return "mw-aoi";
    case PolicyId::max_deficit: return "max-deficit";
    }
    throw ConfigError("unknown policy id");
}

bool uses_deficits(PolicyId id) { return id == PolicyId::mdvf || id == PolicyId::max_deficit; }

bool uses_epsilon(PolicyId id) { return id == PolicyId::mdvf; }

double DeficitState::mean() const {
    if (d.empty()) return 0.0;
    return std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
}

std::vector<int> PriorityOrder::ids() const {
    std::vector<int> out;
    out.reserve(clients.size());
    for (std::size_t i : clients) out.push_back(static_cast<int>(i) + 1);
    return out;
}

double mdvf_key(const ClientParams& client, double deficit, double epsilon) {
    return epsilon / client.p - deficit;
}

double ldf_key(const ClientParams& client, std::int64_t t, std::int64_t delivered) {
    return client.q * static_cast<double>(t) - static_cast<double>(delivered);
}

double mwaoi_key(const ClientParams& client, std::int64_t age, double debt, double weight_v) {
    const auto h = static_cast<double>(age);
    return client.p * (h * (h + 2.0) / 2.0 + weight_v * debt);
}

double max_deficit_key(double deficit) { return deficit; }

PolicyState PolicyState::initial(PolicyId policy, std::size_t n, double epsilon,
                                 double aoi_weight) {
    PolicyState s;
    s.policy = policy;
    s.epsilon = epsilon;
    s.aoi_weight = aoi_weight;
    if (uses_deficits(policy)) s.deficit.d.assign(n, 0.0);
    s.delivered.assign(n, 0);
    s.age.assign(n, 1);
    return s;
}

void PolicyState::advance(std::span<const std::uint8_t> delivered_now,
                          std::span<const double> xbar_star,
                          std::span<const ClientParams> clients) {
    if (uses_deficits(policy)) {
        deficit = update_deficits(std::move(deficit), delivered_now, xbar_star, clients);
    }
    for (std::size_t i = 0; i < delivered.size(); ++i) {
        if (delivered_now[i]) {
            ++delivered[i];
            age[i] = 1;
        } else {
            ++age[i];
        }
    }
    ++completed_;
}

PriorityOrder interval_order(const PolicyState& state, std::span<const ClientParams> clients,
                             std::int64_t t) {
    if (state.completed_intervals() != t - 1) {
        throw std::logic_error("interval_order: policy state is not at the start of interval t");
    }
    const std::size_t n = clients.size();

    // Keys are normalised so that larger means higher priority.
    std::vector<double> key(n);
    for (std::size_t i = 0; i < n; ++i) {
        switch (state.policy) {
        case PolicyId::mdvf:
            key[i] = -mdvf_key(clients[i], state.deficit.d[i], state.epsilon);
            break;
        case PolicyId::max_deficit:
            key[i] = max_deficit_key(state.deficit.d[i]);
            break;
        case PolicyId::ldf:
            key[i] = ldf_key(clients[i], t, state.delivered[i]);
            break;
        case PolicyId::mw_aoi: {
            const double debt = std::max(ldf_key(clients[i], t, state.delivered[i]), 0.0);
            key[i] = mwaoi_key(clients[i], state.age[i], debt, state.aoi_weight);
            break;
        }
        default:
            throw ConfigError("interval_order: unknown policy id");
        }
    }

    PriorityOrder order;
    order.clients.resize(n);
    std::iota(order.clients.begin(), order.clients.end(), std::size_t{0});
    std::stable_sort(order.clients.begin(), order.clients.end(),
                     [&](std::size_t a, std::size_t b) { return key[a] > key[b]; });
    return order;
}

std::optional<std::size_t> select_next(const PriorityOrder& order,
                                       std::span<const std::uint8_t> pending) {
    for (std::size_t i : order.clients) {
        if (i < pending.size() && pending[i]) return i;
    }
    return std::nullopt;
}

DeficitState update_deficits(DeficitState state, std::span<const std::uint8_t> delivered,
                             std::span<const double> xbar_star,
                             std::span<const ClientParams> clients) {
    for (std::size_t i = 0; i < state.d.size(); ++i) {
        const double got = delivered[i] ? 1.0 : 0.0;
        state.d[i] += (xbar_star[i] - got) / clients[i].p;
    }
    ++state.t;
    return state;
}

} // namespace locsim
