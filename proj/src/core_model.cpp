#include "locsim/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "locsim/errors.hpp"
#include "locsim/format.hpp"

namespace locsim {

CostSpec CostSpec::power(double k) {
    if (!(k > 1.0) || !std::isfinite(k)) {
        throw ConfigError("cost: power exponent must be finite and > 1, got " + std::to_string(k));
    }
    return CostSpec{Kind::power, k};
}

double CostSpec::operator()(double x) const {
    if (x <= 0.0) return 0.0;
    if (kind == Kind::quadratic) return x * x;
    return std::pow(x, exponent);
}

std::string CostSpec::to_string() const {
    if (kind == Kind::quadratic) return "quadratic";
    return "power:" + format_double(exponent);
}

std::vector<double> SystemConfig::success_probabilities() const {
    std::vector<double> p(clients.size());
    std::transform(clients.begin(), clients.end(), p.begin(),
                   [](const ClientParams& c) { return c.p; });
    return p;
}

void SystemConfig::validate() const {
    if (clients.empty()) throw ConfigError("clients: at least one client is required");
    if (tau < 1) throw ConfigError("tau: must be >= 1");
    if (window_T < 1) throw ConfigError("window_T: must be >= 1");
    if (horizon <= window_T) throw ConfigError("horizon: must exceed window_T");
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        throw ConfigError("epsilon: must be finite and >= 0");
    }
    if (cost.kind == CostSpec::Kind::power && !(cost.exponent > 1.0)) {
        throw ConfigError("cost: power exponent must be > 1");
    }
    for (std::size_t i = 0; i < clients.size(); ++i) {
        const auto& c = clients[i];
        const std::string where = "client " + std::to_string(i + 1) + ": ";
        if (c.id != static_cast<int>(i) + 1) throw ConfigError(where + "id must equal its 1-based position");
        if (!(c.p >= kMinSuccessProbability && c.p <= 1.0)) {
            throw ConfigError(where + "p must lie in [0.01, 1], got " + std::to_string(c.p));
        }
        if (!(c.q >= 0.0 && c.q <= 1.0)) {
            throw ConfigError(where + "q must lie in [0, 1], got " + std::to_string(c.q));
        }
    }
}

WorkPmf work_pmf(std::span<const std::size_t> subset, int tau, std::span<const double> p) {
    if (tau < 1) throw ConfigError("work_pmf: tau must be >= 1");
    if (!subset.empty() && p.empty()) throw ConfigError("work_pmf: empty probability array");

    const auto n = static_cast<std::size_t>(tau);
    WorkPmf out{tau, std::vector<double>(n, 0.0), 0.0};
    out.mass[0] = 1.0;
    std::vector<double> next(n);

    for (std::size_t idx : subset) {
        if (idx >= p.size()) throw ConfigError("work_pmf: client index out of range");
        const double pi = p[idx];
        const double fail = 1.0 - pi;

        // Mass pushed to w >= tau: sum_w mass[w] * (1-p)^(tau-1-w), by Horner.
        double overflow = 0.0;
        for (std::size_t w = 0; w < n; ++w) overflow = overflow * fail + out.mass[w];
        out.tail += overflow;

        // Convolution with a geometric on {1, 2, ...}:
        // next[w] = p * mass[w-1] + (1-p) * next[w-1].
        next[0] = 0.0;
        for (std::size_t w = 1; w < n; ++w) next[w] = pi * out.mass[w - 1] + fail * next[w - 1];
        out.mass.swap(next);
    }
    return out;
}

double idle_time(const WorkPmf& pmf) {
    double idle = 0.0;
    for (std::size_t w = 0; w < pmf.mass.size(); ++w) {
        idle += static_cast<double>(pmf.tau - static_cast<int>(w)) * pmf.mass[w];
    }
    return idle;
}

double idle_time(std::span<const std::size_t> subset, int tau, std::span<const double> p) {
    return idle_time(work_pmf(subset, tau, p));
}

std::vector<double> closed_form_targets(const SystemConfig& config, double idle_full) {
    const auto n = static_cast<double>(config.size());
    double mean_ratio = 0.0;
    for (const auto& c : config.clients) mean_ratio += c.q / c.p;
    mean_ratio /= n;
    const double share = (config.tau - idle_full) / n - mean_ratio;

    std::vector<double> xbar;
    xbar.reserve(config.size());
    for (const auto& c : config.clients) xbar.push_back((share + c.q / c.p) * c.p);
    return xbar;
}

ScheduleTargets compute_targets(const SystemConfig& config) {
    config.validate();
    const auto p = config.success_probabilities();
    std::vector<std::size_t> all(config.size());
    std::iota(all.begin(), all.end(), std::size_t{0});

    ScheduleTargets targets;
    targets.idle_full = idle_time(all, config.tau, p);
    targets.xbar_star = closed_form_targets(config, targets.idle_full);
    targets.feasibility = validate_feasibility(config, targets.xbar_star);
    return targets;
}

namespace detail {

struct SubsetScan {
    std::vector<SubsetViolation> violations;
    double min_proper_slack = std::numeric_limits<double>::infinity();
    std::size_t checked = 0;

    void merge(SubsetScan&& other) {
        violations.insert(violations.end(), std::make_move_iterator(other.violations.begin()),
                          std::make_move_iterator(other.violations.end()));
        min_proper_slack = std::min(min_proper_slack, other.min_proper_slack);
        checked += other.checked;
    }
};

double subset_slack(std::span<const std::size_t> subset, int tau, std::span<const double> p,
                    std::span<const double> xbar) {
    double load = 0.0;
    for (std::size_t i : subset) load += xbar[i] / p[i];
    return (tau - idle_time(subset, tau, p)) - load;
}

void record(SubsetScan& scan, std::span<const std::size_t> subset, double slack, std::size_t n) {
    ++scan.checked;
    if (subset.size() < n) scan.min_proper_slack = std::min(scan.min_proper_slack, slack);
    if (slack < -kFeasibilityTolerance) {
        SubsetViolation v;
        v.slack = slack;
        for (std::size_t i : subset) v.client_ids.push_back(static_cast<int>(i) + 1);
        scan.violations.push_back(std::move(v));
    }
}

void mask_to_subset(std::uint64_t mask, std::size_t n, std::vector<std::size_t>& out) {
    out.clear();
    for (std::size_t i = 0; i < n; ++i) {
        if (mask & (std::uint64_t{1} << i)) out.push_back(i);
    }
}

std::vector<std::vector<std::size_t>> partial_subsets(std::size_t n) {
    std::vector<std::vector<std::size_t>> subsets;
    for (std::size_t i = 0; i < n; ++i) subsets.push_back({i});
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) subsets.push_back({i, j});
    }
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    if (n > 2) subsets.push_back(std::move(all));
    return subsets;
}

bool use_exhaustive(SubsetDepth depth, std::size_t n) {
    switch (depth) {
    case SubsetDepth::exhaustive:
        if (n >= 63) throw ConfigError("validate_feasibility: exhaustive scan needs N < 63");
        return true;
    case SubsetDepth::partial: return false;
    case SubsetDepth::automatic: return n <= kExhaustiveSubsetLimit;
    }
    return false;
}

FeasibilityReport finish(const SystemConfig& config, std::span<const double> xbar, SubsetScan scan,
                         bool exhaustive) {
    FeasibilityReport report;
    report.exhaustive = exhaustive;
    report.subsets_checked = scan.checked;
    report.min_proper_slack = scan.min_proper_slack;
    for (std::size_t i = 0; i < xbar.size(); ++i) {
        if (xbar[i] < -kFeasibilityTolerance || xbar[i] > 1.0 + kFeasibilityTolerance) {
            report.out_of_range.push_back(config.clients[i].id);
        }
    }
    std::sort(scan.violations.begin(), scan.violations.end(),
              [](const SubsetViolation& a, const SubsetViolation& b) {
                  if (a.client_ids.size() != b.client_ids.size()) {
                      return a.client_ids.size() < b.client_ids.size();
                  }
                  return a.client_ids < b.client_ids;
              });
    report.violations = std::move(scan.violations);
    report.feasible = report.out_of_range.empty() && report.violations.empty();
    return report;
}

void check_inputs(const SystemConfig& config, std::span<const double> xbar) {
    config.validate();
    if (xbar.size() != config.size()) {
        throw ConfigError("validate_feasibility: target count does not match client count");
    }
}

} // namespace detail

FeasibilityReport validate_feasibility(const SystemConfig& config, std::span<const double> xbar,
                                       SubsetDepth depth) {
    detail::check_inputs(config, xbar);
    const std::size_t n = config.size();
    const auto p = config.success_probabilities();
    const bool exhaustive = detail::use_exhaustive(depth, n);

    detail::SubsetScan total;
    if (exhaustive) {
        const auto count = static_cast<std::int64_t>(std::uint64_t{1} << n);
#pragma omp parallel
        {
            detail::SubsetScan local;
            std::vector<std::size_t> subset;
            subset.reserve(n);
#pragma omp for schedule(dynamic, 256) nowait
            for (std::int64_t mask = 1; mask < count; ++mask) {
                detail::mask_to_subset(static_cast<std::uint64_t>(mask), n, subset);
                detail::record(local, subset, detail::subset_slack(subset, config.tau, p, xbar), n);
            }
#pragma omp critical(locsim_feasibility_merge)
            total.merge(std::move(local));
        }
    } else {
        const auto subsets = detail::partial_subsets(n);
        const auto count = static_cast<std::int64_t>(subsets.size());
#pragma omp parallel
        {
            detail::SubsetScan local;
#pragma omp for schedule(static) nowait
            for (std::int64_t k = 0; k < count; ++k) {
                const auto& s = subsets[static_cast<std::size_t>(k)];
                detail::record(local, s, detail::subset_slack(s, config.tau, p, xbar), n);
            }
#pragma omp critical(locsim_feasibility_merge)
            total.merge(std::move(local));
        }
    }
    return detail::finish(config, xbar, std::move(total), exhaustive);
}

namespace serial {

FeasibilityReport validate_feasibility(const SystemConfig& config, std::span<const double> xbar,
                                       SubsetDepth depth) {
    detail::check_inputs(config, xbar);
    const std::size_t n = config.size();
    const auto p = config.success_probabilities();
    const bool exhaustive = detail::use_exhaustive(depth, n);

    detail::SubsetScan scan;
    if (exhaustive) {
        std::vector<std::size_t> subset;
        for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
            detail::mask_to_subset(mask, n, subset);
            detail::record(scan, subset, detail::subset_slack(subset, config.tau, p, xbar), n);
        }
    } else {
        for (const auto& s : detail::partial_subsets(n)) {
            detail::record(scan, s, detail::subset_slack(s, config.tau, p, xbar), n);
        }
    }
    return detail::finish(config, xbar, std::move(scan), exhaustive);
}

} // namespace serial

double predicted_loc(double xbar, double sigma, const ClientParams& client, int window_T,
                     const CostSpec& cost) {
    if (!(sigma >= 0.0)) throw ConfigError("predicted_loc: sigma must be >= 0");
    if (!(xbar >= 0.0 && xbar <= 1.0)) throw ConfigError("predicted_loc: xbar must lie in [0, 1]");

    const double T = window_T;
    const double scale = sigma * std::sqrt(T) / client.p;
    const double shift = (client.q - xbar) * T / client.p;
    if (scale == 0.0) return cost(shift);

    // C vanishes below the kink z0 = -shift/scale, so integrate [max(z0, -8), 8].
    constexpr double kZMax = 8.0;
    constexpr int kIntervals = 4096;  // even, for Simpson
    const double lo = std::max(-shift / scale, -kZMax);
    if (lo >= kZMax) return 0.0;

    const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * M_PI);
    auto f = [&](double z) { return cost(scale * z + shift) * inv_sqrt_2pi * std::exp(-0.5 * z * z); };

    const double h = (kZMax - lo) / kIntervals;
    double acc = f(lo) + f(kZMax);
    for (int k = 1; k < kIntervals; ++k) acc += f(lo + k * h) * (k % 2 == 1 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

} // namespace locsim
