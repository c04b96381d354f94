#include "locsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "locsim/errors.hpp"

namespace locsim {

WindowState::WindowState(std::size_t num_clients, int window_T)
    : num_clients_(num_clients),
      window_(window_T),
      ring_(static_cast<std::size_t>(window_T) * num_clients, 0),
      sums_(num_clients, 0) {
    if (window_T < 1) throw MetricsError("WindowState: window must be >= 1");
}

void WindowState::push(std::span<const std::uint8_t> delivered) {
    std::uint8_t* row = ring_.data() + head_ * num_clients_;
    for (std::size_t i = 0; i < num_clients_; ++i) {
        const std::uint8_t now = delivered[i] ? 1 : 0;
        sums_[i] += static_cast<int>(now) - static_cast<int>(row[i]);
        row[i] = now;
    }
    head_ = (head_ + 1) % static_cast<std::size_t>(window_);
}

int WindowState::recount(std::size_t client) const {
    int total = 0;
    for (int r = 0; r < window_; ++r) total += ring_[static_cast<std::size_t>(r) * num_clients_ + client];
    return total;
}

double shortage(int window_sum, double q, int window_T, double p) {
    return std::max((q * window_T - window_sum) / p, 0.0);
}

std::vector<double> loc_series(const Trace& trace, const SystemConfig& config) {
    const std::int64_t horizon = trace.horizon();
    if (horizon <= config.window_T) throw MetricsError("loc_series: horizon must exceed window_T");
    if (trace.num_clients != config.size()) throw MetricsError("loc_series: client count mismatch");

    const std::size_t n = config.size();
    WindowState window(n, config.window_T);
    std::vector<double> series;
    series.reserve(static_cast<std::size_t>(horizon - config.window_T));
    for (std::int64_t t = 1; t <= horizon; ++t) {
        window.push(std::span(trace.delivered).subspan(static_cast<std::size_t>(t - 1) * n, n));
        if (t <= config.window_T) continue;
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto& c = config.clients[i];
            total += config.cost(shortage(window.sum(i), c.q, config.window_T, c.p));
        }
        series.push_back(total);
    }
    return series;
}

std::vector<double> rolling_loc(std::span<const double> series, std::int64_t width) {
    if (width < 1) throw MetricsError("rolling_loc: width must be >= 1");
    const auto w = static_cast<std::size_t>(width);
    std::vector<double> out(series.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < series.size(); ++k) {
        acc += series[k];
        if (k >= w) acc -= series[k - w];
        out[k] = acc;
    }
    return out;
}

namespace {

double sample_variance(std::span<const double> xs) {
    if (xs.size() < 2) return 0.0;
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return ss / static_cast<double>(xs.size() - 1);
}

std::vector<double> weighted_totals(const Trace& trace, std::span<const double> p) {
    const std::size_t n = trace.num_clients;
    std::vector<double> totals(static_cast<std::size_t>(trace.horizon()), 0.0);
    for (std::size_t k = 0; k < totals.size(); ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            if (trace.delivered[k * n + i]) totals[k] += 1.0 / p[i];
        }
    }
    return totals;
}

} // namespace

double estimate_sigma_tot_sq(const Trace& trace, std::span<const double> p) {
    if (trace.horizon() < 2) throw MetricsError("estimate_sigma_tot_sq: need at least 2 intervals");
    return std::max(sample_variance(weighted_totals(trace, p)), 0.0);
}

std::int64_t default_batch_len(std::int64_t horizon) {
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<double>(horizon)))));
}

std::vector<double> estimate_sigma_i(const Trace& trace, std::int64_t batch_len) {
    if (batch_len < 1 || trace.horizon() < 2 * batch_len) {
        throw MetricsError("estimate_sigma_i: batch_len must be >= 1 and fit at least twice in the horizon");
    }
    const std::size_t n = trace.num_clients;
    const auto batches = static_cast<std::size_t>(trace.horizon() / batch_len);
    const auto len = static_cast<std::size_t>(batch_len);

    std::vector<double> sigma(n);
    std::vector<double> counts(batches);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t b = 0; b < batches; ++b) {
            int c = 0;
            for (std::size_t k = b * len; k < (b + 1) * len; ++k) c += trace.delivered[k * n + i];
            counts[b] = c;
        }
        sigma[i] = std::sqrt(std::max(sample_variance(counts) / static_cast<double>(batch_len), 0.0));
    }
    return sigma;
}

LyapunovDiagnostic lyapunov_diag(std::span<const double> deficits, std::size_t num_clients) {
    if (num_clients == 0 || deficits.empty()) {
        throw MetricsError("lyapunov_diag: no deficit history (policy does not track deficits)");
    }
    const std::size_t steps = deficits.size() / num_clients;
    LyapunovDiagnostic out;
    out.lyapunov.reserve(steps);
    out.spread.reserve(steps);
    for (std::size_t k = 0; k < steps; ++k) {
        const auto row = deficits.subspan(k * num_clients, num_clients);
        const double mean = std::accumulate(row.begin(), row.end(), 0.0) / static_cast<double>(num_clients);
        double l = 0.0;
        for (double d : row) l += (d - mean) * (d - mean);
        const auto [lo, hi] = std::minmax_element(row.begin(), row.end());
        out.lyapunov.push_back(0.5 * l);
        out.spread.push_back(*hi - *lo);
    }
    return out;
}

LyapunovDiagnostic lyapunov_diag(const Trace& trace) {
    return lyapunov_diag(trace.deficits, trace.num_clients);
}

MetricsReport summarize(const Trace& trace, const SystemConfig& config,
                        const ScheduleTargets& targets, const SummaryOptions& options) {
    const std::size_t n = config.size();
    const std::int64_t horizon = trace.horizon();
    const auto p = config.success_probabilities();

    MetricsReport r;
    r.policy = trace.policy;
    r.seed = trace.seed;
    r.epsilon = trace.epsilon;

    r.loc_series = loc_series(trace, config);
    r.rolling_loc = rolling_loc(r.loc_series, options.rolling_window);
    r.mean_loc = std::accumulate(r.loc_series.begin(), r.loc_series.end(), 0.0) /
                 static_cast<double>(r.loc_series.size());
    {
        const auto skip = std::min<std::size_t>(static_cast<std::size_t>(options.rolling_window - 1),
                                                r.rolling_loc.size() - 1);
        const auto first = r.rolling_loc.begin() + static_cast<std::ptrdiff_t>(skip);
        r.mean_rolling_loc = std::accumulate(first, r.rolling_loc.end(), 0.0) /
                             static_cast<double>(r.rolling_loc.end() - first);
    }

    r.xbar_emp.assign(n, 0.0);
    r.aoi_mean.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        std::int64_t got = 0;
        std::int64_t age = 1;
        double age_sum = 0.0;
        for (std::int64_t t = 1; t <= horizon; ++t) {
            age_sum += static_cast<double>(age);
            if (trace.delivered_at(t, i)) {
                ++got;
                age = 1;
            } else {
                ++age;
            }
        }
        r.xbar_emp[i] = static_cast<double>(got) / static_cast<double>(horizon);
        r.aoi_mean[i] = age_sum / static_cast<double>(horizon);
    }

    const std::int64_t batch = options.batch_len > 0 ? options.batch_len : default_batch_len(horizon);
    r.sigma_i_emp = estimate_sigma_i(trace, batch);
    r.sigma_tot_sq_emp = estimate_sigma_tot_sq(trace, p);
    r.sigma_tot_emp = std::sqrt(r.sigma_tot_sq_emp);

    if (trace.has_deficits()) r.deficit_spread_series = lyapunov_diag(trace).spread;

    const double capacity = config.tau - targets.idle_full;
    const auto totals = weighted_totals(trace, p);
    const double mean_total =
        std::accumulate(totals.begin(), totals.end(), 0.0) / static_cast<double>(totals.size());
    r.checks.eq2_residual = mean_total - capacity;
    r.checks.eq2_stderr = std::sqrt(r.sigma_tot_sq_emp / static_cast<double>(totals.size()));

    double load = 0.0;
    for (std::size_t i = 0; i < n; ++i) load += targets.xbar_star[i] / p[i];
    r.checks.target_residual = load - capacity;

    double spread_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) spread_sum += r.sigma_i_emp[i] / p[i];
    r.checks.eq7_slack = spread_sum - r.sigma_tot_emp;
    return r;
}

} // namespace locsim
