#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "locsim/core_model.hpp"
#include "locsim/policies.hpp"
#include "locsim/sim_engine.hpp"

namespace locsim {

/// Sliding count of deliveries over the last window_T intervals, per client.
class WindowState {
public:
    WindowState(std::size_t num_clients, int window_T);

    void push(std::span<const std::uint8_t> delivered);

    int sum(std::size_t client) const { return sums_[client]; }
    /// Sum recomputed from the buffer, for checking the running value.
    int recount(std::size_t client) const;
    int window() const { return window_; }

private:
    std::size_t num_clients_;
    int window_;
    std::size_t head_ = 0;
    std::vector<std::uint8_t> ring_;  // window_ rows of num_clients_
    std::vector<int> sums_;
};

/// theta = max((qT - window_sum) / p, 0).
double shortage(int window_sum, double q, int window_T, double p);

/// Total LoC at the end of each interval t = window_T+1 .. horizon; element k
/// belongs to interval window_T+1+k. Throws MetricsError if horizon <= window_T.
std::vector<double> loc_series(const Trace& trace, const SystemConfig& config);

/// Trailing sums over `width` entries; the first width-1 entries are partial.
std::vector<double> rolling_loc(std::span<const double> series, std::int64_t width);

/// Sample variance of S_t = sum_i 1{delivered_i(t)} / p_i over all intervals.
double estimate_sigma_tot_sq(const Trace& trace, std::span<const double> p);

/// Batch-means estimate of each client's per-interval delivery standard
/// deviation. Needs at least two full batches.
std::vector<double> estimate_sigma_i(const Trace& trace, std::int64_t batch_len);

/// floor(sqrt(horizon)), at least 1.
std::int64_t default_batch_len(std::int64_t horizon);

struct LyapunovDiagnostic {
    std::vector<double> lyapunov;  // L(t) = 1/2 sum_i (d_i - D)^2
    std::vector<double> spread;    // max_i d_i - min_i d_i
};

/// `deficits` is interval-major with `num_clients` entries per interval.
LyapunovDiagnostic lyapunov_diag(std::span<const double> deficits, std::size_t num_clients);
LyapunovDiagnostic lyapunov_diag(const Trace& trace);

struct ConstraintChecks {
    double eq2_residual = 0.0;     // mean_t S_t - (tau - I_full)
    double eq2_stderr = 0.0;       // standard error of mean_t S_t
    double target_residual = 0.0;  // sum_i xbar_i*/p_i - (tau - I_full)
    double eq7_slack = 0.0;        // sum_i sigma_i/p_i - sigma_tot
};

struct MetricsReport {
    PolicyId policy = PolicyId::mdvf;
    std::uint64_t seed = 0;
    double epsilon = 0.0;

    std::vector<double> loc_series;
    std::vector<double> rolling_loc;
    double mean_loc = 0.0;          // long-run mean of loc_series
    double mean_rolling_loc = 0.0;  // mean over full rolling windows

    std::vector<double> xbar_emp;
    std::vector<double> sigma_i_emp;
    std::vector<double> aoi_mean;
    double sigma_tot_sq_emp = 0.0;
    double sigma_tot_emp = 0.0;

    std::vector<double> deficit_spread_series;  // deficit policies only
    ConstraintChecks checks;
};

struct SummaryOptions {
    std::int64_t batch_len = 0;         // 0: default_batch_len(horizon)
    std::int64_t rolling_window = 100;  // intervals
};

MetricsReport summarize(const Trace& trace, const SystemConfig& config,
                        const ScheduleTargets& targets, const SummaryOptions& options = {});

} // namespace locsim
