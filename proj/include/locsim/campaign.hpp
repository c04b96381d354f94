#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "locsim/core_model.hpp"
#include "locsim/metrics.hpp"
#include "locsim/policies.hpp"

namespace locsim {

struct CampaignSpec {
    SystemConfig config;
    std::vector<PolicyId> policies;
    std::vector<std::uint64_t> seeds;
    /// MDVF is run once per entry; empty means {config.epsilon}.
    std::vector<double> epsilon_grid;
    std::filesystem::path output_dir;
    bool per_interval = false;
    int jobs = 0;  // 0: OpenMP default
    std::int64_t rolling_window = 100;

    /// Throws ConfigError on an empty policy/seed list or a negative epsilon.
    void validate() const;
};

/// One (policy, epsilon, seed) combination. run_id is its position in the
/// deterministic plan order: policies as given, then epsilon, then seed.
struct RunPlan {
    int run_id = 0;
    PolicyId policy = PolicyId::mdvf;
    double epsilon = 0.0;
    std::uint64_t seed = 0;
};

std::vector<RunPlan> plan_runs(const CampaignSpec& spec);

struct RunResult {
    RunPlan plan;
    std::optional<MetricsReport> report;  // empty when the run was refused
    std::string error;
};

/// Executes every planned run, in parallel up to spec.jobs threads. The
/// returned vector is in plan order regardless of scheduling.
std::vector<RunResult> execute_runs(const CampaignSpec& spec, const ScheduleTargets& targets);

namespace serial {
/// Single-threaded reference for locsim::execute_runs.
std::vector<RunResult> execute_runs(const CampaignSpec& spec, const ScheduleTargets& targets);
} // namespace serial

/// summary.csv: one row per (run, client). Refused runs get a single row with
/// client 0 and "nan" in every numeric field after seed.
void write_summary_csv(std::ostream& out, const std::vector<RunResult>& results,
                       const SystemConfig& config, const ScheduleTargets& targets);

/// per_interval.csv: one row per (run, t) for t = window_T+1 .. horizon.
/// deficit_spread is "nan" for policies without deficits.
void write_per_interval_csv(std::ostream& out, const std::vector<RunResult>& results,
                            const SystemConfig& config);

struct SummaryRow {
    int run_id = 0;
    std::string policy;
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    int client = 0;
    double p = 0.0;
    double q = 0.0;
    double xbar_star = 0.0;
    double xbar_emp = 0.0;
    double sigma_i_emp = 0.0;
    double sigma_tot_emp = 0.0;
    double mean_rolling_loc = 0.0;
    double eq2_residual = 0.0;
    double eq7_slack = 0.0;
};

struct PerIntervalRow {
    int run_id = 0;
    std::string policy;
    std::uint64_t seed = 0;
    std::int64_t t = 0;
    double total_loc = 0.0;
    double rolling_loc = 0.0;
    double deficit_spread = 0.0;
};

inline constexpr const char* kSummaryHeader =
    "run_id,policy,epsilon,seed,client,p,q,xbar_star,xbar_emp,sigma_i_emp,sigma_tot_emp,"
    "mean_rolling_loc,eq2_residual,eq7_slack";
inline constexpr const char* kPerIntervalHeader =
    "run_id,policy,seed,t,total_loc,rolling_loc,deficit_spread";

/// Parsers for the two schemas; throw std::invalid_argument on malformed input.
std::vector<SummaryRow> read_summary_csv(std::istream& in);
std::vector<PerIntervalRow> read_per_interval_csv(std::istream& in);

struct CampaignOutcome {
    ScheduleTargets targets;
    std::vector<RunResult> results;
    std::filesystem::path summary_path;
    std::filesystem::path per_interval_path;  // empty unless requested
    std::vector<std::string> errors;          // refused runs, in plan order
};

/// Validates, executes, and writes the CSVs once all runs are merged.
/// Throws std::runtime_error if output_dir cannot be created or written.
CampaignOutcome run_campaign(const CampaignSpec& spec);

} // namespace locsim
