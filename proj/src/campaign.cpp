#include "locsim/campaign.hpp"

#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "locsim/errors.hpp"
#include "locsim/format.hpp"
#include "locsim/sim_engine.hpp"

namespace locsim {

void CampaignSpec::validate() const {
    config.validate();
    if (policies.empty()) throw ConfigError("campaign: at least one policy is required");
    if (seeds.empty()) throw ConfigError("campaign: at least one seed is required");
    for (double e : epsilon_grid) {
        if (!(e >= 0.0) || !std::isfinite(e)) throw ConfigError("campaign: epsilon values must be >= 0");
    }
    if (rolling_window < 1) throw ConfigError("campaign: rolling window must be >= 1");
}

std::vector<RunPlan> plan_runs(const CampaignSpec& spec) {
    const std::vector<double> grid =
        spec.epsilon_grid.empty() ? std::vector<double>{spec.config.epsilon} : spec.epsilon_grid;
    std::vector<RunPlan> plan;
    for (PolicyId policy : spec.policies) {
        const std::vector<double> eps = uses_epsilon(policy) ? grid : std::vector<double>{spec.config.epsilon};
        for (double e : eps) {
            for (std::uint64_t seed : spec.seeds) {
                plan.push_back({static_cast<int>(plan.size()), policy, e, seed});
            }
        }
    }
    return plan;
}

namespace {

RunResult execute_one(const CampaignSpec& spec, const ScheduleTargets& targets, const RunPlan& plan) {
    SystemConfig cfg = spec.config;
    cfg.epsilon = plan.epsilon;
    cfg.seed = plan.seed;

    RunResult result;
    result.plan = plan;
    try {
        const Trace trace = run(cfg, targets, plan.policy);
        result.report = summarize(trace, cfg, targets, {.batch_len = 0, .rolling_window = spec.rolling_window});
    } catch (const InfeasibleTargetsError& e) {
        result.error = "run " + std::to_string(plan.run_id) + ": " + e.what();
    }
    return result;
}

} // namespace

std::vector<RunResult> execute_runs(const CampaignSpec& spec, const ScheduleTargets& targets) {
    const auto plan = plan_runs(spec);
    std::vector<RunResult> results(plan.size());
    std::exception_ptr failure;

    const auto count = static_cast<std::int64_t>(plan.size());
#ifdef _OPENMP
    const int threads = spec.jobs > 0 ? spec.jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
#endif
    for (std::int64_t k = 0; k < count; ++k) {
        const auto idx = static_cast<std::size_t>(k);
        try {
            results[idx] = execute_one(spec, targets, plan[idx]);
        } catch (...) {
#pragma omp critical(locsim_campaign_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return results;
}

namespace serial {

std::vector<RunResult> execute_runs(const CampaignSpec& spec, const ScheduleTargets& targets) {
    std::vector<RunResult> results;
    for (const RunPlan& plan : plan_runs(spec)) results.push_back(execute_one(spec, targets, plan));
    return results;
}

} // namespace serial

void write_summary_csv(std::ostream& out, const std::vector<RunResult>& results,
                       const SystemConfig& config, const ScheduleTargets& targets) {
    out << kSummaryHeader << '\n';
    for (const RunResult& r : results) {
        const std::string prefix = std::to_string(r.plan.run_id) + "," +
                                   std::string(policy_name(r.plan.policy)) + "," +
                                   format_double(r.plan.epsilon) + "," + std::to_string(r.plan.seed) + ",";
        if (!r.report) {
            out << prefix << "0";
            for (int k = 0; k < 9; ++k) out << ",nan";
            out << '\n';
            continue;
        }
        const MetricsReport& m = *r.report;
        for (std::size_t i = 0; i < config.size(); ++i) {
            const auto& c = config.clients[i];
            out << prefix << c.id << ',' << format_double(c.p) << ',' << format_double(c.q) << ','
                << format_double(targets.xbar_star[i]) << ',' << format_double(m.xbar_emp[i]) << ','
                << format_double(m.sigma_i_emp[i]) << ',' << format_double(m.sigma_tot_emp) << ','
                << format_double(m.mean_rolling_loc) << ',' << format_double(m.checks.eq2_residual) << ','
                << format_double(m.checks.eq7_slack) << '\n';
        }
    }
}

void write_per_interval_csv(std::ostream& out, const std::vector<RunResult>& results,
                            const SystemConfig& config) {
    out << kPerIntervalHeader << '\n';
    for (const RunResult& r : results) {
        if (!r.report) continue;
        const MetricsReport& m = *r.report;
        const std::string prefix = std::to_string(r.plan.run_id) + "," +
                                   std::string(policy_name(r.plan.policy)) + "," +
                                   std::to_string(r.plan.seed) + ",";
        for (std::size_t k = 0; k < m.loc_series.size(); ++k) {
            const std::int64_t t = config.window_T + 1 + static_cast<std::int64_t>(k);
            const double spread = m.deficit_spread_series.empty()
                                      ? std::numeric_limits<double>::quiet_NaN()
                                      : m.deficit_spread_series[static_cast<std::size_t>(t - 1)];
            out << prefix << t << ',' << format_double(m.loc_series[k]) << ','
                << format_double(m.rolling_loc[k]) << ',' << format_double(spread) << '\n';
        }
    }
}

namespace {

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    while (true) {
        const auto comma = line.find(',');
        out.push_back(line.substr(0, comma));
        if (comma == std::string_view::npos) break;
        line = line.substr(comma + 1);
    }
    return out;
}

template <typename T>
T parse_int(std::string_view token) {
    T value{};
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) {
        throw std::invalid_argument("not an integer: '" + std::string(token) + "'");
    }
    return value;
}

template <typename Row, typename Fill>
std::vector<Row> read_csv(std::istream& in, const char* header, std::size_t columns, Fill fill) {
    std::string line;
    if (!std::getline(in, line) || line != header) throw std::invalid_argument("csv: unexpected header");
    std::vector<Row> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != columns) throw std::invalid_argument("csv: wrong column count in '" + line + "'");
        rows.push_back(fill(f));
    }
    return rows;
}

} // namespace

std::vector<SummaryRow> read_summary_csv(std::istream& in) {
    return read_csv<SummaryRow>(in, kSummaryHeader, 14, [](const std::vector<std::string_view>& f) {
        SummaryRow r;
        r.run_id = parse_int<int>(f[0]);
        r.policy = std::string(f[1]);
        r.epsilon = parse_double(f[2]);
        r.seed = parse_int<std::uint64_t>(f[3]);
        r.client = parse_int<int>(f[4]);
        r.p = parse_double(f[5]);
        r.q = parse_double(f[6]);
        r.xbar_star = parse_double(f[7]);
        r.xbar_emp = parse_double(f[8]);
        r.sigma_i_emp = parse_double(f[9]);
        r.sigma_tot_emp = parse_double(f[10]);
        r.mean_rolling_loc = parse_double(f[11]);
        r.eq2_residual = parse_double(f[12]);
        r.eq7_slack = parse_double(f[13]);
        return r;
    });
}

std::vector<PerIntervalRow> read_per_interval_csv(std::istream& in) {
    return read_csv<PerIntervalRow>(in, kPerIntervalHeader, 7, [](const std::vector<std::string_view>& f) {
        PerIntervalRow r;
        r.run_id = parse_int<int>(f[0]);
        r.policy = std::string(f[1]);
        r.seed = parse_int<std::uint64_t>(f[2]);
        r.t = parse_int<std::int64_t>(f[3]);
        r.total_loc = parse_double(f[4]);
        r.rolling_loc = parse_double(f[5]);
        r.deficit_spread = parse_double(f[6]);
        return r;
    });
}

CampaignOutcome run_campaign(const CampaignSpec& spec) {
    spec.validate();

    CampaignOutcome outcome;
    outcome.targets = compute_targets(spec.config);

    std::error_code ec;
    std::filesystem::create_directories(spec.output_dir, ec);
    if (ec || !std::filesystem::is_directory(spec.output_dir)) {
        throw std::runtime_error(spec.output_dir.string() + ": cannot create output directory");
    }
    outcome.summary_path = spec.output_dir / "summary.csv";
    if (spec.per_interval) outcome.per_interval_path = spec.output_dir / "per_interval.csv";

    // Probe writability before spending time on the runs.
    {
        std::ofstream probe(outcome.summary_path, std::ios::binary | std::ios::trunc);
        if (!probe) throw std::runtime_error(outcome.summary_path.string() + ": cannot write");
    }

    outcome.results = execute_runs(spec, outcome.targets);
    for (const RunResult& r : outcome.results) {
        if (!r.report) outcome.errors.push_back(r.error);
    }

    std::ofstream summary(outcome.summary_path, std::ios::binary | std::ios::trunc);
    write_summary_csv(summary, outcome.results, spec.config, outcome.targets);
    if (!summary) throw std::runtime_error(outcome.summary_path.string() + ": write failed");

    if (spec.per_interval) {
        std::ofstream per(outcome.per_interval_path, std::ios::binary | std::ios::trunc);
        if (!per) throw std::runtime_error(outcome.per_interval_path.string() + ": cannot write");
        write_per_interval_csv(per, outcome.results, spec.config);
        if (!per) throw std::runtime_error(outcome.per_interval_path.string() + ": write failed");
    }
    return outcome;
}

} // namespace locsim
