// locsim: run scheduling campaigns on the built-in scenarios or a config file.

#include <cstdio>
#include <iostream>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "locsim/campaign.hpp"
#include "locsim/config.hpp"
#include "locsim/errors.hpp"
#include "locsim/format.hpp"

namespace {

void print_feasibility(const locsim::SystemConfig& config, const locsim::ScheduleTargets& targets) {
    std::printf("clients %zu, tau %d, idle time %.9g, capacity %.9g\n", config.size(), config.tau,
                targets.idle_full, config.tau - targets.idle_full);
    std::printf("%6s %8s %8s %12s\n", "client", "p", "q", "xbar_star");
    for (std::size_t i = 0; i < config.size(); ++i) {
        const auto& c = config.clients[i];
        std::printf("%6d %8.4g %8.4g %12.9f\n", c.id, c.p, c.q, targets.xbar_star[i]);
    }
    const auto& f = targets.feasibility;
    std::printf("subset check: %s, %zu subsets, tightest proper slack %.9g\n",
                f.exhaustive ? "exhaustive" : "partial (singletons, pairs, full set only)",
                f.subsets_checked, f.min_proper_slack);
    for (int id : f.out_of_range) std::printf("target out of [0,1]: client %d\n", id);
    for (const auto& v : f.violations) {
        std::string ids;
        for (int id : v.client_ids) ids += (ids.empty() ? "" : " ") + std::to_string(id);
        std::printf("violated subset {%s}: slack %.9g\n", ids.c_str(), v.slack);
    }
    std::printf("%s\n", f.feasible ? "FEASIBLE" : "INFEASIBLE");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Credibility-aware real-time wireless scheduling simulator"};

    std::string scenario;
    std::string config_path;
    std::vector<std::string> policy_names;
    std::vector<double> epsilons;
    int num_seeds = 20;
    std::int64_t intervals = 0;
    int window = 0;
    std::string out_dir = "results";
    bool per_interval = false;
    bool check_only = false;
    int jobs = 0;

    auto* scen = app.add_option("--scenario", scenario, "Built-in scenario")->check(CLI::IsMember({"high", "low"}));
    auto* cfg = app.add_option("--config", config_path, "Config file (key = value lines)");
    scen->excludes(cfg);
    app.add_option("--policy", policy_names, "mdvf, ldf, mw-aoi or max-deficit (repeatable)");
    app.add_option("--epsilon", epsilons, "MDVF penalty weight (repeatable)");
    app.add_option("--seeds", num_seeds, "Number of seeds, starting at the config seed")->check(CLI::PositiveNumber);
    app.add_option("--intervals", intervals, "Simulated intervals per run")->check(CLI::PositiveNumber);
    app.add_option("--window", window, "Credibility window T in intervals")->check(CLI::PositiveNumber);
    app.add_option("--out", out_dir, "Output directory");
    app.add_flag("--per-interval", per_interval, "Also write per_interval.csv");
    app.add_flag("--check-feasibility", check_only, "Print targets and subset check, then exit");
    app.add_option("--jobs", jobs, "Concurrent runs (0: all cores)")->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 64;
    }

    try {
        if (scenario.empty() && config_path.empty()) throw locsim::UsageError("one of --scenario or --config is required");
        locsim::SystemConfig config = scenario.empty() ? locsim::load_config(config_path) : locsim::preset(scenario);
        if (intervals > 0) config.horizon = intervals;
        if (window > 0) config.window_T = window;
        config.validate();

        if (check_only) {
            const auto targets = locsim::compute_targets(config);
            print_feasibility(config, targets);
            return targets.feasible() ? 0 : 2;
        }

        locsim::CampaignSpec spec;
        spec.config = config;
        if (policy_names.empty()) policy_names = {"mdvf", "ldf", "mw-aoi"};
        for (const auto& name : policy_names) spec.policies.push_back(locsim::parse_policy(name));
        spec.epsilon_grid = epsilons;
        for (int k = 0; k < num_seeds; ++k) spec.seeds.push_back(config.seed + static_cast<std::uint64_t>(k));
        spec.output_dir = out_dir;
        spec.per_interval = per_interval;
        spec.jobs = jobs;

        const auto outcome = locsim::run_campaign(spec);
        if (!outcome.targets.feasible()) {
            std::cerr << "warning: targets fail the feasibility check (see --check-feasibility)\n";
        }
        for (const auto& e : outcome.errors) std::cerr << "error: " << e << '\n';

        // Seed-mean of the rolling LoC per (policy, epsilon).
        std::map<std::pair<std::string, double>, std::vector<double>> groups;
        for (const auto& r : outcome.results) {
            if (!r.report) continue;
            groups[{std::string(locsim::policy_name(r.plan.policy)), r.plan.epsilon}].push_back(r.report->mean_rolling_loc);
        }
        std::printf("%-12s %10s %6s %18s\n", "policy", "epsilon", "runs", "mean_rolling_loc");
        for (const auto& [key, values] : groups) {
            const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
            std::printf("%-12s %10s %6zu %18.6f\n", key.first.c_str(), locsim::format_double(key.second).c_str(),
                        values.size(), mean);
        }
        std::printf("wrote %s\n", outcome.summary_path.string().c_str());
        if (per_interval) std::printf("wrote %s\n", outcome.per_interval_path.string().c_str());
        return 0;
    } catch (const locsim::UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 64;
    } catch (const locsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 65;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
