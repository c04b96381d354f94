#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "locsim/config.hpp"
#include "locsim/errors.hpp"
#include "locsim/metrics.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace locsim {
namespace {

using testing::make_config;

Trace trace_from(const std::vector<std::vector<std::uint8_t>>& rows, int tau = 1) {
    Trace tr;
    tr.num_clients = rows.empty() ? 0 : rows.front().size();
    tr.tau = tau;
    for (const auto& row : rows) {
        IntervalRecord rec;
        rec.delivered = row;
        rec.attempts.assign(row.size(), 0);
        rec.slots.assign(static_cast<std::size_t>(tau), kIdleSlot);
        tr.append(rec);
    }
    return tr;
}

TEST(Shortage, Examples) {
    EXPECT_DOUBLE_EQ(shortage(5, 0.5, 10, 0.5), 0.0);
    EXPECT_DOUBLE_EQ(shortage(3, 0.5, 10, 0.5), 4.0);
    EXPECT_DOUBLE_EQ(shortage(0, 0.5, 10, 0.5), 10.0);
    EXPECT_DOUBLE_EQ(shortage(9, 0.5, 10, 0.5), 0.0);
}

TEST(Shortage, NonIncreasingInDeliveriesAndScaledByInverseP) {
    for (int w = 0; w < 100; ++w) {
        EXPECT_GE(shortage(w, 0.8, 100, 0.4), shortage(w + 1, 0.8, 100, 0.4));
        EXPECT_NEAR(shortage(w, 0.8, 100, 0.4), 2.0 * shortage(w, 0.8, 100, 0.8), 1e-12);
    }
}

TEST(LocSeries, SingleClientExample) {
    // q T = 5, p = 0.5: three deliveries in the window leave theta = 4.
    auto cfg = make_config(1, {0.5}, {0.5}, 11, 10);
    std::vector<std::vector<std::uint8_t>> rows(11, {0});
    rows[2][0] = rows[5][0] = rows[8][0] = 1;
    const auto series = loc_series(trace_from(rows), cfg);
    ASSERT_EQ(series.size(), 1u);
    EXPECT_DOUBLE_EQ(series[0], 16.0);
}

TEST(LocSeries, MetTargetsCostNothing) {
    auto cfg = make_config(2, {1.0, 1.0}, {0.5, 0.5}, 40, 10);
    const std::vector<std::vector<std::uint8_t>> rows(40, {1, 1});
    for (double v : loc_series(trace_from(rows, 2), cfg)) EXPECT_EQ(v, 0.0);
}

TEST(LocSeries, MatchesFullRescan) {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + rng() % 4;
        std::vector<double> p(n), q(n);
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = 0.1 + 0.1 * static_cast<double>(rng() % 10);
            q[i] = 0.1 * static_cast<double>(rng() % 10);
        }
        const int T = 1 + static_cast<int>(rng() % 15);
        const std::int64_t h = T + 1 + rng() % 80;
        auto cfg = make_config(3, p, q, h, T);
        if (trial % 2) cfg.cost = CostSpec::power(1.5);
        std::vector<std::vector<std::uint8_t>> rows(static_cast<std::size_t>(h), std::vector<std::uint8_t>(n));
        for (auto& r : rows)
            for (auto& x : r) x = rng() % 2;
        const auto tr = trace_from(rows, 3);
        const auto fast = loc_series(tr, cfg);
        const auto slow = oracle::naive_loc_series(tr, cfg);
        ASSERT_EQ(fast.size(), slow.size());
        for (std::size_t k = 0; k < fast.size(); ++k) EXPECT_NEAR(fast[k], slow[k], 1e-9 * (1 + slow[k]));
    }
}

TEST(LocSeries, RejectsShortHorizon) {
    auto cfg = make_config(1, {0.5}, {0.5}, 10, 10);
    const std::vector<std::vector<std::uint8_t>> rows(10, {1});
    EXPECT_THROW(loc_series(trace_from(rows), cfg), MetricsError);
}

TEST(WindowState, RunningSumMatchesRecount) {
    std::mt19937 rng(17);
    WindowState w(3, 7);
    for (int t = 0; t < 500; ++t) {
        const std::vector<std::uint8_t> row{static_cast<std::uint8_t>(rng() % 2), static_cast<std::uint8_t>(rng() % 2),
                                            static_cast<std::uint8_t>(rng() % 2)};
        w.push(row);
        for (std::size_t i = 0; i < 3; ++i) {
            ASSERT_EQ(w.sum(i), w.recount(i));
            ASSERT_LE(w.sum(i), 7);
        }
    }
}

TEST(RollingLoc, Examples) {
    const std::vector<double> s{1, 2, 3, 4, 5};
    EXPECT_EQ(rolling_loc(s, 2), (std::vector<double>{1, 3, 5, 7, 9}));
    EXPECT_EQ(rolling_loc(s, 1), s);
    EXPECT_EQ(rolling_loc(s, 10), (std::vector<double>{1, 3, 6, 10, 15}));
    EXPECT_THROW(rolling_loc(s, 0), MetricsError);
}

TEST(SigmaTot, DeterministicSystemHasNoVariance) {
    const auto cfg = make_config(4, {1.0, 1.0}, {0.5, 0.5}, 1000, 10);
    const auto tr = run(cfg, PolicyId::ldf);
    EXPECT_EQ(estimate_sigma_tot_sq(tr, cfg.success_probabilities()), 0.0);
}

TEST(SigmaTot, SingleSlotSingleClient) {
    // S = Bernoulli(p) / p, variance (1 - p) / p.
    for (double p : {0.5, 0.8}) {
        const auto cfg = make_config(1, {p}, {0.2}, 200'000, 10);
        const auto tr = run(cfg, PolicyId::ldf);
        EXPECT_NEAR(estimate_sigma_tot_sq(tr, cfg.success_probabilities()), (1 - p) / p, 0.02) << p;
    }
}

TEST(SigmaI, IndependentIntervalsGiveBernoulliSpread) {
    const auto cfg = make_config(1, {0.5}, {0.2}, 200'000, 10);
    const auto tr = run(cfg, PolicyId::ldf);
    const auto sigma = estimate_sigma_i(tr, default_batch_len(cfg.horizon));
    ASSERT_EQ(sigma.size(), 1u);
    EXPECT_NEAR(sigma[0], 0.5, 0.03);
    EXPECT_EQ(default_batch_len(200'000), 447);
    EXPECT_THROW(estimate_sigma_i(tr, 150'000), MetricsError);
}

TEST(Lyapunov, Examples) {
    const std::vector<double> equal{2, 2, 2};
    const auto a = lyapunov_diag(equal, 3);
    EXPECT_EQ(a.lyapunov, std::vector<double>{0.0});
    EXPECT_EQ(a.spread, std::vector<double>{0.0});

    const std::vector<double> two{1, -1, 0.5, 0.5};
    const auto b = lyapunov_diag(two, 2);
    EXPECT_EQ(b.lyapunov, (std::vector<double>{1.0, 0.0}));
    EXPECT_EQ(b.spread, (std::vector<double>{2.0, 0.0}));

    EXPECT_THROW(lyapunov_diag(std::span<const double>{}, 2), MetricsError);
    const auto cfg = make_config(2, {0.5, 0.5}, {0.3, 0.3});
    EXPECT_THROW(lyapunov_diag(run(cfg, PolicyId::ldf)), MetricsError);
}

TEST(Summarize, DeterministicSystem) {
    const auto cfg = make_config(4, {1.0, 1.0}, {0.5, 0.5}, 400, 10);
    const auto targets = compute_targets(cfg);
    const auto report = summarize(run(cfg, targets, PolicyId::mdvf), cfg, targets, {0, 20});
    EXPECT_EQ(report.loc_series.size(), 390u);
    EXPECT_EQ(report.mean_loc, 0.0);
    EXPECT_EQ(report.mean_rolling_loc, 0.0);
    EXPECT_EQ(report.xbar_emp, (std::vector<double>{1.0, 1.0}));
    EXPECT_EQ(report.sigma_i_emp, (std::vector<double>{0.0, 0.0}));
    EXPECT_EQ(report.sigma_tot_emp, 0.0);
    EXPECT_EQ(report.aoi_mean, (std::vector<double>{1.0, 1.0}));
    EXPECT_NEAR(report.checks.eq2_residual, 0.0, 1e-12);
    EXPECT_NEAR(report.checks.target_residual, 0.0, 1e-12);
    EXPECT_EQ(report.deficit_spread_series.size(), 400u);
}

TEST(Summarize, VarianceSlackIsNonNegativeUpToNoise) {
    auto cfg = preset("high");
    const auto targets = compute_targets(cfg);
    for (auto policy : {PolicyId::mdvf, PolicyId::ldf, PolicyId::mw_aoi}) {
        const auto r = summarize(run(cfg, targets, policy), cfg, targets);
        // Triangle inequality on standard deviations; allow estimator noise.
        EXPECT_GE(r.checks.eq7_slack, -0.1 * r.sigma_tot_emp) << policy_name(policy);
        EXPECT_LE(std::abs(r.checks.eq2_residual), 3.0 * r.checks.eq2_stderr + 1e-9) << policy_name(policy);
        for (std::size_t i = 0; i < cfg.size(); ++i) {
            EXPECT_GE(r.xbar_emp[i], 0.0);
            EXPECT_LE(r.xbar_emp[i], 1.0);
        }
    }
}

} // namespace
} // namespace locsim
