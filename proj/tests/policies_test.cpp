#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "locsim/config.hpp"
#include "locsim/errors.hpp"
#include "locsim/policies.hpp"
#include "test_support.hpp"

namespace locsim {
namespace {

std::vector<ClientParams> clients_with(const std::vector<double>& p, const std::vector<double>& q = {}) {
    std::vector<ClientParams> out;
    for (std::size_t i = 0; i < p.size(); ++i) {
        out.push_back({static_cast<int>(i) + 1, p[i], q.empty() ? 0.5 : q[i]});
    }
    return out;
}

PolicyState with_deficits(PolicyId id, std::vector<double> d, double epsilon) {
    auto s = PolicyState::initial(id, d.size(), epsilon);
    s.deficit.d = std::move(d);
    return s;
}

TEST(PolicyNames, ParseAndPrint) {
    for (auto id : {PolicyId::mdvf, PolicyId::ldf, PolicyId::mw_aoi, PolicyId::max_deficit}) {
        EXPECT_EQ(parse_policy(policy_name(id)), id);
    }
    EXPECT_EQ(policy_name(PolicyId::mw_aoi), "mw-aoi");
    EXPECT_THROW(parse_policy("MDVF"), ConfigError);
    EXPECT_THROW(parse_policy("edf"), ConfigError);
}

TEST(MdvfKey, Examples) {
    const auto c = clients_with({0.5, 0.5});
    EXPECT_EQ(mdvf_key(c[0], 5, 0), -5);
    EXPECT_EQ(mdvf_key(c[1], 3, 0), -3);

    const auto c2 = clients_with({0.5, 1.0});
    EXPECT_EQ(mdvf_key(c2[0], 0, 100), 200);
    EXPECT_EQ(mdvf_key(c2[1], 0, 100), 100);

    const auto c3 = clients_with({1.0, 0.5});
    EXPECT_EQ(mdvf_key(c3[0], 2, 1), -1);
    EXPECT_EQ(mdvf_key(c3[1], 0, 1), 2);
}

TEST(MdvfKey, OrderFollowsKeys) {
    auto c = clients_with({0.5, 0.5});
    EXPECT_EQ(interval_order(with_deficits(PolicyId::mdvf, {5, 3}, 0), c, 1).ids(), (std::vector<int>{1, 2}));
    c = clients_with({0.5, 1.0});
    EXPECT_EQ(interval_order(with_deficits(PolicyId::mdvf, {0, 0}, 100), c, 1).ids(), (std::vector<int>{2, 1}));
    c = clients_with({1.0, 0.5});
    EXPECT_EQ(interval_order(with_deficits(PolicyId::mdvf, {2, 0}, 1), c, 1).ids(), (std::vector<int>{1, 2}));
}

TEST(LdfKey, Examples) {
    const auto c = clients_with({0.5, 0.5}, {0.5, 0.5});
    EXPECT_EQ(ldf_key(c[0], 10, 4), 1);
    EXPECT_EQ(ldf_key(c[1], 10, 6), -1);
    EXPECT_EQ(ldf_key(c[0], 0, 0), 0);
}

TEST(LdfKey, TiesBreakByAscendingId) {
    const auto c = clients_with({0.3, 0.9, 0.5}, {0.5, 0.5, 0.5});
    auto s = PolicyState::initial(PolicyId::ldf, 3, 0);
    EXPECT_EQ(interval_order(s, c, 1).ids(), (std::vector<int>{1, 2, 3}));
}

TEST(LdfKey, HighScenarioFirstInterval) {
    const auto cfg = preset("high");
    const auto s = PolicyState::initial(PolicyId::ldf, cfg.size(), cfg.epsilon);
    std::vector<int> want(12);
    for (int i = 0; i < 12; ++i) want[i] = i + 1;
    EXPECT_EQ(interval_order(s, cfg.clients, 1).ids(), want);
}

TEST(MwAoiKey, Examples) {
    auto c = clients_with({0.5, 1.0});
    EXPECT_DOUBLE_EQ(mwaoi_key(c[0], 1, 0, 1), 0.75);
    EXPECT_DOUBLE_EQ(mwaoi_key(c[1], 1, 0, 1), 1.5);

    c = clients_with({1.0, 1.0});
    EXPECT_DOUBLE_EQ(mwaoi_key(c[0], 3, 0, 1), 7.5);
    EXPECT_DOUBLE_EQ(mwaoi_key(c[1], 1, 5, 1), 6.5);
}

TEST(MwAoiKey, ZeroWeightOrdersByAgeAlone) {
    const auto c = clients_with({0.6, 0.6, 0.6}, {0.9, 0.1, 0.5});
    auto s = PolicyState::initial(PolicyId::mw_aoi, 3, 0, 0.0);
    s.age = {2, 5, 3};
    // Fake two completed intervals so the state matches t = 3.
    const std::vector<std::uint8_t> none(3, 0);
    const std::vector<double> xbar(3, 0.5);
    s.advance(none, xbar, c);
    s.advance(none, xbar, c);
    EXPECT_EQ(interval_order(s, c, 3).ids(), (std::vector<int>{2, 3, 1}));
}

TEST(MaxDeficitKey, Examples) {
    auto c = clients_with({0.5, 0.5});
    EXPECT_EQ(interval_order(with_deficits(PolicyId::max_deficit, {2, -1}, 0), c, 1).ids(),
              (std::vector<int>{1, 2}));
    EXPECT_EQ(interval_order(with_deficits(PolicyId::max_deficit, {1, 1}, 0), c, 1).ids(),
              (std::vector<int>{1, 2}));
    c = clients_with({0.5, 0.5, 0.5});
    EXPECT_EQ(interval_order(with_deficits(PolicyId::max_deficit, {0, 0, 5}, 0), c, 1).ids().front(), 3);
    EXPECT_EQ(max_deficit_key(2.5), 2.5);
}

TEST(IntervalOrder, Examples) {
    EXPECT_EQ(interval_order(with_deficits(PolicyId::mdvf, {0.7}, 5), clients_with({0.4}), 1).ids(),
              std::vector<int>{1});
    EXPECT_EQ(interval_order(with_deficits(PolicyId::mdvf, {1, 2, 3}, 0), clients_with({0.5, 0.5, 0.5}), 1).ids(),
              (std::vector<int>{3, 2, 1}));
}

TEST(IntervalOrder, RejectsStateFromAnotherInterval) {
    const auto s = PolicyState::initial(PolicyId::ldf, 2, 0);
    EXPECT_THROW(interval_order(s, clients_with({0.5, 0.5}), 3), std::logic_error);
}

TEST(IntervalOrder, IsAPermutationForRandomStates) {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> u(-5, 5);
    for (auto id : {PolicyId::mdvf, PolicyId::max_deficit, PolicyId::ldf, PolicyId::mw_aoi}) {
        for (int trial = 0; trial < 50; ++trial) {
            const std::size_t n = 1 + rng() % 9;
            std::vector<double> p(n);
            for (auto& x : p) x = 0.1 + 0.9 * (u(rng) + 5) / 10;
            auto s = PolicyState::initial(id, n, 2.0);
            if (uses_deficits(id)) for (auto& d : s.deficit.d) d = u(rng);
            auto order = interval_order(s, clients_with(p), 1).clients;
            std::sort(order.begin(), order.end());
            for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(order[i], i);
        }
    }
}

TEST(IntervalOrder, RelabellingClientsRelabelsTheOrder) {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> u(0, 1);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng() % 6;
        std::vector<double> p(n), d(n);
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = 0.1 + 0.9 * u(rng);
            d[i] = 10 * u(rng) - 5;
        }
        std::vector<std::size_t> perm(n);
        for (std::size_t i = 0; i < n; ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<double> p2(n), d2(n);
        for (std::size_t i = 0; i < n; ++i) {
            p2[i] = p[perm[i]];
            d2[i] = d[perm[i]];
        }
        const auto a = interval_order(with_deficits(PolicyId::mdvf, d, 1.5), clients_with(p), 1).clients;
        const auto b = interval_order(with_deficits(PolicyId::mdvf, d2, 1.5), clients_with(p2), 1).clients;
        for (std::size_t k = 0; k < n; ++k) EXPECT_EQ(a[k], perm[b[k]]);
    }
}

TEST(SelectNext, Examples) {
    const PriorityOrder order{{1, 0}};
    EXPECT_EQ(select_next(order, std::vector<std::uint8_t>{1, 1}), std::optional<std::size_t>{1});
    EXPECT_EQ(select_next(order, std::vector<std::uint8_t>{1, 0}), std::optional<std::size_t>{0});
    EXPECT_EQ(select_next(order, std::vector<std::uint8_t>{0, 0}), std::nullopt);
}

TEST(UpdateDeficits, Examples) {
    const auto c = clients_with({0.5});
    const std::vector<double> xbar{0.75};
    DeficitState s{{0.0}, 0};
    EXPECT_DOUBLE_EQ(update_deficits(s, std::vector<std::uint8_t>{1}, xbar, c).d[0], -0.5);
    const auto missed = update_deficits(s, std::vector<std::uint8_t>{0}, xbar, c);
    EXPECT_DOUBLE_EQ(missed.d[0], 1.5);
    EXPECT_EQ(missed.t, 1);

    const auto c2 = clients_with({1.0, 1.0});
    const std::vector<double> ones{1.0, 1.0};
    const auto fixed = update_deficits({{0.0, 0.0}, 4}, std::vector<std::uint8_t>{1, 1}, ones, c2);
    EXPECT_EQ(fixed.d, (std::vector<double>{0.0, 0.0}));
}

TEST(PolicyState, AgeResetsAfterDelivery) {
    const auto c = clients_with({0.5, 0.5});
    auto s = PolicyState::initial(PolicyId::mw_aoi, 2, 0);
    const std::vector<double> xbar{0.5, 0.5};
    EXPECT_EQ(s.age, (std::vector<std::int64_t>{1, 1}));
    s.advance(std::vector<std::uint8_t>{1, 0}, xbar, c);
    EXPECT_EQ(s.age, (std::vector<std::int64_t>{1, 2}));
    s.advance(std::vector<std::uint8_t>{0, 0}, xbar, c);
    EXPECT_EQ(s.age, (std::vector<std::int64_t>{2, 3}));
    EXPECT_EQ(s.delivered, (std::vector<std::int64_t>{1, 0}));
    EXPECT_TRUE(s.deficit.d.empty());
}

} // namespace
} // namespace locsim
