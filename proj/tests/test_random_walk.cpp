#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <map>

#include "trustmas/walk.hpp"

using namespace trustmas;

namespace {

std::vector<AgentId> make_roster(int n) {
    std::vector<AgentId> r;
    for (int i = 0; i < n; ++i) r.emplace_back("P", "a" + std::to_string(i));
    return r;
}

} // namespace

TEST_CASE("hop count pmf is geometric with the coin bias") {
    CHECK(walk_length_pmf(0.5, 1) == 0.5);
    CHECK(walk_length_pmf(0.5, 3) == 0.125);
    CHECK(walk_length_pmf(0.0, 1) == 1.0);
    CHECK(walk_length_pmf(0.0, 2) == 0.0);
    CHECK(walk_length_pmf(0.5, 0) == 0.0);
    CHECK(walk_length_pmf(0.5, -3) == 0.0);
    // normalization
    double sum = 0.0;
    for (int k = 1; k < 200; ++k) sum += walk_length_pmf(0.8, k);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("select_random_agent excludes self and covers all others") {
    auto roster = make_roster(5);
    Rng rng(3);
    std::map<AgentId, int> counts;
    for (int i = 0; i < 5000; ++i) {
        auto pick = select_random_agent(roster, roster[2], rng);
        REQUIRE(pick.has_value());
        CHECK(*pick != roster[2]);
        counts[*pick]++;
    }
    CHECK(counts.size() == 4);
    for (const auto& [id, n] : counts) CHECK(n > 1000); // ~1250 expected each
}

TEST_CASE("select_random_agent on a degenerate roster") {
    std::vector<AgentId> lone{AgentId("P", "only")};
    Rng rng(1);
    CHECK_FALSE(select_random_agent(lone, lone[0], rng).has_value());
}

TEST_CASE("walks replay identically from equal rng state") {
    auto roster = make_roster(8);
    Rng a(77), b(77);
    for (int i = 0; i < 50; ++i) {
        auto wa = simulate_discovery_walk(roster[0], roster, 0.7, a);
        auto wb = simulate_discovery_walk(roster[0], roster, 0.7, b);
        CHECK(wa == wb);
    }
}

TEST_CASE("discovery walk length follows the analytic law") {
    auto roster = make_roster(10);
    const double p_f = 0.75;
    const int trials = 200000;
    Rng rng(2024);
    long total = 0;
    std::map<int, long> hist;
    for (int i = 0; i < trials; ++i) {
        auto walk = simulate_discovery_walk(roster[0], roster, p_f, rng);
        REQUIRE_FALSE(walk.empty());
        CHECK(walk.front() != roster[0]); // origin never hands the message to itself
        total += static_cast<long>(walk.size());
        hist[static_cast<int>(walk.size())]++;
    }
    double mean = static_cast<double>(total) / trials;
    CHECK(mean == doctest::Approx(1.0 / (1.0 - p_f)).epsilon(0.02));
    for (int k = 1; k <= 8; ++k) {
        double emp = static_cast<double>(hist[k]) / trials;
        CHECK(std::abs(emp - walk_length_pmf(p_f, k)) < 0.01);
    }
}

TEST_CASE("discovery walk on a degenerate platform is empty") {
    std::vector<AgentId> lone{AgentId("P", "only")};
    Rng rng(5);
    CHECK(simulate_discovery_walk(lone[0], lone, 0.9, rng).empty());
}

TEST_CASE("unicast with p_f=0 uses exactly one proxy") {
    auto roster = make_roster(6);
    WalkConfig cfg;
    cfg.p_f = 0.0;
    cfg.mode = WalkMode::Unicast;
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        auto rec = anonymous_unicast(roster[0], roster[5], roster, cfg, rng);
        CHECK(rec.delivered);
        CHECK(rec.proxies.size() == 1);
        CHECK(rec.proxies[0] != roster[0]);
        CHECK(rec.origin == roster[0]);
        CHECK(rec.dest == roster[5]);
    }
}

TEST_CASE("unicast chains lengthen with the forwarding bias") {
    auto roster = make_roster(6);
    WalkConfig cfg;
    cfg.mode = WalkMode::Unicast;
    Rng rng(12);
    auto mean_proxies = [&](double p_f) {
        cfg.p_f = p_f;
        long total = 0;
        const int trials = 20000;
        for (int i = 0; i < trials; ++i) {
            auto rec = anonymous_unicast(roster[0], roster[5], roster, cfg, rng);
            CHECK(rec.delivered);
            total += static_cast<long>(rec.proxies.size());
        }
        return static_cast<double>(total) / trials;
    };
    // chain length is 1 + Geom(1-p_f) forwarding steps: mean 1/(1-p_f)
    CHECK(mean_proxies(0.5) == doctest::Approx(2.0).epsilon(0.05));
    CHECK(mean_proxies(0.8) == doctest::Approx(5.0).epsilon(0.05));
}
