#include <benchmark/benchmark.h>

#include "trustmas/metric.hpp"
#include "trustmas/oracle.hpp"
#include "trustmas/sim.hpp"
#include "trustmas/walk.hpp"

using namespace trustmas;

namespace {

ScenarioConfig platform_scenario(int n_sa, int n_oa, double duration) {
    ScenarioConfig cfg;
    cfg.name = "bench";
    cfg.seed = 1;
    cfg.duration = duration;
    cfg.catalog.add({"m_http", StegLayer::Application, 120.0, 40.0, 1.0});
    cfg.catalog.add({"m_tcp", StegLayer::TransportNetwork, 300.0, 12.0, 2.0});
    PlatformSpec plat;
    plat.id = "P";
    for (int i = 0; i < n_sa; ++i)
        plat.agents.push_back({AgentId("P", "sa" + std::to_string(i)), AgentRole::SA,
                               CapabilitySet{"m_http", "m_tcp"}});
    for (int i = 0; i < n_oa; ++i)
        plat.agents.push_back({AgentId("P", "oa" + std::to_string(i)), AgentRole::OA, {}});
    cfg.platforms.push_back(std::move(plat));
    return cfg;
}

void BM_ComposeScore(benchmark::State& state) {
    StegMethodSpec link{"m", StegLayer::Application, 120.0, 40.0, 1.0};
    RouteAttributes adv{300.0, 52.0, 3.0, 2};
    MetricWeights w;
    for (auto _ : state) {
        auto out = compose_attributes(link, adv);
        benchmark::DoNotOptimize(score(*out, w));
    }
}
BENCHMARK(BM_ComposeScore);

void BM_OracleRoutes(benchmark::State& state) {
    ScenarioConfig cfg = platform_scenario(static_cast<int>(state.range(0)), 0, 100.0);
    LinkGraph graph = LinkGraph::from_scenario(cfg);
    for (auto _ : state) {
        auto routes = oracle_routes(graph, cfg.catalog, cfg.weights);
        benchmark::DoNotOptimize(routes.pairs.size());
    }
}
BENCHMARK(BM_OracleRoutes)->Arg(4)->Arg(6)->Arg(8);

void BM_SimulationRun(benchmark::State& state) {
    for (auto _ : state) {
        state.PauseTiming();
        ScenarioConfig cfg = platform_scenario(4, 8, 600.0);
        state.ResumeTiming();
        auto result = Simulation(std::move(cfg)).run();
        benchmark::DoNotOptimize(result.summary.msg_counts.size());
    }
}
BENCHMARK(BM_SimulationRun)->Unit(benchmark::kMillisecond);

void BM_DiscoveryWalks(benchmark::State& state) {
    std::vector<AgentId> roster;
    for (int i = 0; i < 20; ++i) roster.emplace_back("P", "a" + std::to_string(i));
    Rng rng(99);
    for (auto _ : state) {
        auto visits = simulate_discovery_walk(roster.front(), roster, 0.8, rng);
        benchmark::DoNotOptimize(visits.size());
    }
}
BENCHMARK(BM_DiscoveryWalks);

} // namespace

BENCHMARK_MAIN();
