// Acceptance gate: one pass/fail line per criterion, non-zero exit on any
// failure. Tolerances are pinned here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"

#include "trustmas/oracle.hpp"
#include "trustmas/sim.hpp"
#include "trustmas/walk.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace trustmas;

namespace {

// pinned tolerances
constexpr double kMeanRelTol = 0.05;     // walk mean within 5% of 1/(1-p_f)
constexpr double kPmfAbsTol = 0.02;      // per-k pmf deviation
constexpr double kHitAbsTol = 0.02;      // SA visit rate vs exact chain value
constexpr double kWalkLawBudgetS = 10.0; // criterion 1 runtime budget
constexpr double kFixedPointBudgetS = 60.0;
constexpr int kWalkTrials = 10000;
constexpr int kRandomScenarios = 20;

int failures = 0;

void report(int idx, const std::string& name, bool ok, const std::string& why = "") {
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << idx << ": " << name;
    if (!ok && !why.empty()) std::cout << " [" << why << "]";
    std::cout << std::endl;
    if (!ok) ++failures;
}

std::string scenario_path(const char* name) {
    return std::string(TRUSTMAS_SCENARIO_DIR) + "/" + name;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// every trace produced anywhere in this binary, for the cross-cutting
// criteria (silence invariant, OA blindness)
std::vector<std::pair<std::string, const Trace*>> all_traces;
std::vector<std::unique_ptr<Simulation::Result>> kept_results;

const Simulation::Result& run_and_keep(const std::string& label, ScenarioConfig cfg) {
    kept_results.push_back(
        std::make_unique<Simulation::Result>(Simulation(std::move(cfg)).run()));
    all_traces.emplace_back(label, &kept_results.back()->trace);
    return *kept_results.back();
}

// ---------------------------------------------------------------- criterion 1

bool walk_law(std::string& why) {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<AgentId> roster;
    for (int i = 0; i < 10; ++i) roster.emplace_back("P", "a" + std::to_string(i));
    for (double p_f : {0.25, 0.5, 0.75}) {
        Rng rng = rng_stream(17, "acceptance", "walk_law");
        std::map<int, long> hist;
        long total = 0;
        for (int i = 0; i < kWalkTrials; ++i) {
            auto walk = simulate_discovery_walk(roster[0], roster, p_f, rng);
            hist[static_cast<int>(walk.size())]++;
            total += static_cast<long>(walk.size());
        }
        double mean = static_cast<double>(total) / kWalkTrials;
        double want = 1.0 / (1.0 - p_f);
        if (std::abs(mean - want) > kMeanRelTol * want) {
            why = "mean " + std::to_string(mean) + " vs " + std::to_string(want);
            return false;
        }
        int k_max = hist.rbegin()->first;
        for (int k = 1; k <= k_max; ++k) {
            double emp = static_cast<double>(hist.count(k) ? hist[k] : 0) / kWalkTrials;
            if (std::abs(emp - walk_length_pmf(p_f, k)) > kPmfAbsTol) {
                why = "pmf deviation at k=" + std::to_string(k);
                return false;
            }
        }
    }
    if (seconds_since(t0) >= kWalkLawBudgetS) {
        why = "over the 10 s budget";
        return false;
    }
    return true;
}

// ---------------------------------------------------------------- criterion 2

bool hit_probability(std::string& why) {
    // 10-agent platform: 4 SAs, 6 OAs
    std::vector<AgentId> roster;
    std::vector<AgentId> sas;
    for (int i = 0; i < 4; ++i) {
        roster.emplace_back("P", "sa" + std::to_string(i));
        sas.push_back(roster.back());
    }
    for (int i = 0; i < 6; ++i) roster.emplace_back("P", "zoa" + std::to_string(i));

    const double p_f = 0.5;
    Rng rng = rng_stream(23, "acceptance", "hit_prob");
    std::map<AgentId, long> visited;
    for (int i = 0; i < kWalkTrials; ++i) {
        auto walk = simulate_discovery_walk(sas[0], roster, p_f, rng);
        std::set<AgentId> seen(walk.begin(), walk.end());
        for (const auto& a : seen) visited[a]++;
    }
    for (const auto& target : sas) {
        if (target == sas[0]) continue;
        double emp = static_cast<double>(visited[target]) / kWalkTrials;
        double exact = oracle_walk_hit(roster, p_f, sas[0], target);
        if (std::abs(emp - exact) > kHitAbsTol) {
            why = target.str() + ": " + std::to_string(emp) + " vs " + std::to_string(exact);
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------- criterion 3

ScenarioConfig random_scenario(int idx) {
    Rng rng(0x51D0'0000ull + static_cast<std::uint64_t>(idx));
    ScenarioConfig cfg;
    cfg.name = "random_" + std::to_string(idx);
    cfg.seed = 9000 + static_cast<std::uint64_t>(idx);
    cfg.duration = 2400.0;
    cfg.walk.p_f = 0.75;

    const StegLayer layers[] = {StegLayer::Application, StegLayer::TransportNetwork,
                                StegLayer::DataLink};
    int n_methods = 1 + static_cast<int>(rng.bounded(3));
    const double caps_pool[] = {50.0, 100.0, 200.0, 400.0};
    for (int m = 0; m < n_methods; ++m)
        cfg.catalog.add({"m" + std::to_string(m), layers[m % 3],
                         caps_pool[rng.bounded(4)], 5.0 + rng.uniform_to(45.0),
                         static_cast<double>(rng.bounded(6))});

    PlatformSpec plat;
    plat.id = "P";
    int n_sa = 3 + static_cast<int>(rng.bounded(6));  // 3..8
    int n_oa = static_cast<int>(rng.bounded(11));     // 0..10
    for (int i = 0; i < n_sa; ++i) {
        AgentSpec a{AgentId("P", "sa" + std::to_string(i)), AgentRole::SA, {}};
        // non-empty random subset of the catalog: mixed compatibility
        while (a.caps.empty())
            for (int m = 0; m < n_methods; ++m)
                if (rng.uniform() < 0.6) a.caps.methods.insert("m" + std::to_string(m));
        plat.agents.push_back(std::move(a));
    }
    for (int i = 0; i < n_oa; ++i)
        plat.agents.push_back({AgentId("P", "oa" + std::to_string(i)), AgentRole::OA, {}});
    cfg.platforms.push_back(std::move(plat));
    return cfg;
}

bool routing_fixed_point(std::string& why) {
    auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < kRandomScenarios; ++i) {
        ScenarioConfig cfg = random_scenario(i);
        auto oracle = oracle_routes(LinkGraph::from_scenario(cfg), cfg.catalog, cfg.weights);
        const auto& result = run_and_keep(cfg.name, cfg);
        auto rep = verify(result.summary, oracle);
        if (!rep.clean()) {
            std::ostringstream ss;
            ss << cfg.name << ": " << rep.mismatches.size() << " mismatch(es), first "
               << rep.mismatches[0].what << " " << rep.mismatches[0].src.str() << "->"
               << rep.mismatches[0].dest.str();
            why = ss.str();
            return false;
        }
    }
    if (seconds_since(t0) >= kFixedPointBudgetS) {
        why = "over the 60 s budget";
        return false;
    }
    return true;
}

// ---------------------------------------------------------------- criterion 4

bool steglink_relay(std::string& why) {
    auto cfg_on = load_scenario_file(scenario_path("fig8_form_steglink.json"));
    AgentId joiner;
    for (const auto& ev : cfg_on.events)
        if (ev.kind == DynamicEvent::Kind::Join) joiner = ev.joiner.id;
    auto cfg_off = cfg_on;
    cfg_off.protocol.form_steg_link = false;

    const auto& on = run_and_keep("fig8_on", cfg_on);
    auto it = on.summary.final_tables.find(joiner);
    if (it == on.summary.final_tables.end()) {
        why = "joiner missing from summary";
        return false;
    }
    if (it->second.neighbors.empty()) {
        why = "relay never produced an adjacency";
        return false;
    }
    std::set<AgentId> expected_dests;
    for (const auto& [sa, snap] : on.summary.final_tables)
        if (sa != joiner) expected_dests.insert(sa);
    std::set<AgentId> have;
    for (const auto& r : it->second.routes) have.insert(r.dest);
    if (have != expected_dests) {
        why = "joiner lacks routes to some SAs";
        return false;
    }

    const auto& off = run_and_keep("fig8_off", cfg_off);
    auto jt = off.summary.final_tables.find(joiner);
    if (jt == off.summary.final_tables.end()) {
        why = "joiner missing from disabled-run summary";
        return false;
    }
    if (!jt->second.neighbors.empty() || !jt->second.routes.empty()) {
        why = "joiner formed links without the relay";
        return false;
    }
    for (const auto& rec : off.trace.records())
        if (rec.actor == joiner.str() &&
            (rec.kind == "neighbor_add" || rec.kind == "route_update_send")) {
            why = "joiner was active mid-run without the relay";
            return false;
        }
    return true;
}

// ---------------------------------------------------------------- criterion 5

bool heterogeneous_path(std::string& why) {
    auto cfg = load_scenario_file(scenario_path("fig10_heterogeneous_path.json"));
    std::map<AgentId, CapabilitySet> caps;
    for (const auto& plat : cfg.platforms)
        for (const auto& a : plat.agents) caps[a.id] = a.caps;

    const auto& result = run_and_keep("fig10", cfg);
    for (const auto& rec : result.summary.deliveries) {
        if (!rec.delivered) continue;
        std::set<MethodId> methods;
        std::set<StegLayer> layers;
        bool caps_ok = true;
        for (const auto& hop : rec.hops) {
            methods.insert(hop.method);
            layers.insert(cfg.catalog.get(hop.method).layer);
            caps_ok &= caps[hop.from].contains(hop.method) && caps[hop.to].contains(hop.method);
        }
        if (methods.size() >= 3 && layers.size() >= 2 && caps_ok) return true;
    }
    why = "no delivery traversed >=3 methods across >=2 layers";
    return false;
}

// ---------------------------------------------------------------- criterion 6

bool failure_purge(std::string& why) {
    auto cfg = load_scenario_file(scenario_path("basic_5sa.json"));
    const AgentId victim("P1", "sa5");
    const double t_kill = 1800.0;

    // all five SAs pairwise share a method: link-graph diameter 1
    auto graph = LinkGraph::from_scenario(cfg);
    std::map<AgentId, std::set<AgentId>> adj;
    for (const auto& e : graph.edges) {
        adj[e.a].insert(e.b);
        adj[e.b].insert(e.a);
    }
    int diameter = 0;
    for (const auto& [src, _] : graph.nodes) {
        std::map<AgentId, int> dist{{src, 0}};
        std::vector<AgentId> frontier{src};
        while (!frontier.empty()) {
            std::vector<AgentId> next;
            for (const auto& u : frontier)
                for (const auto& v : adj[u])
                    if (!dist.count(v)) {
                        dist[v] = dist[u] + 1;
                        next.push_back(v);
                    }
            frontier = std::move(next);
        }
        for (const auto& [_, d] : dist) diameter = std::max(diameter, d);
    }

    const double latency_slack = 10.0; // sweep quantum + message latencies
    const double deadline = t_kill + cfg.timers.hello_timeout +
                            diameter * cfg.timers.routing_update_period + latency_slack;

    cfg.duration = deadline;
    DynamicEvent ev;
    ev.time = t_kill;
    ev.kind = DynamicEvent::Kind::Kill;
    ev.agent = victim;
    cfg.events.push_back(ev);

    const auto& result = run_and_keep("kill_sa5", cfg);
    for (const auto& [sa, snap] : result.summary.final_tables) {
        for (const auto& [addr, method] : snap.neighbors)
            if (addr == victim) {
                why = sa.str() + " still lists the dead neighbor";
                return false;
            }
        for (const auto& r : snap.routes)
            if (r.dest == victim || r.next_hop == victim) {
                why = sa.str() + " still routes " +
                      (r.dest == victim ? "to" : "via") + " the dead SA";
                return false;
            }
    }
    // the removals themselves must appear in the trace, inside the window
    std::set<std::string> removers;
    for (const auto& rec : result.trace.records())
        if (rec.kind == "neighbor_remove" && rec.detail["neighbor"] == victim.str()) {
            if (rec.t < t_kill || rec.t > deadline) {
                why = "neighbor removal outside the allowed window";
                return false;
            }
            removers.insert(rec.actor);
        }
    if (removers.size() != result.summary.final_tables.size()) {
        why = "some survivor never logged the neighbor removal";
        return false;
    }
    return true;
}

// ---------------------------------------------------------------- criterion 7

bool silence_invariant(std::string& why) {
    long checked = 0;
    for (const auto& [label, trace] : all_traces) {
        std::set<std::pair<std::string, double>> ticks;
        for (const auto& rec : trace->records())
            if (rec.kind == "ru_tick") ticks.insert({rec.actor, rec.t});
        for (const auto& rec : trace->records()) {
            if (rec.kind != "route_update_send") continue;
            ++checked;
            if (!rec.detail.value("periodic", false)) {
                why = label + ": event-triggered update by " + rec.actor;
                return false;
            }
            if (!ticks.count({rec.actor, rec.t})) {
                why = label + ": update outside the sender's tick schedule";
                return false;
            }
        }
    }
    if (checked == 0) {
        why = "no routing updates observed at all";
        return false;
    }
    return true;
}

// ---------------------------------------------------------------- criterion 8

bool determinism(std::string& why) {
    for (const char* name : {"line_abc.json", "fig8_form_steglink.json",
                             "fig10_heterogeneous_path.json", "basic_5sa.json"}) {
        auto r1 = Simulation(load_scenario_file(scenario_path(name))).run();
        auto r2 = Simulation(load_scenario_file(scenario_path(name))).run();
        if (r1.trace.to_jsonl() != r2.trace.to_jsonl()) {
            why = std::string(name) + ": traces differ";
            return false;
        }
        if (r1.summary.to_json().dump() != r2.summary.to_json().dump()) {
            why = std::string(name) + ": summaries differ";
            return false;
        }
        kept_results.push_back(std::make_unique<Simulation::Result>(std::move(r1)));
        all_traces.emplace_back(name, &kept_results.back()->trace);
    }
    return true;
}

// ---------------------------------------------------------------- criterion 9

bool oa_blindness(std::string& why) {
    // direct API check: the hidden payload is never visible to an OA caller
    StegAnnouncement ann{AgentId("P", "s"), {"m"}};
    if (uncover(cover(ann, "w"), false).has_value()) {
        why = "uncover leaked a payload to an OA caller";
        return false;
    }

    const std::string forbidden[] = {"hello_send", "hello_recv",      "neighbor_add",
                                     "neighbor_remove", "ru_tick",    "route_update_send",
                                     "route_update_recv", "discovery", "form_steglink_send",
                                     "form_steglink_recv"};
    for (const char* name : {"line_abc.json", "fig8_form_steglink.json",
                             "fig10_heterogeneous_path.json", "basic_5sa.json"}) {
        auto cfg = load_scenario_file(scenario_path(name));
        std::set<std::string> oas;
        for (const auto& plat : cfg.platforms)
            for (const auto& a : plat.agents)
                if (a.role == AgentRole::OA) oas.insert(a.id.str());
        for (const auto& ev : cfg.events)
            if (ev.kind == DynamicEvent::Kind::Join && ev.joiner.role == AgentRole::OA)
                oas.insert(ev.joiner.id.str());

        auto result = Simulation(std::move(cfg)).run();
        for (const auto& rec : result.trace.records()) {
            if (!oas.count(rec.actor)) continue;
            for (const auto& k : forbidden)
                if (rec.kind == k) {
                    why = std::string(name) + ": OA " + rec.actor + " logged " + k;
                    return false;
                }
        }
    }
    return true;
}

// --------------------------------------------------------------- criterion 10

bool fault_injection(std::string& why) {
    auto cfg = load_scenario_file(scenario_path("line_abc.json"));
    auto oracle = oracle_routes(LinkGraph::from_scenario(cfg), cfg.catalog, cfg.weights);
    auto result = Simulation(cfg).run();

    if (!verify(result.summary, oracle).clean()) {
        why = "baseline run does not verify";
        return false;
    }

    // degrade one converged entry as a worse next hop would: inflate the
    // stored attributes and score of A's route to C
    Summary broken = result.summary;
    const AgentId src("P1", "A"), dst("P1", "C");
    bool perturbed = false;
    for (auto& r : broken.final_tables.at(src).routes)
        if (r.dest == dst) {
            r.attrs.total_delay_ms += 100.0;
            r.route_score += 100.0;
            perturbed = true;
        }
    if (!perturbed) {
        why = "no converged A->C entry to perturb";
        return false;
    }
    auto rep = verify(broken, oracle);
    if (rep.mismatches.size() != 1 || rep.mismatches[0].src != src ||
        rep.mismatches[0].dest != dst || rep.mismatches[0].what != "score") {
        why = "report does not name exactly the perturbed pair";
        return false;
    }

    // the same fault through the CLI must exit with code 1
    fs::path tmp = fs::temp_directory_path() /
                   ("trustmas_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(tmp);
    {
        std::ofstream(tmp / "summary.json") << broken.to_json().dump();
        json oj = oracle.to_json();
        oj["scenario"] = cfg.name;
        std::ofstream(tmp / "oracle.json") << oj.dump();
    }
    std::string cmd = std::string(TRUSTMAS_CLI_PATH) + " verify " +
                      (tmp / "summary.json").string() + " " + (tmp / "oracle.json").string() +
                      " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    fs::remove_all(tmp);
    if (status == -1 || WEXITSTATUS(status) != 1) {
        why = "CLI verify did not exit with code 1";
        return false;
    }
    return true;
}

} // namespace

int main() {
    struct Criterion {
        const char* name;
        bool (*fn)(std::string&);
    };
    const Criterion criteria[] = {
        {"random walk hop law", walk_law},
        {"walk hit probability", hit_probability},
        {"routing fixed point vs exhaustive search", routing_fixed_point},
        {"form-steg-link relay", steglink_relay},
        {"heterogeneous delivery path", heterogeneous_path},
        {"failure purge deadline", failure_purge},
        {"routing-update silence invariant", silence_invariant},
        {"byte-identical determinism", determinism},
        {"ordinary-agent blindness", oa_blindness},
        {"fault-injection soundness", fault_injection},
    };
    int idx = 0;
    for (const auto& c : criteria) {
        ++idx;
        std::string why;
        bool ok = false;
        try {
            ok = c.fn(why);
        } catch (const std::exception& e) {
            why = std::string("exception: ") + e.what();
        }
        report(idx, c.name, ok, why);
    }
    return failures == 0 ? 0 : 1;
}
