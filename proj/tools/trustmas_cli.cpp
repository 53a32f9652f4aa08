// trustmas — scenario runner and verification front end.
//
// Exit codes are a scripting contract:
//   0 success, 1 verification mismatch, 2 configuration error, 3 internal error.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <cmath>

#include "CLI11.hpp"
#include "json.hpp"

#include "trustmas/oracle.hpp"
#include "trustmas/sim.hpp"
#include "trustmas/walk.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace trustmas;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInternal = 3;

fs::path default_out_dir() {
    if (const char* env = std::getenv("TRUSTMAS_OUT")) return fs::path(env);
    return fs::current_path();
}

void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

json read_json_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("$", "cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("$", path.string() + ": " + e.what());
    }
    return j;
}

int cmd_validate(const std::string& scenario_path) {
    try {
        load_scenario_file(scenario_path);
    } catch (const ConfigError& e) {
        std::cerr << "INVALID " << e.what() << "\n";
        return kExitConfig;
    }
    std::cout << "OK\n";
    return kExitOk;
}

int cmd_run(const std::string& scenario_path, std::optional<std::uint64_t> seed_override,
            const std::string& out_dir, bool with_trace, const std::string& format) {
    ScenarioConfig cfg = load_scenario_file(scenario_path);
    if (seed_override) cfg.seed = *seed_override;
    auto result = Simulation(std::move(cfg)).run();

    fs::path out = out_dir.empty() ? default_out_dir() : fs::path(out_dir);
    write_file(out / "summary.json", result.summary.to_json().dump(2) + "\n");
    if (with_trace) write_file(out / "trace.jsonl", result.trace.to_jsonl());

    if (format == "json") {
        json brief{{"scenario", result.summary.scenario},
                   {"convergence_time", result.summary.convergence_time
                                            ? json(*result.summary.convergence_time)
                                            : json(nullptr)},
                   {"msg_counts", result.summary.msg_counts}};
        std::cout << brief.dump() << "\n";
    } else {
        if (result.summary.convergence_time)
            std::cout << "convergence_time  " << *result.summary.convergence_time << "\n";
        else
            std::cout << "convergence_time  (not converged)\n";
        for (const auto& [kind, n] : result.summary.msg_counts)
            std::cout << std::left << std::setw(18) << kind << n << "\n";
    }
    return kExitOk;
}

int cmd_oracle(const std::string& scenario_path, const std::string& out_path) {
    ScenarioConfig cfg = load_scenario_file(scenario_path);
    LinkGraph graph = LinkGraph::from_scenario(cfg);
    OracleRoutes routes = oracle_routes(graph, cfg.catalog, cfg.weights);
    json doc = routes.to_json();
    doc["scenario"] = cfg.name;

    // exact walk-hit probabilities per platform, SA origin -> SA target
    json hits = json::array();
    for (const auto& plat : cfg.platforms) {
        std::vector<AgentId> roster;
        std::vector<AgentId> sas;
        for (const auto& a : plat.agents) {
            roster.push_back(a.id);
            if (a.role == AgentRole::SA) sas.push_back(a.id);
        }
        if (roster.size() > 20) continue; // guarded per platform
        for (const auto& o : sas)
            for (const auto& t : sas) {
                if (o == t) continue;
                hits.push_back({{"origin", o.str()},
                                {"target", t.str()},
                                {"probability", oracle_walk_hit(roster, cfg.walk.p_f, o, t)}});
            }
    }
    doc["walk_hit"] = std::move(hits);

    fs::path out = out_path.empty() ? default_out_dir() / "oracle.json" : fs::path(out_path);
    write_file(out, doc.dump(2) + "\n");
    std::cout << "wrote " << out.string() << " (" << routes.pairs.size() << " pairs)\n";
    return kExitOk;
}

int cmd_verify(const std::string& summary_path, const std::string& oracle_path) {
    json sj = read_json_file(summary_path);
    json oj = read_json_file(oracle_path);
    Summary summary = Summary::from_json(sj);
    if (!oj.contains("scenario") || oj["scenario"].get<std::string>() != summary.scenario)
        throw ConfigError("scenario", "summary and oracle describe different scenarios");
    OracleRoutes routes = OracleRoutes::from_json(oj);
    VerifyReport report = verify(summary, routes);
    std::cout << report.to_json().dump(2) << "\n";
    return report.clean() ? kExitOk : kExitMismatch;
}

int cmd_walkstats(const std::string& scenario_path, long trials, std::vector<double> p_fs) {
    ScenarioConfig cfg = load_scenario_file(scenario_path);
    if (p_fs.empty()) p_fs.push_back(cfg.walk.p_f);
    const auto& plat = cfg.platforms.front();
    std::vector<AgentId> roster;
    std::vector<AgentId> sas;
    for (const auto& a : plat.agents) {
        roster.push_back(a.id);
        if (a.role == AgentRole::SA) sas.push_back(a.id);
    }
    if (roster.size() < 2) throw ConfigError("platforms[0]", "needs at least two agents");
    const AgentId origin = sas.empty() ? roster.front() : sas.front();

    for (double p_f : p_fs) {
        if (p_f < 0.0 || p_f >= 1.0) throw ConfigError("p_f", "must be in [0, 1)");
        Rng rng = rng_stream(cfg.seed, origin.str(), "walkstats");
        std::map<int, long> hist;
        std::map<AgentId, long> visits;
        long total_hops = 0;
        for (long i = 0; i < trials; ++i) {
            auto walk = simulate_discovery_walk(origin, roster, p_f, rng);
            hist[static_cast<int>(walk.size())]++;
            total_hops += static_cast<long>(walk.size());
            std::set<AgentId> seen(walk.begin(), walk.end());
            for (const auto& a : seen) visits[a]++;
        }
        double mean = static_cast<double>(total_hops) / static_cast<double>(trials);
        std::cout << "p_f=" << p_f << "  trials=" << trials << "  mean_hops=" << mean
                  << "  analytic=" << 1.0 / (1.0 - p_f) << "\n";
        std::cout << "  hops  empirical  pmf        |dev|\n";
        for (const auto& [k, n] : hist) {
            if (k > 12) break;
            double emp = static_cast<double>(n) / static_cast<double>(trials);
            double pmf = walk_length_pmf(p_f, k);
            std::cout << "  " << std::left << std::setw(6) << k << std::setw(11) << emp
                      << std::setw(11) << pmf << std::abs(emp - pmf) << "\n";
        }
        std::cout << "  SA hit rates vs markov chain:\n";
        for (const auto& sa : sas) {
            if (sa == origin) continue;
            double emp = static_cast<double>(visits[sa]) / static_cast<double>(trials);
            double exact = oracle_walk_hit(roster, p_f, origin, sa);
            std::cout << "  " << std::left << std::setw(12) << sa.str() << std::setw(11) << emp
                      << std::setw(11) << exact << std::abs(emp - exact) << "\n";
        }
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"TrustMAS steg-routing simulator"};
    app.require_subcommand(1);

    std::string scenario_path, out_dir, out_path, summary_path, oracle_path;
    std::string format = "table";
    std::optional<std::uint64_t> seed_override;
    std::string trace_mode = "on";
    long trials = 10000;
    std::vector<double> p_fs;

    auto* validate = app.add_subcommand("validate", "check a scenario file");
    validate->add_option("scenario", scenario_path)->required();

    auto* run = app.add_subcommand("run", "simulate a scenario");
    run->add_option("scenario", scenario_path)->required();
    run->add_option("--seed", seed_override, "override the scenario seed");
    run->add_option("--out", out_dir, "output directory (default $TRUSTMAS_OUT or cwd)");
    run->add_option("--trace", trace_mode, "write trace.jsonl (on|off)")
        ->check(CLI::IsMember({"on", "off"}));
    run->add_option("--format", format)->check(CLI::IsMember({"json", "table"}));

    auto* oracle = app.add_subcommand("oracle", "exhaustive ground truth for a scenario");
    oracle->add_option("scenario", scenario_path)->required();
    oracle->add_option("--out", out_path, "output file (default oracle.json)");

    auto* verify = app.add_subcommand("verify", "compare a run summary against an oracle");
    verify->add_option("summary", summary_path)->required();
    verify->add_option("oracle", oracle_path)->required();

    auto* walkstats = app.add_subcommand("walkstats", "random-walk statistics for a scenario");
    walkstats->add_option("scenario", scenario_path)->required();
    walkstats->add_option("--trials", trials);
    walkstats->add_option("--p-f", p_fs, "forwarding probabilities to evaluate");

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) return cmd_validate(scenario_path);
        if (run->parsed()) return cmd_run(scenario_path, seed_override, out_dir, trace_mode == "on", format);
        if (oracle->parsed()) return cmd_oracle(scenario_path, out_path);
        if (verify->parsed()) return cmd_verify(summary_path, oracle_path);
        if (walkstats->parsed()) return cmd_walkstats(scenario_path, trials, p_fs);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const TooLarge& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInternal;
}
