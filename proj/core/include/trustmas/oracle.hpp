#ifndef TRUSTMAS_ORACLE_HPP
#define TRUSTMAS_ORACLE_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "json.hpp"

#include "trustmas/scenario.hpp"
#include "trustmas/sim_types.hpp"

namespace trustmas {

class TooLarge : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The full formable-link graph of a scenario: every same-platform SA pair
/// with overlapping capabilities, plus the fixed relations. Undirected;
/// an edge can carry several usable methods.
struct LinkGraph {
    std::map<AgentId, CapabilitySet> nodes;
    struct Edge {
        AgentId a, b;
        std::vector<MethodId> methods;
    };
    std::vector<Edge> edges;

    static LinkGraph from_scenario(const ScenarioConfig& cfg);
};

struct OraclePath {
    bool reachable = false;
    double best_score = 0.0;
    RouteAttributes attrs;
    std::vector<AgentId> path; // witness, src..dst inclusive
};

/// Exhaustive best steg-path per ordered SA pair: every simple path up to
/// MAX_HOPS, per-edge method chosen by its single-link score (ties broken by
/// method id), independent of the protocol's distance-vector machinery.
/// Guarded to <= 12 nodes.
struct OracleRoutes {
    std::map<std::pair<AgentId, AgentId>, OraclePath> pairs;

    nlohmann::json to_json() const;
    static OracleRoutes from_json(const nlohmann::json& j);
};

OracleRoutes oracle_routes(const LinkGraph& graph, const MethodCatalog& catalog,
                           const MetricWeights& w);

/// Exact probability that a discovery walk from `origin` ever visits
/// `target`, by solving the absorbing chain of the uniform-selection walk
/// with per-step termination probability (1 - p_f). Roster guard: <= 20.
double oracle_walk_hit(const std::vector<AgentId>& roster, double p_f, const AgentId& origin,
                       const AgentId& target);

struct Mismatch {
    AgentId src, dest;
    std::optional<double> sim_score;
    std::optional<double> oracle_score;
    std::string what; // "score", "missing_route", "unexpected_route"
};

struct VerifyReport {
    int pairs_checked = 0;
    std::vector<Mismatch> mismatches;
    bool clean() const { return mismatches.empty(); }
    nlohmann::json to_json() const;
};

/// Compare a converged run's best scores per pair against the oracle.
/// Exact score equality is required; mismatches are report content.
VerifyReport verify(const Summary& summary, const OracleRoutes& oracle);

} // namespace trustmas

#endif
