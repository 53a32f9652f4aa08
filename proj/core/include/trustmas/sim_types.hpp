#ifndef TRUSTMAS_SIM_TYPES_HPP
#define TRUSTMAS_SIM_TYPES_HPP

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "trustmas/path.hpp"
#include "trustmas/rng.hpp"
#include "trustmas/router.hpp"

namespace trustmas {

/// One replayable event-log record.
struct TraceRecord {
    SimTime t = 0.0;
    std::string actor;
    std::string kind;
    nlohmann::json detail;
};

/// Ordered, deterministic event log. Serializes to JSON Lines with stable
/// key order (alphabetical), so equal runs are byte-identical.
class Trace {
public:
    void add(SimTime t, const std::string& actor, const std::string& kind,
             nlohmann::json detail = nlohmann::json::object()) {
        records_.push_back(TraceRecord{t, actor, kind, std::move(detail)});
    }
    const std::vector<TraceRecord>& records() const { return records_; }
    std::string to_jsonl() const;

private:
    std::vector<TraceRecord> records_;
};

/// A scored best route as frozen in the end-of-run summary.
struct SummaryRoute {
    AgentId dest;
    CapabilitySet dest_caps;
    AgentId next_hop;
    RouteAttributes attrs;
    double route_score = 0.0;
};

struct SaSnapshot {
    CapabilitySet caps;
    std::vector<std::pair<AgentId, MethodId>> neighbors; // sorted by address
    std::vector<SummaryRoute> routes;                    // best entries, sorted by dest
};

struct WalkStats {
    long launched = 0;
    long terminated = 0;
    double mean_hops = 0.0;
    std::map<int, long> hop_histogram;
};

struct Summary {
    std::string scenario;
    std::uint64_t seed = 0;
    std::optional<SimTime> convergence_time;
    std::map<std::string, long> msg_counts;
    WalkStats walk_stats;
    std::map<AgentId, SaSnapshot> final_tables;
    std::vector<DeliveryRecord> deliveries;

    nlohmann::json to_json() const;
    static Summary from_json(const nlohmann::json& j);
};

} // namespace trustmas

#endif
