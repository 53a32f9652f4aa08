#ifndef TRUSTMAS_SCENARIO_HPP
#define TRUSTMAS_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "trustmas/router.hpp"
#include "trustmas/walk.hpp"

namespace trustmas {

/// Scenario validation failure; `field` is the path of the offending entry.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

struct AgentSpec {
    AgentId id;
    AgentRole role = AgentRole::OA;
    CapabilitySet caps; // SA only
};

struct PlatformSpec {
    PlatformId id;
    std::vector<AgentSpec> agents;
};

/// Pre-provisioned cross-platform steg-link (fixed relation).
struct FixedRelation {
    AgentId sa_a;
    AgentId sa_b;
    MethodId method;
};

struct DynamicEvent {
    enum class Kind { Kill, Join, Send };
    SimTime time = 0.0;
    Kind kind = Kind::Kill;
    AgentId agent;               // kill target
    AgentSpec joiner;            // join
    AgentId from, to;            // send
    std::string payload;         // send
};

struct ScenarioConfig {
    std::string name;
    std::uint64_t seed = 0;
    SimTime duration = 0.0;
    MethodCatalog catalog;
    MetricWeights weights;
    WalkConfig walk;
    TimerConfig timers;
    ProtocolOptions protocol;
    std::vector<PlatformSpec> platforms;
    std::vector<FixedRelation> fixed_relations;
    std::vector<DynamicEvent> events;
};

/// Parse and validate a scenario JSON document. Throws ConfigError with the
/// offending field path on any violation.
ScenarioConfig load_scenario(const std::string& json_text);
ScenarioConfig load_scenario_file(const std::string& path);

/// Serialize back to JSON (round-trips through load_scenario).
std::string scenario_to_json(const ScenarioConfig& cfg);

} // namespace trustmas

#endif
