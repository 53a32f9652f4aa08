#ifndef TRUSTMAS_ROUTER_HPP
#define TRUSTMAS_ROUTER_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "trustmas/path.hpp"
#include "trustmas/tables.hpp"

namespace trustmas {

/// Periods and jitter bounds for the three per-SA timers, in sim seconds.
struct TimerConfig {
    double random_walk_period = 60.0;
    double routing_update_period = 30.0;
    double hello_period = 10.0;
    double fluctuation_rw = 12.0;
    double fluctuation_ru = 6.0;
    double fluctuation_h = 2.0;
    double hello_timeout = 30.0; // must exceed hello_period
};

struct ProtocolOptions {
    // Triggered updates reproduce the literal pseudocode; default off, since
    // the protocol's observability argument requires strictly periodic
    // update emissions.
    bool triggered_updates = false;
    // The form-steg-link convergence improvement relay.
    bool form_steg_link = true;
    // Do not advertise a route back to its own next hop. Without this the
    // periodic full-table exchange can ping-pong a dead destination between
    // two SAs until the hop cap, which breaks the failure-purge deadline.
    bool split_horizon = true;
};

/// A hello the engine wants sent (carried on msg.link_method).
struct HelloOut {
    AgentId to;
    HelloMessage msg;
};

/// A form-steg-link request to be relayed along the steg-path to route_dest.
struct FslOut {
    AgentId route_dest;
    FormStegLinkMessage msg;
};

struct UpdateOut {
    AgentId to;
    MethodId method;
    RoutingUpdateMessage msg;
};

/// Everything a handler wants emitted, plus whether tables changed.
struct Actions {
    std::vector<HelloOut> hellos;
    std::vector<FslOut> fsls;
    std::vector<UpdateOut> updates; // non-empty only in triggered-updates mode
    bool table_changed = false;
    std::vector<AgentId> neighbors_removed;
    int routes_purged = 0;
};

/// The per-SA protocol state machine. Single-threaded, driven by the
/// simulator (or directly by tests); it never schedules anything itself,
/// it only returns the messages it wants sent.
class SaEngine {
public:
    SaEngine(AgentId me, CapabilitySet caps, const MethodCatalog* catalog,
             MetricWeights weights, TimerConfig timers, ProtocolOptions options);

    const AgentId& me() const { return me_; }
    const CapabilitySet& caps() const { return caps_; }
    const NeighborTable& neighbors() const { return neighbors_; }
    const RoutingTable& routes() const { return routes_; }
    const TimerConfig& timers() const { return timers_; }
    const ProtocolOptions& options() const { return options_; }

    StegAnnouncement announcement() const { return {me_, caps_}; }

    /// Uncovered announcement from a random-walk message.
    Actions handle_walk_announcement(const StegAnnouncement& ann, SimTime now);

    /// Hello received over msg.link_method. First contact adds the neighbor
    /// and replies once; repeats only refresh the timestamp.
    struct HelloResult {
        Actions actions;
        bool incompatible = false; // link_method outside our caps (logged upstream)
    };
    HelloResult handle_hello(const HelloMessage& msg, SimTime now);

    Actions handle_form_steg_link(const FormStegLinkMessage& msg, SimTime now);

    struct UpdateResult {
        Actions actions;
        bool from_unknown_neighbor = false; // dropped
    };
    UpdateResult handle_routing_update(const RoutingUpdateMessage& msg, SimTime now);

    /// Remove neighbors silent past hello_timeout and purge routes via them.
    Actions sweep_timeouts(SimTime now);

    /// Periodic hello fan-out: one hello per neighbor on its own link method.
    std::vector<HelloOut> periodic_hellos();

    /// Periodic full-table fan-out to every neighbor.
    std::vector<UpdateOut> periodic_updates();

    /// Best route for dest under the configured weights, if any.
    std::optional<RouteEntry> route_lookup(const AgentId& dest) const;

private:
    RoutingUpdateMessage make_update_for(const NeighborEntry& n) const;
    HelloOut make_hello(const AgentId& to, const MethodId& method);
    void relay_or_cache(Actions& out, const StegAnnouncement& ann, SimTime now);

    AgentId me_;
    CapabilitySet caps_;
    const MethodCatalog* catalog_;
    MetricWeights weights_;
    TimerConfig timers_;
    ProtocolOptions options_;

    NeighborTable neighbors_;
    RoutingTable routes_;
    std::uint64_t hello_seq_ = 0;

    struct CachedAnnouncement {
        CapabilitySet caps;
        SimTime expires;
    };
    std::map<AgentId, CachedAnnouncement> ann_cache_;
    // dest -> expiry; advertisements for these are ignored (failure hold-down)
    std::map<AgentId, SimTime> holddown_;
};

} // namespace trustmas

#endif
