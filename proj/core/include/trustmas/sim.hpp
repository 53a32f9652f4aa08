#ifndef TRUSTMAS_SIM_HPP
#define TRUSTMAS_SIM_HPP

#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "json.hpp"

#include "trustmas/scenario.hpp"
#include "trustmas/sim_types.hpp"

namespace trustmas {

/// Deterministic discrete-event run of one scenario. Equal configs (seed
/// included) produce byte-identical traces and summaries.
class Simulation {
public:
    explicit Simulation(ScenarioConfig cfg);

    struct Result {
        Trace trace;
        Summary summary;
    };

    Result run();

private:
    struct RoutedEnvelope {
        enum class Kind { Fsl, Data };
        Kind kind = Kind::Fsl;
        AgentId origin;
        AgentId final_dest;
        FormStegLinkMessage fsl;
        std::string payload;
        std::vector<DeliveryHop> hops;
        RouteAttributes accum;
    };

    struct EvTimer {
        enum class Kind { RandomWalk, Hello, RoutingUpdate } kind;
        AgentId agent;
    };
    struct EvSweep {};
    struct EvWalk {
        AgentId from, to;
        CoverMessage msg;
        std::uint64_t mid;
    };
    struct EvHello {
        AgentId from, to;
        HelloMessage msg;
        std::uint64_t mid;
    };
    struct EvUpdate {
        AgentId from, to;
        MethodId method;
        RoutingUpdateMessage msg;
        std::uint64_t mid;
        bool periodic;
    };
    struct EvRouted {
        AgentId from, to;
        MethodId method;
        RoutedEnvelope env;
        std::uint64_t mid;
    };
    struct EvDynamic {
        std::size_t index;
    };
    using Payload =
        std::variant<EvTimer, EvSweep, EvWalk, EvHello, EvUpdate, EvRouted, EvDynamic>;

    struct Event {
        SimTime time;
        std::uint64_t seq;
        Payload payload;
    };
    struct EventOrder {
        bool operator()(const Event& a, const Event& b) const {
            if (a.time != b.time) return a.time > b.time;
            return a.seq > b.seq;
        }
    };

    struct AgentRt {
        AgentSpec spec;
        bool alive = true;
        std::unique_ptr<SaEngine> engine; // SA only
        Rng walk_rng{0};
        Rng jitter_rw{0}, jitter_h{0}, jitter_ru{0};
        std::uint64_t walk_counter = 0;
    };

    void schedule(SimTime t, Payload p);
    void add_agent(const AgentSpec& spec, SimTime now, bool schedule_timers);
    void dispatch_actions(const AgentId& actor, const Actions& actions, SimTime now);
    void send_hello(const AgentId& from, const HelloOut& h, SimTime now);
    void send_routed(const AgentId& from, RoutedEnvelope env, SimTime now);
    void launch_walk(AgentRt& agent, SimTime now);
    void forward_walk(AgentRt& holder, const CoverMessage& msg, SimTime now);
    void note_table_change(SimTime now);

    void on_timer(const EvTimer& ev, SimTime now);
    void on_sweep(SimTime now);
    void on_walk(const EvWalk& ev, SimTime now);
    void on_hello(const EvHello& ev, SimTime now);
    void on_update(const EvUpdate& ev, SimTime now);
    void on_routed(const EvRouted& ev, SimTime now);
    void on_dynamic(const EvDynamic& ev, SimTime now);

    AgentRt* alive_agent(const AgentId& id);
    std::vector<AgentId>& roster(const PlatformId& p) { return rosters_[p]; }
    double method_delay_s(const MethodId& m) const;

    ScenarioConfig cfg_;
    std::priority_queue<Event, std::vector<Event>, EventOrder> queue_;
    std::uint64_t next_seq_ = 0;
    std::uint64_t next_mid_ = 0;
    std::map<AgentId, AgentRt> agents_;
    std::map<PlatformId, std::vector<AgentId>> rosters_; // sorted, alive agents only

    Trace trace_;
    Summary summary_;
    SimTime last_table_change_ = 0.0;
    bool any_table_change_ = false;
    std::vector<int> walk_lengths_;
    static constexpr double kSweepQuantum = 1.0;
};

} // namespace trustmas

#endif
