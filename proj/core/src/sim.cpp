#include "trustmas/sim.hpp"

#include <algorithm>
#include <cassert>

namespace trustmas {

using nlohmann::json;

namespace {

json caps_json(const CapabilitySet& caps) {
    return std::vector<std::string>(caps.methods.begin(), caps.methods.end());
}

} // namespace

Simulation::Simulation(ScenarioConfig cfg) : cfg_(std::move(cfg)) {
    summary_.scenario = cfg_.name;
    summary_.seed = cfg_.seed;
}

void Simulation::schedule(SimTime t, Payload p) {
    queue_.push(Event{t, next_seq_++, std::move(p)});
}

double Simulation::method_delay_s(const MethodId& m) const {
    return cfg_.catalog.get(m).delay_ms / 1000.0;
}

Simulation::AgentRt* Simulation::alive_agent(const AgentId& id) {
    auto it = agents_.find(id);
    if (it == agents_.end() || !it->second.alive) return nullptr;
    return &it->second;
}

void Simulation::add_agent(const AgentSpec& spec, SimTime now, bool with_timers) {
    AgentRt rt;
    rt.spec = spec;
    rt.walk_rng = rng_stream(cfg_.seed, spec.id.str(), "walk");
    rt.jitter_rw = rng_stream(cfg_.seed, spec.id.str(), "jitter.rw");
    rt.jitter_h = rng_stream(cfg_.seed, spec.id.str(), "jitter.hello");
    rt.jitter_ru = rng_stream(cfg_.seed, spec.id.str(), "jitter.ru");
    if (spec.role == AgentRole::SA)
        rt.engine = std::make_unique<SaEngine>(spec.id, spec.caps, &cfg_.catalog, cfg_.weights,
                                               cfg_.timers, cfg_.protocol);
    auto& slot = agents_.emplace(spec.id, std::move(rt)).first->second;
    auto& ros = roster(spec.id.platform);
    ros.insert(std::upper_bound(ros.begin(), ros.end(), spec.id), spec.id);
    if (with_timers && slot.spec.role == AgentRole::SA) {
        const auto& t = cfg_.timers;
        schedule(now + t.random_walk_period + slot.jitter_rw.uniform_to(t.fluctuation_rw),
                 EvTimer{EvTimer::Kind::RandomWalk, spec.id});
        schedule(now + t.hello_period + slot.jitter_h.uniform_to(t.fluctuation_h),
                 EvTimer{EvTimer::Kind::Hello, spec.id});
        schedule(now + t.routing_update_period + slot.jitter_ru.uniform_to(t.fluctuation_ru),
                 EvTimer{EvTimer::Kind::RoutingUpdate, spec.id});
    }
}

void Simulation::note_table_change(SimTime now) {
    last_table_change_ = now;
    any_table_change_ = true;
}

void Simulation::send_hello(const AgentId& from, const HelloOut& h, SimTime now) {
    std::uint64_t mid = next_mid_++;
    trace_.add(now, from.str(), "hello_send",
               {{"to", h.to.str()},
                {"method", h.msg.link_method},
                {"seq", h.msg.seq},
                {"mid", mid}});
    summary_.msg_counts["hello"]++;
    schedule(now + method_delay_s(h.msg.link_method), EvHello{from, h.to, h.msg, mid});
}

void Simulation::send_routed(const AgentId& from, RoutedEnvelope env, SimTime now) {
    auto* rt = alive_agent(from);
    if (!rt || !rt->engine) return;
    const SaEngine& eng = *rt->engine;
    const bool is_data = env.kind == RoutedEnvelope::Kind::Data;
    const char* drop_kind = is_data ? "data_drop" : "form_steglink_drop";

    if (static_cast<int>(env.hops.size()) >= MAX_HOPS) {
        if (is_data) {
            DeliveryRecord rec{env.origin, env.final_dest, env.hops, env.accum, false, true};
            summary_.deliveries.push_back(rec);
        }
        trace_.add(now, from.str(), drop_kind,
                   {{"dest", env.final_dest.str()}, {"reason", "loop"}});
        return;
    }

    // next hop: a direct neighbor wins, otherwise the best stored route
    AgentId next;
    MethodId method;
    if (const auto* n = eng.neighbors().find(env.final_dest)) {
        next = env.final_dest;
        method = n->link_method;
    } else if (auto route = eng.route_lookup(env.final_dest)) {
        next = route->next_hop;
        method = eng.neighbors().find(next)->link_method;
    } else {
        if (is_data) {
            DeliveryRecord rec{env.origin, env.final_dest, env.hops, env.accum, false, false};
            summary_.deliveries.push_back(rec);
        }
        trace_.add(now, from.str(), drop_kind,
                   {{"dest", env.final_dest.str()}, {"reason", "no_path"}});
        return;
    }

    env.hops.push_back(DeliveryHop{from, next, method});
    env.accum = *compose_attributes(cfg_.catalog.get(method), env.accum);
    std::uint64_t mid = next_mid_++;
    trace_.add(now, from.str(), is_data ? "data_forward" : "form_steglink_send",
               {{"to", next.str()},
                {"dest", env.final_dest.str()},
                {"method", method},
                {"mid", mid}});
    summary_.msg_counts[is_data ? "data" : "form_steglink"]++;
    schedule(now + method_delay_s(method), EvRouted{from, next, method, std::move(env), mid});
}

void Simulation::dispatch_actions(const AgentId& actor, const Actions& actions, SimTime now) {
    for (const auto& gone : actions.neighbors_removed)
        trace_.add(now, actor.str(), "neighbor_remove", {{"neighbor", gone.str()}});
    if (actions.table_changed) note_table_change(now);
    for (const auto& h : actions.hellos) send_hello(actor, h, now);
    for (const auto& f : actions.fsls) {
        RoutedEnvelope env;
        env.kind = RoutedEnvelope::Kind::Fsl;
        env.origin = actor;
        env.final_dest = f.route_dest;
        env.fsl = f.msg;
        send_routed(actor, std::move(env), now);
    }
    for (const auto& u : actions.updates) {
        std::uint64_t mid = next_mid_++;
        trace_.add(now, actor.str(), "route_update_send",
                   {{"to", u.to.str()},
                    {"method", u.method},
                    {"entries", u.msg.entries.size()},
                    {"periodic", false},
                    {"mid", mid}});
        summary_.msg_counts["routing_update"]++;
        schedule(now + method_delay_s(u.method), EvUpdate{actor, u.to, u.method, u.msg, mid, false});
    }
}

void Simulation::launch_walk(AgentRt& agent, SimTime now) {
    const auto& ros = roster(agent.spec.id.platform);
    auto target = select_random_agent(ros, agent.spec.id, agent.walk_rng);
    if (!target) {
        trace_.add(now, agent.spec.id.str(), "walk_degenerate", {});
        return;
    }
    std::string walk_id = agent.spec.id.str() + "#" + std::to_string(agent.walk_counter++);
    CoverMessage msg = cover(agent.engine->announcement(), walk_id);
    msg.hop_count = 1;
    std::uint64_t mid = next_mid_++;
    trace_.add(now, agent.spec.id.str(), "walk_launch",
               {{"walk_id", walk_id}, {"to", target->str()}, {"mid", mid}});
    summary_.msg_counts["walk"]++;
    summary_.walk_stats.launched++;
    schedule(now + cfg_.walk.internal_delay_ms / 1000.0,
             EvWalk{agent.spec.id, *target, std::move(msg), mid});
}

void Simulation::forward_walk(AgentRt& holder, const CoverMessage& msg, SimTime now) {
    bool heads = holder.walk_rng.uniform() < cfg_.walk.p_f;
    if (!heads) {
        trace_.add(now, holder.spec.id.str(), "walk_terminate",
                   {{"walk_id", msg.walk_id}, {"hops", msg.hop_count}});
        summary_.walk_stats.terminated++;
        walk_lengths_.push_back(msg.hop_count);
        return;
    }
    const auto& ros = roster(holder.spec.id.platform);
    auto target = select_random_agent(ros, holder.spec.id, holder.walk_rng);
    if (!target) {
        trace_.add(now, holder.spec.id.str(), "walk_terminate",
                   {{"walk_id", msg.walk_id}, {"hops", msg.hop_count}});
        summary_.walk_stats.terminated++;
        walk_lengths_.push_back(msg.hop_count);
        return;
    }
    CoverMessage fwd = msg;
    fwd.hop_count++;
    std::uint64_t mid = next_mid_++;
    trace_.add(now, holder.spec.id.str(), "walk_forward",
               {{"walk_id", msg.walk_id}, {"to", target->str()}, {"mid", mid}});
    summary_.msg_counts["walk"]++;
    schedule(now + cfg_.walk.internal_delay_ms / 1000.0,
             EvWalk{holder.spec.id, *target, std::move(fwd), mid});
}

void Simulation::on_timer(const EvTimer& ev, SimTime now) {
    auto* rt = alive_agent(ev.agent);
    if (!rt || !rt->engine) return;
    const auto& t = cfg_.timers;
    switch (ev.kind) {
        case EvTimer::Kind::RandomWalk:
            launch_walk(*rt, now);
            schedule(now + t.random_walk_period + rt->jitter_rw.uniform_to(t.fluctuation_rw),
                     EvTimer{EvTimer::Kind::RandomWalk, ev.agent});
            break;
        case EvTimer::Kind::Hello:
            for (const auto& h : rt->engine->periodic_hellos()) send_hello(ev.agent, h, now);
            schedule(now + t.hello_period + rt->jitter_h.uniform_to(t.fluctuation_h),
                     EvTimer{EvTimer::Kind::Hello, ev.agent});
            break;
        case EvTimer::Kind::RoutingUpdate: {
            trace_.add(now, ev.agent.str(), "ru_tick", {});
            for (const auto& u : rt->engine->periodic_updates()) {
                std::uint64_t mid = next_mid_++;
                trace_.add(now, ev.agent.str(), "route_update_send",
                           {{"to", u.to.str()},
                            {"method", u.method},
                            {"entries", u.msg.entries.size()},
                            {"periodic", true},
                            {"mid", mid}});
                summary_.msg_counts["routing_update"]++;
                schedule(now + method_delay_s(u.method),
                         EvUpdate{ev.agent, u.to, u.method, u.msg, mid, true});
            }
            schedule(now + t.routing_update_period + rt->jitter_ru.uniform_to(t.fluctuation_ru),
                     EvTimer{EvTimer::Kind::RoutingUpdate, ev.agent});
            break;
        }
    }
}

void Simulation::on_sweep(SimTime now) {
    for (auto& [id, rt] : agents_) {
        if (!rt.alive || !rt.engine) continue;
        Actions acts = rt.engine->sweep_timeouts(now);
        if (acts.table_changed || !acts.hellos.empty() || !acts.updates.empty())
            dispatch_actions(id, acts, now);
    }
    schedule(now + kSweepQuantum, EvSweep{});
}

void Simulation::on_walk(const EvWalk& ev, SimTime now) {
    if (!alive_agent(ev.from)) return; // crash drops in-flight emissions
    auto* rt = alive_agent(ev.to);
    if (!rt) return;
    trace_.add(now, ev.to.str(), "walk_deliver",
               {{"walk_id", ev.msg.walk_id}, {"hops", ev.msg.hop_count}, {"mid", ev.mid}});
    if (rt->engine) {
        if (auto ann = uncover(ev.msg, true)) {
            Actions acts = rt->engine->handle_walk_announcement(*ann, now);
            if (!acts.hellos.empty())
                trace_.add(now, ev.to.str(), "discovery",
                           {{"address", ann->address.str()}, {"caps", caps_json(ann->capabilities)}});
            dispatch_actions(ev.to, acts, now);
        }
    }
    forward_walk(*rt, ev.msg, now);
}

void Simulation::on_hello(const EvHello& ev, SimTime now) {
    if (!alive_agent(ev.from)) return;
    auto* rt = alive_agent(ev.to);
    if (!rt || !rt->engine) return;
    auto res = rt->engine->handle_hello(ev.msg, now);
    if (res.incompatible) {
        trace_.add(now, ev.to.str(), "hello_incompatible",
                   {{"from", ev.from.str()}, {"method", ev.msg.link_method}});
        return;
    }
    trace_.add(now, ev.to.str(), "hello_recv", {{"from", ev.from.str()}, {"mid", ev.mid}});
    if (res.actions.table_changed)
        trace_.add(now, ev.to.str(), "neighbor_add",
                   {{"neighbor", ev.from.str()}, {"method", ev.msg.link_method}});
    dispatch_actions(ev.to, res.actions, now);
}

void Simulation::on_update(const EvUpdate& ev, SimTime now) {
    if (!alive_agent(ev.from)) return;
    auto* rt = alive_agent(ev.to);
    if (!rt || !rt->engine) return;
    auto res = rt->engine->handle_routing_update(ev.msg, now);
    if (res.from_unknown_neighbor) {
        trace_.add(now, ev.to.str(), "route_update_dropped",
                   {{"from", ev.from.str()}, {"reason", "unknown_neighbor"}});
        return;
    }
    trace_.add(now, ev.to.str(), "route_update_recv",
               {{"from", ev.from.str()},
                {"changed", res.actions.table_changed},
                {"mid", ev.mid}});
    dispatch_actions(ev.to, res.actions, now);
}

void Simulation::on_routed(const EvRouted& ev, SimTime now) {
    if (!alive_agent(ev.from)) return;
    auto* rt = alive_agent(ev.to);
    if (!rt || !rt->engine) return;
    RoutedEnvelope env = ev.env;
    if (env.final_dest == ev.to) {
        if (env.kind == RoutedEnvelope::Kind::Fsl) {
            trace_.add(now, ev.to.str(), "form_steglink_recv",
                       {{"new_sa", env.fsl.new_sa_address.str()}, {"mid", ev.mid}});
            Actions acts = rt->engine->handle_form_steg_link(env.fsl, now);
            dispatch_actions(ev.to, acts, now);
        } else {
            DeliveryRecord rec{env.origin, env.final_dest, env.hops, env.accum, true, false};
            json hops = json::array();
            for (const auto& h : rec.hops)
                hops.push_back({{"from", h.from.str()}, {"to", h.to.str()}, {"method", h.method}});
            trace_.add(now, ev.to.str(), "data_deliver",
                       {{"source", env.origin.str()}, {"hops", hops}, {"mid", ev.mid}});
            summary_.deliveries.push_back(std::move(rec));
        }
        return;
    }
    send_routed(ev.to, std::move(env), now); // convert channel and pass along
}

void Simulation::on_dynamic(const EvDynamic& ev, SimTime now) {
    const DynamicEvent& dyn = cfg_.events[ev.index];
    switch (dyn.kind) {
        case DynamicEvent::Kind::Kill: {
            auto it = agents_.find(dyn.agent);
            if (it == agents_.end() || !it->second.alive) return;
            it->second.alive = false;
            auto& ros = roster(dyn.agent.platform);
            ros.erase(std::remove(ros.begin(), ros.end(), dyn.agent), ros.end());
            trace_.add(now, dyn.agent.str(), "agent_kill", {});
            break;
        }
        case DynamicEvent::Kind::Join:
            add_agent(dyn.joiner, now, true);
            trace_.add(now, dyn.joiner.id.str(), "agent_join",
                       {{"role", dyn.joiner.role == AgentRole::SA ? "SA" : "OA"}});
            break;
        case DynamicEvent::Kind::Send: {
            auto* rt = alive_agent(dyn.from);
            if (!rt || !rt->engine) return;
            trace_.add(now, dyn.from.str(), "data_send",
                       {{"dest", dyn.to.str()}, {"payload", dyn.payload}});
            RoutedEnvelope env;
            env.kind = RoutedEnvelope::Kind::Data;
            env.origin = dyn.from;
            env.final_dest = dyn.to;
            env.payload = dyn.payload;
            send_routed(dyn.from, std::move(env), now);
            break;
        }
    }
}

Simulation::Result Simulation::run() {
    for (const auto& plat : cfg_.platforms)
        for (const auto& a : plat.agents) add_agent(a, 0.0, true);

    // pre-provisioned cross-platform steg-links
    for (const auto& rel : cfg_.fixed_relations) {
        auto& a = agents_.at(rel.sa_a);
        auto& b = agents_.at(rel.sa_b);
        SimTime t0 = 0.0;
        a.engine->handle_hello(
            HelloMessage{rel.sa_b, b.spec.caps, rel.method, {}, 0}, t0);
        b.engine->handle_hello(
            HelloMessage{rel.sa_a, a.spec.caps, rel.method, {}, 0}, t0);
        trace_.add(t0, rel.sa_a.str(), "fixed_relation",
                   {{"peer", rel.sa_b.str()}, {"method", rel.method}});
    }

    schedule(kSweepQuantum, EvSweep{});
    for (std::size_t i = 0; i < cfg_.events.size(); ++i)
        schedule(cfg_.events[i].time, EvDynamic{i});

    while (!queue_.empty()) {
        Event ev = queue_.top();
        if (ev.time > cfg_.duration) break;
        queue_.pop();
        std::visit(
            [&](const auto& payload) {
                using T = std::decay_t<decltype(payload)>;
                if constexpr (std::is_same_v<T, EvTimer>)
                    on_timer(payload, ev.time);
                else if constexpr (std::is_same_v<T, EvSweep>)
                    on_sweep(ev.time);
                else if constexpr (std::is_same_v<T, EvWalk>)
                    on_walk(payload, ev.time);
                else if constexpr (std::is_same_v<T, EvHello>)
                    on_hello(payload, ev.time);
                else if constexpr (std::is_same_v<T, EvUpdate>)
                    on_update(payload, ev.time);
                else if constexpr (std::is_same_v<T, EvRouted>)
                    on_routed(payload, ev.time);
                else
                    on_dynamic(payload, ev.time);
            },
            ev.payload);
    }

    // summary
    if (cfg_.duration > 0.0) {
        double quiet = 2.0 * cfg_.timers.routing_update_period;
        double last = any_table_change_ ? last_table_change_ : 0.0;
        if (cfg_.duration - last >= quiet) summary_.convergence_time = last;
    }
    if (!walk_lengths_.empty()) {
        long total = 0;
        for (int h : walk_lengths_) {
            total += h;
            summary_.walk_stats.hop_histogram[h]++;
        }
        summary_.walk_stats.mean_hops =
            static_cast<double>(total) / static_cast<double>(walk_lengths_.size());
    }
    for (const auto& [id, rt] : agents_) {
        if (!rt.alive || !rt.engine) continue;
        SaSnapshot snap;
        snap.caps = rt.spec.caps;
        for (const auto& [addr, n] : rt.engine->neighbors())
            snap.neighbors.emplace_back(addr, n.link_method);
        for (const auto& e : rt.engine->routes().best_entries())
            snap.routes.push_back(
                SummaryRoute{e.dest, e.dest_caps, e.next_hop, e.attrs, score(e.attrs, cfg_.weights)});
        summary_.final_tables.emplace(id, std::move(snap));
    }
    return Result{std::move(trace_), std::move(summary_)};
}

} // namespace trustmas
