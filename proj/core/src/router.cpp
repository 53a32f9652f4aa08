#include "trustmas/router.hpp"

#include <algorithm>
#include <set>

namespace trustmas {

SaEngine::SaEngine(AgentId me, CapabilitySet caps, const MethodCatalog* catalog,
                   MetricWeights weights, TimerConfig timers, ProtocolOptions options)
    : me_(std::move(me)),
      caps_(std::move(caps)),
      catalog_(catalog),
      weights_(weights),
      timers_(timers),
      options_(options) {}

HelloOut SaEngine::make_hello(const AgentId& to, const MethodId& method) {
    HelloMessage msg;
    msg.sender = me_;
    msg.sender_caps = caps_;
    msg.link_method = method;
    msg.seq = ++hello_seq_;
    for (const auto& [addr, entry] : neighbors_)
        msg.neighbor_digest.push_back(addr);
    return HelloOut{to, std::move(msg)};
}

void SaEngine::relay_or_cache(Actions& out, const StegAnnouncement& ann, SimTime now) {
    if (!options_.form_steg_link) return;
    // Find the nearest known SA whose capabilities overlap the announcement;
    // it can form the link we cannot. Neighbors count as one-hop candidates
    // even before they show up in the routing table.
    std::optional<AgentId> target;
    double target_score = 0.0;
    auto consider = [&](const AgentId& who, double s) {
        if (who == ann.address || who == me_) return;
        if (!target || s < target_score || (s == target_score && who < *target)) {
            target = who;
            target_score = s;
        }
    };
    for (const auto& e : routes_.best_entries())
        if (!capability_overlap(e.dest_caps, ann.capabilities).empty())
            consider(e.dest, score(e.attrs, weights_));
    for (const auto& [addr, n] : neighbors_)
        if (!capability_overlap(n.caps, ann.capabilities).empty())
            consider(addr, single_link_score(catalog_->get(n.link_method), weights_));
    if (target)
        out.fsls.push_back(FslOut{*target, FormStegLinkMessage{ann.address, ann.capabilities}});
}

Actions SaEngine::handle_walk_announcement(const StegAnnouncement& ann, SimTime now) {
    Actions out;
    if (ann.address == me_) return out;

    // isNewEntry: skip announcements we already acted on recently or that
    // describe a neighbor we already have, unless the capabilities changed.
    if (const auto* n = neighbors_.find(ann.address); n && n->caps == ann.capabilities)
        return out;
    if (auto it = ann_cache_.find(ann.address);
        it != ann_cache_.end() && it->second.expires > now && it->second.caps == ann.capabilities)
        return out;
    ann_cache_[ann.address] = {ann.capabilities, now + 2.0 * timers_.random_walk_period};

    CapabilitySet shared = capability_overlap(caps_, ann.capabilities);
    if (!shared.empty()) {
        if (!neighbors_.contains(ann.address)) {
            auto method = select_link_method(caps_, ann.capabilities, *catalog_, weights_);
            out.hellos.push_back(make_hello(ann.address, *method));
        }
    } else {
        relay_or_cache(out, ann, now);
    }
    return out;
}

SaEngine::HelloResult SaEngine::handle_hello(const HelloMessage& msg, SimTime now) {
    HelloResult res;
    if (!caps_.contains(msg.link_method)) {
        res.incompatible = true; // cannot happen with honest senders
        return res;
    }
    if (auto* n = neighbors_.find(msg.sender)) {
        n->last_hello = now;
        n->caps = msg.sender_caps;
        return res;
    }
    neighbors_.upsert(NeighborEntry{msg.sender, msg.sender_caps, msg.link_method, now});
    res.actions.table_changed = true;
    // Reciprocal hello makes the link bidirectional; sent once, on the same
    // method, since repeats for a known neighbor only refresh timestamps.
    res.actions.hellos.push_back(make_hello(msg.sender, msg.link_method));
    if (options_.triggered_updates) res.actions.updates = periodic_updates();
    return res;
}

Actions SaEngine::handle_form_steg_link(const FormStegLinkMessage& msg, SimTime now) {
    Actions out;
    if (msg.new_sa_address == me_) return out;
    if (neighbors_.contains(msg.new_sa_address)) return out; // no duplicate link
    auto method = select_link_method(caps_, msg.new_sa_caps, *catalog_, weights_);
    if (!method) return out; // stale relay, nothing shared
    out.hellos.push_back(make_hello(msg.new_sa_address, *method));
    return out;
}

SaEngine::UpdateResult SaEngine::handle_routing_update(const RoutingUpdateMessage& msg,
                                                       SimTime now) {
    UpdateResult res;
    const auto* link = neighbors_.find(msg.sender);
    if (!link) {
        res.from_unknown_neighbor = true;
        return res;
    }
    const StegMethodSpec& spec = catalog_->get(link->link_method);
    bool changed = false;
    std::set<AgentId> advertised;

    for (const auto& adv : msg.entries) {
        if (adv.dest == me_) continue;
        // a held-down destination is treated as absent from the update, so
        // stale post-failure advertisements can neither re-add it nor keep
        // a forwarding loop alive
        if (auto hd = holddown_.find(adv.dest); hd != holddown_.end() && hd->second > now)
            continue;
        advertised.insert(adv.dest);
        auto attrs = compose_attributes(spec, adv.attrs);
        auto best_before = routes_.best(adv.dest);
        bool via_best = best_before && best_before->next_hop == msg.sender;
        if (!attrs) {
            // hop cap exceeded; from the current best next hop this is a withdrawal
            if (via_best) changed |= routes_.erase(adv.dest, msg.sender);
            continue;
        }
        RouteEntry cand{adv.dest, adv.dest_caps, msg.sender, *attrs, now};
        auto cands = routes_.candidates(adv.dest);
        auto slot = std::find_if(cands.begin(), cands.end(),
                                 [&](const RouteEntry& e) { return e.next_hop == msg.sender; });
        bool accept;
        if (cands.empty()) {
            accept = true; // (a) dest unknown
        } else if (slot != cands.end()) {
            // (c) freshness from the current best next hop, else (b) improvement
            accept = via_best || score(cand.attrs, weights_) < score(slot->attrs, weights_);
        } else {
            auto worst = routes_.worst_score(adv.dest, weights_);
            accept = cands.size() < static_cast<std::size_t>(RoutingTable::K) ||
                     score(cand.attrs, weights_) < *worst;
        }
        if (accept) changed |= routes_.store(cand, weights_);
    }

    // Full-table semantics: a destination the neighbor no longer advertises
    // has no route through it.
    for (const auto& dest : routes_.destinations())
        if (!advertised.count(dest)) changed |= routes_.erase(dest, msg.sender);

    res.actions.table_changed = changed;
    if (changed && options_.triggered_updates) res.actions.updates = periodic_updates();
    return res;
}

Actions SaEngine::sweep_timeouts(SimTime now) {
    Actions out;
    std::vector<AgentId> dead;
    for (const auto& [addr, n] : neighbors_)
        if (now - n.last_hello > timers_.hello_timeout) dead.push_back(addr);
    for (const auto& addr : dead) {
        neighbors_.remove(addr);
        out.routes_purged += routes_.purge_next_hop(addr);
        // Hello silence means the agent itself is gone, so alternate routes
        // to it are stale too; flush them and hold the destination down long
        // enough for every in-flight advertisement to drain. Without this
        // the surviving candidates revive each other in a routing loop.
        out.routes_purged += routes_.purge_dest(addr);
        holddown_[addr] = now + 2.0 * timers_.routing_update_period;
        out.neighbors_removed.push_back(addr);
        out.table_changed = true;
    }
    // expired announcement cache and hold-down entries
    for (auto it = ann_cache_.begin(); it != ann_cache_.end();)
        it = it->second.expires <= now ? ann_cache_.erase(it) : std::next(it);
    for (auto it = holddown_.begin(); it != holddown_.end();)
        it = it->second <= now ? holddown_.erase(it) : std::next(it);
    if (out.table_changed && options_.triggered_updates) out.updates = periodic_updates();
    return out;
}

std::vector<HelloOut> SaEngine::periodic_hellos() {
    std::vector<HelloOut> out;
    for (const auto& [addr, n] : neighbors_)
        out.push_back(make_hello(addr, n.link_method));
    return out;
}

RoutingUpdateMessage SaEngine::make_update_for(const NeighborEntry& n) const {
    RoutingUpdateMessage msg;
    msg.sender = me_;
    msg.entries.push_back(AdvertisedRoute{me_, caps_, RouteAttributes::zero()});
    for (const auto& e : routes_.best_entries()) {
        if (options_.split_horizon && e.next_hop == n.address) continue;
        msg.entries.push_back(AdvertisedRoute{e.dest, e.dest_caps, e.attrs});
    }
    return msg;
}

std::vector<UpdateOut> SaEngine::periodic_updates() {
    std::vector<UpdateOut> out;
    for (const auto& [addr, n] : neighbors_)
        out.push_back(UpdateOut{addr, n.link_method, make_update_for(n)});
    return out;
}

std::optional<RouteEntry> SaEngine::route_lookup(const AgentId& dest) const {
    auto paths = find_paths_match(routes_, dest);
    if (paths.empty()) return std::nullopt;
    return choose_best_path(paths, weights_);
}

} // namespace trustmas
