#ifndef TRUSTMAS_TABLES_HPP
#define TRUSTMAS_TABLES_HPP

#include <map>
#include <optional>
#include <vector>

#include "trustmas/messages.hpp"
#include "trustmas/metric.hpp"

namespace trustmas {

/// One formed steg-link. link_method is the single shared method the link
/// runs on, fixed when the link was formed.
struct NeighborEntry {
    AgentId address;
    CapabilitySet caps;
    MethodId link_method;
    SimTime last_hello = 0.0;
};

class NeighborTable {
public:
    bool contains(const AgentId& a) const { return entries_.count(a) != 0; }
    NeighborEntry* find(const AgentId& a) {
        auto it = entries_.find(a);
        return it == entries_.end() ? nullptr : &it->second;
    }
    const NeighborEntry* find(const AgentId& a) const {
        auto it = entries_.find(a);
        return it == entries_.end() ? nullptr : &it->second;
    }
    void upsert(NeighborEntry e) { entries_.insert_or_assign(e.address, std::move(e)); }
    void remove(const AgentId& a) { entries_.erase(a); }
    std::size_t size() const { return entries_.size(); }
    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }

private:
    std::map<AgentId, NeighborEntry> entries_; // sorted for deterministic iteration
};

/// A stored candidate route. Owner-relative: next_hop must be a current
/// neighbor of the owning SA.
struct RouteEntry {
    AgentId dest;
    CapabilitySet dest_caps;
    AgentId next_hop;
    RouteAttributes attrs;
    SimTime last_updated = 0.0;
};

/// Distance-vector table keeping up to K candidate entries per destination
/// with distinct next hops; exactly one per destination is the best.
class RoutingTable {
public:
    static constexpr int K = 3;

    /// Candidates for dest, best first. Empty when dest unknown.
    std::vector<RouteEntry> candidates(const AgentId& dest) const;

    /// Best entry for dest, if any.
    std::optional<RouteEntry> best(const AgentId& dest) const;

    /// All best entries, ordered by destination.
    std::vector<RouteEntry> best_entries() const;

    /// All stored entries (candidates included), ordered by destination.
    std::vector<RouteEntry> all_entries() const;

    bool has_route(const AgentId& dest) const { return slots_.count(dest) != 0; }

    /// Insert or replace the candidate with this (dest, next_hop) pair.
    /// Returns true when the stored state changed.
    bool store(const RouteEntry& e, const MetricWeights& w);

    /// Drop the candidate for dest via next_hop. Returns true if it existed.
    bool erase(const AgentId& dest, const AgentId& next_hop);

    /// Drop every candidate whose next hop is `gone`. Returns the number of
    /// entries removed.
    int purge_next_hop(const AgentId& gone);

    /// Drop every candidate for `dest`, whatever the next hop. Returns the
    /// number of entries removed.
    int purge_dest(const AgentId& dest);

    /// Score of the worst stored candidate for dest (for K-slot admission).
    std::optional<double> worst_score(const AgentId& dest, const MetricWeights& w) const;

    std::vector<AgentId> destinations() const;

private:
    void reorder(const AgentId& dest, const MetricWeights& w);

    // Per destination: candidates sorted best-first under (score, hop_count,
    // next_hop) -- the deterministic preference order.
    std::map<AgentId, std::vector<RouteEntry>> slots_;
    friend class SaEngine;
};

} // namespace trustmas

#endif
