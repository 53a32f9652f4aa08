#ifndef TRUSTMAS_PATH_HPP
#define TRUSTMAS_PATH_HPP

#include <optional>
#include <vector>

#include "trustmas/tables.hpp"

namespace trustmas {

/// One hop of a delivered steg-path: the link endpoints and the method the
/// payload was re-encoded onto for this hop.
struct DeliveryHop {
    AgentId from;
    AgentId to;
    MethodId method;
};

/// End-to-end record of one data delivery, accumulated hop-by-hop. Each
/// intermediate SA converts the channel to its own next hop's link method.
struct DeliveryRecord {
    AgentId source;
    AgentId dest;
    std::vector<DeliveryHop> hops;
    RouteAttributes total_attrs;
    bool delivered = false;
    bool loop_dropped = false; // hop cap hit mid-delivery (tables not converged)
};

/// Candidate routes stored for dest (up to K, possibly empty).
inline std::vector<RouteEntry> find_paths_match(const RoutingTable& table,
                                                const AgentId& dest) {
    return table.candidates(dest);
}

/// Minimal-score candidate; ties broken by hop count, then next hop id.
/// Precondition: paths non-empty.
RouteEntry choose_best_path(const std::vector<RouteEntry>& paths, const MetricWeights& w);

/// Among the methods shared by both capability sets, the one with the lowest
/// single-link score (ties: lexicographically smallest id). Empty overlap
/// yields nullopt.
std::optional<MethodId> select_link_method(const CapabilitySet& a, const CapabilitySet& b,
                                           const MethodCatalog& catalog,
                                           const MetricWeights& w);

} // namespace trustmas

#endif
