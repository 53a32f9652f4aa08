#include "trustmas/walk.hpp"

#include <stdexcept>

namespace trustmas {

std::optional<AgentId> select_random_agent(const std::vector<AgentId>& roster,
                                           const AgentId& self, Rng& rng) {
    // One draw regardless of roster size, so streams stay roster-independent.
    std::size_t others = 0;
    for (const auto& a : roster)
        if (a != self) ++others;
    if (others == 0) return std::nullopt;
    std::uint64_t idx = rng.bounded(others);
    for (const auto& a : roster) {
        if (a == self) continue;
        if (idx == 0) return a;
        --idx;
    }
    return std::nullopt; // unreachable
}

UnicastRecord anonymous_unicast(const AgentId& origin, const AgentId& dest,
                                const std::vector<AgentId>& roster,
                                const WalkConfig& cfg, Rng& rng) {
    if (origin == dest) throw std::invalid_argument("unicast to self");
    if (cfg.p_f >= 1.0) throw std::invalid_argument("p_f must be < 1");
    UnicastRecord rec{origin, dest, {}, false};
    auto first = select_random_agent(roster, origin, rng);
    if (!first) return rec; // degenerate platform, nothing sent
    AgentId holder = *first;
    for (;;) {
        rec.proxies.push_back(holder);
        if (rng.uniform() >= cfg.p_f) break; // tails: deliver to dest
        holder = *select_random_agent(roster, holder, rng);
    }
    rec.delivered = true;
    return rec;
}

std::vector<AgentId> simulate_discovery_walk(const AgentId& origin,
                                             const std::vector<AgentId>& roster,
                                             double p_f, Rng& rng) {
    std::vector<AgentId> visits;
    auto first = select_random_agent(roster, origin, rng);
    if (!first) return visits;
    AgentId holder = *first;
    for (;;) {
        visits.push_back(holder);
        if (rng.uniform() >= p_f) break; // tails: walk dies
        holder = *select_random_agent(roster, holder, rng);
    }
    return visits;
}

} // namespace trustmas
