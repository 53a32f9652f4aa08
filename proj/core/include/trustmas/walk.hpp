#ifndef TRUSTMAS_WALK_HPP
#define TRUSTMAS_WALK_HPP

#include <cmath>
#include <optional>
#include <vector>

#include "trustmas/ids.hpp"
#include "trustmas/rng.hpp"

namespace trustmas {

enum class WalkMode { Discovery, Unicast };

/// Asymmetric-coin configuration for the platform random walk.
/// In discovery mode a tails flip ends the walk; in unicast mode it delivers
/// the payload to its final destination (Crowds semantics).
struct WalkConfig {
    double p_f = 0.5; // forwarding probability, must be < 1
    WalkMode mode = WalkMode::Discovery;
    double internal_delay_ms = 1.0; // MAS-level per-hop delivery delay
};

/// pmf of the total hop count of a discovery walk (first delivery mandatory):
/// P(K = k) = p_f^(k-1) * (1 - p_f).
inline double walk_length_pmf(double p_f, int k) {
    if (k < 1) return 0.0;
    return std::pow(p_f, k - 1) * (1.0 - p_f);
}

/// Uniform choice from `roster` excluding `self`. Returns nullopt when no
/// other agent exists (degenerate platform). Consumes exactly one draw.
std::optional<AgentId> select_random_agent(const std::vector<AgentId>& roster,
                                           const AgentId& self, Rng& rng);

/// Result of an anonymous unicast: the ordered proxy chain between origin and
/// destination (origin and dest excluded from the list).
struct UnicastRecord {
    AgentId origin;
    AgentId dest;
    std::vector<AgentId> proxies;
    bool delivered = false;
};

/// Crowds-style anonymous unicast over one platform roster: origin hands the
/// payload to a random proxy; each holder flips the coin, forwarding to the
/// next random agent on heads and delivering straight to dest on tails.
/// A proxy may be the destination itself mid-chain; delivery happens only on
/// a tails flip.
UnicastRecord anonymous_unicast(const AgentId& origin, const AgentId& dest,
                                const std::vector<AgentId>& roster,
                                const WalkConfig& cfg, Rng& rng);

/// Visit list of one simulated discovery walk (first recipient onward, in
/// order; agents may repeat). Empty when the platform is degenerate.
std::vector<AgentId> simulate_discovery_walk(const AgentId& origin,
                                             const std::vector<AgentId>& roster,
                                             double p_f, Rng& rng);

} // namespace trustmas

#endif
