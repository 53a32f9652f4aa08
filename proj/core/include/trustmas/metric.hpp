#ifndef TRUSTMAS_METRIC_HPP
#define TRUSTMAS_METRIC_HPP

#include <cassert>
#include <limits>
#include <optional>

#include "trustmas/methods.hpp"

namespace trustmas {

/// Hop cap bounding count-to-infinity; routes longer than this are unreachable.
inline constexpr int MAX_HOPS = 16;

/// Composable end-to-end attributes of a steg-path. The empty path is the
/// identity element: infinite bottleneck, zero delay/penalty/hops.
struct RouteAttributes {
    double bottleneck_kbps = std::numeric_limits<double>::infinity();
    double total_delay_ms = 0.0;
    double total_penalty = 0.0;
    int hop_count = 0;

    static RouteAttributes zero() { return RouteAttributes{}; }

    bool is_zero() const { return hop_count == 0; }
    bool operator==(const RouteAttributes&) const = default;
};

/// Weights combining the three metric inputs into one score. Lower is better.
struct MetricWeights {
    double w_d = 1.0;          // per ms of delay
    double w_c = 1.0;          // capacity term weight
    double c_ref_kbps = 1000.0; // reference capacity for the inverse term
    double w_m = 10.0;         // per penalty unit
};

/// Extend a path one hop closer to the source: prepend `link` onto the
/// already-advertised tail attributes. Returns nullopt when the hop cap
/// would be exceeded (route treated as unreachable).
inline std::optional<RouteAttributes> compose_attributes(const StegMethodSpec& link,
                                                         const RouteAttributes& adv) {
    if (adv.hop_count + 1 > MAX_HOPS) return std::nullopt;
    RouteAttributes out;
    out.bottleneck_kbps = std::min(link.capacity_kbps, adv.bottleneck_kbps);
    out.total_delay_ms = link.delay_ms + adv.total_delay_ms;
    out.total_penalty = link.penalty + adv.total_penalty;
    out.hop_count = adv.hop_count + 1;
    return out;
}

/// Weighted additive score: delay + inverse-bottleneck capacity + penalty.
/// Monotone in delay/penalty, antitone in bottleneck. Undefined for the
/// zero-hop self route.
inline double score(const RouteAttributes& attrs, const MetricWeights& w) {
    assert(attrs.hop_count > 0 && "self routes are never scored");
    assert(attrs.bottleneck_kbps > 0.0 &&
           attrs.bottleneck_kbps < std::numeric_limits<double>::infinity());
    return w.w_d * attrs.total_delay_ms + w.w_c * (w.c_ref_kbps / attrs.bottleneck_kbps) +
           w.w_m * attrs.total_penalty;
}

/// Score of a single link using method `spec` on its own.
inline double single_link_score(const StegMethodSpec& spec, const MetricWeights& w) {
    return score(*compose_attributes(spec, RouteAttributes::zero()), w);
}

} // namespace trustmas

#endif
