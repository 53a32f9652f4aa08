#include "trustmas/path.hpp"

#include <cassert>

namespace trustmas {

RouteEntry choose_best_path(const std::vector<RouteEntry>& paths, const MetricWeights& w) {
    assert(!paths.empty());
    const RouteEntry* best = &paths.front();
    for (const auto& p : paths) {
        double sp = score(p.attrs, w);
        double sb = score(best->attrs, w);
        if (sp < sb ||
            (sp == sb && (p.attrs.hop_count < best->attrs.hop_count ||
                          (p.attrs.hop_count == best->attrs.hop_count &&
                           p.next_hop < best->next_hop))))
            best = &p;
    }
    return *best;
}

std::optional<MethodId> select_link_method(const CapabilitySet& a, const CapabilitySet& b,
                                           const MethodCatalog& catalog,
                                           const MetricWeights& w) {
    CapabilitySet shared = capability_overlap(a, b);
    std::optional<MethodId> pick;
    double best = 0.0;
    for (const auto& m : shared.methods) { // set iteration = lexicographic
        double s = single_link_score(catalog.get(m), w);
        if (!pick || s < best) {
            pick = m;
            best = s;
        }
    }
    return pick;
}

} // namespace trustmas
