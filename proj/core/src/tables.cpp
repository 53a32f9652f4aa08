#include "trustmas/tables.hpp"

#include <algorithm>

namespace trustmas {

namespace {

bool prefer(const RouteEntry& a, const RouteEntry& b, const MetricWeights& w) {
    double sa = score(a.attrs, w);
    double sb = score(b.attrs, w);
    if (sa != sb) return sa < sb;
    if (a.attrs.hop_count != b.attrs.hop_count) return a.attrs.hop_count < b.attrs.hop_count;
    return a.next_hop < b.next_hop;
}

bool same_route(const RouteEntry& a, const RouteEntry& b) {
    return a.dest == b.dest && a.next_hop == b.next_hop && a.attrs == b.attrs &&
           a.dest_caps == b.dest_caps;
}

} // namespace

std::vector<RouteEntry> RoutingTable::candidates(const AgentId& dest) const {
    auto it = slots_.find(dest);
    return it == slots_.end() ? std::vector<RouteEntry>{} : it->second;
}

std::optional<RouteEntry> RoutingTable::best(const AgentId& dest) const {
    auto it = slots_.find(dest);
    if (it == slots_.end() || it->second.empty()) return std::nullopt;
    return it->second.front();
}

std::vector<RouteEntry> RoutingTable::best_entries() const {
    std::vector<RouteEntry> out;
    for (const auto& [dest, cands] : slots_)
        if (!cands.empty()) out.push_back(cands.front());
    return out;
}

std::vector<RouteEntry> RoutingTable::all_entries() const {
    std::vector<RouteEntry> out;
    for (const auto& [dest, cands] : slots_)
        out.insert(out.end(), cands.begin(), cands.end());
    return out;
}

bool RoutingTable::store(const RouteEntry& e, const MetricWeights& w) {
    auto& cands = slots_[e.dest];
    auto it = std::find_if(cands.begin(), cands.end(),
                           [&](const RouteEntry& c) { return c.next_hop == e.next_hop; });
    bool changed;
    if (it != cands.end()) {
        changed = !same_route(*it, e);
        *it = e;
    } else {
        cands.push_back(e);
        changed = true;
    }
    std::sort(cands.begin(), cands.end(),
              [&](const RouteEntry& a, const RouteEntry& b) { return prefer(a, b, w); });
    if (cands.size() > static_cast<std::size_t>(K)) {
        // evicting the worst candidate; if the evictee is the one we stored,
        // nothing effectively changed
        if (cands.back().next_hop == e.next_hop && it == cands.end()) changed = false;
        cands.pop_back();
    }
    return changed;
}

bool RoutingTable::erase(const AgentId& dest, const AgentId& next_hop) {
    auto it = slots_.find(dest);
    if (it == slots_.end()) return false;
    auto& cands = it->second;
    auto c = std::find_if(cands.begin(), cands.end(),
                          [&](const RouteEntry& e) { return e.next_hop == next_hop; });
    if (c == cands.end()) return false;
    cands.erase(c);
    if (cands.empty()) slots_.erase(it);
    return true;
}

int RoutingTable::purge_dest(const AgentId& dest) {
    auto it = slots_.find(dest);
    if (it == slots_.end()) return 0;
    int removed = static_cast<int>(it->second.size());
    slots_.erase(it);
    return removed;
}

int RoutingTable::purge_next_hop(const AgentId& gone) {
    int removed = 0;
    for (auto it = slots_.begin(); it != slots_.end();) {
        auto& cands = it->second;
        auto before = cands.size();
        cands.erase(std::remove_if(cands.begin(), cands.end(),
                                   [&](const RouteEntry& e) { return e.next_hop == gone; }),
                    cands.end());
        removed += static_cast<int>(before - cands.size());
        if (cands.empty())
            it = slots_.erase(it);
        else
            ++it;
    }
    return removed;
}

std::optional<double> RoutingTable::worst_score(const AgentId& dest,
                                                const MetricWeights& w) const {
    auto it = slots_.find(dest);
    if (it == slots_.end() || it->second.empty()) return std::nullopt;
    return score(it->second.back().attrs, w);
}

std::vector<AgentId> RoutingTable::destinations() const {
    std::vector<AgentId> out;
    out.reserve(slots_.size());
    for (const auto& [dest, cands] : slots_)
        if (!cands.empty()) out.push_back(dest);
    return out;
}

void RoutingTable::reorder(const AgentId& dest, const MetricWeights& w) {
    auto it = slots_.find(dest);
    if (it == slots_.end()) return;
    std::sort(it->second.begin(), it->second.end(),
              [&](const RouteEntry& a, const RouteEntry& b) { return prefer(a, b, w); });
}

} // namespace trustmas
