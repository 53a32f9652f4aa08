#ifndef TRUSTMAS_METHODS_HPP
#define TRUSTMAS_METHODS_HPP

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace trustmas {

using MethodId = std::string;

enum class StegLayer { Application, TransportNetwork, DataLink };

std::string layer_name(StegLayer l);
StegLayer layer_from_name(const std::string& s);

/// One covert-channel method from the scenario catalog. The three numeric
/// fields are the per-link metric inputs: capacity, per-hop delay and a
/// steganalysis-exposure penalty (lower penalty = harder to detect = preferred).
struct StegMethodSpec {
    MethodId id;
    StegLayer layer = StegLayer::Application;
    double capacity_kbps = 0.0; // > 0
    double delay_ms = 0.0;      // >= 0, per hop
    double penalty = 0.0;       // >= 0, dimensionless
};

/// Scenario-wide catalog of methods, unique by id.
class MethodCatalog {
public:
    MethodCatalog() = default;

    void add(StegMethodSpec spec) {
        if (spec.capacity_kbps <= 0.0)
            throw std::invalid_argument("method " + spec.id + ": capacity must be positive");
        if (spec.delay_ms < 0.0 || spec.penalty < 0.0)
            throw std::invalid_argument("method " + spec.id + ": negative delay or penalty");
        if (by_id_.count(spec.id))
            throw std::invalid_argument("duplicate method id: " + spec.id);
        order_.push_back(spec.id);
        by_id_.emplace(spec.id, std::move(spec));
    }

    bool contains(const MethodId& id) const { return by_id_.count(id) != 0; }

    const StegMethodSpec& get(const MethodId& id) const {
        auto it = by_id_.find(id);
        if (it == by_id_.end()) throw std::out_of_range("unknown method: " + id);
        return it->second;
    }

    const std::vector<MethodId>& ids() const { return order_; }
    bool empty() const { return order_.empty(); }

private:
    std::vector<MethodId> order_;
    std::map<MethodId, StegMethodSpec> by_id_;
};

/// Set of method ids an SA can use. Plain set semantics; links form only on
/// non-empty intersection.
struct CapabilitySet {
    std::set<MethodId> methods;

    CapabilitySet() = default;
    CapabilitySet(std::initializer_list<MethodId> ms) : methods(ms) {}
    explicit CapabilitySet(std::set<MethodId> ms) : methods(std::move(ms)) {}

    bool empty() const { return methods.empty(); }
    bool contains(const MethodId& m) const { return methods.count(m) != 0; }
    bool operator==(const CapabilitySet&) const = default;
};

inline CapabilitySet capability_overlap(const CapabilitySet& a, const CapabilitySet& b) {
    CapabilitySet out;
    std::set_intersection(a.methods.begin(), a.methods.end(),
                          b.methods.begin(), b.methods.end(),
                          std::inserter(out.methods, out.methods.begin()));
    return out;
}

} // namespace trustmas

#endif
