#include "trustmas/sim_types.hpp"

#include <numeric>
#include <sstream>

namespace trustmas {

using nlohmann::json;

std::string Trace::to_jsonl() const {
    std::ostringstream out;
    for (const auto& r : records_) {
        json line{{"t", r.t}, {"actor", r.actor}, {"kind", r.kind}, {"detail", r.detail}};
        out << line.dump() << "\n";
    }
    return out.str();
}

namespace {

json caps_json(const CapabilitySet& caps) {
    return std::vector<std::string>(caps.methods.begin(), caps.methods.end());
}

json attrs_json(const RouteAttributes& a) {
    json j{{"total_delay_ms", a.total_delay_ms},
           {"total_penalty", a.total_penalty},
           {"hop_count", a.hop_count}};
    if (a.bottleneck_kbps == std::numeric_limits<double>::infinity())
        j["bottleneck_kbps"] = "inf";
    else
        j["bottleneck_kbps"] = a.bottleneck_kbps;
    return j;
}

RouteAttributes attrs_from_json(const json& j) {
    RouteAttributes a;
    if (j["bottleneck_kbps"].is_string())
        a.bottleneck_kbps = std::numeric_limits<double>::infinity();
    else
        a.bottleneck_kbps = j["bottleneck_kbps"].get<double>();
    a.total_delay_ms = j["total_delay_ms"].get<double>();
    a.total_penalty = j["total_penalty"].get<double>();
    a.hop_count = j["hop_count"].get<int>();
    return a;
}

CapabilitySet caps_from_json(const json& j) {
    CapabilitySet caps;
    for (const auto& m : j) caps.methods.insert(m.get<std::string>());
    return caps;
}

} // namespace

json Summary::to_json() const {
    json j;
    j["scenario"] = scenario;
    j["seed"] = seed;
    if (convergence_time)
        j["convergence_time"] = *convergence_time;
    else
        j["convergence_time"] = nullptr;
    j["msg_counts"] = msg_counts;
    json hist = json::object();
    for (const auto& [k, n] : walk_stats.hop_histogram) hist[std::to_string(k)] = n;
    j["walk_stats"] = {{"launched", walk_stats.launched},
                       {"terminated", walk_stats.terminated},
                       {"mean_hops", walk_stats.mean_hops},
                       {"hop_histogram", hist}};
    json tables = json::object();
    for (const auto& [id, snap] : final_tables) {
        json tj;
        tj["caps"] = caps_json(snap.caps);
        tj["neighbors"] = json::array();
        for (const auto& [addr, method] : snap.neighbors)
            tj["neighbors"].push_back({{"address", addr.str()}, {"method", method}});
        tj["routes"] = json::array();
        for (const auto& r : snap.routes)
            tj["routes"].push_back({{"dest", r.dest.str()},
                                    {"dest_caps", caps_json(r.dest_caps)},
                                    {"next_hop", r.next_hop.str()},
                                    {"attrs", attrs_json(r.attrs)},
                                    {"score", r.route_score}});
        tables[id.str()] = std::move(tj);
    }
    j["final_tables"] = std::move(tables);
    j["deliveries"] = json::array();
    for (const auto& d : deliveries) {
        json dj{{"source", d.source.str()},
                {"dest", d.dest.str()},
                {"delivered", d.delivered},
                {"loop_dropped", d.loop_dropped},
                {"total_attrs", attrs_json(d.total_attrs)},
                {"hops", json::array()}};
        for (const auto& h : d.hops)
            dj["hops"].push_back(
                {{"from", h.from.str()}, {"to", h.to.str()}, {"method", h.method}});
        j["deliveries"].push_back(std::move(dj));
    }
    return j;
}

Summary Summary::from_json(const json& j) {
    Summary s;
    s.scenario = j.at("scenario").get<std::string>();
    s.seed = j.at("seed").get<std::uint64_t>();
    if (!j.at("convergence_time").is_null())
        s.convergence_time = j["convergence_time"].get<double>();
    for (const auto& [k, v] : j.at("msg_counts").items()) s.msg_counts[k] = v.get<long>();
    const auto& ws = j.at("walk_stats");
    s.walk_stats.launched = ws.at("launched").get<long>();
    s.walk_stats.terminated = ws.at("terminated").get<long>();
    s.walk_stats.mean_hops = ws.at("mean_hops").get<double>();
    for (const auto& [k, v] : ws.at("hop_histogram").items())
        s.walk_stats.hop_histogram[std::stoi(k)] = v.get<long>();
    for (const auto& [id, tj] : j.at("final_tables").items()) {
        SaSnapshot snap;
        snap.caps = caps_from_json(tj.at("caps"));
        for (const auto& nj : tj.at("neighbors"))
            snap.neighbors.emplace_back(AgentId::parse(nj.at("address").get<std::string>()),
                                        nj.at("method").get<std::string>());
        for (const auto& rj : tj.at("routes")) {
            SummaryRoute r;
            r.dest = AgentId::parse(rj.at("dest").get<std::string>());
            r.dest_caps = caps_from_json(rj.at("dest_caps"));
            r.next_hop = AgentId::parse(rj.at("next_hop").get<std::string>());
            r.attrs = attrs_from_json(rj.at("attrs"));
            r.route_score = rj.at("score").get<double>();
            snap.routes.push_back(std::move(r));
        }
        s.final_tables.emplace(AgentId::parse(id), std::move(snap));
    }
    if (j.contains("deliveries")) {
        for (const auto& dj : j["deliveries"]) {
            DeliveryRecord d;
            d.source = AgentId::parse(dj.at("source").get<std::string>());
            d.dest = AgentId::parse(dj.at("dest").get<std::string>());
            d.delivered = dj.at("delivered").get<bool>();
            d.loop_dropped = dj.at("loop_dropped").get<bool>();
            d.total_attrs = attrs_from_json(dj.at("total_attrs"));
            for (const auto& hj : dj.at("hops"))
                d.hops.push_back(DeliveryHop{AgentId::parse(hj.at("from").get<std::string>()),
                                             AgentId::parse(hj.at("to").get<std::string>()),
                                             hj.at("method").get<std::string>()});
            s.deliveries.push_back(std::move(d));
        }
    }
    return s;
}

} // namespace trustmas
