#include "trustmas/scenario.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace trustmas {

using nlohmann::json;

std::string layer_name(StegLayer l) {
    switch (l) {
        case StegLayer::Application: return "application";
        case StegLayer::TransportNetwork: return "transport_network";
        case StegLayer::DataLink: return "data_link";
    }
    return "application";
}

StegLayer layer_from_name(const std::string& s) {
    if (s == "application") return StegLayer::Application;
    if (s == "transport_network") return StegLayer::TransportNetwork;
    if (s == "data_link") return StegLayer::DataLink;
    throw std::invalid_argument("unknown layer: " + s);
}

namespace {

double get_num(const json& j, const std::string& path, const char* key, double dflt,
               bool required = false) {
    if (!j.contains(key)) {
        if (required) throw ConfigError(path + "." + key, "missing");
        return dflt;
    }
    if (!j[key].is_number()) throw ConfigError(path + "." + key, "expected a number");
    return j[key].get<double>();
}

std::string get_str(const json& j, const std::string& path, const char* key) {
    if (!j.contains(key) || !j[key].is_string())
        throw ConfigError(path + "." + key, "missing or not a string");
    return j[key].get<std::string>();
}

AgentId parse_agent_ref(const json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError(path, "expected \"platform/name\" string");
    try {
        return AgentId::parse(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path, e.what());
    }
}

CapabilitySet parse_caps(const json& j, const std::string& path, const MethodCatalog& cat) {
    if (!j.is_array()) throw ConfigError(path, "expected an array of method ids");
    CapabilitySet caps;
    for (const auto& m : j) {
        if (!m.is_string()) throw ConfigError(path, "method ids must be strings");
        auto id = m.get<std::string>();
        if (!cat.contains(id)) throw ConfigError(path, "unknown method: " + id);
        caps.methods.insert(id);
    }
    return caps;
}

} // namespace

ScenarioConfig load_scenario(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError("$", std::string("parse error: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("$", "document must be an object");

    ScenarioConfig cfg;
    cfg.name = doc.value("name", std::string("unnamed"));
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer())
            throw ConfigError("seed", "expected an integer");
        cfg.seed = doc["seed"].get<std::uint64_t>();
    }
    cfg.duration = get_num(doc, "$", "duration", 0.0, true);
    if (cfg.duration < 0.0) throw ConfigError("duration", "must be non-negative");

    if (!doc.contains("catalog") || !doc["catalog"].is_array() || doc["catalog"].empty())
        throw ConfigError("catalog", "missing or empty");
    for (std::size_t i = 0; i < doc["catalog"].size(); ++i) {
        const auto& m = doc["catalog"][i];
        std::string path = "catalog[" + std::to_string(i) + "]";
        StegMethodSpec spec;
        spec.id = get_str(m, path, "id");
        try {
            spec.layer = layer_from_name(get_str(m, path, "layer"));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(path + ".layer", e.what());
        }
        spec.capacity_kbps = get_num(m, path, "capacity_kbps", 0.0, true);
        spec.delay_ms = get_num(m, path, "delay_ms", 0.0, true);
        spec.penalty = get_num(m, path, "penalty", 0.0, true);
        try {
            cfg.catalog.add(spec);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(path, e.what());
        }
    }

    if (doc.contains("weights")) {
        const auto& w = doc["weights"];
        cfg.weights.w_d = get_num(w, "weights", "w_d", cfg.weights.w_d);
        cfg.weights.w_c = get_num(w, "weights", "w_c", cfg.weights.w_c);
        cfg.weights.c_ref_kbps = get_num(w, "weights", "c_ref_kbps", cfg.weights.c_ref_kbps);
        cfg.weights.w_m = get_num(w, "weights", "w_m", cfg.weights.w_m);
        if (cfg.weights.w_d < 0 || cfg.weights.w_c < 0 || cfg.weights.w_m < 0 ||
            cfg.weights.c_ref_kbps < 0)
            throw ConfigError("weights", "weights must be non-negative");
    }

    if (doc.contains("walk")) {
        const auto& w = doc["walk"];
        cfg.walk.p_f = get_num(w, "walk", "p_f", cfg.walk.p_f);
        if (cfg.walk.p_f < 0.0 || cfg.walk.p_f >= 1.0)
            throw ConfigError("walk.p_f", "must be in [0, 1)");
        if (w.contains("mode")) {
            auto mode = get_str(w, "walk", "mode");
            if (mode == "discovery")
                cfg.walk.mode = WalkMode::Discovery;
            else if (mode == "unicast")
                cfg.walk.mode = WalkMode::Unicast;
            else
                throw ConfigError("walk.mode", "expected discovery or unicast");
        }
        cfg.walk.internal_delay_ms =
            get_num(w, "walk", "internal_delay_ms", cfg.walk.internal_delay_ms);
        if (cfg.walk.internal_delay_ms < 0.0)
            throw ConfigError("walk.internal_delay_ms", "must be non-negative");
    }

    if (doc.contains("timers")) {
        const auto& t = doc["timers"];
        auto& tc = cfg.timers;
        tc.random_walk_period = get_num(t, "timers", "random_walk_period", tc.random_walk_period);
        tc.routing_update_period =
            get_num(t, "timers", "routing_update_period", tc.routing_update_period);
        tc.hello_period = get_num(t, "timers", "hello_period", tc.hello_period);
        tc.fluctuation_rw = get_num(t, "timers", "fluctuation_rw", tc.fluctuation_rw);
        tc.fluctuation_ru = get_num(t, "timers", "fluctuation_ru", tc.fluctuation_ru);
        tc.fluctuation_h = get_num(t, "timers", "fluctuation_h", tc.fluctuation_h);
        tc.hello_timeout = get_num(t, "timers", "hello_timeout", 3.0 * tc.hello_period);
        if (tc.random_walk_period <= 0 || tc.routing_update_period <= 0 || tc.hello_period <= 0)
            throw ConfigError("timers", "periods must be positive");
        if (tc.fluctuation_rw < 0 || tc.fluctuation_ru < 0 || tc.fluctuation_h < 0)
            throw ConfigError("timers", "fluctuations must be non-negative");
        if (tc.hello_timeout <= tc.hello_period)
            throw ConfigError("timers.hello_timeout", "must exceed hello_period");
    }

    if (doc.contains("protocol")) {
        const auto& p = doc["protocol"];
        cfg.protocol.triggered_updates = p.value("triggered_updates", cfg.protocol.triggered_updates);
        cfg.protocol.form_steg_link = p.value("form_steg_link", cfg.protocol.form_steg_link);
        cfg.protocol.split_horizon = p.value("split_horizon", cfg.protocol.split_horizon);
    }

    if (!doc.contains("platforms") || !doc["platforms"].is_array() || doc["platforms"].empty())
        throw ConfigError("platforms", "missing or empty");
    std::set<AgentId> all_ids;
    std::set<PlatformId> platform_ids;
    for (std::size_t pi = 0; pi < doc["platforms"].size(); ++pi) {
        const auto& pj = doc["platforms"][pi];
        std::string ppath = "platforms[" + std::to_string(pi) + "]";
        PlatformSpec plat;
        plat.id = get_str(pj, ppath, "id");
        if (!platform_ids.insert(plat.id).second)
            throw ConfigError(ppath + ".id", "duplicate platform id: " + plat.id);
        if (!pj.contains("agents") || !pj["agents"].is_array())
            throw ConfigError(ppath + ".agents", "missing");
        for (std::size_t ai = 0; ai < pj["agents"].size(); ++ai) {
            const auto& aj = pj["agents"][ai];
            std::string apath = ppath + ".agents[" + std::to_string(ai) + "]";
            AgentSpec a;
            auto local = get_str(aj, apath, "id");
            if (local.empty()) throw ConfigError(apath + ".id", "empty agent name");
            a.id = AgentId(plat.id, local);
            auto role = get_str(aj, apath, "role");
            if (role == "SA")
                a.role = AgentRole::SA;
            else if (role == "OA")
                a.role = AgentRole::OA;
            else
                throw ConfigError(apath + ".role", "expected SA or OA");
            if (a.role == AgentRole::SA) {
                if (!aj.contains("caps"))
                    throw ConfigError(apath + ".caps", "SA must declare capabilities");
                a.caps = parse_caps(aj["caps"], apath + ".caps", cfg.catalog);
                if (a.caps.empty())
                    throw ConfigError(apath + ".caps", "SA capabilities must be non-empty");
            } else if (aj.contains("caps")) {
                throw ConfigError(apath + ".caps",
                                  "OA " + a.id.str() + " must not declare capabilities");
            }
            if (!all_ids.insert(a.id).second)
                throw ConfigError(apath + ".id", "duplicate agent id: " + a.id.str());
            plat.agents.push_back(std::move(a));
        }
        cfg.platforms.push_back(std::move(plat));
    }
    // SA index with stable pointers (platforms vector is final now)
    std::map<AgentId, const AgentSpec*> sas;
    for (const auto& plat : cfg.platforms)
        for (const auto& a : plat.agents)
            if (a.role == AgentRole::SA) sas[a.id] = &a;

    if (doc.contains("fixed_relations")) {
        if (!doc["fixed_relations"].is_array())
            throw ConfigError("fixed_relations", "expected an array");
        for (std::size_t i = 0; i < doc["fixed_relations"].size(); ++i) {
            const auto& rj = doc["fixed_relations"][i];
            std::string rpath = "fixed_relations[" + std::to_string(i) + "]";
            FixedRelation rel;
            rel.sa_a = parse_agent_ref(rj.contains("sa_a") ? rj["sa_a"] : json(), rpath + ".sa_a");
            rel.sa_b = parse_agent_ref(rj.contains("sa_b") ? rj["sa_b"] : json(), rpath + ".sa_b");
            rel.method = get_str(rj, rpath, "method");
            if (!cfg.catalog.contains(rel.method))
                throw ConfigError(rpath + ".method", "unknown method: " + rel.method);
            for (const auto* end : {&rel.sa_a, &rel.sa_b}) {
                auto it = sas.find(*end);
                if (it == sas.end())
                    throw ConfigError(rpath, "endpoint is not a declared SA: " + end->str());
                if (!it->second->caps.contains(rel.method))
                    throw ConfigError(rpath, "endpoint " + end->str() +
                                                 " lacks method " + rel.method);
            }
            if (rel.sa_a == rel.sa_b) throw ConfigError(rpath, "self relation");
            cfg.fixed_relations.push_back(std::move(rel));
        }
    }

    if (doc.contains("events")) {
        if (!doc["events"].is_array()) throw ConfigError("events", "expected an array");
        for (std::size_t i = 0; i < doc["events"].size(); ++i) {
            const auto& ej = doc["events"][i];
            std::string epath = "events[" + std::to_string(i) + "]";
            DynamicEvent ev;
            ev.time = get_num(ej, epath, "time", 0.0, true);
            if (ev.time < 0.0 || ev.time > cfg.duration)
                throw ConfigError(epath + ".time", "outside [0, duration]");
            auto kind = get_str(ej, epath, "kind");
            if (kind == "kill") {
                ev.kind = DynamicEvent::Kind::Kill;
                ev.agent =
                    parse_agent_ref(ej.contains("agent") ? ej["agent"] : json(), epath + ".agent");
                if (!all_ids.count(ev.agent))
                    throw ConfigError(epath + ".agent", "unknown agent: " + ev.agent.str());
            } else if (kind == "join") {
                ev.kind = DynamicEvent::Kind::Join;
                if (!ej.contains("agent") || !ej["agent"].is_object())
                    throw ConfigError(epath + ".agent", "expected an object");
                const auto& aj = ej["agent"];
                auto plat = get_str(aj, epath + ".agent", "platform");
                if (!platform_ids.count(plat))
                    throw ConfigError(epath + ".agent.platform", "unknown platform: " + plat);
                ev.joiner.id = AgentId(plat, get_str(aj, epath + ".agent", "id"));
                if (!all_ids.insert(ev.joiner.id).second)
                    throw ConfigError(epath + ".agent.id",
                                      "duplicate agent id: " + ev.joiner.id.str());
                auto role = get_str(aj, epath + ".agent", "role");
                ev.joiner.role = role == "SA" ? AgentRole::SA : AgentRole::OA;
                if (ev.joiner.role == AgentRole::SA) {
                    if (!aj.contains("caps"))
                        throw ConfigError(epath + ".agent.caps", "SA must declare capabilities");
                    ev.joiner.caps = parse_caps(aj["caps"], epath + ".agent.caps", cfg.catalog);
                    if (ev.joiner.caps.empty())
                        throw ConfigError(epath + ".agent.caps", "must be non-empty");
                }
            } else if (kind == "send") {
                ev.kind = DynamicEvent::Kind::Send;
                ev.from =
                    parse_agent_ref(ej.contains("from") ? ej["from"] : json(), epath + ".from");
                ev.to = parse_agent_ref(ej.contains("to") ? ej["to"] : json(), epath + ".to");
                if (!sas.count(ev.from))
                    throw ConfigError(epath + ".from", "sender must be a declared SA");
                if (!sas.count(ev.to))
                    throw ConfigError(epath + ".to", "destination must be a declared SA");
                if (ev.from == ev.to) throw ConfigError(epath, "send to self");
                ev.payload = ej.value("payload", std::string());
            } else {
                throw ConfigError(epath + ".kind", "expected kill, join or send");
            }
            cfg.events.push_back(std::move(ev));
        }
    }

    return cfg;
}

ScenarioConfig load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("$", "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_scenario(ss.str());
}

std::string scenario_to_json(const ScenarioConfig& cfg) {
    json doc;
    doc["name"] = cfg.name;
    doc["seed"] = cfg.seed;
    doc["duration"] = cfg.duration;
    for (const auto& id : cfg.catalog.ids()) {
        const auto& m = cfg.catalog.get(id);
        doc["catalog"].push_back({{"id", m.id},
                                  {"layer", layer_name(m.layer)},
                                  {"capacity_kbps", m.capacity_kbps},
                                  {"delay_ms", m.delay_ms},
                                  {"penalty", m.penalty}});
    }
    doc["weights"] = {{"w_d", cfg.weights.w_d},
                      {"w_c", cfg.weights.w_c},
                      {"c_ref_kbps", cfg.weights.c_ref_kbps},
                      {"w_m", cfg.weights.w_m}};
    doc["walk"] = {{"p_f", cfg.walk.p_f},
                   {"mode", cfg.walk.mode == WalkMode::Discovery ? "discovery" : "unicast"},
                   {"internal_delay_ms", cfg.walk.internal_delay_ms}};
    doc["timers"] = {{"random_walk_period", cfg.timers.random_walk_period},
                     {"routing_update_period", cfg.timers.routing_update_period},
                     {"hello_period", cfg.timers.hello_period},
                     {"fluctuation_rw", cfg.timers.fluctuation_rw},
                     {"fluctuation_ru", cfg.timers.fluctuation_ru},
                     {"fluctuation_h", cfg.timers.fluctuation_h},
                     {"hello_timeout", cfg.timers.hello_timeout}};
    doc["protocol"] = {{"triggered_updates", cfg.protocol.triggered_updates},
                       {"form_steg_link", cfg.protocol.form_steg_link},
                       {"split_horizon", cfg.protocol.split_horizon}};
    doc["platforms"] = json::array();
    for (const auto& plat : cfg.platforms) {
        json pj{{"id", plat.id}, {"agents", json::array()}};
        for (const auto& a : plat.agents) {
            json aj{{"id", a.id.local_name}, {"role", a.role == AgentRole::SA ? "SA" : "OA"}};
            if (a.role == AgentRole::SA)
                aj["caps"] = std::vector<std::string>(a.caps.methods.begin(), a.caps.methods.end());
            pj["agents"].push_back(std::move(aj));
        }
        doc["platforms"].push_back(std::move(pj));
    }
    for (const auto& rel : cfg.fixed_relations)
        doc["fixed_relations"].push_back(
            {{"sa_a", rel.sa_a.str()}, {"sa_b", rel.sa_b.str()}, {"method", rel.method}});
    for (const auto& ev : cfg.events) {
        json ej{{"time", ev.time}};
        switch (ev.kind) {
            case DynamicEvent::Kind::Kill:
                ej["kind"] = "kill";
                ej["agent"] = ev.agent.str();
                break;
            case DynamicEvent::Kind::Join: {
                ej["kind"] = "join";
                json aj{{"platform", ev.joiner.id.platform},
                        {"id", ev.joiner.id.local_name},
                        {"role", ev.joiner.role == AgentRole::SA ? "SA" : "OA"}};
                if (ev.joiner.role == AgentRole::SA)
                    aj["caps"] = std::vector<std::string>(ev.joiner.caps.methods.begin(),
                                                          ev.joiner.caps.methods.end());
                ej["agent"] = std::move(aj);
                break;
            }
            case DynamicEvent::Kind::Send:
                ej["kind"] = "send";
                ej["from"] = ev.from.str();
                ej["to"] = ev.to.str();
                ej["payload"] = ev.payload;
                break;
        }
        doc["events"].push_back(std::move(ej));
    }
    return doc.dump(2);
}

} // namespace trustmas
