#include "trustmas/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "trustmas/path.hpp"

namespace trustmas {

using nlohmann::json;

LinkGraph LinkGraph::from_scenario(const ScenarioConfig& cfg) {
    LinkGraph g;
    for (const auto& plat : cfg.platforms)
        for (const auto& a : plat.agents)
            if (a.role == AgentRole::SA) g.nodes[a.id] = a.caps;

    auto add_edge = [&](const AgentId& a, const AgentId& b, std::vector<MethodId> methods) {
        const AgentId& lo = std::min(a, b);
        const AgentId& hi = std::max(a, b);
        for (auto& e : g.edges)
            if (e.a == lo && e.b == hi) {
                for (auto& m : methods)
                    if (std::find(e.methods.begin(), e.methods.end(), m) == e.methods.end())
                        e.methods.push_back(m);
                return;
            }
        g.edges.push_back(Edge{lo, hi, std::move(methods)});
    };

    for (const auto& plat : cfg.platforms) {
        std::vector<const AgentSpec*> sas;
        for (const auto& a : plat.agents)
            if (a.role == AgentRole::SA) sas.push_back(&a);
        for (std::size_t i = 0; i < sas.size(); ++i)
            for (std::size_t j = i + 1; j < sas.size(); ++j) {
                auto shared = capability_overlap(sas[i]->caps, sas[j]->caps);
                if (!shared.empty())
                    add_edge(sas[i]->id, sas[j]->id,
                             {shared.methods.begin(), shared.methods.end()});
            }
    }
    for (const auto& rel : cfg.fixed_relations) add_edge(rel.sa_a, rel.sa_b, {rel.method});
    return g;
}

OracleRoutes oracle_routes(const LinkGraph& graph, const MethodCatalog& catalog,
                           const MetricWeights& w) {
    if (graph.nodes.size() > 12)
        throw TooLarge("oracle guard: " + std::to_string(graph.nodes.size()) +
                       " SAs exceed the exhaustive-enumeration limit of 12");

    std::vector<AgentId> nodes;
    for (const auto& [id, caps] : graph.nodes) nodes.push_back(id);
    auto index_of = [&](const AgentId& id) {
        return std::distance(nodes.begin(), std::find(nodes.begin(), nodes.end(), id));
    };

    // adjacency with the per-edge method choice resolved up front (lowest
    // single-link score, ties by id -- the same rule links use)
    std::vector<std::vector<std::pair<int, const StegMethodSpec*>>> adj(nodes.size());
    for (const auto& e : graph.edges) {
        const StegMethodSpec* pick = nullptr;
        for (const auto& m : e.methods) {
            const auto& spec = catalog.get(m);
            if (!pick || single_link_score(spec, w) < single_link_score(*pick, w) ||
                (single_link_score(spec, w) == single_link_score(*pick, w) && spec.id < pick->id))
                pick = &spec;
        }
        int ia = static_cast<int>(index_of(e.a));
        int ib = static_cast<int>(index_of(e.b));
        adj[ia].emplace_back(ib, pick);
        adj[ib].emplace_back(ia, pick);
    }
    for (auto& nb : adj)
        std::sort(nb.begin(), nb.end(),
                  [&](const auto& x, const auto& y) { return nodes[x.first] < nodes[y.first]; });

    OracleRoutes out;
    std::vector<int> path;
    std::vector<const StegMethodSpec*> links;
    std::vector<bool> visited(nodes.size(), false);

    for (std::size_t s = 0; s < nodes.size(); ++s) {
        // one DFS per source finds best simple paths to every destination
        std::vector<OraclePath> best(nodes.size());
        auto record = [&](int dst) {
            // fold attributes from the destination end, mirroring how hop-by-
            // hop advertisement composes them (keeps double arithmetic exact)
            RouteAttributes attrs = RouteAttributes::zero();
            for (auto it = links.rbegin(); it != links.rend(); ++it)
                attrs = *compose_attributes(**it, attrs);
            double sc = score(attrs, w);
            auto& slot = best[dst];
            if (!slot.reachable || sc < slot.best_score ||
                (sc == slot.best_score && attrs.hop_count < slot.attrs.hop_count)) {
                slot.reachable = true;
                slot.best_score = sc;
                slot.attrs = attrs;
                slot.path.clear();
                for (int idx : path) slot.path.push_back(nodes[idx]);
            }
        };
        std::function<void(int)> dfs = [&](int u) {
            for (const auto& [v, spec] : adj[u]) {
                if (visited[v]) continue;
                if (static_cast<int>(links.size()) + 1 > MAX_HOPS) continue;
                visited[v] = true;
                path.push_back(v);
                links.push_back(spec);
                record(v);
                dfs(v);
                links.pop_back();
                path.pop_back();
                visited[v] = false;
            }
        };
        visited[s] = true;
        path.assign(1, static_cast<int>(s));
        links.clear();
        dfs(static_cast<int>(s));
        visited[s] = false;

        for (std::size_t d = 0; d < nodes.size(); ++d) {
            if (d == s) continue;
            out.pairs[{nodes[s], nodes[d]}] = best[d];
        }
    }
    return out;
}

double oracle_walk_hit(const std::vector<AgentId>& roster, double p_f, const AgentId& origin,
                       const AgentId& target) {
    if (roster.size() > 20) throw TooLarge("walk-hit guard: roster exceeds 20 agents");
    if (origin == target) return 0.0; // walks never deliver to self
    const std::size_t n = roster.size();
    if (n < 2) return 0.0;

    // unknowns: f(u) = P(walk at holder u eventually visits target), u != target
    std::vector<AgentId> others;
    for (const auto& a : roster)
        if (a != target) others.push_back(a);
    const std::size_t m = others.size();
    // f(u) = p_f/(n-1) * [1 + sum_{v != u, v != target} f(v)]
    // => f(u) - c * sum_{v != u} f(v) = c,  with c = p_f/(n-1)
    double c = p_f / static_cast<double>(n - 1);
    std::vector<std::vector<double>> A(m, std::vector<double>(m + 1, 0.0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t jj = 0; jj < m; ++jj) A[i][jj] = (i == jj) ? 1.0 : -c;
        A[i][m] = c;
    }
    // Gaussian elimination with partial pivoting
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < m; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        std::swap(A[col], A[piv]);
        for (std::size_t r = 0; r < m; ++r) {
            if (r == col || A[r][col] == 0.0) continue;
            double factor = A[r][col] / A[col][col];
            for (std::size_t cc = col; cc <= m; ++cc) A[r][cc] -= factor * A[col][cc];
        }
    }
    std::map<AgentId, double> f;
    for (std::size_t i = 0; i < m; ++i) f[others[i]] = A[i][m] / A[i][i];

    // first hop: uniform over roster \ {origin}
    double p = 0.0;
    for (const auto& v : roster) {
        if (v == origin) continue;
        p += (v == target) ? 1.0 : f[v];
    }
    return p / static_cast<double>(n - 1);
}

json OracleRoutes::to_json() const {
    json arr = json::array();
    for (const auto& [key, op] : pairs) {
        json pj{{"src", key.first.str()}, {"dest", key.second.str()}, {"reachable", op.reachable}};
        if (op.reachable) {
            pj["score"] = op.best_score;
            pj["hop_count"] = op.attrs.hop_count;
            json path = json::array();
            for (const auto& a : op.path) path.push_back(a.str());
            pj["path"] = std::move(path);
        }
        arr.push_back(std::move(pj));
    }
    return json{{"pairs", arr}};
}

OracleRoutes OracleRoutes::from_json(const json& j) {
    OracleRoutes out;
    for (const auto& pj : j.at("pairs")) {
        OraclePath op;
        op.reachable = pj.at("reachable").get<bool>();
        if (op.reachable) {
            op.best_score = pj.at("score").get<double>();
            op.attrs.hop_count = pj.at("hop_count").get<int>();
            for (const auto& a : pj.at("path")) op.path.push_back(AgentId::parse(a));
        }
        out.pairs[{AgentId::parse(pj.at("src").get<std::string>()),
                   AgentId::parse(pj.at("dest").get<std::string>())}] = std::move(op);
    }
    return out;
}

VerifyReport verify(const Summary& summary, const OracleRoutes& oracle) {
    VerifyReport report;
    for (const auto& [key, op] : oracle.pairs) {
        const auto& [src, dest] = key;
        report.pairs_checked++;
        auto table_it = summary.final_tables.find(src);
        const SummaryRoute* found = nullptr;
        if (table_it != summary.final_tables.end())
            for (const auto& r : table_it->second.routes)
                if (r.dest == dest) {
                    found = &r;
                    break;
                }
        if (op.reachable && !found) {
            report.mismatches.push_back(
                Mismatch{src, dest, std::nullopt, op.best_score, "missing_route"});
        } else if (!op.reachable && found) {
            report.mismatches.push_back(
                Mismatch{src, dest, found->route_score, std::nullopt, "unexpected_route"});
        } else if (op.reachable && found && found->route_score != op.best_score) {
            report.mismatches.push_back(
                Mismatch{src, dest, found->route_score, op.best_score, "score"});
        }
    }
    return report;
}

json VerifyReport::to_json() const {
    json arr = json::array();
    for (const auto& m : mismatches) {
        json mj{{"src", m.src.str()}, {"dest", m.dest.str()}, {"what", m.what}};
        mj["sim_score"] = m.sim_score ? json(*m.sim_score) : json(nullptr);
        mj["oracle_score"] = m.oracle_score ? json(*m.oracle_score) : json(nullptr);
        arr.push_back(std::move(mj));
    }
    return json{{"pairs_checked", pairs_checked}, {"mismatches", arr}};
}

} // namespace trustmas
