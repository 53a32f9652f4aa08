#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "trustmas/router.hpp"

using namespace trustmas;

namespace {

// Shared fixture: two methods, three SAs wired as a line A - B - C.
//   m_slow: 8 kbps, 200 ms, penalty 2   (score 1*200 + 1000/8 + 10*2 = 345)
//   m_fast: 216 kbps, 5 ms, penalty 3   (score 5 + 1000/216 + 30 = 39.63)
struct Line {
    MethodCatalog cat;
    MetricWeights w;
    TimerConfig timers;
    ProtocolOptions opts;
    SaEngine a, b, c;

    Line()
        : cat(make_cat()),
          a(AgentId("P", "A"), {"m_slow"}, &cat, w, timers, opts),
          b(AgentId("P", "B"), {"m_slow", "m_fast"}, &cat, w, timers, opts),
          c(AgentId("P", "C"), {"m_fast"}, &cat, w, timers, opts) {}

    static MethodCatalog make_cat() {
        MethodCatalog cat;
        cat.add({"m_slow", StegLayer::Application, 8.0, 200.0, 2.0});
        cat.add({"m_fast", StegLayer::DataLink, 216.0, 5.0, 3.0});
        return cat;
    }

    // Deliver a hello and the reciprocal reply so both ends know each other.
    static void link(SaEngine& x, SaEngine& y, const MethodId& m, SimTime now) {
        HelloMessage h;
        h.sender = x.me();
        h.sender_caps = x.caps();
        h.link_method = m;
        auto res = y.handle_hello(h, now);
        REQUIRE(res.actions.hellos.size() == 1);
        // x replies once more; y already knows x, so the chain stops there
        auto back = x.handle_hello(res.actions.hellos[0].msg, now);
        for (auto& h : back.actions.hellos) {
            auto stop = y.handle_hello(h.msg, now);
            CHECK(stop.actions.hellos.empty());
        }
    }

    // One full round of periodic updates, delivered immediately.
    void exchange(SimTime now) {
        SaEngine* all[] = {&a, &b, &c};
        for (auto* s : all)
            for (auto& u : s->periodic_updates()) {
                for (auto* r : all)
                    if (r->me() == u.to) r->handle_routing_update(u.msg, now);
            }
    }
};

} // namespace

TEST_CASE("hello adds a neighbor once and then only refreshes") {
    Line net;
    HelloMessage h;
    h.sender = net.a.me();
    h.sender_caps = net.a.caps();
    h.link_method = "m_slow";

    auto first = net.b.handle_hello(h, 1.0);
    CHECK_FALSE(first.incompatible);
    CHECK(first.actions.hellos.size() == 1); // reciprocal
    CHECK(first.actions.hellos[0].to == net.a.me());
    REQUIRE(net.b.neighbors().contains(net.a.me()));
    CHECK(net.b.neighbors().find(net.a.me())->last_hello == 1.0);

    auto second = net.b.handle_hello(h, 7.0);
    CHECK(second.actions.hellos.empty());
    CHECK(net.b.neighbors().find(net.a.me())->last_hello == 7.0);
    CHECK(net.b.neighbors().size() == 1);
}

TEST_CASE("hello on a method outside the receiver caps is rejected") {
    Line net;
    HelloMessage h;
    h.sender = net.b.me();
    h.sender_caps = net.b.caps();
    h.link_method = "m_fast"; // A only speaks m_slow
    auto res = net.a.handle_hello(h, 0.0);
    CHECK(res.incompatible);
    CHECK(net.a.neighbors().size() == 0);
}

TEST_CASE("walk announcement with overlap triggers a hello on the cheapest method") {
    Line net;
    auto out = net.b.handle_walk_announcement(net.c.announcement(), 5.0);
    REQUIRE(out.hellos.size() == 1);
    CHECK(out.hellos[0].to == net.c.me());
    CHECK(out.hellos[0].msg.link_method == "m_fast");
    // repeat within the cache window is suppressed
    CHECK(net.b.handle_walk_announcement(net.c.announcement(), 6.0).hellos.empty());
    // own announcement is ignored
    CHECK(net.b.handle_walk_announcement(net.b.announcement(), 6.0).hellos.empty());
}

TEST_CASE("announcement without overlap is relayed to a compatible known SA") {
    Line net;
    Line::link(net.b, net.a, "m_slow", 0.0);
    // A hears about C: no shared method, but neighbor B can talk to C.
    auto out = net.a.handle_walk_announcement(net.c.announcement(), 1.0);
    CHECK(out.hellos.empty());
    REQUIRE(out.fsls.size() == 1);
    CHECK(out.fsls[0].route_dest == net.b.me());
    CHECK(out.fsls[0].msg.new_sa_address == net.c.me());

    // with the relay disabled nothing happens
    ProtocolOptions off;
    off.form_steg_link = false;
    SaEngine a2(AgentId("P", "A2"), {"m_slow"}, &net.cat, net.w, net.timers, off);
    HelloMessage h;
    h.sender = net.b.me();
    h.sender_caps = net.b.caps();
    h.link_method = "m_slow";
    a2.handle_hello(h, 0.0);
    CHECK(a2.handle_walk_announcement(net.c.announcement(), 1.0).fsls.empty());
}

TEST_CASE("form_steg_link request yields a hello unless pointless") {
    Line net;
    auto out = net.b.handle_form_steg_link({net.c.me(), net.c.caps()}, 2.0);
    REQUIRE(out.hellos.size() == 1);
    CHECK(out.hellos[0].msg.link_method == "m_fast");
    // already-neighbor and no-shared-method cases are no-ops
    Line::link(net.c, net.b, "m_fast", 2.0);
    CHECK(net.b.handle_form_steg_link({net.c.me(), net.c.caps()}, 3.0).hellos.empty());
    CHECK(net.a.handle_form_steg_link({net.c.me(), net.c.caps()}, 3.0).hellos.empty());
}

TEST_CASE("line topology converges to the composed two-hop route") {
    Line net;
    Line::link(net.a, net.b, "m_slow", 0.0);
    Line::link(net.c, net.b, "m_fast", 0.0);
    net.exchange(10.0);
    net.exchange(40.0);

    auto route = net.a.route_lookup(net.c.me());
    REQUIRE(route.has_value());
    CHECK(route->next_hop == net.b.me());
    CHECK(route->attrs.bottleneck_kbps == 8.0);
    CHECK(route->attrs.total_delay_ms == 205.0);
    CHECK(route->attrs.total_penalty == 5.0);
    CHECK(route->attrs.hop_count == 2);
    CHECK(score(route->attrs, net.w) == 380.0);

    auto back = net.c.route_lookup(net.a.me());
    REQUIRE(back.has_value());
    CHECK(score(back->attrs, net.w) == 380.0);
}

TEST_CASE("updates from unknown senders are dropped") {
    Line net;
    RoutingUpdateMessage msg;
    msg.sender = net.c.me();
    msg.entries.push_back({net.c.me(), net.c.caps(), RouteAttributes::zero()});
    auto res = net.a.handle_routing_update(msg, 1.0);
    CHECK(res.from_unknown_neighbor);
    CHECK_FALSE(net.a.routes().has_route(net.c.me()));
}

TEST_CASE("merge keeps the better route and honours best-next-hop freshness") {
    Line net;
    Line::link(net.a, net.b, "m_slow", 0.0);

    RoutingUpdateMessage via_b;
    via_b.sender = net.b.me();
    via_b.entries.push_back({net.b.me(), net.b.caps(), RouteAttributes::zero()});
    via_b.entries.push_back({net.c.me(), net.c.caps(), RouteAttributes{216.0, 5.0, 3.0, 1}});
    net.a.handle_routing_update(via_b, 10.0);
    auto best = net.a.routes().best(net.c.me());
    REQUIRE(best.has_value());
    double s0 = score(best->attrs, net.w);
    CHECK(s0 == 380.0);

    // a worse advertisement from the same (current best) next hop is accepted:
    // the best next hop always reflects its latest state
    via_b.entries[1].attrs = RouteAttributes{216.0, 100.0, 3.0, 1};
    net.a.handle_routing_update(via_b, 40.0);
    best = net.a.routes().best(net.c.me());
    REQUIRE(best.has_value());
    CHECK(score(best->attrs, net.w) > s0);
    CHECK(best->attrs.total_delay_ms == 300.0);
}

TEST_CASE("a destination absent from a full update loses its route via that sender") {
    Line net;
    Line::link(net.a, net.b, "m_slow", 0.0);
    RoutingUpdateMessage via_b;
    via_b.sender = net.b.me();
    via_b.entries.push_back({net.b.me(), net.b.caps(), RouteAttributes::zero()});
    via_b.entries.push_back({net.c.me(), net.c.caps(), RouteAttributes{216.0, 5.0, 3.0, 1}});
    net.a.handle_routing_update(via_b, 10.0);
    CHECK(net.a.routes().has_route(net.c.me()));

    via_b.entries.pop_back(); // B no longer advertises C
    auto res = net.a.handle_routing_update(via_b, 40.0);
    CHECK(res.actions.table_changed);
    CHECK_FALSE(net.a.routes().has_route(net.c.me()));
}

TEST_CASE("advertisements at the hop cap do not compose into routes") {
    Line net;
    Line::link(net.a, net.b, "m_slow", 0.0);
    RoutingUpdateMessage via_b;
    via_b.sender = net.b.me();
    via_b.entries.push_back({net.b.me(), net.b.caps(), RouteAttributes::zero()});
    via_b.entries.push_back({net.c.me(), net.c.caps(), RouteAttributes{216.0, 5.0, 3.0, MAX_HOPS}});
    net.a.handle_routing_update(via_b, 10.0);
    CHECK_FALSE(net.a.routes().has_route(net.c.me()));
}

TEST_CASE("silent neighbors are swept and their routes purged") {
    Line net;
    Line::link(net.a, net.b, "m_slow", 0.0);
    RoutingUpdateMessage via_b;
    via_b.sender = net.b.me();
    via_b.entries.push_back({net.b.me(), net.b.caps(), RouteAttributes::zero()});
    via_b.entries.push_back({net.c.me(), net.c.caps(), RouteAttributes{216.0, 5.0, 3.0, 1}});
    net.a.handle_routing_update(via_b, 1.0);
    CHECK(net.a.routes().has_route(net.c.me()));

    // before the timeout nothing happens (default hello_timeout = 30)
    CHECK(net.a.sweep_timeouts(29.0).neighbors_removed.empty());
    auto out = net.a.sweep_timeouts(31.0);
    REQUIRE(out.neighbors_removed.size() == 1);
    CHECK(out.neighbors_removed[0] == net.b.me());
    CHECK(out.routes_purged == 2);
    CHECK(net.a.neighbors().size() == 0);
    CHECK_FALSE(net.a.routes().has_route(net.c.me()));
    CHECK_FALSE(net.a.routes().has_route(net.b.me()));
}

TEST_CASE("split horizon keeps a route away from its own next hop") {
    Line net;
    Line::link(net.a, net.b, "m_slow", 0.0);
    Line::link(net.c, net.b, "m_fast", 0.0);
    net.exchange(10.0);
    net.exchange(40.0);

    // A's update toward B must not advertise C (learned via B) back to B
    for (const auto& u : net.a.periodic_updates()) {
        if (u.to != net.b.me()) continue;
        for (const auto& e : u.msg.entries) CHECK(e.dest != net.c.me());
    }
}

TEST_CASE("periodic updates always start with the self entry") {
    Line net;
    Line::link(net.a, net.b, "m_slow", 0.0);
    auto ups = net.b.periodic_updates();
    REQUIRE(ups.size() == 1);
    REQUIRE_FALSE(ups[0].msg.entries.empty());
    CHECK(ups[0].msg.entries[0].dest == net.b.me());
    CHECK(ups[0].msg.entries[0].attrs.hop_count == 0);
    CHECK(ups[0].method == "m_slow");
}

TEST_CASE("every stored route points at a live neighbor") {
    Line net;
    Line::link(net.a, net.b, "m_slow", 0.0);
    Line::link(net.c, net.b, "m_fast", 0.0);
    net.exchange(10.0);
    net.exchange(11.0);
    SaEngine* all[] = {&net.a, &net.b, &net.c};
    for (auto* s : all)
        for (const auto& e : s->routes().all_entries())
            CHECK(s->neighbors().contains(e.next_hop));
}
