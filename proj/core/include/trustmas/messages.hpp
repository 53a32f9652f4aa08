#ifndef TRUSTMAS_MESSAGES_HPP
#define TRUSTMAS_MESSAGES_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "trustmas/ids.hpp"
#include "trustmas/methods.hpp"
#include "trustmas/metric.hpp"

namespace trustmas {

using SimTime = double; // seconds

/// The payload an SA hides inside a random-walk cover message.
struct StegAnnouncement {
    AgentId address;
    CapabilitySet capabilities;

    bool operator==(const StegAnnouncement&) const = default;
};

/// A cover message circulating on the MAS platform. OAs see only the walk id
/// and hop count; the hidden announcement, if any, is opaque to them.
struct CoverMessage {
    std::string walk_id;
    int hop_count = 0;
    std::optional<StegAnnouncement> hidden;
};

/// Embed an announcement into a fresh cover (hop_count 0).
inline CoverMessage cover(const StegAnnouncement& ann, std::string walk_id) {
    return CoverMessage{std::move(walk_id), 0, ann};
}

/// A plain decoy cover with nothing embedded.
inline CoverMessage plain_cover(std::string walk_id) {
    return CoverMessage{std::move(walk_id), 0, std::nullopt};
}

/// Extract the hidden announcement. Only SAs can see it; for OA callers the
/// result is always empty, whatever the message carries.
inline std::optional<StegAnnouncement> uncover(const CoverMessage& msg, bool caller_is_sa) {
    if (!caller_is_sa) return std::nullopt;
    return msg.hidden;
}

/// Periodic liveness message over an established steg-link.
struct HelloMessage {
    AgentId sender;
    CapabilitySet sender_caps;
    MethodId link_method; // must be in sender_caps
    std::vector<AgentId> neighbor_digest;
    std::uint64_t seq = 0;
};

/// One advertised route inside a full-table update.
struct AdvertisedRoute {
    AgentId dest;
    CapabilitySet dest_caps;
    RouteAttributes attrs;
};

/// Full routing table exchanged periodically: the sender's best entries plus
/// its own self-entry (dest = sender, zero attributes).
struct RoutingUpdateMessage {
    AgentId sender;
    std::vector<AdvertisedRoute> entries;
};

/// Relay request asking a compatible SA to initiate a steg-link with a newly
/// discovered SA the relayer itself cannot talk to.
struct FormStegLinkMessage {
    AgentId new_sa_address;
    CapabilitySet new_sa_caps;
};

} // namespace trustmas

#endif
