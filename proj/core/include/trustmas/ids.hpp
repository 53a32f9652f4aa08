#ifndef TRUSTMAS_IDS_HPP
#define TRUSTMAS_IDS_HPP

#include <compare>
#include <stdexcept>
#include <string>

namespace trustmas {

using PlatformId = std::string;

/// Globally unique agent identity, rendered as "platform/name".
/// Total lexicographic order (platform first) is the tie-break order
/// used everywhere a deterministic choice between agents is needed.
struct AgentId {
    PlatformId platform;
    std::string local_name;

    AgentId() = default;
    AgentId(PlatformId p, std::string n) : platform(std::move(p)), local_name(std::move(n)) {}

    auto operator<=>(const AgentId&) const = default;

    std::string str() const { return platform + "/" + local_name; }

    static AgentId parse(const std::string& s) {
        auto pos = s.find('/');
        if (pos == std::string::npos || pos == 0 || pos + 1 == s.size())
            throw std::invalid_argument("malformed agent id: " + s);
        return AgentId(s.substr(0, pos), s.substr(pos + 1));
    }
};

enum class AgentRole { SA, OA };

} // namespace trustmas

#endif
