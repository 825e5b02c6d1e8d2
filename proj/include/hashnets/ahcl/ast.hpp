#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hashnets/behavior/action.hpp"

namespace hashnets::ahcl {

enum class Direction { input, output };
enum class GroupKind { any, all };
enum class UnitKind { non_repetitive, repetitive };
enum class ChannelMode { synchronous, buffered, ready };

struct Port {
    std::string id;
    Direction direction = Direction::input;
    bool stream = false;
    int nesting = 0;
    bool collective = false;
    Span span;

    bool operator==(const Port& o) const {
        return id == o.id && direction == o.direction && stream == o.stream &&
               nesting == o.nesting && collective == o.collective;
    }
};

struct Group {
    std::string id;
    GroupKind kind = GroupKind::any;
    std::vector<Port> members;
    Span span;

    bool operator==(const Group& o) const {
        return id == o.id && kind == o.kind && members == o.members;
    }
};

struct Unit {
    std::string id;
    UnitKind kind = UnitKind::non_repetitive;
    std::vector<Port> ports;
    std::vector<Group> groups;
    std::vector<std::string> semaphores;
    behavior::Action protocol;
    Span span;

    bool operator==(const Unit& o) const {
        return id == o.id && kind == o.kind && ports == o.ports && groups == o.groups &&
               semaphores == o.semaphores && protocol == o.protocol;
    }

    // Single port or group member with the given id.
    [[nodiscard]] const Port* find_port(const std::string& port_id) const;
    [[nodiscard]] const Group* find_group(const std::string& group_id) const;
    // Group that contains `port_id` as a member, if any.
    [[nodiscard]] const Group* group_of(const std::string& port_id) const;
    // Ports and group members, declaration order.
    [[nodiscard]] std::vector<const Port*> all_ports() const;
};

struct PortRef {
    std::string unit;
    std::string port;

    bool operator==(const PortRef&) const = default;
    [[nodiscard]] std::string str() const { return unit + "." + port; }
};

struct Channel {
    std::string id;
    PortRef sender;
    PortRef receiver;
    ChannelMode mode = ChannelMode::synchronous;
    // Buffered capacity; nullopt when written as plain `buffered`.
    std::optional<int> capacity;
    Span span;

    bool operator==(const Channel& o) const {
        return id == o.id && sender == o.sender && receiver == o.receiver && mode == o.mode &&
               capacity == o.capacity;
    }
};

struct CollectiveGroup {
    std::string id;
    std::vector<PortRef> members;
    std::optional<int> nesting;
    Span span;

    bool operator==(const CollectiveGroup& o) const {
        return id == o.id && members == o.members && nesting == o.nesting;
    }
};

struct Component {
    std::string name;
    std::vector<Unit> units;
    std::vector<Channel> channels;
    std::vector<CollectiveGroup> collectives;
    Span span;

    bool operator==(const Component& o) const {
        return name == o.name && units == o.units && channels == o.channels &&
               collectives == o.collectives;
    }

    [[nodiscard]] const Unit* find_unit(const std::string& id) const;
    [[nodiscard]] const Port* find_port(const PortRef& ref) const;
    [[nodiscard]] const Channel* find_channel(const std::string& id) const;
    // Collective group that lists `ref` as a member.
    [[nodiscard]] const CollectiveGroup* collective_of(const PortRef& ref) const;
};

[[nodiscard]] const char* to_string(Direction d);
[[nodiscard]] const char* to_string(GroupKind k);
[[nodiscard]] const char* to_string(ChannelMode m);

}  // namespace hashnets::ahcl
