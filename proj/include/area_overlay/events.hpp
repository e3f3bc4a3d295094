#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "area_overlay/topo.hpp"

namespace area_overlay {

using Tick = std::uint64_t;

/// A link named by its endpoints; the area disambiguates parallel links.
struct LinkRef {
  RouterId a;
  RouterId b;
  std::optional<AreaId> area;
};

struct LinkCostChange {
  LinkRef link;
  Cost cost_forward = 1;  // a -> b, as written in the event
  Cost cost_reverse = 1;
};
struct LinkDown { LinkRef link; };
struct LinkUp { LinkRef link; };
struct RouterDown { RouterId router; };
struct RouterUp { RouterId router; };
struct PrefixAdd {
  PrefixAssignment assignment;
  std::optional<std::string> name;
};
struct PrefixRemove { Prefix prefix; };
struct AsbrChange {
  RouterId router;
  bool asbr = true;
};
/// A router attaches to another area through a new link to `via`.
struct AbrJoin {
  RouterId router;
  AreaId area;
  RouterId via;
  Cost cost_out = 1;
  Cost cost_back = 1;
};

using EventAction = std::variant<LinkCostChange, LinkDown, LinkUp, RouterDown, RouterUp,
                                 PrefixAdd, PrefixRemove, AsbrChange, AbrJoin>;

struct Event {
  Tick at = 0;
  EventAction action;
};

/// Applies an event to the ground truth. Returns the routers whose own LSAs change.
/// Throws std::invalid_argument for references to unknown routers, links or areas.
std::set<RouterId> mutate_spec(NetworkSpec& spec, const EventAction& action);

/// Parses an event file. Every event is checked against the scenario (after the
/// events before it), so a bad reference fails here with a ScenarioError.
std::vector<Event> load_events(std::string_view text, const NetworkSpec& spec);

std::string describe(const EventAction& action, const NetworkSpec& spec);

}  // namespace area_overlay
