#include "area_overlay/events.hpp"

#include <algorithm>
#include <charconv>

#include <fmt/format.h>

namespace area_overlay {

namespace {

Link& find_link(NetworkSpec& spec, const LinkRef& ref) {
  Link* found = nullptr;
  for (auto& l : spec.links) {
    if (!l.connects(ref.a, ref.b) || (ref.area && l.area != *ref.area)) continue;
    if (found) {
      throw std::invalid_argument(fmt::format("link {}-{} is ambiguous; name its area",
                                              spec.router_name(ref.a), spec.router_name(ref.b)));
    }
    found = &l;
  }
  if (!found) {
    throw std::invalid_argument(
        fmt::format("no link {}-{}", spec.router_name(ref.a), spec.router_name(ref.b)));
  }
  return *found;
}

void require_router(const NetworkSpec& spec, RouterId r) {
  if (!spec.routers.count(r)) {
    throw std::invalid_argument(fmt::format("unknown router {}", to_string(r)));
  }
}

std::vector<std::string_view> words_of(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const auto start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

}  // namespace

std::set<RouterId> mutate_spec(NetworkSpec& spec, const EventAction& action) {
  return std::visit(
      [&](const auto& ev) -> std::set<RouterId> {
        using T = std::decay_t<decltype(ev)>;
        if constexpr (std::is_same_v<T, LinkCostChange>) {
          Link& l = find_link(spec, ev.link);
          if (ev.cost_forward < 1 || ev.cost_forward > kMaxLinkCost || ev.cost_reverse < 1 ||
              ev.cost_reverse > kMaxLinkCost) {
            throw std::invalid_argument("link cost out of range");
          }
          const bool forward = l.a == ev.link.a;
          l.cost_ab = forward ? ev.cost_forward : ev.cost_reverse;
          l.cost_ba = forward ? ev.cost_reverse : ev.cost_forward;
          return {l.a, l.b};
        } else if constexpr (std::is_same_v<T, LinkDown> || std::is_same_v<T, LinkUp>) {
          Link& l = find_link(spec, ev.link);
          l.up = std::is_same_v<T, LinkUp>;
          return {l.a, l.b};
        } else if constexpr (std::is_same_v<T, RouterDown> || std::is_same_v<T, RouterUp>) {
          require_router(spec, ev.router);
          spec.routers.at(ev.router).up = std::is_same_v<T, RouterUp>;
          std::set<RouterId> out{ev.router};
          for (const auto& l : spec.links) {
            if (l.a == ev.router || l.b == ev.router) out.insert(l.peer(ev.router));
          }
          return out;
        } else if constexpr (std::is_same_v<T, PrefixAdd>) {
          require_router(spec, ev.assignment.router);
          if (ev.assignment.prefix.family() != spec.family) {
            throw std::invalid_argument("prefix family does not match the scenario");
          }
          std::set<RouterId> out{ev.assignment.router};
          auto& list = spec.prefixes;
          for (auto it = list.begin(); it != list.end();) {
            if (it->prefix == ev.assignment.prefix) {
              out.insert(it->router);
              it = list.erase(it);
            } else {
              ++it;
            }
          }
          list.push_back(ev.assignment);
          if (ev.name) spec.prefix_names[ev.assignment.prefix] = *ev.name;
          return out;
        } else if constexpr (std::is_same_v<T, PrefixRemove>) {
          std::set<RouterId> out;
          auto& list = spec.prefixes;
          for (auto it = list.begin(); it != list.end();) {
            if (it->prefix == ev.prefix) {
              out.insert(it->router);
              it = list.erase(it);
            } else {
              ++it;
            }
          }
          if (out.empty()) {
            throw std::invalid_argument(fmt::format("prefix {} is not assigned", ev.prefix.to_string()));
          }
          return out;
        } else if constexpr (std::is_same_v<T, AsbrChange>) {
          require_router(spec, ev.router);
          spec.routers.at(ev.router).asbr = ev.asbr;
          return {ev.router};
        } else {
          static_assert(std::is_same_v<T, AbrJoin>);
          require_router(spec, ev.router);
          require_router(spec, ev.via);
          if (ev.router == ev.via) throw std::invalid_argument("join via itself");
          if (!spec.areas.count(ev.area)) {
            throw std::invalid_argument(fmt::format("unknown area {}", ev.area.value));
          }
          if (!spec.in_area(ev.via, ev.area)) {
            throw std::invalid_argument(fmt::format("{} is not in area {}",
                                                    spec.router_name(ev.via), ev.area.value));
          }
          std::set<RouterId> out{ev.router, ev.via};
          const bool was_down = !spec.routers.at(ev.router).up;
          spec.routers.at(ev.router).up = true;
          if (was_down) {
            for (const auto& l : spec.links) {
              if (l.a == ev.router || l.b == ev.router) out.insert(l.peer(ev.router));
            }
          }
          auto it = std::find_if(spec.links.begin(), spec.links.end(), [&](const Link& l) {
            return l.connects(ev.router, ev.via) && l.area == ev.area;
          });
          if (it == spec.links.end()) {
            spec.links.push_back(Link{ev.router, ev.via, ev.area, ev.cost_out, ev.cost_back, true});
          } else {
            const bool forward = it->a == ev.router;
            it->cost_ab = forward ? ev.cost_out : ev.cost_back;
            it->cost_ba = forward ? ev.cost_back : ev.cost_out;
            it->up = true;
          }
          return out;
        }
      },
      action);
}

std::vector<Event> load_events(std::string_view text, const NetworkSpec& spec) {
  NetworkSpec scratch = spec;
  std::vector<Event> events;
  int line_no = 0;
  std::size_t pos = 0;
  Tick last = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto w = words_of(line);
    if (w.empty()) continue;

    auto fail = [&](const std::string& what) -> void { throw ScenarioError(line_no, what); };
    auto number = [&](std::size_t i) -> std::uint64_t {
      if (i >= w.size()) fail("missing number");
      std::uint64_t v = 0;
      const auto [p, ec] = std::from_chars(w[i].data(), w[i].data() + w[i].size(), v);
      if (ec != std::errc{} || p != w[i].data() + w[i].size()) {
        fail(fmt::format("expected a number, got '{}'", w[i]));
      }
      return v;
    };
    auto router = [&](std::size_t i) -> RouterId {
      if (i >= w.size()) fail("missing router name");
      const auto id = scratch.find_router(w[i]);
      if (!id) fail(fmt::format("unknown router '{}'", w[i]));
      return *id;
    };
    auto cost = [&](std::size_t i) -> Cost {
      const auto v = number(i);
      if (v < 1 || v > kMaxLinkCost) fail(fmt::format("cost {} out of range", v));
      return static_cast<Cost>(v);
    };
    auto link_ref = [&](std::size_t i) -> std::pair<LinkRef, std::size_t> {
      LinkRef ref{router(i), router(i + 1), std::nullopt};
      std::size_t next = i + 2;
      if (next + 1 < w.size() + 1 && next < w.size() && w[next] == "area") {
        ref.area = AreaId{static_cast<std::uint32_t>(number(next + 1))};
        next += 2;
      }
      return {ref, next};
    };
    auto done = [&](std::size_t i) {
      if (i != w.size()) fail("unexpected trailing tokens");
    };

    if (w[0] != "at" || w.size() < 3) fail("events start with 'at <tick> <action>'");
    Event ev;
    ev.at = number(1);
    if (ev.at < last) fail("events must be in nondecreasing tick order");
    last = ev.at;
    const auto verb = w[2];
    if (verb == "linkcost") {
      auto [ref, i] = link_ref(3);
      const Cost c = cost(i);
      const Cost c_rev = i + 1 < w.size() ? cost(i + 1) : c;
      done(i + 1 < w.size() ? i + 2 : i + 1);
      ev.action = LinkCostChange{ref, c, c_rev};
    } else if (verb == "linkdown" || verb == "linkup") {
      auto [ref, i] = link_ref(3);
      done(i);
      if (verb == "linkdown") ev.action = LinkDown{ref};
      else ev.action = LinkUp{ref};
    } else if (verb == "routerdown" || verb == "routerup") {
      const RouterId r = router(3);
      done(4);
      if (verb == "routerdown") ev.action = RouterDown{r};
      else ev.action = RouterUp{r};
    } else if (verb == "join") {
      // at <t> join <r> area <a> via <peer> cost <c> [<c-back>]
      if (w.size() < 10 || w[4] != "area" || w[6] != "via" || w[8] != "cost") {
        fail("usage: at <tick> join <router> area <area> via <router> cost <c> [<c-back>]");
      }
      AbrJoin j{router(3), AreaId{static_cast<std::uint32_t>(number(5))}, router(7), cost(9), 0};
      j.cost_back = w.size() > 10 ? cost(10) : j.cost_out;
      done(w.size() > 10 ? 11 : 10);
      ev.action = j;
    } else if (verb == "prefix") {
      if (w.size() < 5) fail("usage: at <tick> prefix add|remove <prefix> ...");
      Prefix p;
      try {
        p = Prefix::parse(w[4]);
      } catch (const std::invalid_argument& e) {
        fail(e.what());
      }
      if (w[3] == "remove") {
        done(5);
        ev.action = PrefixRemove{p};
      } else if (w[3] == "add") {
        if (w.size() < 7 || w[5] != "at") fail("usage: at <tick> prefix add <prefix> at <router> [cost <c>] [name <label>]");
        PrefixAdd add{PrefixAssignment{p, router(6), 0}, std::nullopt};
        std::size_t i = 7;
        if (i < w.size() && w[i] == "cost") {
          add.assignment.stub_cost = static_cast<Cost>(number(i + 1));
          i += 2;
        }
        if (i < w.size() && w[i] == "name") {
          if (i + 1 >= w.size()) fail("missing prefix name");
          add.name = std::string(w[i + 1]);
          i += 2;
        }
        done(i);
        ev.action = add;
      } else {
        fail("prefix events are 'add' or 'remove'");
      }
    } else if (verb == "asbr") {
      if (w.size() != 5 || (w[4] != "on" && w[4] != "off")) fail("usage: at <tick> asbr <router> on|off");
      ev.action = AsbrChange{router(3), w[4] == "on"};
    } else {
      fail(fmt::format("unknown event '{}'", verb));
    }
    try {
      mutate_spec(scratch, ev.action);
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
    events.push_back(std::move(ev));
  }
  return events;
}

std::string describe(const EventAction& action, const NetworkSpec& spec) {
  auto name = [&](RouterId r) { return spec.router_name(r); };
  auto area_suffix = [](const LinkRef& ref) {
    return ref.area ? fmt::format(" area {}", ref.area->value) : std::string{};
  };
  return std::visit(
      [&](const auto& ev) -> std::string {
        using T = std::decay_t<decltype(ev)>;
        if constexpr (std::is_same_v<T, LinkCostChange>) {
          return fmt::format("linkcost {} {}{} {} {}", name(ev.link.a), name(ev.link.b),
                             area_suffix(ev.link), ev.cost_forward, ev.cost_reverse);
        } else if constexpr (std::is_same_v<T, LinkDown>) {
          return fmt::format("linkdown {} {}{}", name(ev.link.a), name(ev.link.b), area_suffix(ev.link));
        } else if constexpr (std::is_same_v<T, LinkUp>) {
          return fmt::format("linkup {} {}{}", name(ev.link.a), name(ev.link.b), area_suffix(ev.link));
        } else if constexpr (std::is_same_v<T, RouterDown>) {
          return fmt::format("routerdown {}", name(ev.router));
        } else if constexpr (std::is_same_v<T, RouterUp>) {
          return fmt::format("routerup {}", name(ev.router));
        } else if constexpr (std::is_same_v<T, PrefixAdd>) {
          return fmt::format("prefix add {} at {} cost {}", ev.assignment.prefix.to_string(),
                             name(ev.assignment.router), ev.assignment.stub_cost);
        } else if constexpr (std::is_same_v<T, PrefixRemove>) {
          return fmt::format("prefix remove {}", ev.prefix.to_string());
        } else if constexpr (std::is_same_v<T, AsbrChange>) {
          return fmt::format("asbr {} {}", name(ev.router), ev.asbr ? "on" : "off");
        } else {
          return fmt::format("join {} area {} via {} cost {} {}", name(ev.router), ev.area.value,
                             name(ev.via), ev.cost_out, ev.cost_back);
        }
      },
      action);
}

}  // namespace area_overlay
