#include "area_overlay/topo.hpp"

#include <algorithm>
#include <charconv>
#include <queue>
#include <sstream>

#include <fmt/format.h>

namespace area_overlay {

ScenarioError::ScenarioError(int line, const std::string& what)
    : std::runtime_error(fmt::format("line {}: {}", line, what)), line_(line) {}

bool NetworkSpec::router_up(RouterId r) const {
  const auto it = routers.find(r);
  return it != routers.end() && it->second.up;
}

std::set<AreaId> NetworkSpec::areas_of(RouterId r) const {
  std::set<AreaId> out;
  if (!router_up(r)) return out;
  for (const auto& [router, area] : explicit_members) {
    if (router == r) out.insert(area);
  }
  for (const auto& link : links) {
    if (link.up && (link.a == r || link.b == r)) out.insert(link.area);
  }
  return out;
}

std::vector<RouterId> NetworkSpec::abrs() const {
  std::vector<RouterId> out;
  for (const auto& [id, info] : routers) {
    if (is_abr(id)) out.push_back(id);
  }
  return out;
}

std::vector<RouterId> NetworkSpec::members(AreaId area) const {
  std::vector<RouterId> out;
  for (const auto& [id, info] : routers) {
    if (in_area(id, area)) out.push_back(id);
  }
  return out;
}

bool NetworkSpec::link_active(const Link& link) const {
  return link.up && router_up(link.a) && router_up(link.b);
}

std::optional<RouterId> NetworkSpec::find_router(std::string_view name) const {
  for (const auto& [id, info] : routers) {
    if (info.name == name) return id;
  }
  return std::nullopt;
}

RouterId NetworkSpec::router_by_name(std::string_view name) const {
  if (auto id = find_router(name)) return *id;
  throw std::invalid_argument(fmt::format("unknown router '{}'", name));
}

std::string NetworkSpec::router_name(RouterId r) const {
  const auto it = routers.find(r);
  if (it == routers.end() || it->second.name.empty()) return to_string(r);
  return it->second.name;
}

std::string NetworkSpec::prefix_label(const Prefix& p) const {
  const auto it = prefix_names.find(p);
  return it == prefix_names.end() ? p.to_string() : it->second;
}

std::string NetworkSpec::destination_label(const Destination& d) const {
  if (const auto* p = std::get_if<Prefix>(&d)) return prefix_label(*p);
  return router_name(std::get<RouterId>(d));
}

namespace {

std::vector<std::string_view> split_words(std::string_view line) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const auto start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) words.push_back(line.substr(start, i - start));
  }
  return words;
}

class ScenarioParser {
 public:
  NetworkSpec parse(std::string_view text) {
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto nl = text.find('\n', pos);
      std::string_view line =
          text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
      ++line_no;
      line_ = line_no;
      if (const auto hash = line.find('#'); hash != std::string_view::npos) {
        line = line.substr(0, hash);
      }
      const auto words = split_words(line);
      if (!words.empty()) directive(words);
      if (nl == std::string_view::npos) break;
      pos = nl + 1;
    }
    return std::move(spec_);
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ScenarioError(line_, what); }

  std::uint32_t number(std::string_view word, std::uint64_t max = 0xFFFFFFFFu) const {
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
    if (ec != std::errc{} || ptr != word.data() + word.size() || value > max) {
      fail(fmt::format("expected a number, got '{}'", word));
    }
    return static_cast<std::uint32_t>(value);
  }

  Cost cost(std::string_view word, Cost min = 1) const {
    const Cost c = number(word);
    if (c < min || c > kMaxLinkCost) fail(fmt::format("cost {} out of range", word));
    return c;
  }

  RouterId router(std::string_view name) const {
    if (auto id = spec_.find_router(name)) return *id;
    fail(fmt::format("unknown router '{}'", name));
  }

  Prefix prefix(std::string_view word) const {
    try {
      return Prefix::parse(word);
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }

  void expect(const std::vector<std::string_view>& w, std::size_t i, std::string_view kw) const {
    if (i >= w.size() || w[i] != kw) fail(fmt::format("expected '{}'", kw));
  }

  void name_suffix(const std::vector<std::string_view>& w, std::size_t i, const Prefix& p) {
    if (i == w.size()) return;
    if (w[i] != "name" || i + 2 != w.size()) fail("unexpected trailing tokens");
    spec_.prefix_names[p] = std::string(w[i + 1]);
  }

  void directive(const std::vector<std::string_view>& w) {
    const auto kw = w[0];
    if (kw == "family") {
      if (w.size() != 2 || (w[1] != "v4" && w[1] != "v6")) fail("usage: family v4|v6");
      spec_.family = w[1] == "v4" ? AddressFamily::kV4 : AddressFamily::kV6;
    } else if (kw == "router") {
      if (w.size() < 3 || w.size() > 4 || (w.size() == 4 && w[3] != "asbr")) {
        fail("usage: router <name> <router-id> [asbr]");
      }
      RouterId id;
      try {
        id = parse_router_id(w[2]);
      } catch (const std::invalid_argument& e) {
        fail(e.what());
      }
      if (id.value == 0) fail("router id must be nonzero");
      if (spec_.routers.count(id)) fail(fmt::format("duplicate router id {}", to_string(id)));
      if (spec_.find_router(w[1])) fail(fmt::format("duplicate router name '{}'", w[1]));
      spec_.routers[id] = RouterInfo{std::string(w[1]), w.size() == 4, true};
    } else if (kw == "area") {
      if (w.size() < 2) fail("usage: area <area-id> [member <router>...]");
      const AreaId area{number(w[1])};
      spec_.areas.insert(area);
      if (w.size() > 2) {
        expect(w, 2, "member");
        if (w.size() == 3) fail("'member' needs at least one router");
        for (std::size_t i = 3; i < w.size(); ++i) {
          spec_.explicit_members.insert({router(w[i]), area});
        }
      }
    } else if (kw == "link") {
      if (w.size() != 7 && w.size() != 8) {
        fail("usage: link <router> <router> area <area-id> cost <c> [<c-reverse>]");
      }
      expect(w, 3, "area");
      expect(w, 5, "cost");
      Link link;
      link.a = router(w[1]);
      link.b = router(w[2]);
      link.area = AreaId{number(w[4])};
      link.cost_ab = cost(w[6]);
      link.cost_ba = w.size() == 8 ? cost(w[7]) : link.cost_ab;
      spec_.links.push_back(link);
    } else if (kw == "prefix") {
      if (w.size() < 4) fail("usage: prefix <prefix> at <router> [cost <c>] [name <label>]");
      expect(w, 2, "at");
      PrefixAssignment pa{prefix(w[1]), router(w[3]), 0};
      std::size_t i = 4;
      if (i < w.size() && w[i] == "cost") {
        if (i + 1 >= w.size()) fail("missing stub cost");
        pa.stub_cost = cost(w[i + 1], 0);
        i += 2;
      }
      name_suffix(w, i, pa.prefix);
      spec_.prefixes.push_back(pa);
    } else if (kw == "external") {
      if (w.size() < 6) fail("usage: external <prefix> via <router> metric <m> [name <label>]");
      expect(w, 2, "via");
      expect(w, 4, "metric");
      ExternalPrefix ep{prefix(w[1]), router(w[3]), cost(w[5], 0)};
      name_suffix(w, 6, ep.prefix);
      spec_.externals.push_back(ep);
    } else {
      fail(fmt::format("unknown directive '{}'", kw));
    }
  }

  NetworkSpec spec_;
  int line_ = 0;
};

}  // namespace

NetworkSpec load_scenario(std::string_view text) {
  NetworkSpec spec = ScenarioParser{}.parse(text);
  validate(spec);
  return spec;
}

void validate(const NetworkSpec& spec) {
  auto fail = [](const std::string& what) { throw ValidationError(what); };
  if (spec.areas.empty()) fail("scenario declares no areas");
  if (spec.routers.empty()) fail("scenario declares no routers");

  std::set<std::tuple<RouterId, RouterId, AreaId>> seen_links;
  for (const auto& link : spec.links) {
    const auto label = fmt::format("{}-{}", spec.router_name(link.a), spec.router_name(link.b));
    if (!spec.routers.count(link.a) || !spec.routers.count(link.b)) {
      fail(fmt::format("link {} references an unknown router", label));
    }
    if (link.a == link.b) fail(fmt::format("link {} has identical endpoints", label));
    if (!spec.areas.count(link.area)) {
      fail(fmt::format("link {} references undeclared area {}", label, link.area.value));
    }
    if (link.cost_ab < 1 || link.cost_ab > kMaxLinkCost || link.cost_ba < 1 ||
        link.cost_ba > kMaxLinkCost) {
      fail(fmt::format("link {} has a cost outside 1..{}", label, kMaxLinkCost));
    }
    const auto key = std::make_tuple(std::min(link.a, link.b), std::max(link.a, link.b), link.area);
    if (!seen_links.insert(key).second) {
      fail(fmt::format("duplicate link {} in area {}", label, link.area.value));
    }
  }
  for (const auto& [router, area] : spec.explicit_members) {
    if (!spec.areas.count(area)) {
      fail(fmt::format("router {} is a member of undeclared area {}", spec.router_name(router),
                       area.value));
    }
  }
  for (const auto& [id, info] : spec.routers) {
    if (spec.areas_of(id).empty() && info.up) {
      fail(fmt::format("router {} belongs to zero areas", info.name));
    }
  }
  for (const auto area : spec.areas) {
    const auto members = spec.members(area);
    if (members.empty()) fail(fmt::format("area {} has no members", area.value));
    const auto spf = intra_area_spf(spec, area, members.front());
    for (const auto r : members) {
      if (!spf.dist.count(r)) {
        fail(fmt::format("area {} is disconnected ({} unreachable from {})", area.value,
                         spec.router_name(r), spec.router_name(members.front())));
      }
    }
  }
  std::set<Prefix> seen_prefixes;
  for (const auto& pa : spec.prefixes) {
    if (!spec.routers.count(pa.router)) fail("prefix assigned to unknown router");
    if (pa.prefix.family() != spec.family) {
      fail(fmt::format("prefix {} does not match address family {}", pa.prefix.to_string(),
                       to_string(spec.family)));
    }
    if (pa.stub_cost > kMaxLinkCost) fail("prefix stub cost out of range");
    if (!seen_prefixes.insert(pa.prefix).second) {
      fail(fmt::format("prefix {} assigned twice", pa.prefix.to_string()));
    }
  }
  for (const auto& ep : spec.externals) {
    const auto it = spec.routers.find(ep.asbr);
    if (it == spec.routers.end()) fail("external prefix injected by unknown router");
    if (!it->second.asbr) {
      fail(fmt::format("external prefix {} injected by non-ASBR {}", ep.prefix.to_string(),
                       it->second.name));
    }
    if (ep.prefix.family() != spec.family) {
      fail(fmt::format("external prefix {} does not match address family",
                       ep.prefix.to_string()));
    }
    if (ep.metric > kMaxLinkCost) fail("external metric out of range");
  }
}

std::string to_scenario_text(const NetworkSpec& spec) {
  std::ostringstream out;
  out << "family " << to_string(spec.family) << '\n';
  for (const auto& [id, info] : spec.routers) {
    out << "router " << info.name << ' ' << to_string(id) << (info.asbr ? " asbr" : "") << '\n';
  }
  for (const auto area : spec.areas) {
    out << "area " << area.value;
    bool first = true;
    for (const auto& [router, a] : spec.explicit_members) {
      if (a != area) continue;
      out << (first ? " member " : " ") << spec.router_name(router);
      first = false;
    }
    out << '\n';
  }
  for (const auto& l : spec.links) {
    out << "link " << spec.router_name(l.a) << ' ' << spec.router_name(l.b) << " area "
        << l.area.value << " cost " << l.cost_ab;
    if (l.cost_ba != l.cost_ab) out << ' ' << l.cost_ba;
    out << '\n';
  }
  auto name = [&](const Prefix& p) {
    const auto it = spec.prefix_names.find(p);
    return it == spec.prefix_names.end() ? std::string{} : " name " + it->second;
  };
  for (const auto& pa : spec.prefixes) {
    out << "prefix " << pa.prefix.to_string() << " at " << spec.router_name(pa.router);
    if (pa.stub_cost != 0) out << " cost " << pa.stub_cost;
    out << name(pa.prefix) << '\n';
  }
  for (const auto& ep : spec.externals) {
    out << "external " << ep.prefix.to_string() << " via " << spec.router_name(ep.asbr)
        << " metric " << ep.metric << name(ep.prefix) << '\n';
  }
  return out.str();
}

Cost SpfResult::cost_to(RouterId r) const {
  const auto it = dist.find(r);
  return it == dist.end() ? kInfinity : it->second;
}

std::optional<RouterId> SpfResult::hop_to(RouterId r) const {
  const auto it = first_hop.find(r);
  if (it == first_hop.end()) return std::nullopt;
  return it->second;
}

SpfResult shortest_paths(const Adjacency& adjacency, RouterId source, AreaId area) {
  SpfResult result{source, area, {}, {}};
  using Item = std::pair<Cost, RouterId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  std::map<RouterId, Cost> tentative{{source, 0}};
  std::map<RouterId, RouterId> hop;
  queue.push({0, source});
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (result.dist.count(u)) continue;
    result.dist[u] = d;
    if (u != source) result.first_hop[u] = hop.at(u);
    const auto it = adjacency.find(u);
    if (it == adjacency.end()) continue;
    for (const auto& [v, c] : it->second) {
      if (result.dist.count(v)) continue;
      const Cost nd = add_cost(d, c);
      if (nd >= kInfinity) continue;
      const RouterId via = u == source ? v : hop.at(u);
      const auto t = tentative.find(v);
      if (t == tentative.end() || nd < t->second) {
        tentative[v] = nd;
        hop[v] = via;
        queue.push({nd, v});
      } else if (nd == t->second && via < hop.at(v)) {
        // Costs are >= 1, so every equal-cost predecessor settles before v does.
        hop[v] = via;
      }
    }
  }
  return result;
}

Adjacency area_adjacency(const NetworkSpec& spec, AreaId area) {
  std::map<std::pair<RouterId, RouterId>, Cost> best;
  for (const auto& l : spec.links) {
    if (l.area != area || !spec.link_active(l)) continue;
    for (const auto& [from, to, c] : {std::tuple{l.a, l.b, l.cost_ab}, std::tuple{l.b, l.a, l.cost_ba}}) {
      auto [it, inserted] = best.try_emplace({from, to}, c);
      if (!inserted) it->second = std::min(it->second, c);
    }
  }
  Adjacency adj;
  for (const auto& [edge, c] : best) adj[edge.first].emplace_back(edge.second, c);
  return adj;
}

SpfResult intra_area_spf(const NetworkSpec& spec, AreaId area, RouterId source) {
  if (!spec.in_area(source, area)) {
    throw std::invalid_argument(
        fmt::format("router {} is not in area {}", spec.router_name(source), area.value));
  }
  return shortest_paths(area_adjacency(spec, area), source, area);
}

std::map<RouterId, Cost> flat_spf_oracle(const NetworkSpec& spec, RouterId source) {
  std::map<RouterId, Cost> dist;
  for (const auto& [id, info] : spec.routers) dist[id] = kInfinity;
  if (!spec.router_up(source)) return dist;
  dist[source] = 0;
  // Relax every directed edge until nothing improves; at most |V|-1 passes.
  for (std::size_t pass = 0; pass < spec.routers.size(); ++pass) {
    bool changed = false;
    for (const auto& l : spec.links) {
      if (!spec.link_active(l)) continue;
      const Cost via_a = add_cost(dist[l.a], l.cost_ab);
      if (via_a < dist[l.b]) dist[l.b] = via_a, changed = true;
      const Cost via_b = add_cost(dist[l.b], l.cost_ba);
      if (via_b < dist[l.a]) dist[l.a] = via_b, changed = true;
    }
    if (!changed) break;
  }
  return dist;
}

std::map<Destination, Cost> oracle_destination_costs(const NetworkSpec& spec, RouterId source) {
  const auto dist = flat_spf_oracle(spec, source);
  std::map<Destination, Cost> out;
  auto relax = [&](const Destination& d, Cost c) {
    auto [it, inserted] = out.try_emplace(d, c);
    if (!inserted) it->second = std::min(it->second, c);
  };
  std::set<Prefix> internal;
  for (const auto& pa : spec.prefixes) {
    internal.insert(pa.prefix);
    relax(pa.prefix, add_cost(dist.at(pa.router), pa.stub_cost));
  }
  for (const auto& [id, info] : spec.routers) {
    if (info.asbr) relax(id, dist.at(id));
  }
  for (const auto& ep : spec.externals) {
    if (internal.count(ep.prefix) || !spec.routers.at(ep.asbr).asbr) continue;
    relax(ep.prefix, add_cost(dist.at(ep.asbr), ep.metric));
  }
  return out;
}

}  // namespace area_overlay
