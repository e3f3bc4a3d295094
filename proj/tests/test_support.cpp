#include "test_support.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace area_overlay::testing {

std::string data_path(const std::string& name) {
  return std::string(AREA_OVERLAY_TEST_DATA) + "/" + name;
}

std::string read_data(const std::string& name) {
  std::ifstream in(data_path(name), std::ios::binary);
  if (!in) throw std::runtime_error("missing test data " + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const NetworkSpec& fixture() {
  static const NetworkSpec spec = load_scenario(read_data("fixture.scn"));
  return spec;
}

RouterId rid(std::uint32_t n) { return RouterId{n}; }

RouterId by_name(const NetworkSpec& spec, const std::string& name) {
  return spec.router_by_name(name);
}

Prefix prefix_named(const NetworkSpec& spec, const std::string& name) {
  for (const auto& [p, n] : spec.prefix_names) {
    if (n == name) return p;
  }
  throw std::runtime_error("no prefix named " + name);
}

std::optional<EventAction> random_event(std::mt19937_64& rng, const NetworkSpec& spec) {
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  auto cost = [&] { return static_cast<Cost>(1 + pick(10)); };
  std::vector<RouterId> ids;
  for (const auto& [id, info] : spec.routers) ids.push_back(id);
  const RouterId r = ids[pick(ids.size())];
  switch (pick(8)) {
    case 0:
    case 1: {
      if (spec.links.empty()) return std::nullopt;
      const Link& l = spec.links[pick(spec.links.size())];
      return LinkCostChange{{l.a, l.b, l.area}, cost(), cost()};
    }
    case 2: {
      if (spec.links.empty()) return std::nullopt;
      const Link& l = spec.links[pick(spec.links.size())];
      if (l.up) return LinkDown{{l.a, l.b, l.area}};
      return LinkUp{{l.a, l.b, l.area}};
    }
    case 3:
      if (spec.routers.at(r).up) return RouterDown{r};
      return RouterUp{r};
    case 4: {
      std::array<std::uint8_t, 16> bytes{10, static_cast<std::uint8_t>(100 + pick(50))};
      Prefix p(AddressFamily::kV4, bytes, 16);
      return PrefixAdd{{p, r, static_cast<Cost>(pick(4))}, std::nullopt};
    }
    case 5:
      if (spec.prefixes.empty()) return std::nullopt;
      return PrefixRemove{spec.prefixes[pick(spec.prefixes.size())].prefix};
    case 6:
      return AsbrChange{r, !spec.routers.at(r).asbr};
    default: {
      const RouterId via = ids[pick(ids.size())];
      const AreaId area{static_cast<std::uint32_t>(1 + pick(spec.areas.size()))};
      return AbrJoin{r, area, via, cost(), cost()};
    }
  }
}

namespace {

RouterId random_router(std::mt19937_64& rng) {
  return RouterId{static_cast<std::uint32_t>(1 + rng() % 0xFFFFFFFEu)};
}

Cost random_metric(std::mt19937_64& rng) {
  switch (rng() % 4) {
    case 0:
      return kMaxMetric;
    case 1:
      return 0;
    default:
      return static_cast<Cost>(rng() % (kMaxMetric + 1));
  }
}

Prefix random_prefix(std::mt19937_64& rng, AddressFamily family) {
  const std::uint8_t max = family == AddressFamily::kV4 ? 32 : 128;
  const auto length = static_cast<std::uint8_t>(rng() % (max + 1));
  std::array<std::uint8_t, 16> bytes{};
  for (std::size_t bit = 0; bit < length; ++bit) {
    if (rng() & 1) bytes[bit / 8] |= static_cast<std::uint8_t>(0x80u >> (bit % 8));
  }
  return Prefix(family, bytes, length);
}

}  // namespace

Lsa random_overlay_lsa(std::mt19937_64& rng, OspfVersion version) {
  const RouterId origin = random_router(rng);
  const auto instance = static_cast<std::uint32_t>(rng() % 0x1000000);
  const auto seq = static_cast<std::int32_t>(static_cast<std::uint32_t>(rng()));
  LsaBody body;
  switch (rng() % 3) {
    case 0: {
      std::set<std::uint32_t> ids;
      const std::size_t n = rng() % 9;
      while (ids.size() < n) ids.insert(random_router(rng).value);
      AbrLsaBody abr;
      for (auto id : ids) abr.neighbors.push_back({RouterId{id}, random_metric(rng)});
      body = abr;
      break;
    }
    case 1: {
      const auto family = version == OspfVersion::kV2 ? AddressFamily::kV4 : AddressFamily::kV6;
      body = PrefixLsaBody{random_prefix(rng, family), random_metric(rng)};
      break;
    }
    default:
      body = AsbrLsaBody{random_router(rng), random_metric(rng)};
  }
  return make_lsa(origin, instance, seq, std::nullopt, body);
}

std::string overlay_signature(const OverlayGraph& graph, const NetworkSpec& spec,
                              const std::vector<RouterId>& abrs) {
  auto member = [&](RouterId r) { return std::find(abrs.begin(), abrs.end(), r) != abrs.end(); };
  std::string out;
  for (const auto& [ends, arc] : graph.arcs) {
    if (!arc.usable || !member(ends.first) || !member(ends.second)) continue;
    out += fmt::format("{}>{}:{} ", spec.router_name(ends.first), spec.router_name(ends.second),
                       arc.cost);
  }
  for (const auto& [abr, labels] : graph.prefix_labels) {
    if (!member(abr)) continue;
    for (const auto& [p, c] : labels) out += fmt::format("{}/{}:{} ", spec.router_name(abr), p.to_string(), c);
  }
  for (const auto& [abr, labels] : graph.asbr_labels) {
    if (!member(abr)) continue;
    for (const auto& [a, c] : labels) {
      out += fmt::format("{}/{}:{} ", spec.router_name(abr), spec.router_name(a), c);
    }
  }
  return out;
}

bool connected(const NetworkSpec& spec) {
  auto first = std::find_if(spec.routers.begin(), spec.routers.end(),
                            [](const auto& entry) { return entry.second.up; });
  if (first == spec.routers.end()) return true;
  const auto dist = flat_spf_oracle(spec, first->first);
  for (const auto& [id, info] : spec.routers) {
    if (info.up && (!dist.count(id) || dist.at(id) >= kInfinity)) return false;
  }
  return true;
}

std::string equivalence_failure(const Engine& engine, const NetworkSpec& spec) {
  Engine cold(spec, engine.mode());
  cold.start();
  std::string why;
  for (const auto& [id, st] : engine.routers()) {
    if (!spec.router_up(id)) continue;
    if (st.routes != cold.route_table(id)) why += " routes@" + spec.router_name(id);
  }
  for (const AreaId area : spec.areas) {
    const Lsdb* ref = nullptr;
    for (const auto& [id, st] : engine.routers()) {
      if (!spec.router_up(id) || !st.areas.count(area)) continue;
      if (!ref) {
        ref = &st.areas.at(area);
      } else if (!(*ref == st.areas.at(area))) {
        why += fmt::format(" area{}-lsdb@{}", area.value, spec.router_name(id));
      }
    }
  }
  if (engine.mode() == ProtocolMode::kExtension && connected(spec)) {
    const auto abrs = spec.abrs();
    std::optional<std::vector<Lsa>> store;
    for (const RouterId abr : abrs) {
      if (overlay_signature(engine.overlay_graph(abr), spec, abrs) !=
          overlay_signature(cold.overlay_graph(abr), spec, abrs)) {
        why += " overlay@" + spec.router_name(abr);
      }
      auto held = overlay_lsas(engine.router(abr).as_lsdb);
      if (!store) {
        store = std::move(held);
      } else if (*store != held) {
        why += " overlay-store@" + spec.router_name(abr);
      }
    }
  }
  return why;
}

}  // namespace area_overlay::testing
