#include "area_overlay/routes.hpp"

#include <tuple>

namespace area_overlay {

std::string_view to_string(RouteCategory c) {
  switch (c) {
    case RouteCategory::kIntra: return "intra";
    case RouteCategory::kInter: return "inter";
    case RouteCategory::kExternal: return "external";
  }
  return "?";
}

namespace {

class RouteBuilder {
  static auto rank(const RouteEntry& e) {
    return std::tuple{e.category == RouteCategory::kExternal, e.cost, e.category,
                      e.egress_abr.value_or(RouterId{}), e.next_hop};
  }
  static auto rank(const AsbrReach& r) {
    return std::tuple{r.cost, r.egress_abr.has_value(), r.egress_abr.value_or(RouterId{}),
                      r.next_hop};
  }

 public:
  explicit RouteBuilder(RouterId self) { table_.router = self; }

  void offer_prefix(const RouteEntry& candidate) {
    if (candidate.cost >= kInfinity) return;
    auto [it, inserted] = table_.entries.try_emplace(candidate.destination, candidate);
    if (!inserted && rank(candidate) < rank(it->second)) it->second = candidate;
  }

  void offer_asbr(RouterId asbr, const AsbrReach& candidate) {
    if (candidate.cost >= kInfinity) return;
    auto [it, inserted] = table_.asbr_reach.try_emplace(asbr, candidate);
    if (!inserted && rank(candidate) < rank(it->second)) it->second = candidate;
  }

  /// Prefixes and ASBRs reachable inside one attached area.
  void offer_intra(const Lsdb& area_lsdb, const SpfResult& spf) {
    const RouterId self = table_.router;
    for (const auto& loc : derive_prefix_locations(area_lsdb)) {
      const Cost d = spf.cost_to(loc.router);
      if (d >= kInfinity) continue;
      const RouterId hop = loc.router == self ? self : *spf.hop_to(loc.router);
      offer_prefix(RouteEntry{loc.prefix, add_cost(d, loc.stub_cost), hop, std::nullopt,
                              RouteCategory::kIntra});
    }
    area_lsdb.for_each<RouterLsaBody>([&](const Lsa& lsa, const RouterLsaBody& body) {
      const RouterId origin = lsa.key.origin;
      const Cost d = spf.cost_to(origin);
      if (!body.e_bit || d >= kInfinity) return;
      offer_asbr(origin, AsbrReach{d, origin == self ? self : *spf.hop_to(origin), std::nullopt});
    });
  }

  RouteTable take() { return std::move(table_); }

 private:
  RouteTable table_;
};

/// Physical first hop toward another ABR: the attached area with the shortest path,
/// lowest area id on ties.
std::optional<std::pair<RouterId, Cost>> hop_toward(const std::map<AreaId, SpfResult>& spfs,
                                                    RouterId target) {
  std::optional<std::pair<RouterId, Cost>> best;
  for (const auto& [area, spf] : spfs) {
    const Cost d = spf.cost_to(target);
    if (d >= kInfinity || d == 0) continue;
    if (!best || d < best->second) best = std::pair{*spf.hop_to(target), d};
  }
  return best;
}

}  // namespace

RouteTable internal_router_routes(RouterId router, const Lsdb& area_lsdb, const Lsdb& as_lsdb) {
  RouteBuilder builder(router);
  const auto spf = spf_over_lsdb(area_lsdb, router);
  builder.offer_intra(area_lsdb, spf);
  auto via_abr = [&](RouterId abr) -> std::optional<std::pair<RouterId, Cost>> {
    if (abr == router) return std::nullopt;
    const Cost d = spf.cost_to(abr);
    if (d >= kInfinity) return std::nullopt;
    return std::pair{*spf.hop_to(abr), d};
  };
  area_lsdb.for_each<SummaryPrefixBody>([&](const Lsa& lsa, const SummaryPrefixBody& body) {
    if (body.metric >= kInfinity) return;
    const auto hop = via_abr(lsa.key.origin);
    if (!hop) return;
    builder.offer_prefix(RouteEntry{body.destination, add_cost(hop->second, body.metric),
                                    hop->first, lsa.key.origin, RouteCategory::kInter});
  });
  area_lsdb.for_each<SummaryRouterBody>([&](const Lsa& lsa, const SummaryRouterBody& body) {
    if (body.metric >= kInfinity) return;
    const auto hop = via_abr(lsa.key.origin);
    if (!hop) return;
    builder.offer_asbr(body.destination,
                       AsbrReach{add_cost(hop->second, body.metric), hop->first, lsa.key.origin});
  });
  return resolve_external(builder.take(), as_lsdb);
}

RouteTable resolve_external(RouteTable table, const Lsdb& as_lsdb) {
  std::map<Prefix, RouteEntry> externals;
  as_lsdb.for_each<AsExternalBody>([&](const Lsa& lsa, const AsExternalBody& body) {
    if (body.metric >= kInfinity) return;
    const auto existing = table.entries.find(body.prefix);
    if (existing != table.entries.end() && existing->second.category != RouteCategory::kExternal) {
      return;
    }
    const auto reach = table.asbr_reach.find(lsa.key.origin);
    if (reach == table.asbr_reach.end()) return;
    RouteEntry candidate{body.prefix, add_cost(reach->second.cost, body.metric),
                         reach->second.next_hop, reach->second.egress_abr,
                         RouteCategory::kExternal};
    if (candidate.cost >= kInfinity) return;
    auto [it, inserted] = externals.try_emplace(body.prefix, candidate);
    if (!inserted && std::tuple{candidate.cost, candidate.next_hop} <
                         std::tuple{it->second.cost, it->second.next_hop}) {
      it->second = candidate;
    }
  });
  for (auto& [prefix, entry] : externals) table.entries[prefix] = entry;
  return table;
}

RouteTable abr_routes(RouterId abr, const std::vector<OverlayRoute>& routes,
                      const AreaLsdbs& area_lsdbs, const Lsdb& as_lsdb) {
  RouteBuilder builder(abr);
  std::map<AreaId, SpfResult> spfs;
  for (const auto& [area, lsdb] : area_lsdbs) {
    spfs.emplace(area, spf_over_lsdb(lsdb, abr));
    builder.offer_intra(lsdb, spfs.at(area));
  }
  for (const auto& route : routes) {
    if (route.exit_abr == abr) continue;  // local label; already offered as intra
    const auto hop = hop_toward(spfs, route.first_overlay_hop);
    if (!hop) continue;
    if (const auto* p = std::get_if<Prefix>(&route.destination)) {
      builder.offer_prefix(
          RouteEntry{*p, route.total_cost, hop->first, route.exit_abr, RouteCategory::kInter});
    } else {
      builder.offer_asbr(std::get<RouterId>(route.destination),
                         AsbrReach{route.total_cost, hop->first, route.exit_abr});
    }
  }
  return resolve_external(builder.take(), as_lsdb);
}

RouteTable abr_routes_dvr(RouterId abr, const DvrRoutes& routes, const AreaLsdbs& area_lsdbs,
                          const Lsdb& as_lsdb) {
  RouteBuilder builder(abr);
  for (const auto& [area, lsdb] : area_lsdbs) builder.offer_intra(lsdb, spf_over_lsdb(lsdb, abr));
  for (const auto& [dest, entry] : routes) {
    if (entry.next_hop == abr) continue;
    if (const auto* p = std::get_if<Prefix>(&dest)) {
      builder.offer_prefix(
          RouteEntry{*p, entry.cost, entry.next_hop, entry.next_hop, RouteCategory::kInter});
    } else {
      builder.offer_asbr(std::get<RouterId>(dest),
                         AsbrReach{entry.cost, entry.next_hop, entry.next_hop});
    }
  }
  return resolve_external(builder.take(), as_lsdb);
}

}  // namespace area_overlay
