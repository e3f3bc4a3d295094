#pragma once

#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "area_overlay/dvr.hpp"
#include "area_overlay/overlay.hpp"

namespace area_overlay {

enum class RouteCategory { kIntra, kInter, kExternal };

std::string_view to_string(RouteCategory c);

struct RouteEntry {
  Prefix destination;
  Cost cost = kInfinity;
  RouterId next_hop;  // the router itself for locally attached destinations
  std::optional<RouterId> egress_abr;
  RouteCategory category = RouteCategory::kIntra;

  friend bool operator==(const RouteEntry&, const RouteEntry&) = default;
};

struct AsbrReach {
  Cost cost = kInfinity;
  RouterId next_hop;
  std::optional<RouterId> egress_abr;

  friend bool operator==(const AsbrReach&, const AsbrReach&) = default;
};

struct RouteTable {
  RouterId router;
  std::map<Prefix, RouteEntry> entries;
  std::map<RouterId, AsbrReach> asbr_reach;

  friend bool operator==(const RouteTable&, const RouteTable&) = default;
};

/// Routes of a router attached to a single area: intra-area SPF combined with the
/// summaries injected by the area's ABRs, then AS-external resolution. Intra and
/// inter candidates compete on cost (intra wins ties); external routes apply only to
/// prefixes with no internal route.
RouteTable internal_router_routes(RouterId router, const Lsdb& area_lsdb, const Lsdb& as_lsdb);

/// Adds external entries: cost = reach to the injecting ASBR + external metric.
RouteTable resolve_external(RouteTable table, const Lsdb& as_lsdb);

/// Routes of an ABR from its attached-area SPFs and its overlay shortest paths.
RouteTable abr_routes(RouterId abr, const std::vector<OverlayRoute>& routes,
                      const AreaLsdbs& area_lsdbs, const Lsdb& as_lsdb);

/// Routes of an ABR under the distance-vector baseline.
RouteTable abr_routes_dvr(RouterId abr, const DvrRoutes& routes, const AreaLsdbs& area_lsdbs,
                          const Lsdb& as_lsdb);

}  // namespace area_overlay
