#pragma once

#include <map>
#include <set>
#include <string_view>
#include <utility>
#include <vector>

#include "area_overlay/overlay.hpp"

namespace area_overlay {

/// (destination, cost) advertisement exchanged between neighboring ABRs. The trace of
/// areas crossed by the underlying route is simulator bookkeeping, not wire content.
struct DistanceVector {
  Destination destination;
  Cost cost = kInfinity;
  std::set<AreaId> trace;

  friend bool operator==(const DistanceVector&, const DistanceVector&) = default;
};

/// Direct link between two ABRs inside one area; parallel links fold to the minimum.
struct DvrAdjacency {
  RouterId a;
  RouterId b;
  AreaId area;
  Cost weight_ab = kInfinity;
  Cost weight_ba = kInfinity;
};

struct DvrEntry {
  Cost cost = kInfinity;
  RouterId next_hop;  // self for self-originated entries
  AreaId area;        // area the entry was learned in (or originated from)
  std::set<AreaId> trace;

  friend bool operator==(const DvrEntry&, const DvrEntry&) = default;
};

using DvrRoutes = std::map<Destination, DvrEntry>;
using DvrTable = std::map<RouterId, DvrRoutes>;

enum class Verdict { kAllow, kDenyInternal, kDenyTransit };

std::string_view to_string(Verdict v);

struct DvrMessage {
  int round = 0;
  RouterId from;
  RouterId to;
  AreaId area;
  DistanceVector vector;
  Verdict verdict = Verdict::kAllow;
};

/// Everything the rounds need that does not change while converging.
struct DvrContext {
  std::vector<DvrAdjacency> adjacencies;
  std::map<RouterId, AreaLsdbs> abr_lsdbs;  // attached-area LSDBs per ABR
};

std::vector<DvrAdjacency> dvr_adjacencies(const NetworkSpec& spec);
DvrContext make_dvr_context(const NetworkSpec& spec);

/// One vector per prefix/ASBR per attached area, costed by intra-area SPF.
std::vector<DistanceVector> originate_vectors(RouterId abr, const AreaLsdbs& area_lsdbs);

/// Prefixes and ASBRs reachable from `abr` inside one area.
std::set<Destination> internal_destinations(RouterId abr, const Lsdb& area_lsdb);

/// (i) no routes into an area for destinations internal to it; (ii) no routes whose
/// underlying path already crosses that area.
Verdict restriction_filter(RouterId abr, const DistanceVector& vector, AreaId into_area,
                           const AreaLsdbs& area_lsdbs);

/// Self-originated best entries for every ABR.
DvrTable initial_dvr_tables(const DvrContext& ctx);

/// One synchronous round: every ABR offers its best vectors over every adjacency.
std::pair<DvrTable, std::vector<DvrMessage>> dvr_step(const DvrTable& tables,
                                                      const DvrContext& ctx, int round = 1);

struct DvrResult {
  DvrTable tables;
  std::vector<DvrMessage> log;
  int rounds = 0;
};

DvrResult dvr_converge(const NetworkSpec& spec);

/// Summary bodies an ABR injects into one area from its converged DVR entries.
std::vector<LsaBody> dvr_injection_bodies(RouterId abr, const DvrRoutes& routes, AreaId area,
                                          const AreaLsdbs& area_lsdbs);

}  // namespace area_overlay
