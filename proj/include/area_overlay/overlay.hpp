#pragma once

#include <map>
#include <set>
#include <utility>
#include <vector>

#include "area_overlay/lsdb.hpp"

namespace area_overlay {

using AreaLsdbs = std::map<AreaId, Lsdb>;

/// What one ABR can see of the overlay from its attached-area LSDBs.
struct LocalView {
  RouterId abr;
  std::map<RouterId, Cost> neighbor_costs;
  std::map<Prefix, Cost> prefix_costs;
  std::map<RouterId, Cost> asbr_costs;

  friend bool operator==(const LocalView&, const LocalView&) = default;
};

/// Neighbors are the other B-bit routers reachable inside a shared area; each cost is
/// the minimum intra-area distance over all shared areas. Throws std::invalid_argument
/// unless `area_lsdbs` holds at least two areas.
LocalView derive_local_view(RouterId abr, const AreaLsdbs& area_lsdbs);

/// Desired overlay bodies for a view: one ABR-LSA, one Prefix-LSA per prefix, one
/// ASBR-LSA per ASBR.
std::vector<LsaBody> overlay_bodies(const LocalView& view);

/// Overlay LSAs that must be flooded given what the ABR originated before.
std::vector<Lsa> originate_overlay_lsas(const LocalView& view, const OriginatedSet& prev);

struct OverlayArc {
  Cost cost = kInfinity;
  bool usable = false;  // reverse arc also advertised

  friend bool operator==(const OverlayArc&, const OverlayArc&) = default;
};

struct OverlayGraph {
  std::set<RouterId> nodes;
  std::map<std::pair<RouterId, RouterId>, OverlayArc> arcs;
  std::map<RouterId, std::map<Prefix, Cost>> prefix_labels;
  std::map<RouterId, std::map<RouterId, Cost>> asbr_labels;

  std::vector<std::pair<RouterId, Cost>> usable_arcs_from(RouterId node) const;

  friend bool operator==(const OverlayGraph&, const OverlayGraph&) = default;
};

/// Assembles the overlay from the ABR-, Prefix- and ASBR-LSAs of an AS-scope LSDB.
/// Withdrawn labels are dropped; arcs without a reverse advertisement stay unusable.
OverlayGraph build_overlay_graph(const Lsdb& as_lsdb);

struct OverlayRoute {
  Destination destination;
  Cost total_cost = kInfinity;
  RouterId first_overlay_hop;  // self when the best label is local
  RouterId exit_abr;           // ABR whose label terminates the route

  friend bool operator==(const OverlayRoute&, const OverlayRoute&) = default;
};

/// Dijkstra over usable arcs from `self`, then best (distance + label) per destination.
/// Equal-cost paths prefer the lowest-id predecessor; equal-cost exits prefer a local
/// label, then the lowest exit ABR id. Throws std::invalid_argument if self is not a node.
std::vector<OverlayRoute> overlay_spf(const OverlayGraph& graph, RouterId self);

/// Overlay distances from `self` to every reachable ABR.
std::map<RouterId, Cost> overlay_distances(const OverlayGraph& graph, RouterId self);

/// Summary bodies an ABR injects into one attached area. A destination is left out
/// when the ABR's own intra-area path inside that area is already as short as its
/// overlay route, which covers the area's own prefixes and ASBRs.
std::vector<LsaBody> injection_bodies(RouterId abr, const std::vector<OverlayRoute>& routes,
                                      const Lsdb& area_lsdb);

/// Summary LSAs (seq 1, fresh instance ids) for `injection_bodies`.
std::vector<Lsa> compute_injections(RouterId abr, const std::vector<OverlayRoute>& routes,
                                    AreaId area, const Lsdb& area_lsdb);

struct OverlayRequest {
  std::vector<Lsa> lsas;
  friend bool operator==(const OverlayRequest&, const OverlayRequest&) = default;
};

struct OverlayResponse {
  std::vector<Lsa> lsas;
  friend bool operator==(const OverlayResponse&, const OverlayResponse&) = default;
};

/// Overlay LSAs held in an AS-scope LSDB, in key order.
std::vector<Lsa> overlay_lsas(const Lsdb& as_lsdb);

/// Installs the newer ones; returns the keys that were installed (new or refreshed).
std::vector<LsaKey> merge_overlay_lsas(Lsdb& store, const std::vector<Lsa>& lsas);

struct SyncOutcome {
  OverlayRequest request;
  OverlayResponse response;
  Lsdb new_abr_store;
  Lsdb peer_store;
  std::vector<LsaKey> reflood_from_new;   // installed at the new ABR
  std::vector<LsaKey> reflood_from_peer;  // installed at the peer
};

/// Request/response handshake between a new ABR and one neighboring ABR. Each message
/// carries the sender's full overlay store as it was when the message was built.
SyncOutcome sync_exchange(const Lsdb& new_abr_store, const Lsdb& peer_store);

template <typename Key>
struct ViewDelta {
  std::vector<Key> added;
  std::vector<Key> removed;
  std::vector<Key> recosted;

  bool empty() const { return added.empty() && removed.empty() && recosted.empty(); }
  friend bool operator==(const ViewDelta&, const ViewDelta&) = default;
};

struct OverlayChangeReport {
  ViewDelta<RouterId> neighbors;
  ViewDelta<Prefix> prefixes;
  ViewDelta<RouterId> asbrs;

  bool empty() const { return neighbors.empty() && prefixes.empty() && asbrs.empty(); }
};

OverlayChangeReport detect_overlay_change(const LocalView& before, const LocalView& after);

}  // namespace area_overlay
