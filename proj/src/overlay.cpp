#include "area_overlay/overlay.hpp"

#include <algorithm>
#include <queue>

#include <fmt/format.h>

namespace area_overlay {

namespace {

template <typename Key>
void keep_min(std::map<Key, Cost>& m, const Key& key, Cost c) {
  auto [it, inserted] = m.try_emplace(key, c);
  if (!inserted) it->second = std::min(it->second, c);
}

template <typename Key>
ViewDelta<Key> diff_maps(const std::map<Key, Cost>& before, const std::map<Key, Cost>& after) {
  ViewDelta<Key> d;
  for (const auto& [k, c] : after) {
    const auto it = before.find(k);
    if (it == before.end()) d.added.push_back(k);
    else if (it->second != c) d.recosted.push_back(k);
  }
  for (const auto& [k, c] : before) {
    if (!after.count(k)) d.removed.push_back(k);
  }
  return d;
}

struct OverlayTree {
  std::map<RouterId, Cost> dist;
  std::map<RouterId, RouterId> first_hop;
};

OverlayTree overlay_tree(const OverlayGraph& graph, RouterId self) {
  OverlayTree tree;
  std::map<RouterId, Cost> tentative{{self, 0}};
  std::map<RouterId, RouterId> parent;
  using Item = std::pair<Cost, RouterId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  queue.push({0, self});
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (tree.dist.count(u)) continue;
    tree.dist[u] = d;
    if (u != self) {
      const RouterId p = parent.at(u);
      tree.first_hop[u] = p == self ? u : tree.first_hop.at(p);
    }
    for (const auto& [v, c] : graph.usable_arcs_from(u)) {
      if (tree.dist.count(v)) continue;
      const Cost nd = add_cost(d, c);
      if (nd >= kInfinity) continue;
      const auto t = tentative.find(v);
      if (t == tentative.end() || nd < t->second) {
        tentative[v] = nd;
        parent[v] = u;
        queue.push({nd, v});
      } else if (nd == t->second && u < parent.at(v)) {
        parent[v] = u;
      }
    }
  }
  return tree;
}

}  // namespace

LocalView derive_local_view(RouterId abr, const AreaLsdbs& area_lsdbs) {
  if (area_lsdbs.size() < 2) {
    throw std::invalid_argument(
        fmt::format("{} is attached to {} area(s); not an ABR", to_string(abr), area_lsdbs.size()));
  }
  LocalView view{abr, {}, {}, {}};
  for (const auto& [area, lsdb] : area_lsdbs) {
    const auto spf = spf_over_lsdb(lsdb, abr);
    lsdb.for_each<RouterLsaBody>([&](const Lsa& lsa, const RouterLsaBody& body) {
      const RouterId origin = lsa.key.origin;
      const Cost d = spf.cost_to(origin);
      if (d >= kInfinity) return;
      if (body.b_bit && origin != abr) keep_min(view.neighbor_costs, origin, d);
      if (body.e_bit) keep_min(view.asbr_costs, origin, d);
    });
    for (const auto& loc : derive_prefix_locations(lsdb)) {
      const Cost c = add_cost(spf.cost_to(loc.router), loc.stub_cost);
      if (c < kInfinity) keep_min(view.prefix_costs, loc.prefix, c);
    }
  }
  return view;
}

std::vector<LsaBody> overlay_bodies(const LocalView& view) {
  std::vector<LsaBody> bodies;
  AbrLsaBody abr;
  for (const auto& [n, c] : view.neighbor_costs) abr.neighbors.push_back({n, c});
  bodies.emplace_back(std::move(abr));
  for (const auto& [p, c] : view.prefix_costs) bodies.emplace_back(PrefixLsaBody{p, c});
  for (const auto& [r, c] : view.asbr_costs) bodies.emplace_back(AsbrLsaBody{r, c});
  return bodies;
}

std::vector<Lsa> originate_overlay_lsas(const LocalView& view, const OriginatedSet& prev) {
  return reconcile_originations(prev, view.abr, std::nullopt, overlay_bodies(view),
                                {LsaKind::kAbr, LsaKind::kPrefix, LsaKind::kAsbr});
}

std::vector<std::pair<RouterId, Cost>> OverlayGraph::usable_arcs_from(RouterId node) const {
  std::vector<std::pair<RouterId, Cost>> out;
  for (auto it = arcs.lower_bound({node, RouterId{0}}); it != arcs.end() && it->first.first == node;
       ++it) {
    if (it->second.usable) out.emplace_back(it->first.second, it->second.cost);
  }
  return out;
}

OverlayGraph build_overlay_graph(const Lsdb& as_lsdb) {
  OverlayGraph g;
  as_lsdb.for_each<AbrLsaBody>([&](const Lsa& lsa, const AbrLsaBody& body) {
    g.nodes.insert(lsa.key.origin);
    for (const auto& n : body.neighbors) {
      if (n.neighbor == lsa.key.origin || n.cost >= kInfinity) continue;
      g.arcs[{lsa.key.origin, n.neighbor}] = OverlayArc{n.cost, false};
    }
  });
  for (auto& [ends, arc] : g.arcs) {
    arc.usable = g.arcs.count({ends.second, ends.first}) > 0;
  }
  as_lsdb.for_each<PrefixLsaBody>([&](const Lsa& lsa, const PrefixLsaBody& body) {
    if (body.metric < kInfinity) keep_min(g.prefix_labels[lsa.key.origin], body.prefix, body.metric);
  });
  as_lsdb.for_each<AsbrLsaBody>([&](const Lsa& lsa, const AsbrLsaBody& body) {
    if (body.metric < kInfinity) keep_min(g.asbr_labels[lsa.key.origin], body.asbr, body.metric);
  });
  return g;
}

std::map<RouterId, Cost> overlay_distances(const OverlayGraph& graph, RouterId self) {
  if (!graph.nodes.count(self)) {
    throw std::invalid_argument(fmt::format("{} is not an overlay node", to_string(self)));
  }
  return overlay_tree(graph, self).dist;
}

std::vector<OverlayRoute> overlay_spf(const OverlayGraph& graph, RouterId self) {
  if (!graph.nodes.count(self)) {
    throw std::invalid_argument(fmt::format("{} is not an overlay node", to_string(self)));
  }
  const OverlayTree tree = overlay_tree(graph, self);
  std::map<Destination, OverlayRoute> best;
  auto offer = [&](const Destination& dest, RouterId exit, Cost label) {
    const auto d = tree.dist.find(exit);
    if (d == tree.dist.end()) return;
    const Cost total = add_cost(d->second, label);
    if (total >= kInfinity) return;
    const RouterId hop = exit == self ? self : tree.first_hop.at(exit);
    OverlayRoute candidate{dest, total, hop, exit};
    auto [it, inserted] = best.try_emplace(dest, candidate);
    if (inserted) return;
    const OverlayRoute& cur = it->second;
    const auto rank = [&](const OverlayRoute& r) {
      return std::tuple{r.total_cost, r.exit_abr != self, r.exit_abr};
    };
    if (rank(candidate) < rank(cur)) it->second = candidate;
  };
  for (const auto& [node, labels] : graph.prefix_labels) {
    for (const auto& [p, c] : labels) offer(p, node, c);
  }
  for (const auto& [node, labels] : graph.asbr_labels) {
    for (const auto& [r, c] : labels) offer(r, node, c);
  }
  std::vector<OverlayRoute> out;
  out.reserve(best.size());
  for (auto& [dest, route] : best) out.push_back(std::move(route));
  return out;
}

std::vector<LsaBody> injection_bodies(RouterId abr, const std::vector<OverlayRoute>& routes,
                                      const Lsdb& area_lsdb) {
  const auto spf = spf_over_lsdb(area_lsdb, abr);
  std::map<Prefix, Cost> local_prefix;
  for (const auto& loc : derive_prefix_locations(area_lsdb)) {
    keep_min(local_prefix, loc.prefix, add_cost(spf.cost_to(loc.router), loc.stub_cost));
  }
  std::map<RouterId, Cost> local_asbr;
  area_lsdb.for_each<RouterLsaBody>([&](const Lsa& lsa, const RouterLsaBody& body) {
    if (body.e_bit) keep_min(local_asbr, lsa.key.origin, spf.cost_to(lsa.key.origin));
  });

  std::vector<LsaBody> out;
  for (const auto& route : routes) {
    if (route.total_cost >= kInfinity) continue;
    if (const auto* p = std::get_if<Prefix>(&route.destination)) {
      const auto it = local_prefix.find(*p);
      if (it != local_prefix.end() && it->second <= route.total_cost) continue;
      out.emplace_back(SummaryPrefixBody{*p, route.total_cost});
    } else {
      const RouterId asbr = std::get<RouterId>(route.destination);
      const auto it = local_asbr.find(asbr);
      if (it != local_asbr.end() && it->second <= route.total_cost) continue;
      out.emplace_back(SummaryRouterBody{asbr, route.total_cost});
    }
  }
  return out;
}

std::vector<Lsa> compute_injections(RouterId abr, const std::vector<OverlayRoute>& routes,
                                    AreaId area, const Lsdb& area_lsdb) {
  return reconcile_originations({}, abr, area, injection_bodies(abr, routes, area_lsdb),
                                {LsaKind::kSummaryPrefix, LsaKind::kSummaryRouter});
}

std::vector<Lsa> overlay_lsas(const Lsdb& as_lsdb) {
  std::vector<Lsa> out;
  for (const auto& [key, lsa] : as_lsdb.entries()) {
    if (is_overlay(key.kind)) out.push_back(lsa);
  }
  return out;
}

std::vector<LsaKey> merge_overlay_lsas(Lsdb& store, const std::vector<Lsa>& lsas) {
  std::vector<LsaKey> installed;
  for (const auto& lsa : lsas) {
    if (!is_overlay(lsa.key.kind)) continue;
    if (store.install(lsa) != InstallResult::kIgnoredStale) installed.push_back(lsa.key);
  }
  return installed;
}

SyncOutcome sync_exchange(const Lsdb& new_abr_store, const Lsdb& peer_store) {
  SyncOutcome out{OverlayRequest{overlay_lsas(new_abr_store)}, {}, new_abr_store, peer_store, {}, {}};
  out.response.lsas = overlay_lsas(peer_store);
  out.reflood_from_peer = merge_overlay_lsas(out.peer_store, out.request.lsas);
  out.reflood_from_new = merge_overlay_lsas(out.new_abr_store, out.response.lsas);
  return out;
}

OverlayChangeReport detect_overlay_change(const LocalView& before, const LocalView& after) {
  return OverlayChangeReport{diff_maps(before.neighbor_costs, after.neighbor_costs),
                             diff_maps(before.prefix_costs, after.prefix_costs),
                             diff_maps(before.asbr_costs, after.asbr_costs)};
}

}  // namespace area_overlay
