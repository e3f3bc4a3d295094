#include "area_overlay/dvr.hpp"

#include <algorithm>
#include <tuple>

#include <fmt/format.h>

namespace area_overlay {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kAllow: return "allow";
    case Verdict::kDenyInternal: return "deny(i)";
    case Verdict::kDenyTransit: return "deny(ii)";
  }
  return "?";
}

std::vector<DvrAdjacency> dvr_adjacencies(const NetworkSpec& spec) {
  std::map<std::tuple<RouterId, RouterId, AreaId>, DvrAdjacency> folded;
  for (const auto& l : spec.links) {
    if (!spec.link_active(l) || !spec.is_abr(l.a) || !spec.is_abr(l.b)) continue;
    const bool ordered = l.a < l.b;
    const RouterId a = ordered ? l.a : l.b;
    const RouterId b = ordered ? l.b : l.a;
    const Cost ab = ordered ? l.cost_ab : l.cost_ba;
    const Cost ba = ordered ? l.cost_ba : l.cost_ab;
    auto [it, inserted] = folded.try_emplace({a, b, l.area}, DvrAdjacency{a, b, l.area, ab, ba});
    if (!inserted) {
      it->second.weight_ab = std::min(it->second.weight_ab, ab);
      it->second.weight_ba = std::min(it->second.weight_ba, ba);
    }
  }
  std::vector<DvrAdjacency> out;
  for (auto& [key, adj] : folded) out.push_back(adj);
  return out;
}

DvrContext make_dvr_context(const NetworkSpec& spec) {
  DvrContext ctx{dvr_adjacencies(spec), {}};
  const auto all = area_lsdbs_from_spec(spec);
  for (const auto abr : spec.abrs()) {
    auto& mine = ctx.abr_lsdbs[abr];
    for (const auto area : spec.areas_of(abr)) mine.emplace(area, all.at(area));
  }
  return ctx;
}

std::vector<DistanceVector> originate_vectors(RouterId abr, const AreaLsdbs& area_lsdbs) {
  std::vector<DistanceVector> out;
  for (const auto& [area, lsdb] : area_lsdbs) {
    const auto spf = spf_over_lsdb(lsdb, abr);
    std::map<Destination, Cost> best;
    auto offer = [&](const Destination& d, Cost c) {
      if (c >= kInfinity) return;
      auto [it, inserted] = best.try_emplace(d, c);
      if (!inserted) it->second = std::min(it->second, c);
    };
    for (const auto& loc : derive_prefix_locations(lsdb)) {
      offer(loc.prefix, add_cost(spf.cost_to(loc.router), loc.stub_cost));
    }
    lsdb.for_each<RouterLsaBody>([&](const Lsa& lsa, const RouterLsaBody& body) {
      if (body.e_bit) offer(lsa.key.origin, spf.cost_to(lsa.key.origin));
    });
    for (const auto& [d, c] : best) out.push_back(DistanceVector{d, c, {area}});
  }
  return out;
}

std::set<Destination> internal_destinations(RouterId abr, const Lsdb& area_lsdb) {
  const auto spf = spf_over_lsdb(area_lsdb, abr);
  std::set<Destination> out;
  for (const auto& loc : derive_prefix_locations(area_lsdb)) {
    if (spf.cost_to(loc.router) < kInfinity) out.insert(loc.prefix);
  }
  area_lsdb.for_each<RouterLsaBody>([&](const Lsa& lsa, const RouterLsaBody& body) {
    if (body.e_bit && spf.cost_to(lsa.key.origin) < kInfinity) out.insert(lsa.key.origin);
  });
  return out;
}

namespace {

Verdict verdict_for(const DistanceVector& vector, AreaId into_area,
                    const std::set<Destination>& internal) {
  if (internal.count(vector.destination)) return Verdict::kDenyInternal;
  if (vector.trace.count(into_area)) return Verdict::kDenyTransit;
  return Verdict::kAllow;
}

}  // namespace

Verdict restriction_filter(RouterId abr, const DistanceVector& vector, AreaId into_area,
                           const AreaLsdbs& area_lsdbs) {
  const auto it = area_lsdbs.find(into_area);
  if (it == area_lsdbs.end()) {
    throw std::invalid_argument(
        fmt::format("{} is not attached to area {}", to_string(abr), into_area.value));
  }
  return verdict_for(vector, into_area, internal_destinations(abr, it->second));
}

namespace {

auto entry_rank(const DvrEntry& e, RouterId self) {
  return std::tuple{e.cost, e.next_hop != self, e.next_hop, e.area};
}

}  // namespace

DvrTable initial_dvr_tables(const DvrContext& ctx) {
  DvrTable tables;
  for (const auto& [abr, lsdbs] : ctx.abr_lsdbs) {
    auto& mine = tables[abr];
    for (const auto& v : originate_vectors(abr, lsdbs)) {
      DvrEntry entry{v.cost, abr, *v.trace.begin(), v.trace};
      auto [it, inserted] = mine.try_emplace(v.destination, entry);
      if (!inserted && entry_rank(entry, abr) < entry_rank(it->second, abr)) it->second = entry;
    }
  }
  return tables;
}

std::pair<DvrTable, std::vector<DvrMessage>> dvr_step(const DvrTable& tables,
                                                      const DvrContext& ctx, int round) {
  DvrTable next = tables;
  std::vector<DvrMessage> messages;
  std::map<std::pair<RouterId, AreaId>, std::set<Destination>> internal;
  auto internal_to = [&](RouterId abr, AreaId area) -> const std::set<Destination>& {
    auto it = internal.find({abr, area});
    if (it == internal.end()) {
      it = internal.emplace(std::pair{abr, area},
                            internal_destinations(abr, ctx.abr_lsdbs.at(abr).at(area))).first;
    }
    return it->second;
  };
  for (const auto& [sender, routes] : tables) {
    for (const auto& adj : ctx.adjacencies) {
      if (adj.a != sender && adj.b != sender) continue;
      const RouterId receiver = adj.a == sender ? adj.b : adj.a;
      const Cost toward_sender = adj.a == sender ? adj.weight_ba : adj.weight_ab;
      const auto& into = internal_to(sender, adj.area);
      for (const auto& [dest, entry] : routes) {
        DistanceVector v{dest, entry.cost, entry.trace};
        const Verdict verdict = verdict_for(v, adj.area, into);
        messages.push_back(DvrMessage{round, sender, receiver, adj.area, v, verdict});
        if (verdict != Verdict::kAllow) continue;
        DvrEntry candidate{add_cost(entry.cost, toward_sender), sender, adj.area, entry.trace};
        candidate.trace.insert(adj.area);
        if (candidate.cost >= kInfinity) continue;
        auto& theirs = next[receiver];
        auto [it, inserted] = theirs.try_emplace(dest, candidate);
        if (!inserted &&
            entry_rank(candidate, receiver) < entry_rank(it->second, receiver)) {
          it->second = candidate;
        }
      }
    }
  }
  return {std::move(next), std::move(messages)};
}

DvrResult dvr_converge(const NetworkSpec& spec) {
  const DvrContext ctx = make_dvr_context(spec);
  DvrResult result{initial_dvr_tables(ctx), {}, 0};
  // Entries only ever improve in (cost, next hop) order, so this terminates well
  // before the cap; the cap guards against a broken invariant.
  constexpr int kMaxRounds = 100000;
  while (result.rounds < kMaxRounds) {
    auto [next, messages] = dvr_step(result.tables, ctx, result.rounds + 1);
    ++result.rounds;
    result.log.insert(result.log.end(), messages.begin(), messages.end());
    if (next == result.tables) return result;
    result.tables = std::move(next);
  }
  throw std::logic_error("distance-vector rounds did not converge");
}

std::vector<LsaBody> dvr_injection_bodies(RouterId abr, const DvrRoutes& routes, AreaId area,
                                          const AreaLsdbs& area_lsdbs) {
  std::vector<LsaBody> out;
  const auto it = area_lsdbs.find(area);
  if (it == area_lsdbs.end()) {
    throw std::invalid_argument(fmt::format("{} is not attached to area {}", to_string(abr), area.value));
  }
  const auto internal = internal_destinations(abr, it->second);
  for (const auto& [dest, entry] : routes) {
    const DistanceVector v{dest, entry.cost, entry.trace};
    if (verdict_for(v, area, internal) != Verdict::kAllow) continue;
    if (const auto* p = std::get_if<Prefix>(&dest)) {
      out.emplace_back(SummaryPrefixBody{*p, entry.cost});
    } else {
      out.emplace_back(SummaryRouterBody{std::get<RouterId>(dest), entry.cost});
    }
  }
  return out;
}

}  // namespace area_overlay
