#include "area_overlay/lsdb.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

namespace area_overlay {

std::string_view to_string(LsaKind kind) {
  switch (kind) {
    case LsaKind::kRouter: return "router-lsa";
    case LsaKind::kIntraAreaPrefix: return "intra-area-prefix-lsa";
    case LsaKind::kSummaryPrefix: return "summary-prefix-lsa";
    case LsaKind::kSummaryRouter: return "summary-router-lsa";
    case LsaKind::kAsExternal: return "as-external-lsa";
    case LsaKind::kAbr: return "abr-lsa";
    case LsaKind::kPrefix: return "prefix-lsa";
    case LsaKind::kAsbr: return "asbr-lsa";
  }
  return "?";
}

std::string_view to_string(InstallResult r) {
  switch (r) {
    case InstallResult::kInstalledNew: return "new";
    case InstallResult::kRefreshed: return "refreshed";
    case InstallResult::kIgnoredStale: return "stale";
  }
  return "?";
}

Lsa make_lsa(RouterId origin, std::uint32_t instance, std::int32_t seq,
             std::optional<AreaId> area, LsaBody body) {
  const LsaKind kind = kind_of(body);
  if (is_as_scope(kind)) area.reset();
  return Lsa{LsaKey{kind, origin, instance}, seq, area, std::move(body)};
}

std::optional<Destination> destination_of(const LsaBody& body) {
  return std::visit(
      [](const auto& b) -> std::optional<Destination> {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, SummaryPrefixBody>) return b.destination;
        else if constexpr (std::is_same_v<T, SummaryRouterBody>) return b.destination;
        else if constexpr (std::is_same_v<T, AsExternalBody>) return b.prefix;
        else if constexpr (std::is_same_v<T, PrefixLsaBody>) return b.prefix;
        else if constexpr (std::is_same_v<T, AsbrLsaBody>) return b.asbr;
        else return std::nullopt;
      },
      body);
}

bool is_withdrawn(const LsaBody& body) {
  return std::visit(
      [](const auto& b) {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, RouterLsaBody>) return false;
        else if constexpr (std::is_same_v<T, IntraAreaPrefixBody>) return b.prefixes.empty();
        else if constexpr (std::is_same_v<T, AbrLsaBody>) return b.neighbors.empty();
        else return b.metric >= kInfinity;
      },
      body);
}

namespace {

LsaBody withdrawn_copy(const LsaBody& body) {
  LsaBody out = body;
  std::visit(
      [](auto& b) {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, RouterLsaBody>) {
          b.links.clear();
          b.stub_prefixes.clear();
        } else if constexpr (std::is_same_v<T, IntraAreaPrefixBody>) {
          b.prefixes.clear();
        } else if constexpr (std::is_same_v<T, AbrLsaBody>) {
          b.neighbors.clear();
        } else {
          b.metric = kInfinity;
        }
      },
      out);
  return out;
}

bool single_instance(LsaKind kind) {
  return kind == LsaKind::kRouter || kind == LsaKind::kIntraAreaPrefix || kind == LsaKind::kAbr;
}

}  // namespace

InstallResult Lsdb::install(const Lsa& lsa) {
  const bool lsa_as = is_as_scope(lsa.key.kind);
  if (lsa_as != as_scope() || (!lsa_as && lsa.area != area_)) {
    throw std::invalid_argument(fmt::format(
        "{} from {} does not belong in {} LSDB", to_string(lsa.key.kind),
        to_string(lsa.key.origin), area_ ? fmt::format("area {}", area_->value) : "AS"));
  }
  auto it = entries_.find(lsa.key);
  if (it == entries_.end()) {
    entries_.emplace(lsa.key, lsa);
    return InstallResult::kInstalledNew;
  }
  if (lsa.seq <= it->second.seq) return InstallResult::kIgnoredStale;
  it->second = lsa;
  return InstallResult::kRefreshed;
}

const Lsa* Lsdb::find(const LsaKey& key) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<Lsa> originate_standard_lsas(const NetworkSpec& spec, RouterId router, AreaId area) {
  if (!spec.in_area(router, area)) {
    throw std::invalid_argument(
        fmt::format("router {} is not in area {}", spec.router_name(router), area.value));
  }
  RouterLsaBody body;
  body.b_bit = spec.is_abr(router);
  body.e_bit = spec.routers.at(router).asbr;
  std::map<RouterId, Cost> links;
  for (const auto& l : spec.links) {
    if (l.area != area || !spec.link_active(l) || (l.a != router && l.b != router)) continue;
    const auto peer = l.peer(router);
    const auto c = l.cost_from(router);
    auto [it, inserted] = links.try_emplace(peer, c);
    if (!inserted) it->second = std::min(it->second, c);
  }
  for (const auto& [peer, c] : links) body.links.push_back({peer, c});

  std::vector<PrefixCost> prefixes;
  for (const auto& pa : spec.prefixes) {
    if (pa.router == router) prefixes.push_back({pa.prefix, pa.stub_cost});
  }
  std::sort(prefixes.begin(), prefixes.end(),
            [](const auto& x, const auto& y) { return x.prefix < y.prefix; });

  std::vector<Lsa> out;
  if (spec.family == AddressFamily::kV4) {
    body.stub_prefixes = std::move(prefixes);
    out.push_back(make_lsa(router, 0, 1, area, std::move(body)));
  } else {
    out.push_back(make_lsa(router, 0, 1, area, std::move(body)));
    if (!prefixes.empty()) {
      out.push_back(make_lsa(router, 0, 1, area, IntraAreaPrefixBody{router, std::move(prefixes)}));
    }
  }
  return out;
}

std::vector<Lsa> originate_external_lsas(const NetworkSpec& spec, RouterId router) {
  const auto it = spec.routers.find(router);
  if (it == spec.routers.end() || !it->second.asbr || !it->second.up) return {};
  std::vector<LsaBody> bodies;
  for (const auto& ep : spec.externals) {
    if (ep.asbr == router) bodies.emplace_back(AsExternalBody{ep.prefix, ep.metric});
  }
  return reconcile_originations({}, router, std::nullopt, bodies, {LsaKind::kAsExternal});
}

std::vector<PrefixLocation> derive_prefix_locations(const Lsdb& area_lsdb) {
  std::set<PrefixLocation> out;
  area_lsdb.for_each<RouterLsaBody>([&](const Lsa& lsa, const RouterLsaBody& body) {
    for (const auto& pc : body.stub_prefixes) out.insert({pc.prefix, lsa.key.origin, pc.cost});
  });
  area_lsdb.for_each<IntraAreaPrefixBody>([&](const Lsa&, const IntraAreaPrefixBody& body) {
    for (const auto& pc : body.prefixes) out.insert({pc.prefix, body.attaches_to, pc.cost});
  });
  return {out.begin(), out.end()};
}

SpfResult spf_over_lsdb(const Lsdb& area_lsdb, RouterId source) {
  std::map<RouterId, std::map<RouterId, Cost>> listed;
  area_lsdb.for_each<RouterLsaBody>([&](const Lsa& lsa, const RouterLsaBody& body) {
    auto& row = listed[lsa.key.origin];
    for (const auto& link : body.links) {
      auto [it, inserted] = row.try_emplace(link.neighbor, link.cost);
      if (!inserted) it->second = std::min(it->second, link.cost);
    }
  });
  Adjacency adj;
  for (const auto& [from, row] : listed) {
    for (const auto& [to, cost] : row) {
      const auto back = listed.find(to);
      if (back != listed.end() && back->second.count(from)) adj[from].emplace_back(to, cost);
    }
  }
  return shortest_paths(adj, source, area_lsdb.area().value_or(AreaId{}));
}

std::map<AreaId, Lsdb> area_lsdbs_from_spec(const NetworkSpec& spec) {
  std::map<AreaId, Lsdb> out;
  for (const auto area : spec.areas) {
    Lsdb db(area);
    for (const auto r : spec.members(area)) {
      for (const auto& lsa : originate_standard_lsas(spec, r, area)) db.install(lsa);
    }
    out.emplace(area, std::move(db));
  }
  return out;
}

Lsdb external_lsdb_from_spec(const NetworkSpec& spec) {
  Lsdb db;
  for (const auto& [id, info] : spec.routers) {
    for (const auto& lsa : originate_external_lsas(spec, id)) db.install(lsa);
  }
  return db;
}

std::vector<Lsa> reconcile_originations(const OriginatedSet& prev, RouterId origin,
                                        std::optional<AreaId> area,
                                        const std::vector<LsaBody>& desired,
                                        std::initializer_list<LsaKind> managed) {
  std::vector<Lsa> out;
  for (const LsaKind kind : managed) {
    std::vector<const Lsa*> previous;
    for (const auto& [key, lsa] : prev) {
      if (key.kind == kind && key.origin == origin) previous.push_back(&lsa);
    }
    std::vector<const LsaBody*> wanted;
    for (const auto& body : desired) {
      if (kind_of(body) == kind) wanted.push_back(&body);
    }

    auto emit = [&](std::uint32_t instance, const Lsa* before, const LsaBody& body) {
      if (before && before->body == body) return;
      out.push_back(make_lsa(origin, instance, before ? before->seq + 1 : 1, area, body));
    };

    if (single_instance(kind)) {
      if (wanted.size() > 1) {
        throw std::invalid_argument(fmt::format("more than one {} desired", to_string(kind)));
      }
      const Lsa* before = previous.empty() ? nullptr : previous.front();
      if (!wanted.empty()) {
        emit(0, before, *wanted.front());
      } else if (before && !is_withdrawn(before->body)) {
        emit(before->key.instance, before, withdrawn_copy(before->body));
      }
      continue;
    }

    std::map<Destination, const Lsa*> by_destination;
    std::set<std::uint32_t> used;
    for (const Lsa* lsa : previous) {
      by_destination.emplace(*destination_of(lsa->body), lsa);
      used.insert(lsa->key.instance);
    }
    std::map<Destination, const LsaBody*> wanted_by_destination;
    for (const LsaBody* body : wanted) {
      if (!wanted_by_destination.emplace(*destination_of(*body), body).second) {
        throw std::invalid_argument(fmt::format("duplicate destination in desired {} set",
                                                to_string(kind)));
      }
    }
    std::uint32_t next_free = 0;
    for (const auto& [dest, body] : wanted_by_destination) {
      if (const auto it = by_destination.find(dest); it != by_destination.end()) {
        emit(it->second->key.instance, it->second, *body);
        continue;
      }
      while (used.count(next_free)) ++next_free;
      used.insert(next_free);
      emit(next_free, nullptr, *body);
    }
    for (const auto& [dest, lsa] : by_destination) {
      if (!wanted_by_destination.count(dest) && !is_withdrawn(lsa->body)) {
        emit(lsa->key.instance, lsa, withdrawn_copy(lsa->body));
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Lsa& a, const Lsa& b) { return a.key < b.key; });
  return out;
}

}  // namespace area_overlay
