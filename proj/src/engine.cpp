#include "area_overlay/engine.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

namespace area_overlay {

std::string_view to_string(ProtocolMode mode) {
  return mode == ProtocolMode::kExtension ? "extension" : "dvr";
}

std::string Timeline::text() const {
  std::string out;
  for (const auto& line : lines) {
    out += line;
    out += '\n';
  }
  return out;
}

namespace {

constexpr std::initializer_list<LsaKind> kStandardKinds{LsaKind::kRouter,
                                                        LsaKind::kIntraAreaPrefix};
constexpr std::initializer_list<LsaKind> kSummaryKinds{LsaKind::kSummaryPrefix,
                                                       LsaKind::kSummaryRouter};
constexpr std::initializer_list<LsaKind> kOverlayKinds{LsaKind::kAbr, LsaKind::kPrefix,
                                                       LsaKind::kAsbr};

std::vector<LsaBody> bodies_of(const std::vector<Lsa>& lsas) {
  std::vector<LsaBody> out;
  for (const auto& lsa : lsas) out.push_back(lsa.body);
  return out;
}

}  // namespace

Engine::Engine(NetworkSpec spec, ProtocolMode mode) : spec_(std::move(spec)), mode_(mode) {
  validate(spec_);
  for (const auto& [id, info] : spec_.routers) {
    RouterState st;
    st.id = id;
    st.routes.router = id;
    routers_.emplace(id, std::move(st));
  }
}

const RouterState& Engine::router(RouterId id) const {
  const auto it = routers_.find(id);
  if (it == routers_.end()) throw std::invalid_argument("unknown router " + to_string(id));
  return it->second;
}

OverlayGraph Engine::overlay_graph(RouterId id) const {
  return build_overlay_graph(router(id).as_lsdb);
}

void Engine::log(const std::string& line) {
  timeline_.lines.push_back(fmt::format("t={} {}", now_, line));
}

std::string describe_lsa(const Lsa& lsa, const NetworkSpec& spec) {
  return fmt::format("{} {}#{} seq {}{}", to_string(lsa.key.kind), spec.router_name(lsa.key.origin),
                     lsa.key.instance, lsa.seq,
                     lsa.area ? fmt::format(" area {}", lsa.area->value) : std::string{});
}

void Engine::send(Message message) {
  message.serial = serial_++;
  QueueKey key{message.deliver_at, message.from, message.to,
               static_cast<int>(message.payload.index()), LsaKey{}, message.serial};
  if (const auto* flood = std::get_if<FloodPayload>(&message.payload)) key.key = flood->lsa.key;
  queue_.emplace(key, std::move(message));
}

std::size_t Engine::forward(RouterId router, const Lsa& lsa,
                            std::optional<std::size_t> except_link) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < spec_.links.size(); ++i) {
    const Link& l = spec_.links[i];
    if (!spec_.link_active(l) || (l.a != router && l.b != router)) continue;
    if (lsa.area && l.area != *lsa.area) continue;
    if (except_link && *except_link == i) continue;
    send(Message{now_ + 1, router, l.peer(router), i, FloodPayload{lsa}, 0});
    ++count;
    ++stats_.forwards;
  }
  return count;
}

void Engine::originate(RouterId router, const Lsa& lsa) {
  auto& st = state(router);
  st.originated[lsa.area][lsa.key] = lsa;
  stats_.originations.push_back(Origination{now_, router, lsa});
  log(fmt::format("originate {}", describe_lsa(lsa, spec_)));
  Lsdb& db = lsa.area ? st.areas.at(*lsa.area) : st.as_lsdb;
  db.install(lsa);
  forward(router, lsa, std::nullopt);
}

void Engine::reconcile_and_flood(RouterId router, std::optional<AreaId> scope,
                                 const std::vector<LsaBody>& desired,
                                 std::initializer_list<LsaKind> managed) {
  const auto lsas =
      reconcile_originations(state(router).originated[scope], router, scope, desired, managed);
  for (const auto& lsa : lsas) originate(router, lsa);
}

void Engine::originate_standard(RouterId router) {
  auto& st = state(router);
  for (const auto& [area, db] : st.areas) {
    reconcile_and_flood(router, area, bodies_of(originate_standard_lsas(spec_, router, area)),
                        kStandardKinds);
  }
  reconcile_and_flood(router, std::nullopt, bodies_of(originate_external_lsas(spec_, router)),
                      {LsaKind::kAsExternal});
}

void Engine::start() {
  now_ = 0;
  cold_start_ = true;
  for (const auto& [id, info] : spec_.routers) {
    if (!info.up) continue;
    for (const auto area : spec_.areas_of(id)) state(id).areas.emplace(area, Lsdb(area));
  }
  for (const auto& [id, info] : spec_.routers) {
    if (!info.up) continue;
    originate_standard(id);
    dirty_.insert(id);
  }
  if (mode_ == ProtocolMode::kHierarchicalDvr) dvr_ = dvr_converge(spec_);
  run_to_convergence();
  cold_start_ = false;
}

void Engine::run_to_convergence(Tick max_ticks) {
  const Tick start = now_;
  while (true) {
    while (!dirty_.empty()) {
      const auto batch = std::exchange(dirty_, {});
      for (const auto r : batch) recompute(r);
    }
    if (queue_.empty()) break;
    now_ = queue_.begin()->first.deliver_at;
    if (now_ - start > max_ticks) {
      throw std::runtime_error(fmt::format("no convergence within {} ticks", max_ticks));
    }
    while (!queue_.empty() && queue_.begin()->first.deliver_at == now_) {
      auto node = queue_.extract(queue_.begin());
      deliver(node.mapped());
    }
  }
  converged_at_ = now_;
  for (auto& [id, st] : routers_) st.joining = false;
  log("converged");
}

void Engine::deliver(const Message& message) {
  if (!spec_.router_up(message.to)) return;
  std::visit(
      [&](const auto& payload) {
        using T = std::decay_t<decltype(payload)>;
        if constexpr (std::is_same_v<T, FloodPayload>) {
          deliver_flood(message, payload.lsa);
        } else if constexpr (std::is_same_v<T, RequestPayload>) {
          auto& st = state(message.to);
          log(fmt::format("request {}->{} ({} LSAs)", spec_.router_name(message.from),
                          spec_.router_name(message.to), payload.request.lsas.size()));
          send(Message{now_ + 1, message.to, message.from, std::nullopt,
                       ResponsePayload{OverlayResponse{overlay_lsas(st.as_lsdb)}}, 0});
          ++stats_.responses;
          st.synced_peers.insert(message.from);
          install_and_reflood(message.to, payload.request.lsas, "request");
        } else {
          log(fmt::format("response {}->{} ({} LSAs)", spec_.router_name(message.from),
                          spec_.router_name(message.to), payload.response.lsas.size()));
          install_and_reflood(message.to, payload.response.lsas, "response");
        }
      },
      message.payload);
}

void Engine::deliver_flood(const Message& message, const Lsa& lsa) {
  ++stats_.deliveries;
  auto& st = state(message.to);
  Lsdb* db = &st.as_lsdb;
  if (lsa.area) {
    const auto it = st.areas.find(*lsa.area);
    if (it == st.areas.end()) return;
    db = &it->second;
  }
  const InstallResult result = db->install(lsa);
  log(fmt::format("deliver {}->{} {}: {}", spec_.router_name(message.from),
                  spec_.router_name(message.to), describe_lsa(lsa, spec_), to_string(result)));
  if (result == InstallResult::kIgnoredStale) {
    ++stats_.stale_drops;
    return;
  }
  forward(message.to, lsa, message.link);
  // Internal routers carry overlay LSAs without interpreting them.
  if (!is_overlay(lsa.key.kind) || spec_.is_abr(message.to)) dirty_.insert(message.to);
}

std::size_t Engine::receive(RouterId router, const Lsa& lsa) {
  auto& st = state(router);
  Lsdb* db = &st.as_lsdb;
  if (lsa.area) {
    const auto it = st.areas.find(*lsa.area);
    if (it == st.areas.end()) return 0;
    db = &it->second;
  }
  if (db->install(lsa) == InstallResult::kIgnoredStale) return 0;
  if (!is_overlay(lsa.key.kind) || spec_.is_abr(router)) dirty_.insert(router);
  return forward(router, lsa, std::nullopt);
}

void Engine::install_and_reflood(RouterId router, const std::vector<Lsa>& lsas,
                                 std::string_view via) {
  auto& st = state(router);
  const auto keys = merge_overlay_lsas(st.as_lsdb, lsas);
  if (keys.empty()) return;
  log(fmt::format("sync-install {} {} LSAs from {}", spec_.router_name(router), keys.size(), via));
  for (const auto& key : keys) forward(router, *st.as_lsdb.find(key), std::nullopt);
  if (spec_.is_abr(router)) dirty_.insert(router);
}

void Engine::pull_database(RouterId router, RouterId peer, AreaId area, bool with_overlay) {
  auto& st = state(router);
  const auto& ps = state(peer);
  std::vector<Lsa> installed;
  if (const auto it = ps.areas.find(area); it != ps.areas.end()) {
    for (const auto& [key, lsa] : it->second.entries()) {
      if (st.areas.at(area).install(lsa) != InstallResult::kIgnoredStale) installed.push_back(lsa);
    }
  }
  for (const auto& [key, lsa] : ps.as_lsdb.entries()) {
    if (is_overlay(key.kind) && !with_overlay) continue;
    if (st.as_lsdb.install(lsa) != InstallResult::kIgnoredStale) installed.push_back(lsa);
  }
  log(fmt::format("dbsync {}<-{} area {}: {} LSAs", spec_.router_name(router),
                  spec_.router_name(peer), area.value, installed.size()));
  std::optional<std::size_t> sync_link;
  for (std::size_t i = 0; i < spec_.links.size(); ++i) {
    const Link& l = spec_.links[i];
    if (l.area == area && l.connects(router, peer) && spec_.link_active(l)) sync_link = i;
  }
  for (const auto& lsa : installed) forward(router, lsa, sync_link);
  dirty_.insert(router);
}

void Engine::restore_own(RouterId router) {
  auto& st = state(router);
  for (const auto& [scope, set] : st.originated) {
    Lsdb* db = &st.as_lsdb;
    if (scope) {
      const auto it = st.areas.find(*scope);
      if (it == st.areas.end()) continue;
      db = &it->second;
    }
    for (const auto& [key, lsa] : set) db->install(lsa);
  }
}

void Engine::sync_attachment(RouterId router) {
  auto& st = state(router);
  const auto areas = spec_.areas_of(router);
  for (auto it = st.areas.begin(); it != st.areas.end();) {
    it = areas.count(it->first) ? std::next(it) : st.areas.erase(it);
  }
  for (const auto area : areas) st.areas.try_emplace(area, Lsdb(area));
}

void Engine::begin_event(const Event& event) {
  if (!converged()) run_to_convergence();
  now_ = std::max(now_, event.at);
  log("event " + describe(event.action, spec_));

  std::map<RouterId, bool> was_up;
  for (const auto& [id, info] : spec_.routers) was_up[id] = info.up;
  std::vector<bool> was_active;
  for (const auto& l : spec_.links) was_active.push_back(spec_.link_active(l));

  const auto affected = mutate_spec(spec_, event.action);

  for (auto& [id, st] : routers_) {
    if (spec_.router_up(id)) {
      sync_attachment(id);
      continue;
    }
    if (!was_up[id]) continue;
    st.areas.clear();
    st.as_lsdb.clear();
    st.view.reset();
    st.synced_peers.clear();
    st.routes = RouteTable{id, {}, {}};
    dirty_.erase(id);
  }

  const auto* join = std::get_if<AbrJoin>(&event.action);
  std::set<RouterId> pulled;
  for (std::size_t i = 0; i < spec_.links.size(); ++i) {
    const Link& l = spec_.links[i];
    if (!spec_.link_active(l) || (i < was_active.size() && was_active[i])) continue;
    const bool a_new = !was_up[l.a];
    const bool b_new = !was_up[l.b];
    // A restarted or joining router pulls its new neighbors' databases and gets the
    // overlay through the request/response exchange. A link coming back between two
    // running routers exchanges everything both ways.
    const bool established = !a_new && !b_new && !join;
    if (a_new || established || (join && join->router == l.a)) {
      pull_database(l.a, l.b, l.area, established);
      pulled.insert(l.a);
    }
    if (b_new || established || (join && join->router == l.b)) {
      pull_database(l.b, l.a, l.area, established);
      pulled.insert(l.b);
    }
  }
  for (const auto r : pulled) restore_own(r);

  for (const auto r : affected) {
    if (!spec_.router_up(r)) continue;
    originate_standard(r);
    dirty_.insert(r);
  }
  if (mode_ == ProtocolMode::kHierarchicalDvr) {
    dvr_ = dvr_converge(spec_);
    for (const auto& [id, info] : spec_.routers) {
      if (info.up) dirty_.insert(id);
    }
  }
}

void Engine::apply(const Event& event) {
  begin_event(event);
  run_to_convergence();
}

void Engine::recompute(RouterId router) {
  if (!spec_.router_up(router)) return;
  auto& st = state(router);
  RouteTable before = st.routes;
  if (mode_ == ProtocolMode::kExtension) {
    recompute_extension(router, st);
  } else {
    recompute_dvr(router, st);
  }
  if (st.routes != before) {
    log(fmt::format("routes {} updated ({} prefixes)", spec_.router_name(router),
                    st.routes.entries.size()));
  }
}

void Engine::withdraw_overlay(RouterId router, RouterState& st) {
  reconcile_and_flood(router, std::nullopt, {}, kOverlayKinds);
  st.view.reset();
  st.synced_peers.clear();
}

void Engine::recompute_extension(RouterId router, RouterState& st) {
  if (st.areas.size() < 2) {
    withdraw_overlay(router, st);
    for (const auto& [area, db] : st.areas) reconcile_and_flood(router, area, {}, kSummaryKinds);
    st.routes = st.areas.size() == 1
                    ? internal_router_routes(router, st.areas.begin()->second, st.as_lsdb)
                    : RouteTable{router, {}, {}};
    return;
  }

  LocalView view = derive_local_view(router, st.areas);
  if (!st.view || !detect_overlay_change(*st.view, view).empty()) {
    reconcile_and_flood(router, std::nullopt, overlay_bodies(view), kOverlayKinds);
  }
  // A router that has just become an ABR asks each neighboring ABR it detects for its
  // overlay store; the neighbors learn about it through flooding.
  if (!st.view && !cold_start_) st.joining = true;
  for (const auto& [peer, cost] : view.neighbor_costs) {
    if (!st.joining || !st.synced_peers.insert(peer).second) continue;
    auto lsas = overlay_lsas(st.as_lsdb);
    log(fmt::format("request-send {}->{} ({} LSAs)", spec_.router_name(router),
                    spec_.router_name(peer), lsas.size()));
    send(Message{now_ + 1, router, peer, std::nullopt,
                 RequestPayload{OverlayRequest{std::move(lsas)}}, 0});
    ++stats_.requests;
  }
  if (st.view) {
    for (const auto& [peer, cost] : st.view->neighbor_costs) {
      if (!view.neighbor_costs.count(peer)) st.synced_peers.erase(peer);
    }
  }
  st.view = std::move(view);

  const OverlayGraph graph = build_overlay_graph(st.as_lsdb);
  const std::vector<OverlayRoute> routes =
      graph.nodes.count(router) ? overlay_spf(graph, router) : std::vector<OverlayRoute>{};
  for (const auto& [area, db] : st.areas) {
    reconcile_and_flood(router, area, injection_bodies(router, routes, db), kSummaryKinds);
  }
  st.routes = abr_routes(router, routes, st.areas, st.as_lsdb);
}

void Engine::recompute_dvr(RouterId router, RouterState& st) {
  const DvrRoutes* routes = nullptr;
  if (dvr_) {
    const auto it = dvr_->tables.find(router);
    if (it != dvr_->tables.end()) routes = &it->second;
  }
  if (st.areas.size() < 2 || !routes) {
    for (const auto& [area, db] : st.areas) reconcile_and_flood(router, area, {}, kSummaryKinds);
    st.routes = st.areas.size() == 1
                    ? internal_router_routes(router, st.areas.begin()->second, st.as_lsdb)
                    : RouteTable{router, {}, {}};
    return;
  }
  for (const auto& [area, db] : st.areas) {
    reconcile_and_flood(router, area, dvr_injection_bodies(router, *routes, area, st.areas),
                        kSummaryKinds);
  }
  st.routes = abr_routes_dvr(router, *routes, st.areas, st.as_lsdb);
}

Engine run_scenario(const NetworkSpec& spec, ProtocolMode mode, const std::vector<Event>& events) {
  Engine engine(spec, mode);
  engine.start();
  for (const auto& event : events) engine.apply(event);
  return engine;
}

}  // namespace area_overlay
