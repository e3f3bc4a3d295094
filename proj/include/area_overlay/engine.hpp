#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "area_overlay/dvr.hpp"
#include "area_overlay/events.hpp"
#include "area_overlay/overlay.hpp"
#include "area_overlay/routes.hpp"

namespace area_overlay {

enum class ProtocolMode { kExtension, kHierarchicalDvr };

std::string_view to_string(ProtocolMode mode);

/// One-line description such as "abr-lsa R3#0 seq 2".
std::string describe_lsa(const Lsa& lsa, const NetworkSpec& spec);

struct RouterState {
  RouterId id;
  AreaLsdbs areas;  // one LSDB per attached area
  Lsdb as_lsdb;
  // Keyed by flooding scope (nullopt = AS). Survives restarts so sequence numbers keep growing.
  std::map<std::optional<AreaId>, OriginatedSet> originated;
  std::optional<LocalView> view;  // last overlay view, while an ABR in extension mode
  std::set<RouterId> synced_peers;
  bool joining = false;  // became an ABR since the last convergence
  RouteTable routes;
};

struct FloodPayload { Lsa lsa; };
struct RequestPayload { OverlayRequest request; };
struct ResponsePayload { OverlayResponse response; };
using Payload = std::variant<FloodPayload, RequestPayload, ResponsePayload>;

struct Message {
  Tick deliver_at = 0;
  RouterId from;
  RouterId to;
  std::optional<std::size_t> link;  // index into NetworkSpec::links for floods
  Payload payload;
  std::uint64_t serial = 0;
};

struct Origination {
  Tick at = 0;
  RouterId router;
  Lsa lsa;
};

struct EngineStats {
  std::uint64_t deliveries = 0;
  std::uint64_t forwards = 0;
  std::uint64_t stale_drops = 0;
  std::uint64_t requests = 0;
  std::uint64_t responses = 0;
  std::vector<Origination> originations;
};

/// Human-readable event log, one line per entry.
struct Timeline {
  std::vector<std::string> lines;

  std::string text() const;
};

/// Discrete-time simulation of the whole network. Every link has a delay of one tick.
/// Messages due in the same tick are delivered in (sender, receiver, kind, LSA key)
/// order, then every router whose inputs changed recomputes, in router id order.
class Engine {
 public:
  Engine(NetworkSpec spec, ProtocolMode mode);

  /// Originates every router's LSAs at tick 0 and runs to convergence.
  void start();

  /// Applies an event at max(event.at, now) without running the network.
  void begin_event(const Event& event);

  /// begin_event followed by run_to_convergence.
  void apply(const Event& event);

  /// Runs until no messages are pending and no router needs recomputing.
  /// Throws std::runtime_error when `max_ticks` pass without convergence.
  void run_to_convergence(Tick max_ticks = 100000);

  bool converged() const { return queue_.empty() && dirty_.empty(); }

  /// Hands `lsa` to `router` as if it had arrived from outside; returns the number of
  /// copies forwarded (zero when the router already holds that version or newer).
  std::size_t receive(RouterId router, const Lsa& lsa);

  Tick now() const { return now_; }
  Tick converged_at() const { return converged_at_; }
  ProtocolMode mode() const { return mode_; }
  const NetworkSpec& spec() const { return spec_; }
  const std::map<RouterId, RouterState>& routers() const { return routers_; }
  const RouterState& router(RouterId id) const;
  const RouteTable& route_table(RouterId id) const { return router(id).routes; }
  const Timeline& timeline() const { return timeline_; }
  const EngineStats& stats() const { return stats_; }
  const std::optional<DvrResult>& dvr() const { return dvr_; }

  /// Overlay as assembled from one router's AS-scope LSDB.
  OverlayGraph overlay_graph(RouterId id) const;

 private:
  struct QueueKey {
    Tick deliver_at;
    RouterId from;
    RouterId to;
    int kind_rank;
    LsaKey key;
    std::uint64_t serial;

    friend auto operator<=>(const QueueKey&, const QueueKey&) = default;
  };

  RouterState& state(RouterId id) { return routers_.at(id); }
  void log(const std::string& line);
  void send(Message message);
  void originate(RouterId router, const Lsa& lsa);
  std::size_t forward(RouterId router, const Lsa& lsa, std::optional<std::size_t> except_link);
  void deliver(const Message& message);
  void deliver_flood(const Message& message, const Lsa& lsa);
  void install_and_reflood(RouterId router, const std::vector<Lsa>& lsas, std::string_view via);
  void sync_attachment(RouterId router);
  void pull_database(RouterId router, RouterId peer, AreaId area, bool with_overlay);
  void restore_own(RouterId router);
  void originate_standard(RouterId router);
  void recompute(RouterId router);
  void recompute_extension(RouterId router, RouterState& st);
  void recompute_dvr(RouterId router, RouterState& st);
  void withdraw_overlay(RouterId router, RouterState& st);
  void reconcile_and_flood(RouterId router, std::optional<AreaId> scope,
                           const std::vector<LsaBody>& desired,
                           std::initializer_list<LsaKind> managed);

  NetworkSpec spec_;
  ProtocolMode mode_;
  Tick now_ = 0;
  Tick converged_at_ = 0;
  bool cold_start_ = false;
  std::map<RouterId, RouterState> routers_;
  std::map<QueueKey, Message> queue_;
  std::set<RouterId> dirty_;
  std::optional<DvrResult> dvr_;
  std::uint64_t serial_ = 0;
  Timeline timeline_;
  EngineStats stats_;
};

/// Runs a scenario from cold start through every event.
Engine run_scenario(const NetworkSpec& spec, ProtocolMode mode, const std::vector<Event>& events);

}  // namespace area_overlay
