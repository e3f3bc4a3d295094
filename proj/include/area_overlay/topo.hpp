#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "area_overlay/types.hpp"

namespace area_overlay {

/// Malformed scenario text. Carries the 1-based line number.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

/// Well-formed scenario that violates a model invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RouterInfo {
  std::string name;
  bool asbr = false;
  bool up = true;
};

/// Point-to-point link bound to exactly one area, with per-direction costs.
struct Link {
  RouterId a;
  RouterId b;
  AreaId area;
  Cost cost_ab = 1;
  Cost cost_ba = 1;
  bool up = true;

  bool connects(RouterId x, RouterId y) const {
    return (a == x && b == y) || (a == y && b == x);
  }
  RouterId peer(RouterId self) const { return self == a ? b : a; }
  Cost cost_from(RouterId self) const { return self == a ? cost_ab : cost_ba; }
};

struct PrefixAssignment {
  Prefix prefix;
  RouterId router;
  Cost stub_cost = 0;
};

struct ExternalPrefix {
  Prefix prefix;
  RouterId asbr;
  Cost metric = 0;
};

/// Simulated ground truth: routers, areas, links and address assignments.
struct NetworkSpec {
  AddressFamily family = AddressFamily::kV4;
  std::map<RouterId, RouterInfo> routers;
  std::set<AreaId> areas;
  std::vector<Link> links;
  std::set<std::pair<RouterId, AreaId>> explicit_members;
  std::vector<PrefixAssignment> prefixes;
  std::vector<ExternalPrefix> externals;
  std::map<Prefix, std::string> prefix_names;

  bool router_up(RouterId r) const;

  /// Areas a live router is attached to: areas of its up links plus explicit membership.
  std::set<AreaId> areas_of(RouterId r) const;
  bool in_area(RouterId r, AreaId area) const { return areas_of(r).count(area) > 0; }
  bool is_abr(RouterId r) const { return areas_of(r).size() >= 2; }
  std::vector<RouterId> abrs() const;
  std::vector<RouterId> members(AreaId area) const;

  /// True when the link carries traffic: link up and both endpoints up.
  bool link_active(const Link& link) const;

  std::optional<RouterId> find_router(std::string_view name) const;
  RouterId router_by_name(std::string_view name) const;
  std::string router_name(RouterId r) const;
  std::string prefix_label(const Prefix& p) const;
  std::string destination_label(const Destination& d) const;
};

/// Parses and validates scenario text. Throws ScenarioError or ValidationError.
NetworkSpec load_scenario(std::string_view text);

/// Checks every NetworkSpec invariant; throws ValidationError naming the first violation.
void validate(const NetworkSpec& spec);

/// Renders a spec back into scenario text that load_scenario accepts.
std::string to_scenario_text(const NetworkSpec& spec);

/// Single-source shortest paths restricted to one area (or an LSDB-derived graph).
struct SpfResult {
  RouterId source;
  AreaId area;
  std::map<RouterId, Cost> dist;        // reachable routers only
  std::map<RouterId, RouterId> first_hop;

  Cost cost_to(RouterId r) const;
  std::optional<RouterId> hop_to(RouterId r) const;
};

using Adjacency = std::map<RouterId, std::vector<std::pair<RouterId, Cost>>>;

/// Dijkstra over an explicit adjacency. Equal-cost ties pick the lowest first hop.
SpfResult shortest_paths(const Adjacency& adjacency, RouterId source, AreaId area);

/// Adjacency of the active links of one area, parallel links folded to the minimum.
Adjacency area_adjacency(const NetworkSpec& spec, AreaId area);

SpfResult intra_area_spf(const NetworkSpec& spec, AreaId area, RouterId source);

/// Shortest-path costs over every active link, ignoring areas. Bellman-Ford style
/// relaxation, kept separate from the Dijkstra path so it can serve as a test oracle.
std::map<RouterId, Cost> flat_spf_oracle(const NetworkSpec& spec, RouterId source);

/// Oracle costs from `source` to every prefix, ASBR and external prefix in `spec`.
std::map<Destination, Cost> oracle_destination_costs(const NetworkSpec& spec, RouterId source);

}  // namespace area_overlay
