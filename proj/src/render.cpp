#include "area_overlay/render.hpp"

#include <fmt/format.h>

#include "area_overlay/analysis.hpp"

namespace area_overlay {

namespace {

std::string cost_text(Cost c) { return c >= kInfinity ? "unreachable" : std::to_string(c); }

bool selected(RouterId id, std::optional<RouterId> filter) { return !filter || *filter == id; }

}  // namespace

std::string render_routes(const Engine& engine, std::optional<RouterId> router,
                          OutputFormat format) {
  const NetworkSpec& spec = engine.spec();
  std::string out;
  auto emit = [&](RouterId at, const std::string& dest, Cost cost, RouterId hop,
                  std::string_view category, std::optional<RouterId> exit) {
    if (format == OutputFormat::kLines) {
      out += fmt::format("{} {} {} {} {}\n", spec.router_name(at), dest, cost,
                         spec.router_name(hop), category);
    } else if (exit) {
      out += fmt::format("{} -> {} : {} via {} ({}, exit {})\n", spec.router_name(at), dest, cost,
                         spec.router_name(hop), category, spec.router_name(*exit));
    } else {
      out += fmt::format("{} -> {} : {} via {} ({})\n", spec.router_name(at), dest, cost,
                         spec.router_name(hop), category);
    }
  };
  for (const auto& [id, st] : engine.routers()) {
    if (!selected(id, router) || !spec.router_up(id)) continue;
    for (const auto& [prefix, e] : st.routes.entries) {
      emit(id, spec.prefix_label(prefix), e.cost, e.next_hop, to_string(e.category), e.egress_abr);
    }
    for (const auto& [asbr, reach] : st.routes.asbr_reach) {
      emit(id, spec.router_name(asbr), reach.cost, reach.next_hop,
           reach.egress_abr ? "inter" : "intra", reach.egress_abr);
    }
  }
  return out;
}

std::string render_overlay(const Engine& engine, std::optional<RouterId> viewpoint) {
  const NetworkSpec& spec = engine.spec();
  if (!viewpoint) {
    const auto abrs = spec.abrs();
    if (abrs.empty()) return "no ABRs\n";
    viewpoint = abrs.front();
  }
  const OverlayGraph graph = engine.overlay_graph(*viewpoint);
  std::string out = fmt::format("overlay at {}: {} ABRs\n", spec.router_name(*viewpoint),
                                graph.nodes.size());
  for (const auto& [ends, arc] : graph.arcs) {
    out += fmt::format("{} -> {} : {}{}\n", spec.router_name(ends.first),
                       spec.router_name(ends.second), arc.cost, arc.usable ? "" : " unusable");
  }
  for (const auto& [abr, labels] : graph.prefix_labels) {
    for (const auto& [prefix, cost] : labels) {
      out += fmt::format("{} prefix {} : {}\n", spec.router_name(abr), spec.prefix_label(prefix), cost);
    }
  }
  for (const auto& [abr, labels] : graph.asbr_labels) {
    for (const auto& [asbr, cost] : labels) {
      out += fmt::format("{} asbr {} : {}\n", spec.router_name(abr), spec.router_name(asbr), cost);
    }
  }
  return out;
}

std::string render_lsdbs(const Engine& engine, std::optional<RouterId> router) {
  const NetworkSpec& spec = engine.spec();
  std::string out;
  for (const auto& [id, st] : engine.routers()) {
    if (!selected(id, router) || !spec.router_up(id)) continue;
    for (const auto& [area, db] : st.areas) {
      for (const auto& [key, lsa] : db.entries()) {
        out += fmt::format("{} area {}: {}\n", spec.router_name(id), area.value, describe_lsa(lsa, spec));
      }
    }
    for (const auto& [key, lsa] : st.as_lsdb.entries()) {
      out += fmt::format("{} as: {}\n", spec.router_name(id), describe_lsa(lsa, spec));
    }
  }
  return out;
}

std::string render_diff(const Engine& extension, const Engine& dvr,
                        std::optional<RouterId> router) {
  const NetworkSpec& spec = extension.spec();
  std::string out;
  std::size_t differing = 0;
  for (const auto& [id, info] : spec.routers) {
    if (!selected(id, router) || !info.up) continue;
    std::set<Destination> dests;
    for (const auto* e : {&extension, &dvr}) {
      const RouteTable& t = e->route_table(id);
      for (const auto& [p, entry] : t.entries) dests.insert(p);
      for (const auto& [a, reach] : t.asbr_reach) dests.insert(a);
    }
    for (const auto& d : dests) {
      const Cost a = route_cost(extension.route_table(id), d);
      const Cost b = route_cost(dvr.route_table(id), d);
      if (a == b) continue;
      ++differing;
      out += fmt::format("{} {}: extension={} dvr={}\n", spec.router_name(id),
                         spec.destination_label(d), cost_text(a), cost_text(b));
    }
  }
  out += fmt::format("{} routes differ\n", differing);
  return out;
}

std::string render_oracle(const NetworkSpec& spec, std::optional<RouterId> source) {
  std::string out;
  for (const auto& [id, info] : spec.routers) {
    if (!selected(id, source)) continue;
    for (const auto& [dest, cost] : oracle_destination_costs(spec, id)) {
      out += fmt::format("{} -> {} : {}\n", spec.router_name(id), spec.destination_label(dest),
                         cost_text(cost));
    }
  }
  return out;
}

}  // namespace area_overlay
