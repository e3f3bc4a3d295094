#include "area_overlay/analysis.hpp"

namespace area_overlay {

Cost route_cost(const RouteTable& table, const Destination& destination) {
  if (const auto* p = std::get_if<Prefix>(&destination)) {
    const auto it = table.entries.find(*p);
    return it == table.entries.end() ? kInfinity : it->second.cost;
  }
  const auto it = table.asbr_reach.find(std::get<RouterId>(destination));
  return it == table.asbr_reach.end() ? kInfinity : it->second.cost;
}

std::vector<CostSample> OracleReport::mismatches() const {
  std::vector<CostSample> out;
  for (const auto& s : samples) {
    if (s.actual != s.oracle) out.push_back(s);
  }
  return out;
}

OracleReport compare_with_oracle(const Engine& engine) {
  OracleReport report;
  const NetworkSpec& spec = engine.spec();
  for (const auto& [id, info] : spec.routers) {
    if (!info.up) continue;
    for (const auto& [dest, oracle] : oracle_destination_costs(spec, id)) {
      const Cost actual = route_cost(engine.route_table(id), dest);
      report.samples.push_back(CostSample{id, dest, actual, oracle});
      if (actual == oracle) ++report.equal;
      else if (actual > oracle) ++report.above;
      else ++report.below;
    }
  }
  return report;
}

}  // namespace area_overlay
