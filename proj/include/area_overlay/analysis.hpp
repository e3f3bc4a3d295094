#pragma once

#include <cstddef>
#include <vector>

#include "area_overlay/engine.hpp"

namespace area_overlay {

/// Cost a route table holds for a prefix or an ASBR; kInfinity when absent.
Cost route_cost(const RouteTable& table, const Destination& destination);

struct CostSample {
  RouterId router;
  Destination destination;
  Cost actual = kInfinity;
  Cost oracle = kInfinity;
};

struct OracleReport {
  std::vector<CostSample> samples;  // every (up router, destination) pair
  std::size_t equal = 0;
  std::size_t above = 0;  // actual > oracle
  std::size_t below = 0;  // actual < oracle

  std::vector<CostSample> mismatches() const;
};

/// Compares every router's converged routes with the flat-graph oracle.
OracleReport compare_with_oracle(const Engine& engine);

}  // namespace area_overlay
