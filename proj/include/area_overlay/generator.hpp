#pragma once

#include <cstdint>
#include <random>

#include "area_overlay/topo.hpp"

namespace area_overlay {

struct GeneratorOptions {
  int max_routers = 12;
  int max_areas = 5;
  Cost max_cost = 10;
  int max_asbrs = 2;
  bool asymmetric = false;  // draw each link direction's cost independently
};

/// A valid random scenario: every area connected, the area graph connected (a random
/// tree plus extra ABR memberships that close cycles), IPv4 prefixes 10.<i>.0.0/16.
NetworkSpec random_scenario(std::mt19937_64& rng, const GeneratorOptions& options = {});

/// Same network with every IPv4 prefix a.b.c.d/n mapped into 2001:db8::/64: the IPv4
/// address fills the next 32 bits and the length becomes 64+n.
NetworkSpec convert_to_v6(const NetworkSpec& spec);

/// Seed from AREA_OVERLAY_SEED when set, otherwise `fallback`.
std::uint64_t seed_from_env(std::uint64_t fallback);

}  // namespace area_overlay
