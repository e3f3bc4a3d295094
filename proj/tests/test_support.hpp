#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "area_overlay/codec.hpp"
#include "area_overlay/engine.hpp"
#include "area_overlay/topo.hpp"

namespace area_overlay::testing {

std::string data_path(const std::string& name);
std::string read_data(const std::string& name);

/// The four-area network R1..R8 from tests/data/fixture.scn.
const NetworkSpec& fixture();

RouterId rid(std::uint32_t n);
RouterId by_name(const NetworkSpec& spec, const std::string& name);
Prefix prefix_named(const NetworkSpec& spec, const std::string& name);

/// A random event that may or may not be valid on `spec`; callers validate it.
std::optional<EventAction> random_event(std::mt19937_64& rng, const NetworkSpec& spec);

/// Random ABR-, Prefix- or ASBR-LSA that the codec of `version` can carry.
Lsa random_overlay_lsa(std::mt19937_64& rng, OspfVersion version);

/// Usable arcs and labels among `abrs`, as text, for comparing overlay graphs.
std::string overlay_signature(const OverlayGraph& graph, const NetworkSpec& spec,
                              const std::vector<RouterId>& abrs);

/// True when every up router reaches every other up router.
bool connected(const NetworkSpec& spec);

/// Empty when `engine` (after events) matches a cold start on `spec`, otherwise a
/// description of what differs.
std::string equivalence_failure(const Engine& engine, const NetworkSpec& spec);

}  // namespace area_overlay::testing
