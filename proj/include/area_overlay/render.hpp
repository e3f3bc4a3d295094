#pragma once

#include <optional>
#include <string>

#include "area_overlay/engine.hpp"

namespace area_overlay {

enum class OutputFormat { kText, kLines };

/// Route tables. Text lines read "R1 -> ap2 : 4 via R3 (inter, exit R3)"; the lines
/// format is "<router> <dest> <cost> <nexthop> <category>".
std::string render_routes(const Engine& engine, std::optional<RouterId> router,
                          OutputFormat format);

/// Overlay graph seen from one ABR (default: the lowest-id ABR), e.g. "R3 -> R6 : 2".
std::string render_overlay(const Engine& engine, std::optional<RouterId> viewpoint);

/// LSDB contents, one LSA per line.
std::string render_lsdbs(const Engine& engine, std::optional<RouterId> router);

/// Destinations whose cost differs between the two modes, e.g.
/// "R6 ap1: extension=3 dvr=5", then a count line.
std::string render_diff(const Engine& extension, const Engine& dvr,
                        std::optional<RouterId> router);

/// Flat-graph shortest-path costs, e.g. "R6 -> ap1 : 3" or "R6 -> ap1 : unreachable".
std::string render_oracle(const NetworkSpec& spec, std::optional<RouterId> source);

}  // namespace area_overlay
