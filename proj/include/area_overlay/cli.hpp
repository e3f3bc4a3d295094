#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace area_overlay {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitScenario = 2;
inline constexpr int kExitMalformedLsa = 3;

/// Entry point of the area-overlay tool. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace area_overlay
