#include "area_overlay/generator.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include <fmt/format.h>

namespace area_overlay {

namespace {

int uniform(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

bool chance(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

Prefix v4_prefix(std::uint8_t a, std::uint8_t b, std::uint8_t c, std::uint8_t length) {
  std::array<std::uint8_t, 16> bytes{};
  bytes[0] = a;
  bytes[1] = b;
  bytes[2] = c;
  return Prefix(AddressFamily::kV4, bytes, length);
}

}  // namespace

NetworkSpec random_scenario(std::mt19937_64& rng, const GeneratorOptions& options) {
  NetworkSpec spec;
  spec.family = AddressFamily::kV4;
  const int n = uniform(rng, 2, std::max(2, options.max_routers));
  const int k = uniform(rng, 1, std::max(1, std::min(options.max_areas, n - 1)));
  std::vector<RouterId> routers;
  for (int i = 1; i <= n; ++i) {
    const RouterId id{static_cast<std::uint32_t>(i)};
    spec.routers[id] = RouterInfo{fmt::format("R{}", i), false, true};
    routers.push_back(id);
  }
  for (int a = 1; a <= k; ++a) spec.areas.insert(AreaId{static_cast<std::uint32_t>(a)});

  // Home areas: every area gets at least one router.
  std::vector<std::set<AreaId>> member(n + 1);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i + 1;
  std::shuffle(order.begin(), order.end(), rng);
  for (int i = 0; i < n; ++i) {
    const int area = i < k ? i + 1 : uniform(rng, 1, k);
    member[order[i]].insert(AreaId{static_cast<std::uint32_t>(area)});
  }
  auto join = [&](int router, int area) { member[router].insert(AreaId{static_cast<std::uint32_t>(area)}); };
  auto members_of = [&](int area) {
    std::vector<int> out;
    for (int r = 1; r <= n; ++r) {
      if (member[r].count(AreaId{static_cast<std::uint32_t>(area)})) out.push_back(r);
    }
    return out;
  };
  // Area tree: each later area is bridged to an earlier one by one of its routers.
  for (int a = 2; a <= k; ++a) {
    const int parent = uniform(rng, 1, a - 1);
    const auto mine = members_of(a);
    join(mine[uniform(rng, 0, static_cast<int>(mine.size()) - 1)], parent);
  }
  if (k >= 2) {
    const int extra = uniform(rng, 0, 2);
    for (int i = 0; i < extra; ++i) join(uniform(rng, 1, n), uniform(rng, 1, k));
  }

  auto draw_cost = [&] { return static_cast<Cost>(uniform(rng, 1, static_cast<int>(options.max_cost))); };
  for (int a = 1; a <= k; ++a) {
    const AreaId area{static_cast<std::uint32_t>(a)};
    auto mine = members_of(a);
    std::shuffle(mine.begin(), mine.end(), rng);
    if (mine.size() == 1) {
      spec.explicit_members.insert({RouterId{static_cast<std::uint32_t>(mine[0])}, area});
      continue;
    }
    std::set<std::pair<int, int>> linked;
    auto add_link = [&](int x, int y) {
      if (!linked.insert({std::min(x, y), std::max(x, y)}).second) return;
      const Cost c = draw_cost();
      const Cost back = options.asymmetric ? draw_cost() : c;
      spec.links.push_back(Link{RouterId{static_cast<std::uint32_t>(x)},
                                RouterId{static_cast<std::uint32_t>(y)}, area, c, back, true});
    };
    for (std::size_t i = 1; i < mine.size(); ++i) {
      add_link(mine[i], mine[uniform(rng, 0, static_cast<int>(i) - 1)]);
    }
    for (std::size_t i = 0; i < mine.size(); ++i) {
      for (std::size_t j = i + 1; j < mine.size(); ++j) {
        if (chance(rng, 0.25)) add_link(mine[i], mine[j]);
      }
    }
  }

  for (int r = 1; r <= n; ++r) {
    if (!chance(rng, 0.5) && !(r == n && spec.prefixes.empty())) continue;
    const Prefix p = v4_prefix(10, static_cast<std::uint8_t>(r), 0, 16);
    spec.prefixes.push_back(
        PrefixAssignment{p, RouterId{static_cast<std::uint32_t>(r)}, static_cast<Cost>(uniform(rng, 0, 3))});
    spec.prefix_names[p] = fmt::format("p{}", r);
  }
  const int asbrs = uniform(rng, 0, options.max_asbrs);
  std::vector<int> pool(routers.size());
  for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = static_cast<int>(i) + 1;
  std::shuffle(pool.begin(), pool.end(), rng);
  for (int j = 0; j < asbrs && j < n; ++j) {
    const RouterId asbr{static_cast<std::uint32_t>(pool[j])};
    spec.routers[asbr].asbr = true;
    // Sometimes a second ASBR injects the first one's prefix as well.
    const bool shared = j > 0 && chance(rng, 0.3);
    const Prefix p = v4_prefix(192, 0, static_cast<std::uint8_t>(shared ? 1 : j + 1), 24);
    spec.externals.push_back(
        ExternalPrefix{p, asbr, static_cast<Cost>(uniform(rng, 0, static_cast<int>(options.max_cost)))});
    spec.prefix_names[p] = fmt::format("e{}", shared ? 1 : j + 1);
  }
  validate(spec);
  return spec;
}

NetworkSpec convert_to_v6(const NetworkSpec& spec) {
  auto convert = [](const Prefix& p) {
    if (p.family() == AddressFamily::kV6) return p;
    std::array<std::uint8_t, 16> bytes{0x20, 0x01, 0x0d, 0xb8};
    std::copy_n(p.address().begin(), 4, bytes.begin() + 8);
    return Prefix(AddressFamily::kV6, bytes, static_cast<std::uint8_t>(64 + p.length()));
  };
  NetworkSpec out = spec;
  out.family = AddressFamily::kV6;
  for (auto& pa : out.prefixes) pa.prefix = convert(pa.prefix);
  for (auto& ep : out.externals) ep.prefix = convert(ep.prefix);
  out.prefix_names.clear();
  for (const auto& [p, name] : spec.prefix_names) out.prefix_names[convert(p)] = name;
  return out;
}

std::uint64_t seed_from_env(std::uint64_t fallback) {
  const char* env = std::getenv("AREA_OVERLAY_SEED");
  if (!env || !*env) return fallback;
  try {
    return std::stoull(env, nullptr, 0);
  } catch (const std::exception&) {
    throw std::invalid_argument(fmt::format("AREA_OVERLAY_SEED '{}' is not a number", env));
  }
}

}  // namespace area_overlay
