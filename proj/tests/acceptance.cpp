// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fails.
#include <algorithm>
#include <cstdio>
#include <functional>
#include <sstream>

#include <fmt/format.h>

#include "area_overlay/analysis.hpp"
#include "area_overlay/codec.hpp"
#include "area_overlay/generator.hpp"
#include "area_overlay/render.hpp"
#include "test_support.hpp"

namespace area_overlay {
namespace {

using testing::by_name;
using testing::fixture;
using testing::prefix_named;
using testing::read_data;

/// Collects failed checks of one criterion.
struct Check {
  std::vector<std::string> failures;

  template <typename A, typename B>
  void eq(const A& actual, const B& expected, const std::string& what) {
    if (!(actual == expected)) failures.push_back(fmt::format("{}: got {}, want {}", what, actual, expected));
  }
  void that(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

RouterId R(const char* name) { return by_name(fixture(), name); }

std::string n(RouterId r) { return fixture().router_name(r); }

Cost prefix_cost_in_area(AreaId area, const char* from, const char* prefix) {
  const NetworkSpec& spec = fixture();
  const Prefix p = prefix_named(spec, prefix);
  const SpfResult spf = intra_area_spf(spec, area, R(from));
  Cost best = kInfinity;
  for (const auto& pa : spec.prefixes) {
    if (pa.prefix == p) best = std::min(best, add_cost(spf.cost_to(pa.router), pa.stub_cost));
  }
  return best;
}

const Engine& extension() {
  static const Engine e = run_scenario(fixture(), ProtocolMode::kExtension, {});
  return e;
}

const Engine& dvr() {
  static const Engine e = run_scenario(fixture(), ProtocolMode::kHierarchicalDvr, {});
  return e;
}

const RouteEntry* route(const Engine& e, const char* router, const char* prefix) {
  const auto& entries = e.route_table(R(router)).entries;
  const auto it = entries.find(prefix_named(fixture(), prefix));
  return it == entries.end() ? nullptr : &it->second;
}

void fixture_costs(Check& c, std::string& detail) {
  c.eq(prefix_cost_in_area(AreaId{1}, "R2", "ap1"), 4u, "R2->ap1");
  c.eq(prefix_cost_in_area(AreaId{1}, "R3", "ap1"), 1u, "R3->ap1");
  c.eq(prefix_cost_in_area(AreaId{1}, "R4", "ap1"), 5u, "R4->ap1");
  const SpfResult r3 = intra_area_spf(fixture(), AreaId{3}, R("R3"));
  c.eq(r3.cost_to(R("R6")), 2u, "R3->R6 in area 3");
  c.that(r3.hop_to(R("R6")) == R("R4"), "R3->R6 goes via R4");
  const auto all = area_lsdbs_from_spec(fixture());
  const LocalView view =
      derive_local_view(R("R6"), AreaLsdbs{{AreaId{3}, all.at(AreaId{3})}, {AreaId{4}, all.at(AreaId{4})}});
  c.that(view.neighbor_costs ==
             std::map<RouterId, Cost>{{R("R3"), 2}, {R("R4"), 1}, {R("R5"), 3}},
         "R6 neighbor costs {R3:2, R4:1, R5:3}");
  c.eq(prefix_cost_in_area(AreaId{4}, "R6", "ap2"), 1u, "R6->ap2");
  c.eq(intra_area_spf(fixture(), AreaId{4}, R("R6")).cost_to(R("R8")), 2u, "R6->R8");
  c.eq(intra_area_spf(fixture(), AreaId{4}, R("R5")).cost_to(R("R8")), 1u, "R5->R8");
  detail = "R2/R3/R4->ap1 = 4/1/5, R3->R6 = 2 via R4, R6 nbrs {R3:2,R4:1,R5:3}, R6->ap2 = 1, "
           "R6->R8 = 2, R5->R8 = 1";
}

void dvr_suboptimal(Check& c, std::string& detail) {
  const RouteEntry* e = route(dvr(), "R6", "ap1");
  c.that(e != nullptr, "R6 has a DVR route to ap1");
  if (!e) return;
  c.eq(e->cost, 5u, "R6->ap1 cost");
  c.eq(n(e->next_hop), std::string("R3"), "R6->ap1 next hop");
  std::size_t blocked = 0;
  for (const auto& m : dvr().dvr()->log) {
    if (m.from == R("R4") && m.to == R("R6") && m.area == AreaId{3} && m.vector.cost == 2 &&
        m.vector.destination == Destination{prefix_named(fixture(), "ap1")} &&
        m.verdict == Verdict::kDenyTransit) {
      ++blocked;
    }
  }
  c.that(blocked > 0, "restriction (ii) blocks R4's (ap1, 2) into area 3");
  detail = fmt::format("R6->ap1 = {} via {}; R4->R6 (ap1, 2) denied by deny(ii) in {} round(s)",
                       e->cost, n(e->next_hop), blocked);
}

void extension_optimal(Check& c, std::string& detail) {
  const RouteEntry* e = route(extension(), "R6", "ap1");
  c.that(e != nullptr, "R6 has a route to ap1");
  if (!e) return;
  c.eq(e->cost, 3u, "R6->ap1 cost");
  c.eq(n(e->next_hop), std::string("R4"), "R6->ap1 next hop");
  detail = fmt::format("R6->ap1 = {} via {}", e->cost, n(e->next_hop));
}

void internal_router(Check& c, std::string& detail) {
  const RouteEntry* ap2 = route(extension(), "R1", "ap2");
  c.that(ap2 && ap2->cost == 4 && ap2->next_hop == R("R3"), "R1->ap2 = 4 via R3");
  std::map<std::string, Cost> injected;
  extension().router(R("R1")).areas.at(AreaId{1}).for_each<SummaryPrefixBody>(
      [&](const Lsa& lsa, const SummaryPrefixBody& body) {
        if (body.destination == prefix_named(fixture(), "ap2") && body.metric < kInfinity) {
          injected[n(lsa.key.origin)] = body.metric;
        }
      });
  c.that(injected == std::map<std::string, Cost>{{"R2", 3}, {"R3", 3}, {"R4", 2}},
         "injected (R2,R3,R4)->ap2 = (3,3,2)");
  const auto& reach = extension().route_table(R("R1")).asbr_reach;
  const auto r8 = reach.find(R("R8"));
  c.that(r8 != reach.end() && r8->second.cost == 5 && r8->second.next_hop == R("R3"),
         "R1->R8 = 5 via R3");
  Cost external_metric = kInfinity;
  for (const auto& x : fixture().externals) {
    if (x.prefix == prefix_named(fixture(), "ap3")) external_metric = x.metric;
  }
  const RouteEntry* ap3 = route(extension(), "R1", "ap3");
  c.that(ap3 && ap3->cost == add_cost(5, external_metric) &&
             ap3->category == RouteCategory::kExternal,
         "R1->ap3 = 5 + external metric");
  detail = fmt::format("R1->ap2 = {}, injected R2/R3/R4 = {}/{}/{}, R1->R8 = {}, R1->ap3 = {}",
                       ap2 ? ap2->cost : kInfinity, injected["R2"], injected["R3"], injected["R4"],
                       r8 != reach.end() ? r8->second.cost : kInfinity, ap3 ? ap3->cost : kInfinity);
}

void overlay_origination(Check& c, std::string& detail) {
  const Lsdb& store = extension().router(R("R1")).as_lsdb;
  auto live = [&](const char* origin, LsaKind kind) {
    std::vector<LsaBody> out;
    for (const auto& [key, lsa] : store.entries()) {
      if (key.origin == R(origin) && key.kind == kind && !is_withdrawn(lsa.body)) out.push_back(lsa.body);
    }
    return out;
  };
  const auto abr = live("R6", LsaKind::kAbr);
  c.that(abr.size() == 1 &&
             std::get<AbrLsaBody>(abr[0]).neighbors ==
                 std::vector<RouterLink>{{R("R3"), 2}, {R("R4"), 1}, {R("R5"), 3}},
         "R6 ABR-LSA {R3:2, R4:1, R5:3}");
  const auto prefixes = live("R6", LsaKind::kPrefix);
  c.that(prefixes.size() == 1 &&
             std::get<PrefixLsaBody>(prefixes[0]) == PrefixLsaBody{prefix_named(fixture(), "ap2"), 1},
         "R6 Prefix-LSA (ap2, 1)");
  const auto r6_asbr = live("R6", LsaKind::kAsbr);
  c.that(r6_asbr.size() == 1 && std::get<AsbrLsaBody>(r6_asbr[0]) == AsbrLsaBody{R("R8"), 2},
         "R6 ASBR-LSA (R8, 2)");
  const auto r5_asbr = live("R5", LsaKind::kAsbr);
  c.that(r5_asbr.size() == 1 && std::get<AsbrLsaBody>(r5_asbr[0]) == AsbrLsaBody{R("R8"), 1},
         "R5 ASBR-LSA (R8, 1)");
  std::size_t total = 0;
  for (const auto& [key, lsa] : store.entries()) total += is_overlay(key.kind) && !is_withdrawn(lsa.body);
  detail = fmt::format("R6: 1 ABR-LSA, {} Prefix-LSA, {} ASBR-LSA; R5: {} ASBR-LSA; {} overlay LSAs in all",
                       prefixes.size(), r6_asbr.size(), r5_asbr.size(), total);
}

struct RandomRuns {
  std::size_t scenarios = 0;
  std::size_t extension_mismatches = 0;
  std::size_t dvr_below = 0;
  std::size_t dvr_strict_scenarios = 0;
  std::size_t dvr_strict_pairs = 0;
  std::size_t pairs = 0;
  std::string first_mismatch;
};

const RandomRuns& random_runs() {
  static const RandomRuns runs = [] {
    RandomRuns r;
    const std::uint64_t seed = seed_from_env(1);
    for (std::uint64_t i = 0; i < 200; ++i) {
      std::mt19937_64 rng(seed + i);
      const NetworkSpec spec = random_scenario(rng);
      const OracleReport ext = compare_with_oracle(run_scenario(spec, ProtocolMode::kExtension, {}));
      const OracleReport dv = compare_with_oracle(run_scenario(spec, ProtocolMode::kHierarchicalDvr, {}));
      ++r.scenarios;
      r.pairs += ext.samples.size();
      const auto bad = ext.mismatches();
      r.extension_mismatches += bad.size();
      if (!bad.empty() && r.first_mismatch.empty()) {
        r.first_mismatch = fmt::format("seed {}: {} -> {} = {}, oracle {}", seed + i,
                                       spec.router_name(bad[0].router),
                                       spec.destination_label(bad[0].destination), bad[0].actual,
                                       bad[0].oracle);
      }
      r.dvr_below += dv.below;
      r.dvr_strict_pairs += dv.above;
      r.dvr_strict_scenarios += dv.above > 0;
    }
    return r;
  }();
  return runs;
}

void global_optimality(Check& c, std::string& detail) {
  const RandomRuns& r = random_runs();
  c.eq(r.scenarios, 200u, "scenarios");
  c.eq(r.extension_mismatches, 0u, "extension costs differing from the oracle");
  if (!r.first_mismatch.empty()) c.that(false, r.first_mismatch);
  detail = fmt::format("{} scenarios, {} (router, destination) pairs, {} mismatches", r.scenarios,
                       r.pairs, r.extension_mismatches);
}

void dvr_safety(Check& c, std::string& detail) {
  const RandomRuns& r = random_runs();
  c.eq(r.dvr_below, 0u, "DVR costs below the oracle");
  c.that(r.dvr_strict_scenarios > 0, "some scenario shows DVR above the oracle");
  detail = fmt::format("{} costs below oracle; strict inequality in {} of {} scenarios "
                       "({} pairs)",
                       r.dvr_below, r.dvr_strict_scenarios, r.scenarios, r.dvr_strict_pairs);
}

std::vector<Lsa> static_overlay(const NetworkSpec& spec) {
  const auto all = area_lsdbs_from_spec(spec);
  Lsdb store;
  for (RouterId abr : spec.abrs()) {
    AreaLsdbs mine;
    for (AreaId a : spec.areas_of(abr)) mine.emplace(a, all.at(a));
    for (const Lsa& lsa : originate_overlay_lsas(derive_local_view(abr, mine), {})) store.install(lsa);
  }
  return overlay_lsas(store);
}

std::vector<Bytes> golden_file(const std::string& name) {
  std::vector<Bytes> out;
  std::istringstream in(read_data(name));
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line[0] != '#') out.push_back(from_hex(line));
  }
  return out;
}

void codec(Check& c, std::string& detail) {
  std::size_t round_trips = 0;
  std::size_t v3_bits = 0;
  for (auto version : {OspfVersion::kV2, OspfVersion::kV3}) {
    std::mt19937_64 rng(version == OspfVersion::kV2 ? 21 : 22);
    for (int i = 0; i < 10000; ++i) {
      const Lsa lsa = testing::random_overlay_lsa(rng, version);
      const Bytes bytes = encode_lsa(lsa, version);
      const Lsa back = decode_lsa(bytes, version);
      round_trips += back == lsa && encode_lsa(back, version) == bytes;
      if (version == OspfVersion::kV3) {
        const unsigned ls_type = (bytes[2] << 8) | bytes[3];
        v3_bits += (ls_type >> 15) == 1 && ((ls_type >> 13) & 3) == 2;
      }
    }
  }
  c.eq(round_trips, 20000u, "bit-exact round trips");
  c.eq(v3_bits, 10000u, "v3 encodings with U=1, S2S1=10");

  std::size_t crashes = 0;
  std::mt19937_64 rng(23);
  for (auto version : {OspfVersion::kV2, OspfVersion::kV3}) {
    for (int i = 0; i < 10000; ++i) {
      Bytes bytes(rng() % 64);
      for (auto& b : bytes) b = static_cast<std::uint8_t>(rng());
      try {
        decode_lsa(bytes, version);
      } catch (const DecodeError&) {
      } catch (...) {
        ++crashes;
      }
    }
  }
  c.eq(crashes, 0u, "decoder failures other than DecodeError");

  std::size_t golden_ok = 0;
  std::size_t golden_total = 0;
  const NetworkSpec v6 = load_scenario(read_data("fixture_v6.scn"));
  for (const auto& [spec, version, file] :
       {std::tuple{&fixture(), OspfVersion::kV2, "fixture_overlay_v2.hex"},
        std::tuple{&v6, OspfVersion::kV3, "fixture_overlay_v3.hex"}}) {
    const auto lsas = static_overlay(*spec);
    const auto bytes = golden_file(file);
    c.eq(lsas.size(), bytes.size(), fmt::format("{} golden count", file));
    for (std::size_t i = 0; i < std::min(lsas.size(), bytes.size()); ++i) {
      ++golden_total;
      golden_ok += encode_lsa(lsas[i], version) == bytes[i] && decode_lsa(bytes[i], version) == lsas[i];
    }
  }
  c.eq(golden_ok, golden_total, "golden vectors matching");
  detail = fmt::format("{} round trips, {} random inputs without crash, {}/{} golden vectors, "
                       "{} v3 encodings with U=1 S2S1=10",
                       round_trips, 20000 - crashes, golden_ok, golden_total, v3_bits);
}

void dynamics(Check& c, std::string& detail) {
  const NetworkSpec& spec = fixture();
  const auto events = load_events(read_data("linkcost_r4_r6.events"), spec);
  const Engine e = run_scenario(spec, ProtocolMode::kExtension, events);
  NetworkSpec mutated = spec;
  for (const auto& ev : events) mutate_spec(mutated, ev.action);
  c.that(e.converged(), "re-converged");
  Engine cold(mutated, ProtocolMode::kExtension);
  cold.start();
  std::size_t equal_tables = 0;
  for (const auto& [id, st] : e.routers()) equal_tables += st.routes == cold.route_table(id);
  c.eq(equal_tables, spec.routers.size(), "route tables equal to cold start");
  std::vector<std::vector<Lsa>> stores;
  for (RouterId abr : mutated.abrs()) {
    auto held = overlay_lsas(e.router(abr).as_lsdb);
    if (std::find(stores.begin(), stores.end(), held) == stores.end()) stores.push_back(std::move(held));
  }
  c.eq(stores.size(), 1u, "distinct ABR overlay LSDBs");
  const std::string rest = testing::equivalence_failure(e, mutated);
  c.that(rest.empty(), "cold-start equivalence:" + rest);
  const RouteEntry* r6 = route(e, "R6", "ap1");
  detail = fmt::format("converged at t={}; {}/{} tables equal cold start; {} distinct ABR overlay "
                       "LSDB(s); R6->ap1 now {}",
                       e.converged_at(), equal_tables, spec.routers.size(), stores.size(),
                       r6 ? r6->cost : kInfinity);
}

void join_sync(Check& c, std::string& detail) {
  const NetworkSpec spec = load_scenario(read_data("fixture_r9.scn"));
  const auto events = load_events(read_data("join_r9.events"), spec);
  const Engine e = run_scenario(spec, ProtocolMode::kExtension, events);
  const RouterId r9 = spec.router_by_name("R9");
  c.that(e.router(r9).view.has_value(), "R9 is an ABR after the join");
  if (!e.router(r9).view) return;
  std::map<std::string, std::pair<int, int>> per_peer;
  for (const auto& [peer, cost] : e.router(r9).view->neighbor_costs) per_peer[spec.router_name(peer)];
  const std::size_t neighbors = per_peer.size();
  for (const auto& line : e.timeline().lines) {
    const auto body = line.substr(line.find(' ') + 1);
    char a[32] = {};
    char b[32] = {};
    if (std::sscanf(body.c_str(), "request %31[^-]->%31s", a, b) == 2 && std::string(a) == "R9") {
      ++per_peer[b].first;
    } else if (std::sscanf(body.c_str(), "response %31[^-]->%31s", a, b) == 2 && std::string(b) == "R9") {
      ++per_peer[a].second;
    }
  }
  for (const auto& [peer, counts] : per_peer) {
    c.that(counts == std::pair{1, 1},
           fmt::format("{}: {} request(s), {} response(s)", peer, counts.first, counts.second));
  }
  c.eq(per_peer.size(), neighbors, "peers synced");
  c.eq(e.stats().requests, neighbors, "requests");
  c.eq(e.stats().responses, neighbors, "responses");
  const auto joiner = overlay_lsas(e.router(r9).as_lsdb);
  std::size_t equal = 0;
  std::size_t others = 0;
  NetworkSpec mutated = spec;
  for (const auto& ev : events) mutate_spec(mutated, ev.action);
  for (RouterId abr : mutated.abrs()) {
    if (abr == r9) continue;
    ++others;
    equal += overlay_lsas(e.router(abr).as_lsdb) == joiner;
  }
  c.eq(equal, others, "ABRs whose overlay LSDB equals the joiner's");
  std::string peers;
  for (const auto& [peer, counts] : per_peer) peers += (peers.empty() ? "" : ",") + peer;
  detail = fmt::format("{} new neighbors ({}); {} requests, {} responses; joiner LSDB ({} LSAs) equals "
                       "{}/{} ABRs",
                       neighbors, peers, e.stats().requests, e.stats().responses, joiner.size(),
                       equal, others);
}

void determinism(Check& c, std::string& detail) {
  const NetworkSpec r9 = load_scenario(read_data("fixture_r9.scn"));
  const std::vector<std::tuple<std::string, const NetworkSpec*, std::vector<Event>>> runs = {
      {"fixture", &fixture(), {}},
      {"linkcost", &fixture(), load_events(read_data("linkcost_r4_r6.events"), fixture())},
      {"join", &r9, load_events(read_data("join_r9.events"), r9)},
  };
  std::size_t compared = 0;
  for (const auto& [name, spec, events] : runs) {
    for (auto mode : {ProtocolMode::kExtension, ProtocolMode::kHierarchicalDvr}) {
      const Engine a = run_scenario(*spec, mode, events);
      const Engine b = run_scenario(*spec, mode, events);
      const std::string label = fmt::format("{} {}", name, to_string(mode));
      c.that(a.timeline().text() == b.timeline().text(), label + " timeline");
      c.that(render_routes(a, std::nullopt, OutputFormat::kText) ==
                 render_routes(b, std::nullopt, OutputFormat::kText),
             label + " routes");
      c.that(render_lsdbs(a, std::nullopt) == render_lsdbs(b, std::nullopt), label + " LSDBs");
      if (mode == ProtocolMode::kExtension) {
        c.that(render_overlay(a, std::nullopt) == render_overlay(b, std::nullopt), label + " overlay");
      }
      ++compared;
    }
  }
  detail = fmt::format("{} scenario/mode pairs run twice, timelines and outputs byte-identical", compared);
}

}  // namespace
}  // namespace area_overlay

int main() {
  using namespace area_overlay;
  const std::vector<std::pair<std::string, std::function<void(Check&, std::string&)>>> criteria = {
      {"fixture self-test", fixture_costs},
      {"suboptimality reproduction", dvr_suboptimal},
      {"optimal extension result", extension_optimal},
      {"internal-router results", internal_router},
      {"overlay LSA origination", overlay_origination},
      {"global optimality", global_optimality},
      {"DVR safety", dvr_safety},
      {"codec", codec},
      {"dynamics", dynamics},
      {"join sync", join_sync},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check check;
    std::string detail;
    try {
      criteria[i].second(check, detail);
    } catch (const std::exception& e) {
      check.failures.push_back(fmt::format("exception: {}", e.what()));
    }
    const bool ok = check.failures.empty();
    failed += !ok;
    fmt::print("{} {:>2} {}: {}\n", ok ? "PASS" : "FAIL", i + 1, criteria[i].first, detail);
    for (const auto& f : check.failures) fmt::print("       {}\n", f);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
