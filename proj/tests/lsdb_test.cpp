#include <gtest/gtest.h>

#include <random>

#include <fmt/format.h>

#include "area_overlay/lsdb.hpp"
#include "test_support.hpp"

namespace area_overlay {
namespace {

using testing::by_name;
using testing::fixture;
using testing::prefix_named;

Lsa prefix_lsa(std::uint32_t origin, std::int32_t seq, Cost metric) {
  return make_lsa(RouterId{origin}, 0, seq, std::nullopt,
                  PrefixLsaBody{Prefix::parse("10.0.1.0/24"), metric});
}

TEST(Lsdb, InstallOnlyOnHigherSequence) {
  Lsdb db;
  EXPECT_EQ(db.install(prefix_lsa(3, 2, 1)), InstallResult::kInstalledNew);
  EXPECT_EQ(db.install(prefix_lsa(3, 2, 9)), InstallResult::kIgnoredStale);
  EXPECT_EQ(db.install(prefix_lsa(3, 1, 9)), InstallResult::kIgnoredStale);
  EXPECT_EQ(db.find(prefix_lsa(3, 1, 0).key)->body, prefix_lsa(3, 2, 1).body);
  EXPECT_EQ(db.install(prefix_lsa(3, 3, 7)), InstallResult::kRefreshed);
  EXPECT_EQ(db.find(prefix_lsa(3, 1, 0).key)->seq, 3);
  EXPECT_EQ(db.install(prefix_lsa(4, 1, 7)), InstallResult::kInstalledNew);
  EXPECT_EQ(db.size(), 2u);
}

TEST(Lsdb, ScopeIsEnforced) {
  Lsdb as_db;
  Lsdb area_db(AreaId{1});
  const Lsa router = make_lsa(RouterId{1}, 0, 1, AreaId{1}, RouterLsaBody{});
  const Lsa other_area = make_lsa(RouterId{1}, 0, 1, AreaId{2}, RouterLsaBody{});
  EXPECT_THROW(as_db.install(router), std::invalid_argument);
  EXPECT_THROW(area_db.install(other_area), std::invalid_argument);
  EXPECT_THROW(area_db.install(prefix_lsa(1, 1, 1)), std::invalid_argument);
  EXPECT_EQ(area_db.install(router), InstallResult::kInstalledNew);
  EXPECT_EQ(as_db.install(prefix_lsa(1, 1, 1)), InstallResult::kInstalledNew);
}

TEST(Lsdb, MakeLsaDropsAreaForAsScope) {
  const Lsa lsa = make_lsa(RouterId{1}, 0, 1, AreaId{5}, AbrLsaBody{});
  EXPECT_FALSE(lsa.area.has_value());
  EXPECT_EQ(lsa.key.kind, LsaKind::kAbr);
}

TEST(Lsdb, WithdrawalForms) {
  EXPECT_TRUE(is_withdrawn(PrefixLsaBody{Prefix::parse("10.0.0.0/8"), kInfinity}));
  EXPECT_FALSE(is_withdrawn(PrefixLsaBody{Prefix::parse("10.0.0.0/8"), 3}));
  EXPECT_TRUE(is_withdrawn(AbrLsaBody{}));
  EXPECT_FALSE(is_withdrawn(RouterLsaBody{}));
}

TEST(StandardLsas, FixtureRouterLsaOfR6InArea3) {
  const NetworkSpec& spec = fixture();
  const auto lsas = originate_standard_lsas(spec, by_name(spec, "R6"), AreaId{3});
  ASSERT_EQ(lsas.size(), 1u);
  const auto& body = std::get<RouterLsaBody>(lsas[0].body);
  EXPECT_TRUE(body.b_bit);
  EXPECT_FALSE(body.e_bit);
  EXPECT_EQ(body.links, (std::vector<RouterLink>{{by_name(spec, "R3"), 4}, {by_name(spec, "R4"), 1}}));
  EXPECT_THROW(originate_standard_lsas(spec, by_name(spec, "R6"), AreaId{1}), std::invalid_argument);
}

TEST(StandardLsas, ExternalsOnlyFromAsbrs) {
  const NetworkSpec& spec = fixture();
  EXPECT_TRUE(originate_external_lsas(spec, by_name(spec, "R6")).empty());
  const auto ext = originate_external_lsas(spec, by_name(spec, "R8"));
  ASSERT_EQ(ext.size(), 1u);
  EXPECT_EQ(std::get<AsExternalBody>(ext[0].body).prefix, prefix_named(spec, "ap3"));
}

TEST(StandardLsas, SettledLsdbsGiveIntraAreaDistances) {
  const NetworkSpec& spec = fixture();
  const auto dbs = area_lsdbs_from_spec(spec);
  ASSERT_EQ(dbs.size(), 4u);
  for (const auto& [area, db] : dbs) {
    for (RouterId src : spec.members(area)) {
      const SpfResult a = spf_over_lsdb(db, src);
      const SpfResult b = intra_area_spf(spec, area, src);
      EXPECT_EQ(a.dist, b.dist);
      EXPECT_EQ(a.first_hop, b.first_hop);
    }
  }
  const auto locations = derive_prefix_locations(dbs.at(AreaId{1}));
  ASSERT_EQ(locations.size(), 1u);
  EXPECT_EQ(locations[0].router, by_name(spec, "R1"));
}

TEST(StandardLsas, OneWayLinkIsNotUsed) {
  Lsdb db(AreaId{0});
  RouterLsaBody a;
  a.links = {{RouterId{2}, 1}};
  db.install(make_lsa(RouterId{1}, 0, 1, AreaId{0}, a));
  db.install(make_lsa(RouterId{2}, 0, 1, AreaId{0}, RouterLsaBody{}));
  EXPECT_EQ(spf_over_lsdb(db, RouterId{1}).cost_to(RouterId{2}), kInfinity);
}

TEST(Reconcile, NewChangedAndWithdrawn) {
  const RouterId me{6};
  const Prefix p1 = Prefix::parse("10.0.1.0/24");
  const Prefix p2 = Prefix::parse("10.0.2.0/24");
  const auto managed = {LsaKind::kPrefix};
  OriginatedSet prev;
  auto apply = [&](const std::vector<Lsa>& out) {
    for (const auto& lsa : out) prev[lsa.key] = lsa;
  };

  auto out = reconcile_originations(prev, me, std::nullopt,
                                    {PrefixLsaBody{p2, 1}, PrefixLsaBody{p1, 4}}, managed);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].key.instance, 0u);
  EXPECT_EQ(std::get<PrefixLsaBody>(out[0].body).prefix, p1);
  EXPECT_EQ(out[1].key.instance, 1u);
  apply(out);

  EXPECT_TRUE(reconcile_originations(prev, me, std::nullopt,
                                     {PrefixLsaBody{p1, 4}, PrefixLsaBody{p2, 1}}, managed)
                  .empty());

  out = reconcile_originations(prev, me, std::nullopt, {PrefixLsaBody{p2, 3}}, managed);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].key.instance, 0u);
  EXPECT_EQ(out[0].seq, 2);
  EXPECT_TRUE(is_withdrawn(out[0].body));
  EXPECT_EQ(out[1].seq, 2);
  EXPECT_EQ(std::get<PrefixLsaBody>(out[1].body).metric, 3u);
  apply(out);

  // A returning destination reuses its instance.
  out = reconcile_originations(prev, me, std::nullopt, {PrefixLsaBody{p1, 4}, PrefixLsaBody{p2, 3}},
                               managed);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].key.instance, 0u);
  EXPECT_EQ(out[0].seq, 3);
}

TEST(Reconcile, SingleInstanceKinds) {
  OriginatedSet prev;
  const AbrLsaBody body{{{RouterId{3}, 2}}};
  auto out = reconcile_originations(prev, RouterId{6}, std::nullopt, {body}, {LsaKind::kAbr});
  ASSERT_EQ(out.size(), 1u);
  prev[out[0].key] = out[0];
  out = reconcile_originations(prev, RouterId{6}, std::nullopt, {}, {LsaKind::kAbr});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_TRUE(is_withdrawn(out[0].body));
  EXPECT_EQ(out[0].seq, 2);
  EXPECT_THROW(reconcile_originations({}, RouterId{6}, std::nullopt, {body, body}, {LsaKind::kAbr}),
               std::invalid_argument);
}

// Random desired sets over many rounds: sequence numbers only grow, each destination
// keeps one instance, and the live bodies always equal the desired set.
TEST(Reconcile, RandomSequencesKeepInvariants) {
  std::mt19937_64 rng(42);
  std::vector<Prefix> universe;
  for (int i = 0; i < 8; ++i) universe.push_back(Prefix::parse(fmt::format("10.{}.0.0/16", i)));
  for (int trial = 0; trial < 50; ++trial) {
    OriginatedSet prev;
    std::map<Prefix, std::uint32_t> instance_of;
    for (int round = 0; round < 30; ++round) {
      std::vector<LsaBody> desired;
      std::map<Prefix, Cost> want;
      for (const auto& p : universe) {
        if (rng() % 2) continue;
        const Cost c = static_cast<Cost>(rng() % 4);
        desired.push_back(PrefixLsaBody{p, c});
        want[p] = c;
      }
      const auto out = reconcile_originations(prev, RouterId{1}, std::nullopt, desired,
                                              {LsaKind::kPrefix});
      for (const auto& lsa : out) {
        const auto it = prev.find(lsa.key);
        EXPECT_EQ(lsa.seq, it == prev.end() ? 1 : it->second.seq + 1);
        const Prefix p = std::get<PrefixLsaBody>(lsa.body).prefix;
        const auto [known, fresh] = instance_of.emplace(p, lsa.key.instance);
        EXPECT_EQ(known->second, lsa.key.instance);
        prev[lsa.key] = lsa;
      }
      std::map<Prefix, Cost> live;
      for (const auto& [key, lsa] : prev) {
        if (!is_withdrawn(lsa.body)) {
          const auto& b = std::get<PrefixLsaBody>(lsa.body);
          live[b.prefix] = b.metric;
        }
      }
      EXPECT_EQ(live, want);
    }
  }
}

}  // namespace
}  // namespace area_overlay
