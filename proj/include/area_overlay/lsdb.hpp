#pragma once

#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "area_overlay/topo.hpp"
#include "area_overlay/types.hpp"

namespace area_overlay {

// Order matches the LsaBody variant alternatives.
enum class LsaKind : std::uint8_t {
  kRouter,
  kIntraAreaPrefix,
  kSummaryPrefix,  // Network-Summary-LSA (v2) / Inter-Area-Prefix-LSA (v3)
  kSummaryRouter,  // ASBR-Summary-LSA (v2) / Inter-Area-Router-LSA (v3)
  kAsExternal,
  kAbr,
  kPrefix,
  kAsbr,
};

std::string_view to_string(LsaKind kind);

constexpr bool is_as_scope(LsaKind kind) {
  return kind == LsaKind::kAsExternal || kind == LsaKind::kAbr || kind == LsaKind::kPrefix ||
         kind == LsaKind::kAsbr;
}

constexpr bool is_overlay(LsaKind kind) {
  return kind == LsaKind::kAbr || kind == LsaKind::kPrefix || kind == LsaKind::kAsbr;
}

struct LsaKey {
  LsaKind kind = LsaKind::kRouter;
  RouterId origin;
  std::uint32_t instance = 0;

  friend auto operator<=>(const LsaKey&, const LsaKey&) = default;
};

struct RouterLink {
  RouterId neighbor;
  Cost cost = 0;

  friend bool operator==(const RouterLink&, const RouterLink&) = default;
};

struct PrefixCost {
  Prefix prefix;
  Cost cost = 0;

  friend bool operator==(const PrefixCost&, const PrefixCost&) = default;
};

struct RouterLsaBody {
  bool b_bit = false;  // originator is an ABR
  bool e_bit = false;  // originator is an ASBR
  std::vector<RouterLink> links;
  std::vector<PrefixCost> stub_prefixes;  // v4 only

  friend bool operator==(const RouterLsaBody&, const RouterLsaBody&) = default;
};

struct IntraAreaPrefixBody {
  RouterId attaches_to;
  std::vector<PrefixCost> prefixes;

  friend bool operator==(const IntraAreaPrefixBody&, const IntraAreaPrefixBody&) = default;
};

struct SummaryPrefixBody {
  Prefix destination;
  Cost metric = 0;

  friend bool operator==(const SummaryPrefixBody&, const SummaryPrefixBody&) = default;
};

struct SummaryRouterBody {
  RouterId destination;
  Cost metric = 0;

  friend bool operator==(const SummaryRouterBody&, const SummaryRouterBody&) = default;
};

struct AsExternalBody {
  Prefix prefix;
  Cost metric = 0;

  friend bool operator==(const AsExternalBody&, const AsExternalBody&) = default;
};

/// Overlay topology: neighbors sorted by id, metric = lowest intra-area cost.
struct AbrLsaBody {
  std::vector<RouterLink> neighbors;

  friend bool operator==(const AbrLsaBody&, const AbrLsaBody&) = default;
};

struct PrefixLsaBody {
  Prefix prefix;
  Cost metric = 0;

  friend bool operator==(const PrefixLsaBody&, const PrefixLsaBody&) = default;
};

struct AsbrLsaBody {
  RouterId asbr;
  Cost metric = 0;

  friend bool operator==(const AsbrLsaBody&, const AsbrLsaBody&) = default;
};

using LsaBody = std::variant<RouterLsaBody, IntraAreaPrefixBody, SummaryPrefixBody,
                             SummaryRouterBody, AsExternalBody, AbrLsaBody, PrefixLsaBody,
                             AsbrLsaBody>;

constexpr LsaKind kind_of(const LsaBody& body) { return static_cast<LsaKind>(body.index()); }

struct Lsa {
  LsaKey key;
  std::int32_t seq = 1;
  std::optional<AreaId> area;  // absent for AS-scope kinds
  LsaBody body;

  friend bool operator==(const Lsa&, const Lsa&) = default;
};

/// Builds an LSA whose key kind and scope agree with its body.
Lsa make_lsa(RouterId origin, std::uint32_t instance, std::int32_t seq,
             std::optional<AreaId> area, LsaBody body);

/// The destination a multi-instance LSA describes; nullopt for single-instance kinds.
std::optional<Destination> destination_of(const LsaBody& body);

/// True for an infinity-metric withdrawal or an emptied single-instance body.
bool is_withdrawn(const LsaBody& body);

enum class InstallResult { kInstalledNew, kRefreshed, kIgnoredStale };

std::string_view to_string(InstallResult r);

/// Link-state database for one flooding scope (an area, or the whole AS).
class Lsdb {
 public:
  explicit Lsdb(std::optional<AreaId> area = std::nullopt) : area_(area) {}

  /// Newness rule: replace only on a strictly higher sequence number.
  /// Throws std::invalid_argument when the LSA's scope differs from this database's.
  InstallResult install(const Lsa& lsa);

  const Lsa* find(const LsaKey& key) const;
  const std::map<LsaKey, Lsa>& entries() const { return entries_; }
  std::optional<AreaId> area() const { return area_; }
  bool as_scope() const { return !area_.has_value(); }
  std::size_t size() const { return entries_.size(); }
  void clear() { entries_.clear(); }

  template <typename Body, typename Fn>
  void for_each(Fn&& fn) const {
    for (const auto& [key, lsa] : entries_) {
      if (const auto* body = std::get_if<Body>(&lsa.body)) fn(lsa, *body);
    }
  }

  friend bool operator==(const Lsdb&, const Lsdb&) = default;

 private:
  std::optional<AreaId> area_;
  std::map<LsaKey, Lsa> entries_;
};

/// Router-LSA (and, in v6 mode, Intra-Area-Prefix-LSA) for `router` in `area`, seq 1.
std::vector<Lsa> originate_standard_lsas(const NetworkSpec& spec, RouterId router, AreaId area);

/// AS-External-LSAs of an ASBR, seq 1; empty for routers without the asbr flag.
std::vector<Lsa> originate_external_lsas(const NetworkSpec& spec, RouterId router);

struct PrefixLocation {
  Prefix prefix;
  RouterId router;
  Cost stub_cost = 0;

  friend auto operator<=>(const PrefixLocation&, const PrefixLocation&) = default;
};

/// Every prefix advertised in an area LSDB with the router it attaches to.
std::vector<PrefixLocation> derive_prefix_locations(const Lsdb& area_lsdb);

/// SPF over the Router-LSAs of an area LSDB; links count only when both ends list each other.
SpfResult spf_over_lsdb(const Lsdb& area_lsdb, RouterId source);

/// Area LSDBs as they stand once flooding has settled on `spec`.
std::map<AreaId, Lsdb> area_lsdbs_from_spec(const NetworkSpec& spec);

/// AS-scope LSDB holding the AS-External-LSAs of `spec`.
Lsdb external_lsdb_from_spec(const NetworkSpec& spec);

/// Latest version of every LSA a router originated in one scope.
using OriginatedSet = std::map<LsaKey, Lsa>;

/// Compares the desired bodies of the `managed` kinds against what was originated
/// before and returns only the LSAs that must be (re)flooded: new keys start at seq 1,
/// changed bodies bump seq, vanished destinations are re-originated withdrawn.
/// Multi-instance kinds keep their instance id per destination; new destinations
/// take the smallest unused id, in destination order.
std::vector<Lsa> reconcile_originations(const OriginatedSet& prev, RouterId origin,
                                        std::optional<AreaId> area,
                                        const std::vector<LsaBody>& desired,
                                        std::initializer_list<LsaKind> managed);

}  // namespace area_overlay
