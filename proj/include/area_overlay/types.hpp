#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace area_overlay {

/// 32-bit router identifier, printed as a dotted quad.
struct RouterId {
  std::uint32_t value = 0;

  friend constexpr auto operator<=>(const RouterId&, const RouterId&) = default;
};

struct AreaId {
  std::uint32_t value = 0;

  friend constexpr auto operator<=>(const AreaId&, const AreaId&) = default;
};

/// Link and path metric. Path costs saturate at kInfinity (OSPF LSInfinity).
using Cost = std::uint32_t;

inline constexpr Cost kInfinity = 0xFFFFFF;
inline constexpr Cost kMaxLinkCost = kInfinity - 1;

constexpr Cost add_cost(Cost a, Cost b) {
  if (a >= kInfinity || b >= kInfinity) return kInfinity;
  const std::uint64_t sum = std::uint64_t{a} + b;
  return sum >= kInfinity ? kInfinity : static_cast<Cost>(sum);
}

enum class AddressFamily : std::uint8_t { kV4, kV6 };

std::string_view to_string(AddressFamily family);

/// An IPv4 or IPv6 prefix. Host bits beyond `length` are always zero.
class Prefix {
 public:
  Prefix() = default;
  Prefix(AddressFamily family, const std::array<std::uint8_t, 16>& address,
         std::uint8_t length);

  /// Parses "10.0.1.0/24" or "2001:db8::/32". Rejects set host bits.
  static Prefix parse(std::string_view text);

  AddressFamily family() const { return family_; }
  std::uint8_t length() const { return length_; }
  const std::array<std::uint8_t, 16>& address() const { return address_; }
  std::size_t address_bytes() const { return family_ == AddressFamily::kV4 ? 4 : 16; }
  std::uint8_t max_length() const { return family_ == AddressFamily::kV4 ? 32 : 128; }

  std::string to_string() const;

  friend auto operator<=>(const Prefix&, const Prefix&) = default;

 private:
  AddressFamily family_ = AddressFamily::kV4;
  std::array<std::uint8_t, 16> address_{};
  std::uint8_t length_ = 0;
};

/// Inter-area destination: an address prefix or an ASBR.
using Destination = std::variant<Prefix, RouterId>;

std::string to_string(RouterId id);
std::string to_string(AreaId id);

/// Accepts dotted-quad or plain decimal.
RouterId parse_router_id(std::string_view text);

}  // namespace area_overlay
