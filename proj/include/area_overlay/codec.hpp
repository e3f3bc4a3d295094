#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "area_overlay/overlay.hpp"

namespace area_overlay {

enum class OspfVersion { kV2, kV3 };

std::string_view to_string(OspfVersion v);

using Bytes = std::vector<std::uint8_t>;

inline constexpr std::size_t kLsaHeaderSize = 20;
inline constexpr std::uint8_t kOpaqueLsType = 11;
inline constexpr std::uint8_t kOpaqueTypeAbr = 128;
inline constexpr std::uint8_t kOpaqueTypePrefix = 129;
inline constexpr std::uint8_t kOpaqueTypeAsbr = 130;
inline constexpr std::uint16_t kFunctionCodeAbr = 0x1F80;
inline constexpr std::uint16_t kFunctionCodePrefix = 0x1F81;
inline constexpr std::uint16_t kFunctionCodeAsbr = 0x1F82;
inline constexpr std::uint16_t kV3ScopeBits = 0xC000;  // U = 1, S2 S1 = 1 0 (AS scope)
inline constexpr std::uint8_t kV2Options = 0x40;       // O-bit
inline constexpr std::uint32_t kMaxMetric = 0xFFFFFF;

/// Thrown when an LSA cannot be put on the wire (metric overflow, family mismatch, ...).
class EncodeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Structured decode failure. `index` names the offending LSA inside a sync message.
class DecodeError : public std::runtime_error {
 public:
  explicit DecodeError(const std::string& what, std::optional<std::size_t> index = std::nullopt)
      : std::runtime_error(what), index_(index) {}
  std::optional<std::size_t> index() const { return index_; }

 private:
  std::optional<std::size_t> index_;
};

/// Encodes an ABR-, Prefix- or ASBR-LSA. v2 carries IPv4 prefixes, v3 IPv6 prefixes.
Bytes encode_lsa(const Lsa& lsa, OspfVersion version);

/// Exact inverse of encode_lsa. `bytes` must hold exactly one LSA.
Lsa decode_lsa(std::span<const std::uint8_t> bytes, OspfVersion version);

/// Decodes back-to-back LSAs, each delimited by its header length field.
std::vector<Lsa> decode_lsa_stream(std::span<const std::uint8_t> bytes, OspfVersion version);

using SyncMessage = std::variant<OverlayRequest, OverlayResponse>;

inline constexpr std::uint8_t kSyncRequestTag = 1;
inline constexpr std::uint8_t kSyncResponseTag = 2;

/// 1-byte kind tag, 2-byte LSA count, then the encoded LSAs.
Bytes encode_sync(const SyncMessage& message, OspfVersion version);
SyncMessage decode_sync(std::span<const std::uint8_t> bytes, OspfVersion version);

std::string to_hex(std::span<const std::uint8_t> bytes);

/// Parses hex digits; whitespace and '#' comments are skipped.
Bytes from_hex(std::string_view text);

/// Text form used by the command-line tool. Router names come from `names` when given.
///
///   abr-lsa origin R6 instance 0 seq 1
///   neighbor R3 metric 2
std::string format_lsa(const Lsa& lsa, const NetworkSpec* names = nullptr);

/// Inverse of format_lsa over one or more LSAs; throws std::invalid_argument.
std::vector<Lsa> parse_lsa_text(std::string_view text, const NetworkSpec* names = nullptr);

}  // namespace area_overlay
