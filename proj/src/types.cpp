#include "area_overlay/types.hpp"

#include <arpa/inet.h>

#include <charconv>
#include <fmt/format.h>

namespace area_overlay {

std::string_view to_string(AddressFamily family) {
  return family == AddressFamily::kV4 ? "v4" : "v6";
}

Prefix::Prefix(AddressFamily family, const std::array<std::uint8_t, 16>& address,
               std::uint8_t length)
    : family_(family), address_(address), length_(length) {
  if (length_ > max_length()) {
    throw std::invalid_argument(fmt::format("prefix length {} out of range", length_));
  }
  for (std::size_t bit = length_; bit < 128; ++bit) {
    if (address_[bit / 8] & (0x80u >> (bit % 8))) {
      throw std::invalid_argument("prefix has host bits set beyond its length");
    }
  }
}

Prefix Prefix::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    throw std::invalid_argument(fmt::format("prefix '{}' lacks '/length'", text));
  }
  const std::string addr(text.substr(0, slash));
  const std::string_view len_text = text.substr(slash + 1);
  unsigned len = 0;
  const auto [ptr, ec] = std::from_chars(len_text.data(), len_text.data() + len_text.size(), len);
  if (ec != std::errc{} || ptr != len_text.data() + len_text.size()) {
    throw std::invalid_argument(fmt::format("bad prefix length in '{}'", text));
  }
  std::array<std::uint8_t, 16> bytes{};
  AddressFamily family = AddressFamily::kV4;
  if (addr.find(':') != std::string::npos) {
    family = AddressFamily::kV6;
    if (inet_pton(AF_INET6, addr.c_str(), bytes.data()) != 1) {
      throw std::invalid_argument(fmt::format("bad IPv6 address in '{}'", text));
    }
  } else if (inet_pton(AF_INET, addr.c_str(), bytes.data()) != 1) {
    throw std::invalid_argument(fmt::format("bad IPv4 address in '{}'", text));
  }
  if (len > (family == AddressFamily::kV4 ? 32u : 128u)) {
    throw std::invalid_argument(fmt::format("prefix length out of range in '{}'", text));
  }
  return Prefix(family, bytes, static_cast<std::uint8_t>(len));
}

std::string Prefix::to_string() const {
  char buf[INET6_ADDRSTRLEN] = {};
  inet_ntop(family_ == AddressFamily::kV4 ? AF_INET : AF_INET6, address_.data(), buf,
            sizeof(buf));
  return fmt::format("{}/{}", buf, length_);
}

std::string to_string(RouterId id) {
  const auto v = id.value;
  return fmt::format("{}.{}.{}.{}", v >> 24, (v >> 16) & 0xFF, (v >> 8) & 0xFF, v & 0xFF);
}

std::string to_string(AreaId id) { return std::to_string(id.value); }

RouterId parse_router_id(std::string_view text) {
  auto parse_u32 = [&](std::string_view part, std::uint64_t limit) {
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
    if (part.empty() || ec != std::errc{} || ptr != part.data() + part.size() || value > limit) {
      throw std::invalid_argument(fmt::format("bad router id '{}'", text));
    }
    return static_cast<std::uint32_t>(value);
  };
  if (text.find('.') == std::string_view::npos) {
    return RouterId{parse_u32(text, 0xFFFFFFFFu)};
  }
  std::uint32_t value = 0;
  int parts = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto dot = text.find('.', start);
    const auto end = dot == std::string_view::npos ? text.size() : dot;
    value = (value << 8) | parse_u32(text.substr(start, end - start), 255);
    ++parts;
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  if (parts != 4) throw std::invalid_argument(fmt::format("bad router id '{}'", text));
  return RouterId{value};
}

}  // namespace area_overlay
