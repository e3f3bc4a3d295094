#include "area_overlay/codec.hpp"

#include <algorithm>
#include <bit>
#include <climits>
#include <cctype>
#include <charconv>
#include <sstream>

#include <fmt/format.h>

namespace area_overlay {

std::string_view to_string(OspfVersion v) { return v == OspfVersion::kV2 ? "v2" : "v3"; }

namespace {

class Writer {
 public:
  void u8(std::uint32_t v) { out_.push_back(static_cast<std::uint8_t>(v)); }
  void u16(std::uint32_t v) {
    u8(v >> 8);
    u8(v);
  }
  void u24(std::uint32_t v) {
    u8(v >> 16);
    u16(v & 0xFFFF);
  }
  void u32(std::uint32_t v) {
    u16(v >> 16);
    u16(v & 0xFFFF);
  }
  void bytes(const std::uint8_t* p, std::size_t n) { out_.insert(out_.end(), p, p + n); }
  void patch_u16(std::size_t at, std::uint32_t v) {
    out_[at] = static_cast<std::uint8_t>(v >> 8);
    out_[at + 1] = static_cast<std::uint8_t>(v);
  }
  std::size_t size() const { return out_.size(); }
  Bytes take() { return std::move(out_); }

 private:
  Bytes out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::uint32_t u8() {
    need(1);
    return in_[pos_++];
  }
  std::uint32_t u16() {
    const auto hi = u8();
    return (hi << 8) | u8();
  }
  std::uint32_t u24() {
    const auto hi = u8();
    return (hi << 16) | u16();
  }
  std::uint32_t u32() {
    const auto hi = u16();
    return (hi << 16) | u16();
  }
  void read(std::uint8_t* dst, std::size_t n) {
    need(n);
    std::copy_n(in_.begin() + static_cast<std::ptrdiff_t>(pos_), n, dst);
    pos_ += n;
  }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (remaining() < n) throw DecodeError("truncated LSA");
  }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

std::uint32_t checked_metric(Cost metric) {
  if (metric > kMaxMetric) throw EncodeError(fmt::format("metric {} exceeds 24 bits", metric));
  return metric;
}

void write_metric_field(Writer& w, Cost metric) {
  w.u8(0);
  w.u24(checked_metric(metric));
}

Cost read_metric_field(Reader& r) {
  if (r.u8() != 0) throw DecodeError("reserved byte is nonzero");
  return r.u24();
}

RouterId read_router(Reader& r, std::string_view what) {
  const RouterId id{r.u32()};
  if (id.value == 0) throw DecodeError(fmt::format("{} router id is zero", what));
  return id;
}

void write_prefix(Writer& w, const Prefix& p, OspfVersion version) {
  const auto want = version == OspfVersion::kV2 ? AddressFamily::kV4 : AddressFamily::kV6;
  if (p.family() != want) {
    throw EncodeError(fmt::format("{} Prefix-LSAs carry {} prefixes, got {}", to_string(version),
                                  to_string(want), p.to_string()));
  }
  if (version == OspfVersion::kV2) {
    w.bytes(p.address().data(), 4);
    const std::uint32_t mask = p.length() == 0 ? 0 : ~std::uint32_t{0} << (32 - p.length());
    w.u32(mask);
  } else {
    w.u8(p.length());
    w.u8(0);  // prefix options
    w.u16(0);
    w.bytes(p.address().data(), (p.length() + 31u) / 32u * 4u);
  }
}

Prefix read_prefix(Reader& r, OspfVersion version) {
  std::array<std::uint8_t, 16> addr{};
  std::uint32_t length = 0;
  AddressFamily family = AddressFamily::kV4;
  if (version == OspfVersion::kV2) {
    r.read(addr.data(), 4);
    const std::uint32_t mask = r.u32();
    length = static_cast<std::uint32_t>(std::countl_one(mask));
    if (length < 32 && (mask << length) != 0) throw DecodeError("mask is not contiguous");
  } else {
    family = AddressFamily::kV6;
    length = r.u8();
    if (length > 128) throw DecodeError(fmt::format("prefix length {} exceeds 128", length));
    if (r.u8() != 0) throw DecodeError("prefix options are not supported");
    if (r.u16() != 0) throw DecodeError("reserved field is nonzero");
    r.read(addr.data(), (length + 31u) / 32u * 4u);
  }
  try {
    return Prefix(family, addr, static_cast<std::uint8_t>(length));
  } catch (const std::invalid_argument&) {
    throw DecodeError("prefix has host bits set");
  }
}

struct KindCodes {
  LsaKind kind;
  std::uint8_t opaque_type;
  std::uint16_t function_code;
};

constexpr KindCodes kCodes[] = {
    {LsaKind::kAbr, kOpaqueTypeAbr, kFunctionCodeAbr},
    {LsaKind::kPrefix, kOpaqueTypePrefix, kFunctionCodePrefix},
    {LsaKind::kAsbr, kOpaqueTypeAsbr, kFunctionCodeAsbr},
};

const KindCodes& codes_for(LsaKind kind) {
  for (const auto& c : kCodes) {
    if (c.kind == kind) return c;
  }
  throw EncodeError(fmt::format("{} is not an overlay LSA", to_string(kind)));
}

/// Decodes one LSA starting at the front of `bytes`; returns it with its length.
std::pair<Lsa, std::size_t> decode_one(std::span<const std::uint8_t> bytes, OspfVersion version) {
  if (bytes.size() < kLsaHeaderSize) throw DecodeError("truncated LSA header");
  Reader h(bytes.first(kLsaHeaderSize));
  h.u16();  // LS age
  LsaKind kind{};
  std::uint32_t instance = 0;
  if (version == OspfVersion::kV2) {
    h.u8();  // options
    const auto ls_type = h.u8();
    if (ls_type == 9 || ls_type == 10) {
      throw DecodeError(fmt::format("LS type {} is not AS-scope; overlay LSAs use type 11", ls_type));
    }
    if (ls_type != kOpaqueLsType) throw DecodeError(fmt::format("LS type {} is not opaque", ls_type));
    const auto opaque_type = h.u8();
    instance = h.u24();
    const auto* it = std::find_if(std::begin(kCodes), std::end(kCodes),
                                  [&](const KindCodes& c) { return c.opaque_type == opaque_type; });
    if (it == std::end(kCodes)) throw DecodeError(fmt::format("unknown opaque type {}", opaque_type));
    kind = it->kind;
  } else {
    const auto ls_type = h.u16();
    if ((ls_type & 0xE000) != kV3ScopeBits) {
      throw DecodeError(fmt::format("LS type {:#06x} does not have U=1, S2S1=10", ls_type));
    }
    const std::uint16_t fc = ls_type & 0x1FFF;
    const auto* it = std::find_if(std::begin(kCodes), std::end(kCodes),
                                  [&](const KindCodes& c) { return c.function_code == fc; });
    if (it == std::end(kCodes)) throw DecodeError(fmt::format("unknown function code {:#06x}", fc));
    kind = it->kind;
    instance = h.u32();
  }
  const RouterId origin = read_router(h, "advertising");
  const auto seq = static_cast<std::int32_t>(h.u32());
  h.u16();  // checksum
  const std::size_t length = h.u16();
  if (length < kLsaHeaderSize) throw DecodeError(fmt::format("length field {} is below 20", length));
  if (length > bytes.size()) throw DecodeError("truncated LSA body");

  Reader r(bytes.subspan(kLsaHeaderSize, length - kLsaHeaderSize));
  LsaBody body;
  switch (kind) {
    case LsaKind::kAbr: {
      if (r.remaining() % 8 != 0) throw DecodeError("ABR-LSA body is not a multiple of 8 bytes");
      AbrLsaBody abr;
      while (r.remaining() > 0) {
        const RouterId n = read_router(r, "neighbor");
        if (!abr.neighbors.empty() && !(abr.neighbors.back().neighbor < n)) {
          throw DecodeError("ABR-LSA neighbors are not in ascending order");
        }
        abr.neighbors.push_back(RouterLink{n, read_metric_field(r)});
      }
      body = std::move(abr);
      break;
    }
    case LsaKind::kPrefix: {
      const Cost metric = read_metric_field(r);
      body = PrefixLsaBody{read_prefix(r, version), metric};
      break;
    }
    default: {
      const RouterId asbr = read_router(r, "destination");
      body = AsbrLsaBody{asbr, read_metric_field(r)};
      break;
    }
  }
  if (r.remaining() != 0) throw DecodeError("length field exceeds the LSA body");
  return {make_lsa(origin, instance, seq, std::nullopt, std::move(body)), length};
}

}  // namespace

Bytes encode_lsa(const Lsa& lsa, OspfVersion version) {
  const KindCodes& codes = codes_for(lsa.key.kind);
  if (lsa.area) throw EncodeError("overlay LSAs have AS scope");
  if (kind_of(lsa.body) != lsa.key.kind) throw EncodeError("LSA key and body disagree");
  Writer w;
  w.u16(0);  // LS age
  if (version == OspfVersion::kV2) {
    if (lsa.key.instance > 0xFFFFFF) throw EncodeError("opaque id exceeds 24 bits");
    w.u8(kV2Options);
    w.u8(kOpaqueLsType);
    w.u8(codes.opaque_type);
    w.u24(lsa.key.instance);
  } else {
    w.u16(kV3ScopeBits | codes.function_code);
    w.u32(lsa.key.instance);
  }
  w.u32(lsa.key.origin.value);
  w.u32(static_cast<std::uint32_t>(lsa.seq));
  w.u16(0);  // checksum
  const std::size_t length_at = w.size();
  w.u16(0);

  std::visit(
      [&](const auto& body) {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, AbrLsaBody>) {
          for (std::size_t i = 0; i < body.neighbors.size(); ++i) {
            const auto& n = body.neighbors[i];
            if (i > 0 && !(body.neighbors[i - 1].neighbor < n.neighbor)) {
              throw EncodeError("ABR-LSA neighbors must be strictly ascending");
            }
            w.u32(n.neighbor.value);
            write_metric_field(w, n.cost);
          }
        } else if constexpr (std::is_same_v<T, PrefixLsaBody>) {
          write_metric_field(w, body.metric);
          write_prefix(w, body.prefix, version);
        } else if constexpr (std::is_same_v<T, AsbrLsaBody>) {
          w.u32(body.asbr.value);
          write_metric_field(w, body.metric);
        }
      },
      lsa.body);
  if (w.size() > 0xFFFF) throw EncodeError("LSA exceeds 65535 bytes");
  w.patch_u16(length_at, static_cast<std::uint32_t>(w.size()));
  return w.take();
}

Lsa decode_lsa(std::span<const std::uint8_t> bytes, OspfVersion version) {
  auto [lsa, length] = decode_one(bytes, version);
  if (length != bytes.size()) {
    throw DecodeError(fmt::format("{} trailing bytes after the LSA", bytes.size() - length));
  }
  return lsa;
}

std::vector<Lsa> decode_lsa_stream(std::span<const std::uint8_t> bytes, OspfVersion version) {
  std::vector<Lsa> out;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    try {
      auto [lsa, length] = decode_one(bytes.subspan(pos), version);
      out.push_back(std::move(lsa));
      pos += length;
    } catch (const DecodeError& e) {
      throw DecodeError(fmt::format("LSA #{}: {}", out.size(), e.what()), out.size());
    }
  }
  return out;
}

Bytes encode_sync(const SyncMessage& message, OspfVersion version) {
  const auto& lsas = std::visit([](const auto& m) -> const std::vector<Lsa>& { return m.lsas; },
                                message);
  if (lsas.size() > 0xFFFF) throw EncodeError("sync message holds more than 65535 LSAs");
  Writer w;
  w.u8(std::holds_alternative<OverlayRequest>(message) ? kSyncRequestTag : kSyncResponseTag);
  w.u16(static_cast<std::uint32_t>(lsas.size()));
  Bytes out = w.take();
  for (const auto& lsa : lsas) {
    const Bytes one = encode_lsa(lsa, version);
    out.insert(out.end(), one.begin(), one.end());
  }
  return out;
}

SyncMessage decode_sync(std::span<const std::uint8_t> bytes, OspfVersion version) {
  if (bytes.size() < 3) throw DecodeError("truncated sync message");
  const auto tag = bytes[0];
  if (tag != kSyncRequestTag && tag != kSyncResponseTag) {
    throw DecodeError(fmt::format("unknown sync message kind {}", tag));
  }
  const std::size_t count = (std::size_t{bytes[1]} << 8) | bytes[2];
  std::vector<Lsa> lsas;
  std::size_t pos = 3;
  while (pos < bytes.size()) {
    if (lsas.size() == count) {
      throw DecodeError(fmt::format("sync message declares {} LSAs but carries more", count));
    }
    try {
      auto [lsa, length] = decode_one(bytes.subspan(pos), version);
      lsas.push_back(std::move(lsa));
      pos += length;
    } catch (const DecodeError& e) {
      throw DecodeError(fmt::format("LSA #{}: {}", lsas.size(), e.what()), lsas.size());
    }
  }
  if (lsas.size() != count) {
    throw DecodeError(
        fmt::format("sync message declares {} LSAs but carries {}", count, lsas.size()));
  }
  if (tag == kSyncRequestTag) return OverlayRequest{std::move(lsas)};
  return OverlayResponse{std::move(lsas)};
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  std::string out;
  out.reserve(bytes.size() * 2);
  for (const auto b : bytes) out += fmt::format("{:02x}", b);
  return out;
}

Bytes from_hex(std::string_view text) {
  Bytes out;
  int pending = -1;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    int v = 0;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
    else throw std::invalid_argument(fmt::format("invalid hex character '{}'", c));
    if (pending < 0) {
      pending = v;
    } else {
      out.push_back(static_cast<std::uint8_t>(pending << 4 | v));
      pending = -1;
    }
  }
  if (pending >= 0) throw std::invalid_argument("odd number of hex digits");
  return out;
}

namespace {

std::string router_label(RouterId id, const NetworkSpec* names) {
  return names ? names->router_name(id) : to_string(id);
}

RouterId parse_router_label(std::string_view word, const NetworkSpec* names) {
  if (names) {
    if (const auto id = names->find_router(word)) return *id;
  }
  return parse_router_id(word);
}

std::uint32_t parse_uint(std::string_view word) {
  std::uint32_t v = 0;
  const auto [p, ec] = std::from_chars(word.data(), word.data() + word.size(), v);
  if (ec != std::errc{} || p != word.data() + word.size()) {
    throw std::invalid_argument(fmt::format("expected a number, got '{}'", word));
  }
  return v;
}

}  // namespace

std::string format_lsa(const Lsa& lsa, const NetworkSpec* names) {
  std::string out = fmt::format("{} origin {} instance {} seq {}\n", to_string(lsa.key.kind),
                                router_label(lsa.key.origin, names), lsa.key.instance, lsa.seq);
  std::visit(
      [&](const auto& body) {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, AbrLsaBody>) {
          for (const auto& n : body.neighbors) {
            out += fmt::format("neighbor {} metric {}\n", router_label(n.neighbor, names), n.cost);
          }
        } else if constexpr (std::is_same_v<T, PrefixLsaBody>) {
          out += fmt::format("prefix {} metric {}\n", body.prefix.to_string(), body.metric);
        } else if constexpr (std::is_same_v<T, AsbrLsaBody>) {
          out += fmt::format("asbr {} metric {}\n", router_label(body.asbr, names), body.metric);
        } else {
          throw std::invalid_argument("only overlay LSAs have a text form");
        }
      },
      lsa.body);
  return out;
}

std::vector<Lsa> parse_lsa_text(std::string_view text, const NetworkSpec* names) {
  std::vector<Lsa> out;
  std::optional<LsaKind> kind;
  RouterId origin;
  std::uint32_t instance = 0;
  std::int32_t seq = 1;
  AbrLsaBody abr;
  std::optional<LsaBody> single;

  auto flush = [&] {
    if (!kind) return;
    if (*kind == LsaKind::kAbr) {
      out.push_back(make_lsa(origin, instance, seq, std::nullopt, abr));
    } else {
      if (!single) throw std::invalid_argument(fmt::format("{} has no body line", to_string(*kind)));
      out.push_back(make_lsa(origin, instance, seq, std::nullopt, *single));
    }
    kind.reset();
    abr = {};
    single.reset();
  };

  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<std::string> w;
    for (std::string word; ls >> word;) w.push_back(word);
    if (w.empty()) continue;
    if (w[0] == "abr-lsa" || w[0] == "prefix-lsa" || w[0] == "asbr-lsa") {
      flush();
      if (w.size() != 7 || w[1] != "origin" || w[3] != "instance" || w[5] != "seq") {
        throw std::invalid_argument("usage: <kind> origin <router> instance <n> seq <n>");
      }
      kind = w[0] == "abr-lsa" ? LsaKind::kAbr
             : w[0] == "prefix-lsa" ? LsaKind::kPrefix
                                    : LsaKind::kAsbr;
      origin = parse_router_label(w[2], names);
      instance = parse_uint(w[4]);
      std::int64_t s = 0;
      const auto [p, ec] = std::from_chars(w[6].data(), w[6].data() + w[6].size(), s);
      if (ec != std::errc{} || p != w[6].data() + w[6].size() || s < INT32_MIN || s > INT32_MAX) {
        throw std::invalid_argument(fmt::format("bad sequence number '{}'", w[6]));
      }
      seq = static_cast<std::int32_t>(s);
      continue;
    }
    if (!kind) throw std::invalid_argument(fmt::format("'{}' before any LSA header", w[0]));
    if (w.size() != 4 || w[2] != "metric") {
      throw std::invalid_argument(fmt::format("usage: {} <value> metric <m>", w[0]));
    }
    const Cost metric = parse_uint(w[3]);
    if (w[0] == "neighbor" && *kind == LsaKind::kAbr) {
      abr.neighbors.push_back(RouterLink{parse_router_label(w[1], names), metric});
    } else if (w[0] == "prefix" && *kind == LsaKind::kPrefix && !single) {
      single = PrefixLsaBody{Prefix::parse(w[1]), metric};
    } else if (w[0] == "asbr" && *kind == LsaKind::kAsbr && !single) {
      single = AsbrLsaBody{parse_router_label(w[1], names), metric};
    } else {
      throw std::invalid_argument(fmt::format("unexpected '{}' line", w[0]));
    }
  }
  flush();
  return out;
}

}  // namespace area_overlay
