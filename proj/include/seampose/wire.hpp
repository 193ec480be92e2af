#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <deque>
#include <optional>
#include <vector>

#include "seampose/signal.hpp"

namespace seampose {

// Wire frame, 49 bytes, little-endian:
//   magic 0x5E 0xA9 | version u8 | seq u32 | t_us u64 | ch[8] u32 | crc16 u16
// CRC16-CCITT (poly 0x1021, init 0xFFFF) over the preceding 47 bytes.
inline constexpr size_t kWireFrameSize = 49;
inline constexpr uint8_t kWireMagic0 = 0x5E;
inline constexpr uint8_t kWireMagic1 = 0xA9;
inline constexpr uint8_t kWireVersion = 1;

inline uint16_t crc16_ccitt(const uint8_t* data, size_t n) {
  uint16_t crc = 0xFFFF;
  for (size_t i = 0; i < n; ++i) {
    crc ^= static_cast<uint16_t>(data[i]) << 8;
    for (int b = 0; b < 8; ++b)
      crc = (crc & 0x8000) ? static_cast<uint16_t>((crc << 1) ^ 0x1021)
                           : static_cast<uint16_t>(crc << 1);
  }
  return crc;
}

namespace wire {

inline void put_u32(uint8_t* p, uint32_t v) {
  p[0] = static_cast<uint8_t>(v);
  p[1] = static_cast<uint8_t>(v >> 8);
  p[2] = static_cast<uint8_t>(v >> 16);
  p[3] = static_cast<uint8_t>(v >> 24);
}
inline void put_u64(uint8_t* p, uint64_t v) {
  for (int i = 0; i < 8; ++i) p[i] = static_cast<uint8_t>(v >> (8 * i));
}
inline uint32_t get_u32(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | static_cast<uint32_t>(p[1]) << 8 |
         static_cast<uint32_t>(p[2]) << 16 | static_cast<uint32_t>(p[3]) << 24;
}
inline uint64_t get_u64(const uint8_t* p) {
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(p[i]) << (8 * i);
  return v;
}

}  // namespace wire

inline std::array<uint8_t, kWireFrameSize> encode_frame(const CapFrame& f) {
  for (uint32_t c : f.ch)
    if (c > kMaxCode) throw RangeViolation("encode_frame: code exceeds 28-bit range");
  std::array<uint8_t, kWireFrameSize> out{};
  out[0] = kWireMagic0;
  out[1] = kWireMagic1;
  out[2] = kWireVersion;
  wire::put_u32(&out[3], f.seq);
  wire::put_u64(&out[7], f.t_us);
  for (int c = 0; c < kChannels; ++c) wire::put_u32(&out[15 + 4 * c], f.ch[c]);
  const uint16_t crc = crc16_ccitt(out.data(), 47);
  out[47] = static_cast<uint8_t>(crc);
  out[48] = static_cast<uint8_t>(crc >> 8);
  return out;
}

enum class WireError : int { BadMagic = 0, BadVersion, CrcMismatch, RangeViolation };

/// Streaming decoder: scans for magic, validates version, CRC, and code
/// range, and resynchronizes one byte at a time after corruption. Never
/// fails unrecoverably on arbitrary input.
class FrameDecoder {
 public:
  void feed(const uint8_t* data, size_t n) { buf_.insert(buf_.end(), data, data + n); }

  std::optional<CapFrame> next() {
    while (buf_.size() - pos_ >= kWireFrameSize) {
      const uint8_t* p = buf_.data() + pos_;
      if (p[0] != kWireMagic0 || p[1] != kWireMagic1) {
        ++pos_;
        ++bad_magic_bytes_;
        compact();
        continue;
      }
      if (p[2] != kWireVersion) {
        ++pos_;
        ++bad_version_;
        compact();
        continue;
      }
      const uint16_t crc = crc16_ccitt(p, 47);
      const uint16_t got = static_cast<uint16_t>(p[47]) | static_cast<uint16_t>(p[48]) << 8;
      if (crc != got) {
        ++pos_;
        ++crc_mismatch_;
        compact();
        continue;
      }
      CapFrame f;
      f.seq = wire::get_u32(p + 3);
      f.t_us = wire::get_u64(p + 7);
      bool in_range = true;
      for (int c = 0; c < kChannels; ++c) {
        f.ch[c] = wire::get_u32(p + 15 + 4 * c);
        in_range = in_range && f.ch[c] <= kMaxCode;
      }
      if (!in_range) {
        ++pos_;
        ++range_violation_;
        compact();
        continue;
      }
      pos_ += kWireFrameSize;
      compact();
      ++decoded_;
      return f;
    }
    return std::nullopt;
  }

  size_t decoded() const { return decoded_; }
  size_t bad_magic_bytes() const { return bad_magic_bytes_; }
  size_t bad_version() const { return bad_version_; }
  size_t crc_mismatches() const { return crc_mismatch_; }
  size_t range_violations() const { return range_violation_; }
  size_t pending_bytes() const { return buf_.size() - pos_; }

 private:
  void compact() {
    if (pos_ > 4096) {
      buf_.erase(buf_.begin(), buf_.begin() + static_cast<long>(pos_));
      pos_ = 0;
    }
  }

  std::vector<uint8_t> buf_;
  size_t pos_ = 0;
  size_t decoded_ = 0;
  size_t bad_magic_bytes_ = 0;
  size_t bad_version_ = 0;
  size_t crc_mismatch_ = 0;
  size_t range_violation_ = 0;
};

/// One-shot decode of an exact frame buffer.
inline std::optional<CapFrame> decode_frame(const uint8_t* data, size_t n,
                                            WireError* error = nullptr) {
  auto fail = [&](WireError e) {
    if (error) *error = e;
    return std::nullopt;
  };
  if (n < kWireFrameSize || data[0] != kWireMagic0 || data[1] != kWireMagic1)
    return fail(WireError::BadMagic);
  if (data[2] != kWireVersion) return fail(WireError::BadVersion);
  const uint16_t crc = crc16_ccitt(data, 47);
  const uint16_t got = static_cast<uint16_t>(data[47]) | static_cast<uint16_t>(data[48]) << 8;
  if (crc != got) return fail(WireError::CrcMismatch);
  CapFrame f;
  f.seq = wire::get_u32(data + 3);
  f.t_us = wire::get_u64(data + 7);
  for (int c = 0; c < kChannels; ++c) {
    f.ch[c] = wire::get_u32(data + 15 + 4 * c);
    if (f.ch[c] > kMaxCode) return fail(WireError::RangeViolation);
  }
  return f;
}

}  // namespace seampose
