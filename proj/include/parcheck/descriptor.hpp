#pragma once

#include <cstdint>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace parcheck {

/// Fixed-length byte encoding of one global state. Byte equality is state
/// equality; the same bytes are used for hashing, storage and messaging.
using StateDescriptor = std::vector<std::uint8_t>;

constexpr std::uint64_t kFnvOffsetBasis = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

inline std::uint64_t fnv1a64(const std::uint8_t* data, std::size_t len,
                             std::uint64_t basis = kFnvOffsetBasis) {
  std::uint64_t h = basis;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= data[i];
    h *= kFnvPrime;
  }
  return h;
}

inline std::uint64_t fnv1a64(const StateDescriptor& d,
                             std::uint64_t basis = kFnvOffsetBasis) {
  return fnv1a64(d.data(), d.size(), basis);
}

struct DescriptorHash {
  std::size_t operator()(const StateDescriptor& d) const {
    return static_cast<std::size_t>(fnv1a64(d));
  }
};

inline void append_u32_le(StateDescriptor& d, std::uint32_t v) {
  d.push_back(static_cast<std::uint8_t>(v & 0xff));
  d.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
  d.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
  d.push_back(static_cast<std::uint8_t>((v >> 24) & 0xff));
}

inline std::uint32_t read_u32_le(const StateDescriptor& d, std::size_t off) {
  return static_cast<std::uint32_t>(d[off]) |
         (static_cast<std::uint32_t>(d[off + 1]) << 8) |
         (static_cast<std::uint32_t>(d[off + 2]) << 16) |
         (static_cast<std::uint32_t>(d[off + 3]) << 24);
}

// Lexicographic byte order. Descriptors of one source always have equal
// length, so this is a total order on states.
inline bool desc_less(const StateDescriptor& a, const StateDescriptor& b) {
  return a < b;
}

inline std::string to_hex(const StateDescriptor& d) {
  static const char* digits = "0123456789abcdef";
  std::string s;
  s.reserve(d.size() * 2);
  for (std::uint8_t b : d) {
    s.push_back(digits[b >> 4]);
    s.push_back(digits[b & 0xf]);
  }
  return s;
}

inline StateDescriptor from_hex(const std::string& s) {
  if (s.size() % 2 != 0) throw std::invalid_argument("odd hex string length");
  auto nib = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument("bad hex digit");
  };
  StateDescriptor d;
  d.reserve(s.size() / 2);
  for (std::size_t i = 0; i < s.size(); i += 2)
    d.push_back(static_cast<std::uint8_t>(nib(s[i]) * 16 + nib(s[i + 1])));
  return d;
}

}  // namespace parcheck
