#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "parcheck/descriptor.hpp"

namespace parcheck {

class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Byte ranges of the descriptor fed to the partition hash. An empty range
/// list means the full descriptor. Ranges must lie inside the descriptor, be
/// non-overlapping and ordered by offset.
struct SliceSpec {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> ranges;  // (offset, length)

  bool full() const { return ranges.empty(); }
};

/// Parse the CLI syntax "off:len[,off:len...]".
inline SliceSpec parse_slice(const std::string& text) {
  SliceSpec spec;
  if (text.empty()) return spec;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string part = text.substr(pos, comma == std::string::npos ? std::string::npos
                                                                   : comma - pos);
    std::size_t colon = part.find(':');
    if (colon == std::string::npos)
      throw ConfigError("bad slice '" + part + "': expected off:len");
    try {
      unsigned long off = std::stoul(part.substr(0, colon));
      unsigned long len = std::stoul(part.substr(colon + 1));
      spec.ranges.emplace_back(static_cast<std::uint32_t>(off),
                               static_cast<std::uint32_t>(len));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("bad slice '" + part + "': expected off:len");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return spec;
}

/// Deterministic owner function: FNV-1a 64 over the selected descriptor bytes
/// (offset basis = seed), result mod k. Pure in (descriptor, k, slice, seed),
/// so every worker and every process computes the same owner.
class PartitionFn {
 public:
  PartitionFn() = default;
  PartitionFn(int k, SliceSpec slice, std::uint64_t seed)
      : k_(k), slice_(std::move(slice)), seed_(seed) {}

  int worker_count() const { return k_; }

  int owner(const StateDescriptor& d) const {
    if (k_ == 1) return 0;
    std::uint64_t h;
    if (slice_.full()) {
      h = fnv1a64(d.data(), d.size(), seed_);
    } else {
      h = seed_;
      for (auto [off, len] : slice_.ranges) h = fnv1a64(d.data() + off, len, h);
    }
    return static_cast<int>(h % static_cast<std::uint64_t>(k_));
  }

 private:
  int k_ = 1;
  SliceSpec slice_;
  std::uint64_t seed_ = kFnvOffsetBasis;
};

inline PartitionFn make_partition(int k, const SliceSpec& slice, std::uint64_t seed,
                                  std::size_t descriptor_len) {
  if (k < 1) throw ConfigError("worker count must be >= 1");
  std::uint64_t prev_end = 0;
  for (auto [off, len] : slice.ranges) {
    if (len == 0) throw ConfigError("slice range with zero length");
    if (off < prev_end)
      throw ConfigError("slice ranges must be ordered and non-overlapping");
    if (static_cast<std::uint64_t>(off) + len > descriptor_len)
      throw ConfigError("slice range " + std::to_string(off) + ":" +
                        std::to_string(len) + " exceeds descriptor length " +
                        std::to_string(descriptor_len));
    prev_end = static_cast<std::uint64_t>(off) + len;
  }
  return PartitionFn(k, slice, seed);
}

}  // namespace parcheck
