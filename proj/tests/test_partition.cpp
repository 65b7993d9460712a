#include <catch2/catch_amalgamated.hpp>

#include "parcheck/partition.hpp"
#include "parcheck/random_graph.hpp"

using namespace parcheck;

TEST_CASE("k=1 owns everything") {
  PartitionFn p = make_partition(1, {}, kFnvOffsetBasis, 16);
  Xorshift64Star rng(5);
  for (int i = 0; i < 100; ++i) {
    StateDescriptor d(16);
    for (auto& b : d) b = static_cast<std::uint8_t>(rng.next_below(256));
    CHECK(p.owner(d) == 0);
  }
}

TEST_CASE("owner is FNV-1a over the bytes, mod k") {
  // fnv1a64([1,2,3]) with the standard offset basis is 0xd0aa6218672cf5ab,
  // computed with an independent implementation; mod 4 = 3, mod 8 = 3.
  StateDescriptor d{1, 2, 3};
  PartitionFn p4 = make_partition(4, {}, 0xcbf29ce484222325ULL, 3);
  CHECK(p4.owner(d) == 3);
  PartitionFn p8 = make_partition(8, {}, 0xcbf29ce484222325ULL, 3);
  CHECK(p8.owner(d) == 3);
}

TEST_CASE("full slice and explicit full-range slice agree") {
  SliceSpec full_range;
  full_range.ranges = {{0, 16}};
  PartitionFn a = make_partition(8, {}, 99, 16);
  PartitionFn b = make_partition(8, full_range, 99, 16);
  Xorshift64Star rng(17);
  for (int i = 0; i < 500; ++i) {
    StateDescriptor d(16);
    for (auto& byte : d) byte = static_cast<std::uint8_t>(rng.next_below(256));
    CHECK(a.owner(d) == b.owner(d));
  }
}

TEST_CASE("multi-range slice hashes the concatenated bytes") {
  SliceSpec split;
  split.ranges = {{0, 2}, {4, 2}};
  PartitionFn p = make_partition(5, split, kFnvOffsetBasis, 8);
  StateDescriptor d{10, 11, 99, 99, 12, 13, 99, 99};
  StateDescriptor concat{10, 11, 12, 13};
  CHECK(p.owner(d) == static_cast<int>(fnv1a64(concat) % 5));
  // bytes outside the slice are ignored
  StateDescriptor d2{10, 11, 0, 0, 12, 13, 0, 0};
  CHECK(p.owner(d2) == p.owner(d));
}

TEST_CASE("owner is pure: same inputs, same owner") {
  SliceSpec s;
  s.ranges = {{1, 3}};
  PartitionFn a = make_partition(7, s, 1234, 8);
  PartitionFn b = make_partition(7, s, 1234, 8);
  StateDescriptor d{1, 2, 3, 4, 5, 6, 7, 8};
  CHECK(a.owner(d) == b.owner(d));
  for (int i = 0; i < 10; ++i) CHECK(a.owner(d) == a.owner(d));
}

TEST_CASE("bucket balance over 1e5 random 16-byte descriptors, k=8") {
  PartitionFn p = make_partition(8, {}, kFnvOffsetBasis, 16);
  std::vector<std::uint64_t> bucket(8, 0);
  Xorshift64Star rng(31337);
  for (int i = 0; i < 100000; ++i) {
    StateDescriptor d;
    d.reserve(16);
    for (int w = 0; w < 2; ++w) {
      std::uint64_t v = rng.next();
      for (int b = 0; b < 8; ++b) d.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
    }
    ++bucket[static_cast<std::size_t>(p.owner(d))];
  }
  std::uint64_t mx = 0, mn = ~0ULL;
  for (std::uint64_t c : bucket) {
    mx = std::max(mx, c);
    mn = std::min(mn, c);
  }
  REQUIRE(mn > 0);
  CHECK(static_cast<double>(mx) / static_cast<double>(mn) < 1.5);
}

TEST_CASE("slice validation") {
  CHECK_THROWS_AS(make_partition(0, {}, 1, 4), ConfigError);
  SliceSpec oob;
  oob.ranges = {{2, 4}};
  CHECK_THROWS_AS(make_partition(2, oob, 1, 4), ConfigError);
  SliceSpec overlap;
  overlap.ranges = {{0, 3}, {2, 2}};
  CHECK_THROWS_AS(make_partition(2, overlap, 1, 8), ConfigError);
  SliceSpec zero;
  zero.ranges = {{0, 0}};
  CHECK_THROWS_AS(make_partition(2, zero, 1, 8), ConfigError);
}

TEST_CASE("slice CLI syntax") {
  SliceSpec s = parse_slice("0:2,4:2");
  REQUIRE(s.ranges.size() == 2);
  CHECK(s.ranges[0] == std::pair<std::uint32_t, std::uint32_t>{0, 2});
  CHECK(s.ranges[1] == std::pair<std::uint32_t, std::uint32_t>{4, 2});
  CHECK(parse_slice("").full());
  CHECK_THROWS_AS(parse_slice("nonsense"), ConfigError);
  CHECK_THROWS_AS(parse_slice("1-2"), ConfigError);
}
