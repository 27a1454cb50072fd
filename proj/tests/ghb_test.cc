#include "pfsim/ghb.hpp"

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "pfsim/rng.hpp"

using namespace pfsim;

TEST(GhbTest, FirstPushHasNoLink) {
  Ghb ghb(8, GhbKeyMode::ByPc);
  uint64_t seq = ghb.push(BlockAddr{0xA}, 0x100);
  EXPECT_EQ(ghb.size(), 1u);
  EXPECT_FALSE(ghb.link_of(seq).has_value());
}

TEST(GhbTest, BlockModeChainsRepeatedBlocks) {
  Ghb ghb(8, GhbKeyMode::ByBlock);
  uint64_t first_a = ghb.push(BlockAddr{0xA}, 1);
  ghb.push(BlockAddr{0xB}, 1);
  uint64_t second_a = ghb.push(BlockAddr{0xA}, 1);
  auto link = ghb.link_of(second_a);
  ASSERT_TRUE(link.has_value());
  EXPECT_EQ(*link, first_a);

  auto chain = ghb.walk_chain(0xA);
  ASSERT_EQ(chain.size(), 2u);
  EXPECT_EQ(chain[0], second_a);
  EXPECT_EQ(chain[1], first_a);
}

TEST(GhbTest, WalkChainForUnknownKeyIsEmpty) {
  Ghb ghb(8, GhbKeyMode::ByPc);
  ghb.push(BlockAddr{1}, 0x10);
  EXPECT_TRUE(ghb.walk_chain(0x999).empty());
}

TEST(GhbTest, DistanceFromHead) {
  Ghb ghb(8, GhbKeyMode::ByPc);
  uint64_t s0 = ghb.push(BlockAddr{1}, 1);
  uint64_t s1 = ghb.push(BlockAddr{2}, 2);
  EXPECT_EQ(ghb.distance_from_head(s1), 0u);
  EXPECT_EQ(ghb.distance_from_head(s0), 1u);
  EXPECT_EQ(ghb.at_distance(0).block.value, 2u);
  EXPECT_EQ(ghb.at_distance(1).block.value, 1u);
}

TEST(GhbTest, DeadEntryThrows) {
  Ghb ghb(2, GhbKeyMode::ByPc);
  uint64_t s0 = ghb.push(BlockAddr{1}, 1);
  ghb.push(BlockAddr{2}, 1);
  ghb.push(BlockAddr{3}, 1);  // evicts s0
  EXPECT_THROW(ghb.distance_from_head(s0), std::out_of_range);
  EXPECT_THROW(ghb.at(s0), std::out_of_range);
}

TEST(GhbTest, EvictionInvalidatesLinksIntoTheDeadSlot) {
  Ghb ghb(3, GhbKeyMode::ByPc);
  ghb.push(BlockAddr{1}, 7);
  uint64_t second = ghb.push(BlockAddr{2}, 7);  // links to the first
  ghb.push(BlockAddr{3}, 9);
  ASSERT_TRUE(ghb.link_of(second).has_value());
  ghb.push(BlockAddr{4}, 9);  // evicts the first entry
  EXPECT_FALSE(ghb.link_of(second).has_value());
  // The chain now stops at the still-live entry.
  auto chain = ghb.walk_chain(7);
  ASSERT_EQ(chain.size(), 1u);
  EXPECT_EQ(chain[0], second);
}

TEST(GhbTest, FifoOrderNewestFirst) {
  Ghb ghb(16, GhbKeyMode::ByBlock);
  for (uint64_t i = 0; i < 10; ++i) ghb.push(BlockAddr{i}, i);
  for (size_t d = 0; d < ghb.size(); ++d)
    EXPECT_EQ(ghb.at_distance(d).block.value, 9 - d);
}

TEST(GhbTest, IndexLiveKeysDropsEvictedKeys) {
  Ghb ghb(4, GhbKeyMode::ByPc);
  for (uint64_t i = 0; i < 16; ++i) ghb.push(BlockAddr{i}, i * 100);
  // All 16 pcs are distinct; only the last 4 entries are live.
  EXPECT_EQ(ghb.index_live_keys(), 4u);
}

TEST(GhbTest, DumpListsLiveEntries) {
  Ghb ghb(4, GhbKeyMode::ByPc);
  ghb.push(BlockAddr{0xAB}, 0x40);
  ghb.push(BlockAddr{0xCD}, 0x40);
  std::string dump = ghb.dump();
  EXPECT_NE(dump.find("block=cd"), std::string::npos);
  EXPECT_NE(dump.find("link=0"), std::string::npos);
  EXPECT_EQ(std::count(dump.begin(), dump.end(), '\n'), 2);
}

// Randomized equivalence with the plain-list oracle: chains, distances and
// link liveness after every push, across capacities and key collisions.
TEST(GhbTest, RandomizedOracleEquivalence) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    size_t capacity = 1 + bounded_draw(rng, 64);
    bool by_pc = (rng() & 1) != 0;
    Ghb ghb(capacity, by_pc ? GhbKeyMode::ByPc : GhbKeyMode::ByBlock);
    test::GhbOracle oracle(capacity, by_pc);

    for (int i = 0; i < 300; ++i) {
      uint64_t block = bounded_draw(rng, 12);
      uint64_t pc = bounded_draw(rng, 6);
      ghb.push(BlockAddr{block}, pc);
      oracle.push(block, pc);

      ASSERT_EQ(ghb.size(), oracle.live_count());

      uint64_t key = by_pc ? bounded_draw(rng, 6) : bounded_draw(rng, 12);
      EXPECT_EQ(ghb.walk_chain(key), oracle.chain(key));

      uint64_t seq = bounded_draw(rng, oracle.pushes().size());
      auto dist = oracle.distance(seq);
      if (dist) {
        EXPECT_EQ(ghb.distance_from_head(seq), *dist);
      } else {
        EXPECT_THROW(ghb.distance_from_head(seq), std::out_of_range);
      }
    }
  }
}
