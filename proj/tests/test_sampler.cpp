#include <doctest.h>

#include <cmath>
#include <map>

#include "ncsim/errors.hpp"
#include "ncsim/sampler.hpp"
#include "ncsim/verify.hpp"

using namespace ncsim;

namespace {

std::vector<VertexLabel> key2(VertexLabel a, VertexLabel b) { return {a, b}; }

}  // namespace

TEST_SUITE("sampler") {

TEST_CASE("single entry is drawn with probability 1") {
  WeightedIndex index(2);
  index.increment(key2(1, 2), 5);
  RngStream rng(1, 0);
  for (int i = 0; i < 100; ++i) {
    const auto key = index.sample(rng);
    CHECK(key[0] == 1);
    CHECK(key[1] == 2);
  }
}

TEST_CASE("empty index refuses to sample") {
  WeightedIndex index(2);
  RngStream rng(1, 0);
  CHECK_THROWS_AS(index.sample(rng), EmptyIndex);
}

TEST_CASE("increment inserts at delta and accumulates") {
  WeightedIndex index(2);
  index.increment(key2(0, 1));
  CHECK(index.weight_of(key2(0, 1)) == 1);
  CHECK(index.total() == 1);
  index.increment(key2(0, 1));
  CHECK(index.weight_of(key2(0, 1)) == 2);
  index.increment(key2(0, 7), 3);
  CHECK(index.weight_of(key2(0, 7)) == 3);
  CHECK(index.weight_of(key2(7, 8)) == 0);
  CHECK(index.total() == 5);
  CHECK(index.entry_count() == 2);
}

TEST_CASE("weights 1:3 give empirical frequency 0.75 of the heavy key") {
  WeightedIndex index(2);
  index.increment(key2(10, 11), 1);
  index.increment(key2(20, 21), 3);
  RngStream rng(42, 0);
  const int draws = 1000000;
  std::int64_t heavy = 0;
  for (int i = 0; i < draws; ++i) {
    if (index.sample(rng)[0] == 20) ++heavy;
  }
  CHECK(std::fabs(static_cast<double>(heavy) / draws - 0.75) < 0.002);
}

TEST_CASE("find_slot partitions tickets exactly by cumulative weight") {
  WeightedIndex index(1);
  const std::vector<std::uint64_t> weights{4, 1, 7, 2};
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const VertexLabel key[1] = {static_cast<VertexLabel>(i)};
    index.increment(key, weights[i]);
  }
  std::uint64_t cumulative = 0;
  for (std::size_t slot = 0; slot < weights.size(); ++slot) {
    for (std::uint64_t t = cumulative; t < cumulative + weights[slot]; ++t) {
      CHECK(index.find_slot(t) == slot);
    }
    cumulative += weights[slot];
  }
}

TEST_CASE("rebuilding from entries reproduces totals and per-key weights") {
  WeightedIndex index(3);
  RngStream rng(7, 0);
  for (int i = 0; i < 500; ++i) {
    std::vector<VertexLabel> key{static_cast<VertexLabel>(rng.uniform_below(30)), 0, 0};
    key[1] = key[0] + 1 + static_cast<VertexLabel>(rng.uniform_below(10));
    key[2] = key[1] + 1 + static_cast<VertexLabel>(rng.uniform_below(10));
    index.increment(key, 1 + rng.uniform_below(5));
  }
  WeightedIndex rebuilt(3);
  for (std::size_t slot = 0; slot < index.entry_count(); ++slot) {
    rebuilt.increment(index.key_at(slot), index.weight_at(slot));
  }
  REQUIRE(rebuilt.total() == index.total());
  REQUIRE(rebuilt.entry_count() == index.entry_count());
  for (std::size_t slot = 0; slot < index.entry_count(); ++slot) {
    CHECK(rebuilt.weight_of(index.key_at(slot)) == index.weight_at(slot));
  }
}

TEST_CASE("index agrees with a naive prefix-sum reference under random growth") {
  WeightedIndex index(1);
  std::vector<std::uint64_t> ref;
  RngStream rng(123, 0);
  for (int op = 0; op < 20000; ++op) {  // crosses several fanout boundaries
    const bool insert = ref.empty() || rng.next_double() < 0.35;
    const std::uint64_t delta = 1 + rng.uniform_below(4);
    const auto slot =
        insert ? ref.size() : static_cast<std::size_t>(rng.uniform_below(ref.size()));
    const VertexLabel key[1] = {static_cast<VertexLabel>(slot)};
    index.increment(key, delta);
    if (insert) {
      ref.push_back(delta);
    } else {
      ref[slot] += delta;
    }
  }
  std::vector<std::uint64_t> prefix(ref.size() + 1, 0);
  for (std::size_t i = 0; i < ref.size(); ++i) prefix[i + 1] = prefix[i] + ref[i];
  REQUIRE(index.total() == prefix.back());
  REQUIRE(index.entry_count() == ref.size());
  for (int q = 0; q < 5000; ++q) {
    const std::uint64_t ticket = rng.uniform_below(prefix.back());
    const std::size_t slot = index.find_slot(ticket);
    REQUIRE(slot < ref.size());
    CHECK(prefix[slot] <= ticket);
    CHECK(ticket < prefix[slot + 1]);
  }
}

TEST_CASE("uniform subsets: exhaustive cases and error") {
  RngStream rng(3, 0);
  CHECK(uniform_subset(3, 3, rng) == std::vector<std::int64_t>{0, 1, 2});
  CHECK(uniform_subset(5, 0, rng).empty());
  CHECK_THROWS_AS(uniform_subset(2, 3, rng), InsufficientVertices);
}

TEST_CASE("uniform pairs of four hit every pair at 1/6") {
  RngStream rng(11, 0);
  const int draws = 600000;
  std::map<std::vector<std::int64_t>, int> counts;
  for (int i = 0; i < draws; ++i) ++counts[uniform_subset(4, 2, rng)];
  CHECK(counts.size() == 6);
  for (const auto& [pair, count] : counts) {
    CHECK(std::fabs(static_cast<double>(count) / draws - 1.0 / 6.0) < 0.002);
  }
}

TEST_CASE("complement sampling path (m close to V) stays uniform") {
  RngStream rng(13, 0);
  const int draws = 200000;
  std::map<std::vector<std::int64_t>, int> counts;
  for (int i = 0; i < draws; ++i) ++counts[uniform_subset(5, 4, rng)];
  CHECK(counts.size() == 5);
  for (const auto& [subset, count] : counts) {
    CHECK(std::fabs(static_cast<double>(count) / draws - 0.2) < 0.005);
  }
}

TEST_CASE("chi-square goodness of fit at 1e6 draws") {
  CHECK(weighted_sampler_gof_p(42, 1000000) >= 1e-3);
  CHECK(uniform_subset_gof_p(42, 1000000) >= 1e-3);
}

TEST_CASE("identical (seed, stream) replays identical draws") {
  WeightedIndex index(1);
  for (int i = 0; i < 20; ++i) {
    const VertexLabel key[1] = {i};
    index.increment(key, static_cast<std::uint64_t>(i) + 1);
  }
  RngStream a(99, 5), b(99, 5);
  for (int i = 0; i < 2000; ++i) {
    CHECK(index.sample(a)[0] == index.sample(b)[0]);
  }
}

}  // TEST_SUITE
