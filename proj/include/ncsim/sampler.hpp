#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ncsim/rng.hpp"

namespace ncsim {

using VertexLabel = std::int64_t;

// Dynamic weight-proportional sampler over clique keys.
//
// A key is a fixed-length strictly increasing label tuple; all keys live in
// one flat arena addressed by dense slot, and an open-addressing table maps a
// key back to its slot without allocating on lookup. Cumulative weights sit
// in a 64-ary layered sum tree: a point update touches one entry per level
// (~4 cache lines at millions of slots), appending a slot touches only the
// level tails, and a prefix search scans at most 64 consecutive entries per
// level. That keeps every evolution step logarithmic with small constants
// even when the registries outgrow the cache.
class WeightedIndex {
 public:
  explicit WeightedIndex(int key_size);

  int key_size() const { return key_size_; }
  std::size_t entry_count() const { return levels_.empty() ? 0 : levels_[0].size(); }
  std::uint64_t total() const { return total_; }

  // Pre-sizes the arena, levels, and bucket table for the given entry count;
  // purely a capacity hint that avoids growth copies and rehashes mid-run.
  void reserve(std::size_t expected_entries);

  // weight(key) += delta, inserting the key at weight delta if absent.
  void increment(std::span<const VertexLabel> key, std::uint64_t delta = 1);

  // 0 if the key is absent.
  std::uint64_t weight_of(std::span<const VertexLabel> key) const;

  std::span<const VertexLabel> key_at(std::size_t slot) const;
  std::uint64_t weight_at(std::size_t slot) const { return levels_[0][slot]; }

  // Slot whose cumulative-weight interval contains `ticket` (ticket < total()).
  std::size_t find_slot(std::uint64_t ticket) const;

  // Key k with probability weight(k)/total(). Throws EmptyIndex when total()==0.
  std::span<const VertexLabel> sample(RngStream& rng) const;

  // Hints the cache that `key` is about to be incremented.
  void prefetch(std::span<const VertexLabel> key) const {
    __builtin_prefetch(&table_[hash_key(key) & table_mask_]);
  }

 private:
  static constexpr std::size_t kFanout = 64;

  static std::uint64_t hash_key(std::span<const VertexLabel> key);
  // Bucket holding the key, or the empty bucket where it would go.
  std::size_t probe(std::span<const VertexLabel> key, std::uint64_t hash) const;
  void rebuild_table(std::size_t buckets);
  void grow_table();
  void add_weight(std::size_t slot, std::uint64_t delta);
  void append_slot(std::uint64_t value);

  int key_size_;
  std::vector<VertexLabel> arena_;  // entry_count * key_size labels
  // open addressing; 0 = empty, else low 32 bits hold slot+1 and the high 32
  // bits a hash tag so probe chains rarely touch the arena
  std::vector<std::uint64_t> table_;
  std::size_t table_mask_ = 0;
  std::uint64_t total_ = 0;
  // levels_[0] = per-slot weights; levels_[L][i] = sum of up to 64 entries of
  // level L-1 starting at 64*i. The top level always has at most 64 entries.
  std::vector<std::vector<std::uint64_t>> levels_;
};

// Uniformly random m-subset of {0,...,count_available-1}, returned sorted.
// Floyd's distinct-index sampling, switching to the complement when m exceeds
// half of count_available. Throws InsufficientVertices when m > count_available.
std::vector<std::int64_t> uniform_subset(std::int64_t count_available, int m,
                                         RngStream& rng);

// Buffer-reusing variant for hot loops.
void uniform_subset_into(std::int64_t count_available, int m, RngStream& rng,
                         std::vector<std::int64_t>& out);

}  // namespace ncsim
