#include "ncsim/sampler.hpp"

#include <algorithm>
#include <cstring>

#include "ncsim/errors.hpp"

namespace ncsim {

namespace {
constexpr std::size_t kInitialBuckets = 1024;  // power of two
}

WeightedIndex::WeightedIndex(int key_size)
    : key_size_(key_size), table_(kInitialBuckets, 0), table_mask_(kInitialBuckets - 1) {
  levels_.emplace_back();  // leaf weights
}

std::uint64_t WeightedIndex::hash_key(std::span<const VertexLabel> key) {
  std::uint64_t h = 0x9E3779B97F4A7C15ULL;
  for (VertexLabel v : key) {
    h ^= static_cast<std::uint64_t>(v) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    h *= 0xBF58476D1CE4E5B9ULL;
    h ^= h >> 29;
  }
  return h;
}

std::size_t WeightedIndex::probe(std::span<const VertexLabel> key, std::uint64_t hash) const {
  const std::uint64_t tag = hash & 0xFFFFFFFF00000000ULL;
  std::size_t i = hash & table_mask_;
  for (;;) {
    const std::uint64_t entry = table_[i];
    if (entry == 0) return i;
    if ((entry & 0xFFFFFFFF00000000ULL) == tag) {
      const VertexLabel* stored = arena_.data() +
          static_cast<std::size_t>((entry & 0xFFFFFFFFULL) - 1) *
              static_cast<std::size_t>(key_size_);
      if (std::memcmp(stored, key.data(), sizeof(VertexLabel) * key.size()) == 0) return i;
    }
    i = (i + 1) & table_mask_;
  }
}

void WeightedIndex::rebuild_table(std::size_t buckets) {
  table_.assign(buckets, 0);
  table_mask_ = buckets - 1;
  for (std::size_t slot = 0; slot < entry_count(); ++slot) {
    auto key = key_at(slot);
    const std::uint64_t hash = hash_key(key);
    table_[probe(key, hash)] =
        (hash & 0xFFFFFFFF00000000ULL) | static_cast<std::uint64_t>(slot + 1);
  }
}

void WeightedIndex::grow_table() { rebuild_table(table_.size() * 2); }

void WeightedIndex::reserve(std::size_t expected_entries) {
  arena_.reserve(expected_entries * static_cast<std::size_t>(key_size_));
  std::size_t size = expected_entries;
  for (std::size_t depth = 0; depth < levels_.size() && size > 0; ++depth) {
    levels_[depth].reserve(size);
    size = (size + kFanout - 1) / kFanout;
  }
  std::size_t buckets = table_.size();
  while (buckets * 7 < expected_entries * 10) buckets *= 2;
  if (buckets > table_.size()) rebuild_table(buckets);
}

void WeightedIndex::add_weight(std::size_t slot, std::uint64_t delta) {
  std::size_t idx = slot;
  for (auto& level : levels_) {
    level[idx] += delta;
    idx /= kFanout;
  }
}

void WeightedIndex::append_slot(std::uint64_t value) {
  std::size_t idx = levels_[0].size();  // new slot index
  for (auto& level : levels_) {
    if (idx < level.size()) {
      level[idx] += value;
    } else {
      level.push_back(value);  // idx == level.size() here by construction
    }
    idx /= kFanout;
  }
  // keep the top level at no more than kFanout entries
  while (levels_.back().size() > kFanout) {
    const auto& below = levels_.back();
    std::vector<std::uint64_t> top((below.size() + kFanout - 1) / kFanout, 0);
    for (std::size_t i = 0; i < below.size(); ++i) top[i / kFanout] += below[i];
    levels_.push_back(std::move(top));
  }
}

void WeightedIndex::increment(std::span<const VertexLabel> key, std::uint64_t delta) {
  const std::uint64_t hash = hash_key(key);
  const std::size_t bucket = probe(key, hash);
  if (table_[bucket] != 0) {
    add_weight((table_[bucket] & 0xFFFFFFFFULL) - 1, delta);
  } else {
    arena_.insert(arena_.end(), key.begin(), key.end());
    append_slot(delta);
    table_[bucket] =
        (hash & 0xFFFFFFFF00000000ULL) | static_cast<std::uint64_t>(entry_count());
    if (entry_count() * 10 >= table_.size() * 7) grow_table();
  }
  total_ += delta;
}

std::uint64_t WeightedIndex::weight_of(std::span<const VertexLabel> key) const {
  const std::size_t bucket = probe(key, hash_key(key));
  return table_[bucket] == 0 ? 0 : levels_[0][(table_[bucket] & 0xFFFFFFFFULL) - 1];
}

std::span<const VertexLabel> WeightedIndex::key_at(std::size_t slot) const {
  return {arena_.data() + slot * static_cast<std::size_t>(key_size_),
          static_cast<std::size_t>(key_size_)};
}

std::size_t WeightedIndex::find_slot(std::uint64_t ticket) const {
  std::uint64_t remaining = ticket;
  std::size_t base = 0;
  for (std::size_t depth = levels_.size(); depth-- > 0;) {
    const auto& level = levels_[depth];
    const std::size_t end = std::min(base + kFanout, level.size());
    std::size_t i = base;
    while (i < end && level[i] <= remaining) {
      remaining -= level[i];
      ++i;
    }
    base = i * kFanout;
    if (depth == 0) return i;
  }
  return 0;
}

std::span<const VertexLabel> WeightedIndex::sample(RngStream& rng) const {
  if (total_ == 0) throw EmptyIndex("weighted sample from an index with total weight 0");
  return key_at(find_slot(rng.uniform_below(total_)));
}

void uniform_subset_into(std::int64_t count_available, int m, RngStream& rng,
                         std::vector<std::int64_t>& out) {
  if (m < 0 || static_cast<std::int64_t>(m) > count_available) {
    throw InsufficientVertices("cannot draw " + std::to_string(m) + " distinct vertices from " +
                               std::to_string(count_available));
  }
  const bool complement = 2 * static_cast<std::int64_t>(m) > count_available;
  const std::int64_t k = complement ? count_available - m : m;

  // Floyd's distinct-index sampling; k stays <= max clique size, so a flat
  // array beats any hashed set
  thread_local std::vector<std::int64_t> chosen;
  chosen.clear();
  for (std::int64_t i = count_available - k; i < count_available; ++i) {
    const auto t = static_cast<std::int64_t>(rng.uniform_below(static_cast<std::uint64_t>(i) + 1));
    const bool taken = std::find(chosen.begin(), chosen.end(), t) != chosen.end();
    chosen.push_back(taken ? i : t);
  }
  std::sort(chosen.begin(), chosen.end());

  out.clear();
  if (!complement) {
    out.assign(chosen.begin(), chosen.end());
    return;
  }
  std::size_t skip = 0;
  for (std::int64_t i = 0; i < count_available; ++i) {
    if (skip < chosen.size() && chosen[skip] == i) {
      ++skip;
    } else {
      out.push_back(i);
    }
  }
}

std::vector<std::int64_t> uniform_subset(std::int64_t count_available, int m,
                                         RngStream& rng) {
  std::vector<std::int64_t> out;
  uniform_subset_into(count_available, m, rng, out);
  return out;
}

}  // namespace ncsim
