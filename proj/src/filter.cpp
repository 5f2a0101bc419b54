#include "ifibf/filter.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <string>

#include "ifibf/error.hpp"

namespace ifibf {

namespace {

constexpr char kMagic[4] = {'I', 'F', 'B', 'F'};
constexpr std::uint8_t kVersion = 1;
constexpr std::uint8_t kCounterMax = 15;

bool test_bit(const std::vector<std::uint64_t>& words, std::uint64_t i) {
  return words[i >> 6] >> (i & 63) & 1u;
}

void set_bit(std::vector<std::uint64_t>& words, std::uint64_t i) {
  words[i >> 6] |= std::uint64_t{1} << (i & 63);
}

void clear_bit(std::vector<std::uint64_t>& words, std::uint64_t i) {
  words[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
}

}  // namespace

IteratedBloomFilter::IteratedBloomFilter(FilterGeometry geometry, FilterOptions options)
    : geometry_(std::move(geometry)), options_(std::move(options)) {
  geometry_.validate();
  if (options_.level_capacity &&
      options_.level_capacity->size() != static_cast<std::size_t>(geometry_.depth()))
    throw InvalidParameter("filter: need one capacity per level");
  fingerprint_ = geometry_.fingerprint();
  levels_.resize(static_cast<std::size_t>(geometry_.depth()));
  for (int x = 0; x < geometry_.depth(); ++x) {
    auto& lvl = levels_[static_cast<std::size_t>(x)];
    lvl.m = geometry_.m_ind[static_cast<std::size_t>(x)];
    lvl.segments.emplace_back();
    lvl.segments.back().words.assign((lvl.m + 63) / 64, 0);
    if (options_.counters) lvl.segments.back().counters.assign(lvl.m, 0);
  }
}

void IteratedBloomFilter::check_name(const EncodedName& name) const {
  if (name.geometry_fp != fingerprint_)
    throw GeometryMismatch("filter: name was encoded for a different geometry");
  if (name.levels() < 1 || name.levels() > geometry_.depth())
    throw GeometryMismatch("filter: name level count outside geometry");
}

void IteratedBloomFilter::check_positions(int level,
                                          const std::vector<std::uint32_t>& positions) const {
  if (level < 1 || level > geometry_.depth())
    throw GeometryMismatch("filter: no level " + std::to_string(level));
  if (positions.size() != static_cast<std::size_t>(geometry_.k_i))
    throw GeometryMismatch("filter: expected k_i positions");
  const std::uint64_t m = levels_[static_cast<std::size_t>(level - 1)].m;
  for (auto p : positions)
    if (p >= m) throw GeometryMismatch("filter: position out of range at level " +
                                       std::to_string(level));
}

bool IteratedBloomFilter::segment_has(const Segment& seg,
                                      const std::vector<std::uint32_t>& positions) const {
  for (auto p : positions)
    if (!test_bit(seg.words, p)) return false;
  return true;
}

void IteratedBloomFilter::segment_set(Segment& seg,
                                      const std::vector<std::uint32_t>& positions) {
  for (auto p : positions) {
    set_bit(seg.words, p);
    if (!seg.counters.empty() && seg.counters[p] < kCounterMax) ++seg.counters[p];
  }
}

void IteratedBloomFilter::insert_level(int level, const std::vector<std::uint32_t>& positions) {
  check_positions(level, positions);
  auto& lvl = levels_[static_cast<std::size_t>(level - 1)];

  // Plain filters skip elements that already read as present, which makes
  // `inserted` a distinct count. Counting filters must bump counters on
  // every insert so that erasing one element leaves positions it shares
  // with others intact.
  if (!options_.counters)
    for (const auto& seg : lvl.segments)
      if (segment_has(seg, positions)) return;

  auto& active = lvl.segments.back();
  if (options_.level_capacity &&
      active.inserted >= (*options_.level_capacity)[static_cast<std::size_t>(level - 1)]) {
    // Segment is at its design capacity; chain a fresh one.
    Segment fresh;
    fresh.words.assign((lvl.m + 63) / 64, 0);
    if (options_.counters) fresh.counters.assign(lvl.m, 0);
    lvl.segments.push_back(std::move(fresh));
  }
  auto& target = lvl.segments.back();
  segment_set(target, positions);
  ++target.inserted;
}

bool IteratedBloomFilter::level_contains(int level,
                                         const std::vector<std::uint32_t>& positions) const {
  check_positions(level, positions);
  const auto& lvl = levels_[static_cast<std::size_t>(level - 1)];
  for (const auto& seg : lvl.segments)
    if (segment_has(seg, positions)) return true;
  return false;
}

void IteratedBloomFilter::insert(const EncodedName& name) {
  check_name(name);
  for (int x = 1; x <= name.levels(); ++x)
    insert_level(x, name.positions[static_cast<std::size_t>(x - 1)]);
}

int IteratedBloomFilter::match_depth(const EncodedName& name) const {
  check_name(name);
  int depth = 0;
  for (int x = 1; x <= name.levels(); ++x) {
    if (!level_contains(x, name.positions[static_cast<std::size_t>(x - 1)])) break;
    depth = x;
  }
  return depth;
}

void IteratedBloomFilter::erase(const EncodedName& name) {
  if (!options_.counters)
    throw InvalidParameter("filter: erase requires counters");
  check_name(name);
  for (int x = 1; x <= name.levels(); ++x) {
    const auto& positions = name.positions[static_cast<std::size_t>(x - 1)];
    check_positions(x, positions);
    auto& lvl = levels_[static_cast<std::size_t>(x - 1)];
    for (auto& seg : lvl.segments) {
      if (!segment_has(seg, positions)) continue;
      for (auto p : positions) {
        if (seg.counters[p] == 0 || seg.counters[p] == kCounterMax) continue;
        if (--seg.counters[p] == 0) clear_bit(seg.words, p);
      }
      if (seg.inserted > 0) --seg.inserted;
      break;  // remove from the first segment holding the name
    }
  }
}

std::uint64_t IteratedBloomFilter::inserted(int level) const {
  if (level < 1 || level > geometry_.depth())
    throw GeometryMismatch("filter: no level " + std::to_string(level));
  std::uint64_t total = 0;
  for (const auto& seg : levels_[static_cast<std::size_t>(level - 1)].segments)
    total += seg.inserted;
  return total;
}

int IteratedBloomFilter::segment_count(int level) const {
  if (level < 1 || level > geometry_.depth())
    throw GeometryMismatch("filter: no level " + std::to_string(level));
  return static_cast<int>(levels_[static_cast<std::size_t>(level - 1)].segments.size());
}

std::uint64_t IteratedBloomFilter::ones(int level) const {
  if (level < 1 || level > geometry_.depth())
    throw GeometryMismatch("filter: no level " + std::to_string(level));
  std::uint64_t count = 0;
  for (auto w : levels_[static_cast<std::size_t>(level - 1)].segments.front().words)
    count += static_cast<std::uint64_t>(std::popcount(w));
  return count;
}

std::vector<std::uint8_t> IteratedBloomFilter::serialize() const {
  std::vector<std::uint8_t> blob;
  blob.insert(blob.end(), kMagic, kMagic + 4);
  blob.push_back(kVersion);
  blob.push_back(static_cast<std::uint8_t>(geometry_.depth()));
  blob.push_back(static_cast<std::uint8_t>(geometry_.k_i));
  auto put_u64 = [&blob](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) blob.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  };
  for (auto s : geometry_.seeds) put_u64(s);
  for (auto m : geometry_.m_ind) put_u64(m);

  for (const auto& lvl : levels_) {
    const std::size_t bytes = static_cast<std::size_t>((lvl.m + 7) / 8);
    std::vector<std::uint8_t> arr(bytes, 0);
    for (const auto& seg : lvl.segments)  // fold overflow segments together
      for (std::uint64_t i = 0; i < lvl.m; ++i)
        if (test_bit(seg.words, i)) arr[i >> 3] |= static_cast<std::uint8_t>(1u << (i & 7));
    blob.insert(blob.end(), arr.begin(), arr.end());
  }
  return blob;
}

IteratedBloomFilter IteratedBloomFilter::deserialize(const std::vector<std::uint8_t>& blob) {
  std::size_t at = 0;
  auto need = [&](std::size_t n) {
    if (blob.size() - at < n) throw DecodeError("filter blob: truncated");
  };
  need(7);
  if (std::memcmp(blob.data(), kMagic, 4) != 0) throw DecodeError("filter blob: bad magic");
  at = 4;
  if (blob[at++] != kVersion) throw DecodeError("filter blob: unsupported version");
  const int d = blob[at++];
  const int k_i = blob[at++];
  if (d < 1 || k_i < 1) throw DecodeError("filter blob: bad geometry counts");

  auto get_u64 = [&]() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(blob[at++]) << (8 * i);
    return v;
  };
  FilterGeometry geometry;
  geometry.k_i = k_i;
  for (int i = 0; i < k_i; ++i) geometry.seeds.push_back(get_u64());
  for (int x = 0; x < d; ++x) geometry.m_ind.push_back(get_u64());
  geometry.validate();

  IteratedBloomFilter filter(geometry);
  for (int x = 0; x < d; ++x) {
    auto& lvl = filter.levels_[static_cast<std::size_t>(x)];
    const std::size_t bytes = static_cast<std::size_t>((lvl.m + 7) / 8);
    need(bytes);
    auto& seg = lvl.segments.front();
    for (std::uint64_t i = 0; i < lvl.m; ++i)
      if (blob[at + (i >> 3)] >> (i & 7) & 1u) set_bit(seg.words, i);
    at += bytes;
    // Occupancy-based cardinality estimate stands in for the lost count.
    const double ones = static_cast<double>(filter.ones(x + 1));
    const double m = static_cast<double>(lvl.m);
    if (ones >= m) {
      seg.inserted = static_cast<std::uint64_t>(m);
    } else {
      seg.inserted = static_cast<std::uint64_t>(
          std::llround(-(m / k_i) * std::log(1.0 - ones / m)));
    }
  }
  if (at != blob.size()) throw DecodeError("filter blob: trailing bytes");
  return filter;
}

}  // namespace ifibf
