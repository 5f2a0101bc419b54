#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ifibf/geometry.hpp"
#include "ifibf/name.hpp"

namespace ifibf {

// Options for an iterated filter stack.
//
// Counters turn each level into a counting filter (4-bit saturating
// counters) so elements can be removed; saturated counters stick.
//
// level_capacity, when set, bounds the distinct inserts a level segment
// accepts: once a segment is full a fresh one is chained at that level
// and queries match against every segment.
struct FilterOptions {
  bool counters = false;
  std::optional<std::vector<std::uint64_t>> level_capacity;
};

// A stack of per-level bit arrays addressed by an EncodedName's
// positions. Match depth of a query is the number of consecutive levels,
// from level 1, whose positions are all set; an inserted name always
// matches at its full inserted depth.
//
// Concurrency: single writer, any number of concurrent readers against a
// quiescent filter; no internal locking.
class IteratedBloomFilter {
 public:
  explicit IteratedBloomFilter(FilterGeometry geometry, FilterOptions options = {});

  const FilterGeometry& geometry() const { return geometry_; }

  void insert(const EncodedName& name);
  int match_depth(const EncodedName& name) const;

  // Removes one insertion of the name. Requires counters; a position whose
  // counter saturated is left set.
  void erase(const EncodedName& name);

  // Inserts seen by a level: distinct inserts for a plain filter (an
  // element already reading as present is skipped), raw insert events
  // minus erases for a counting one. After deserialize this is the
  // standard occupancy-based cardinality estimate -(m/k) ln(1 - ones/m).
  std::uint64_t inserted(int level) const;

  // Segments chained at a level; 1 until the capacity bound overflows.
  int segment_count(int level) const;

  std::uint64_t ones(int level) const;  // set bits in the level's first segment

  // Direct per-level access for load experiments: inserts one element's
  // positions (k_i of them) at the given level only.
  void insert_level(int level, const std::vector<std::uint32_t>& positions);
  bool level_contains(int level, const std::vector<std::uint32_t>& positions) const;

  // Versioned blob: "IFBF" magic, version, d, k_i, seeds, m_ind list,
  // then one little-endian byte-padded bit array per level (bit i of a
  // level lives at byte i/8, bit i%8). The blob snapshots occupancy:
  // overflow segments are folded together and counters are not carried.
  std::vector<std::uint8_t> serialize() const;
  static IteratedBloomFilter deserialize(const std::vector<std::uint8_t>& blob);

 private:
  struct Segment {
    std::vector<std::uint64_t> words;
    std::vector<std::uint8_t> counters;  // one nibble-wide counter per bit, if enabled
    std::uint64_t inserted = 0;
  };

  struct Level {
    std::uint64_t m = 0;
    std::vector<Segment> segments;
  };

  bool segment_has(const Segment& seg, const std::vector<std::uint32_t>& positions) const;
  void segment_set(Segment& seg, const std::vector<std::uint32_t>& positions);
  void check_name(const EncodedName& name) const;
  void check_positions(int level, const std::vector<std::uint32_t>& positions) const;

  FilterGeometry geometry_;
  FilterOptions options_;
  std::uint64_t fingerprint_ = 0;
  std::vector<Level> levels_;
};

}  // namespace ifibf
