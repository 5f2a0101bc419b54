#pragma once

#include <cstdint>
#include <vector>

#include "ifibf/error.hpp"
#include "ifibf/hash.hpp"

namespace ifibf {

// Number of address bits needed for a filter of m positions: ceil(log2 m).
constexpr int address_bits(std::uint64_t m) {
  int b = 0;
  std::uint64_t span = 1;
  while (span < m) {
    span <<= 1;
    ++b;
  }
  return b;
}

// Network-wide agreed shape of an iterated filter stack: every node that
// exchanges encoded names or filter blobs must hold an identical geometry,
// since positions are computed at the source.
struct FilterGeometry {
  std::vector<std::uint64_t> m_ind;  // positions per level, size d
  int k_i = 1;                       // hash functions per level
  std::vector<std::uint64_t> seeds;  // one per hash function, size k_i

  int depth() const { return static_cast<int>(m_ind.size()); }

  int level_address_bits(int level) const {  // level is 1-based
    return address_bits(m_ind[static_cast<std::size_t>(level - 1)]);
  }

  // Payload bits of a name occupying the first `levels` levels.
  std::uint64_t name_bits(int levels) const {
    std::uint64_t total = 0;
    for (int x = 1; x <= levels; ++x)
      total += static_cast<std::uint64_t>(k_i) * static_cast<std::uint64_t>(level_address_bits(x));
    return total;
  }

  // Identity check for compatibility between names, filters and nodes.
  std::uint64_t fingerprint() const {
    std::uint64_t h = fnv1a64(0x1f1bf, "geom");
    auto mix = [&h](std::uint64_t v) {
      for (int i = 0; i < 8; ++i) {
        h ^= static_cast<unsigned char>(v >> (8 * i));
        h *= kFnvPrime;
      }
    };
    mix(static_cast<std::uint64_t>(m_ind.size()));
    mix(static_cast<std::uint64_t>(k_i));
    for (auto m : m_ind) mix(m);
    for (auto s : seeds) mix(s);
    return h;
  }

  bool operator==(const FilterGeometry&) const = default;

  void validate() const {
    if (m_ind.empty()) throw InvalidParameter("geometry: d must be >= 1");
    for (auto m : m_ind)
      if (m < 2) throw InvalidParameter("geometry: every m_ind must be >= 2");
    if (k_i < 1) throw InvalidParameter("geometry: k_i must be >= 1");
    if (seeds.size() != static_cast<std::size_t>(k_i))
      throw InvalidParameter("geometry: need exactly k_i seeds");
  }

  // Uniform geometry with seeds derived deterministically from base_seed.
  static FilterGeometry uniform(int d, std::uint64_t m_per_level, int k_i,
                                std::uint64_t base_seed = 0) {
    FilterGeometry g;
    g.m_ind.assign(static_cast<std::size_t>(d), m_per_level);
    g.k_i = k_i;
    std::uint64_t state = base_seed;
    for (int i = 0; i < k_i; ++i) g.seeds.push_back(splitmix64(state));
    g.validate();
    return g;
  }
};

}  // namespace ifibf
