#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ifibf/geometry.hpp"

namespace ifibf {

// A content name as an ordered list of non-empty fields,
// e.g. "Cambridge/ComputerLab/FW01/Windows".
struct HierarchicalName {
  std::vector<std::string> fields;

  // Parses the '/'-separated grammar. Empty fields are rejected.
  static HierarchicalName parse(std::string_view text);

  std::string to_string() const;

  int depth() const { return static_cast<int>(fields.size()); }

  // Characters excluding separators; this is what the naming cost counts.
  std::size_t character_count() const;

  bool operator==(const HierarchicalName&) const = default;
};

// Per-level, per-seed filter positions of a name: its compact wire form.
// Names deeper than the geometry fold their tail into the last level, so
// levels() <= geometry depth.
struct EncodedName {
  std::uint64_t geometry_fp = 0;                      // FilterGeometry::fingerprint()
  std::vector<std::vector<std::uint32_t>> positions;  // [level][seed]

  int levels() const { return static_cast<int>(positions.size()); }

  bool operator==(const EncodedName&) const = default;
};

// Runs the per-seed iterated hash chains over the name's fields and maps
// each digest onto its level. Field j is absorbed as
// H(seed, digest_{j-1} || '/' || field_j); fields beyond the geometry
// depth keep feeding the chain and only the final digest indexes the last
// level.
EncodedName encode_name(const HierarchicalName& name, const FilterGeometry& geometry);

// Text key of a name at a level of a d-deep stack: the joined prefix of
// `level` fields, or the whole name at level d once the name is at least
// that deep (mirroring how deep names fold into the last level).
std::string level_key(const HierarchicalName& name, int level, int stack_depth);

// Bit-packs positions level-major then seed-major, each in exactly
// b_ind(level) bits, LSB-first within the stream; the final byte is
// zero-padded. decode checks padding, rejects positions outside the
// geometry and infers the level count from the payload length.
std::vector<std::uint8_t> encode_wire(const EncodedName& name, const FilterGeometry& geometry);
EncodedName decode_wire(const std::vector<std::uint8_t>& bytes, const FilterGeometry& geometry);
EncodedName decode_wire(const std::vector<std::uint8_t>& bytes, const FilterGeometry& geometry,
                        int levels);

// --- Naming cost model -----------------------------------------------------
//
// Bits a request must carry under each scheme. Characters cost b_c bits
// each; a position costs its address width.

double hierarchical_name_bits(double characters, double bits_per_char = 8.0);
double standard_bf_name_bits(int k, int address_bits);
std::uint64_t ibf_name_bits(const FilterGeometry& geometry);
double ibf_name_bits(int d, int k_i, int address_bits_per_level);

// Largest hash count that still beats the hierarchical cost:
// floor(c*b_c / b) for a standard filter, floor(c*b_c / (d*b_ind)) per
// level for an iterated one.
int max_hashes_standard(double characters, double bits_per_char, int address_bits);
int max_hashes_ibf(double characters, double bits_per_char, int d, int address_bits_per_level);

}  // namespace ifibf
