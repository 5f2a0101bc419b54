#include "ifibf/name.hpp"

#include <cmath>

#include "ifibf/error.hpp"
#include "ifibf/hash.hpp"

namespace ifibf {

HierarchicalName HierarchicalName::parse(std::string_view text) {
  HierarchicalName name;
  if (text.empty()) throw ParseError("name: empty input");
  std::size_t start = 0;
  while (true) {
    std::size_t slash = text.find('/', start);
    std::string_view field =
        slash == std::string_view::npos ? text.substr(start) : text.substr(start, slash - start);
    if (field.empty()) throw ParseError("name: empty field in '" + std::string(text) + "'");
    name.fields.emplace_back(field);
    if (slash == std::string_view::npos) break;
    start = slash + 1;
  }
  return name;
}

std::string HierarchicalName::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += '/';
    out += fields[i];
  }
  return out;
}

std::size_t HierarchicalName::character_count() const {
  std::size_t c = 0;
  for (const auto& f : fields) c += f.size();
  return c;
}

EncodedName encode_name(const HierarchicalName& name, const FilterGeometry& geometry) {
  geometry.validate();
  if (name.fields.empty()) throw ParseError("encode_name: name has no fields");
  for (const auto& f : name.fields)
    if (f.empty()) throw ParseError("encode_name: empty field");

  const int d = geometry.depth();
  const int wire_levels = std::min(name.depth(), d);

  EncodedName out;
  out.geometry_fp = geometry.fingerprint();
  out.positions.assign(static_cast<std::size_t>(wire_levels), {});
  for (auto& lvl : out.positions) lvl.resize(static_cast<std::size_t>(geometry.k_i));

  for (int s = 0; s < geometry.k_i; ++s) {
    const std::uint64_t seed = geometry.seeds[static_cast<std::size_t>(s)];
    std::uint64_t digest = fnv1a64(seed, name.fields[0]);
    // Fields at or beyond the last level keep extending the chain; only
    // the digest after the final field indexes that level.
    for (int j = 1; j < name.depth(); ++j) {
      if (j < wire_levels)
        out.positions[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(s)] =
            static_cast<std::uint32_t>(digest % geometry.m_ind[static_cast<std::size_t>(j - 1)]);
      digest = chain_step(seed, digest, name.fields[static_cast<std::size_t>(j)]);
    }
    out.positions[static_cast<std::size_t>(wire_levels - 1)][static_cast<std::size_t>(s)] =
        static_cast<std::uint32_t>(digest %
                                   geometry.m_ind[static_cast<std::size_t>(wire_levels - 1)]);
  }
  return out;
}

std::string level_key(const HierarchicalName& name, int level, int stack_depth) {
  if (level == stack_depth && name.depth() >= stack_depth) return name.to_string();
  std::string key = name.fields[0];
  for (int j = 1; j < level; ++j) {
    key += '/';
    key += name.fields[static_cast<std::size_t>(j)];
  }
  return key;
}

namespace {

class BitWriter {
 public:
  void put(std::uint32_t value, int bits) {
    for (int i = 0; i < bits; ++i) {
      if (bit_ == 0) bytes_.push_back(0);
      if (value >> i & 1u) bytes_.back() |= static_cast<std::uint8_t>(1u << bit_);
      bit_ = (bit_ + 1) & 7;
    }
  }
  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
  int bit_ = 0;
};

class BitReader {
 public:
  explicit BitReader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  std::uint32_t get(int bits) {
    std::uint32_t v = 0;
    for (int i = 0; i < bits; ++i) {
      const std::size_t byte = pos_ >> 3;
      if (byte >= bytes_.size()) throw DecodeError("wire name: truncated input");
      if (bytes_[byte] >> (pos_ & 7) & 1u) v |= 1u << i;
      ++pos_;
    }
    return v;
  }

  bool padding_clear() const {
    for (std::size_t p = pos_; p < bytes_.size() * 8; ++p)
      if (bytes_[p >> 3] >> (p & 7) & 1u) return false;
    return true;
  }

 private:
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_wire(const EncodedName& name, const FilterGeometry& geometry) {
  geometry.validate();
  if (name.positions.empty()) throw InvalidParameter("encode_wire: no levels to encode");
  if (name.geometry_fp != geometry.fingerprint())
    throw GeometryMismatch("encode_wire: name was encoded for a different geometry");
  if (name.levels() > geometry.depth())
    throw GeometryMismatch("encode_wire: name has more levels than the geometry");

  BitWriter writer;
  for (int x = 1; x <= name.levels(); ++x) {
    const auto& level = name.positions[static_cast<std::size_t>(x - 1)];
    if (level.size() != static_cast<std::size_t>(geometry.k_i))
      throw GeometryMismatch("encode_wire: level " + std::to_string(x) +
                             " does not carry k_i positions");
    const int bits = geometry.level_address_bits(x);
    for (std::uint32_t pos : level) {
      if (pos >= geometry.m_ind[static_cast<std::size_t>(x - 1)])
        throw GeometryMismatch("encode_wire: position out of range at level " + std::to_string(x));
      writer.put(pos, bits);
    }
  }
  return writer.take();
}

EncodedName decode_wire(const std::vector<std::uint8_t>& bytes, const FilterGeometry& geometry,
                        int levels) {
  geometry.validate();
  if (levels < 1 || levels > geometry.depth())
    throw DecodeError("wire name: level count outside geometry");
  const std::uint64_t bits = geometry.name_bits(levels);
  if (bytes.size() != (bits + 7) / 8)
    throw DecodeError("wire name: payload length does not match level count");

  BitReader reader(bytes);
  EncodedName out;
  out.geometry_fp = geometry.fingerprint();
  out.positions.assign(static_cast<std::size_t>(levels), {});
  for (int x = 1; x <= levels; ++x) {
    const int width = geometry.level_address_bits(x);
    const std::uint64_t m = geometry.m_ind[static_cast<std::size_t>(x - 1)];
    for (int s = 0; s < geometry.k_i; ++s) {
      const std::uint32_t pos = reader.get(width);
      if (pos >= m)
        throw DecodeError("wire name: position " + std::to_string(pos) +
                          " outside level " + std::to_string(x));
      out.positions[static_cast<std::size_t>(x - 1)].push_back(pos);
    }
  }
  if (!reader.padding_clear()) throw DecodeError("wire name: nonzero padding bits");
  return out;
}

EncodedName decode_wire(const std::vector<std::uint8_t>& bytes, const FilterGeometry& geometry) {
  // The payload carries no level count; recover it from the length.
  int match = 0;
  for (int levels = 1; levels <= geometry.depth(); ++levels) {
    if (bytes.size() == (geometry.name_bits(levels) + 7) / 8) {
      if (match != 0)
        throw DecodeError("wire name: payload length is ambiguous, pass the level count");
      match = levels;
    }
  }
  if (match == 0) throw DecodeError("wire name: payload length matches no level count");
  return decode_wire(bytes, geometry, match);
}

double hierarchical_name_bits(double characters, double bits_per_char) {
  return characters * bits_per_char;
}

double standard_bf_name_bits(int k, int address_bits) {
  return static_cast<double>(k) * address_bits;
}

std::uint64_t ibf_name_bits(const FilterGeometry& geometry) {
  return geometry.name_bits(geometry.depth());
}

double ibf_name_bits(int d, int k_i, int address_bits_per_level) {
  return static_cast<double>(d) * k_i * address_bits_per_level;
}

int max_hashes_standard(double characters, double bits_per_char, int address_bits) {
  return static_cast<int>(std::floor(characters * bits_per_char / address_bits));
}

int max_hashes_ibf(double characters, double bits_per_char, int d, int address_bits_per_level) {
  return static_cast<int>(
      std::floor(characters * bits_per_char / (static_cast<double>(d) * address_bits_per_level)));
}

}  // namespace ifibf
