#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <string>
#include <vector>

#include "ifibf/error.hpp"
#include "ifibf/hash.hpp"
#include "ifibf/name.hpp"

using namespace ifibf;

TEST_CASE("name grammar round trip") {
  const auto name = HierarchicalName::parse("Cambridge/ComputerLab/FW01/Windows");
  REQUIRE(name.depth() == 4);
  CHECK(name.fields[0] == "Cambridge");
  CHECK(name.fields[3] == "Windows");
  CHECK(name.to_string() == "Cambridge/ComputerLab/FW01/Windows");
  CHECK(name.character_count() == 9 + 11 + 4 + 7);

  CHECK(HierarchicalName::parse("solo").depth() == 1);
  CHECK_THROWS_AS(HierarchicalName::parse(""), ParseError);
  CHECK_THROWS_AS(HierarchicalName::parse("/leading"), ParseError);
  CHECK_THROWS_AS(HierarchicalName::parse("trailing/"), ParseError);
  CHECK_THROWS_AS(HierarchicalName::parse("a//b"), ParseError);
}

TEST_CASE("seed zero matches the published FNV-1a reference vectors") {
  CHECK(fnv1a64(0, "") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64(0, "a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64(0, "foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("single-field names hash straight into level one") {
  const auto geometry = FilterGeometry::uniform(4, 32768, 2, 7);
  const auto encoded = encode_name(HierarchicalName::parse("Cambridge"), geometry);
  REQUIRE(encoded.levels() == 1);
  for (int s = 0; s < geometry.k_i; ++s)
    CHECK(encoded.positions[0][static_cast<std::size_t>(s)] ==
          fnv1a64(geometry.seeds[static_cast<std::size_t>(s)], "Cambridge") % geometry.m_ind[0]);
}

TEST_CASE("shared prefixes produce identical positions level by level") {
  const auto geometry = FilterGeometry::uniform(4, 32768, 2, 3);
  const auto a = encode_name(HierarchicalName::parse("Cambridge/ComputerLab/FW01/Windows"),
                             geometry);
  const auto b = encode_name(HierarchicalName::parse("Cambridge/ComputerLab/FW26/Windows"),
                             geometry);
  CHECK(a.positions[0] == b.positions[0]);
  CHECK(a.positions[1] == b.positions[1]);
  CHECK(a.positions[2] != b.positions[2]);  // diverge where the fields diverge

  // Property over random corpora: sharing the first j fields means
  // sharing the first j position rows.
  std::uint64_t state = 99;
  for (int trial = 0; trial < 200; ++trial) {
    const int shared = 1 + static_cast<int>(splitmix64(state) % 3);
    std::string base;
    for (int j = 0; j < shared; ++j)
      base += (j ? "/f" : "f") + std::to_string(splitmix64(state) % 1000);
    const auto x = encode_name(
        HierarchicalName::parse(base + "/x" + std::to_string(splitmix64(state) % 1000)),
        geometry);
    const auto y = encode_name(
        HierarchicalName::parse(base + "/y" + std::to_string(splitmix64(state) % 1000)),
        geometry);
    for (int j = 0; j < shared; ++j) CHECK(x.positions[static_cast<std::size_t>(j)] ==
                                           y.positions[static_cast<std::size_t>(j)]);
  }
}

namespace {

// Reference chain evaluator, written against the stated rule only:
// digest_1 = H(seed, field_1), digest_j = H(seed, LE64(digest_{j-1}) ||
// '/' || field_j), position = digest mod m, tail fields folded into the
// last level.
std::uint64_t ref_fnv(std::uint64_t seed, const std::vector<std::uint8_t>& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ seed;
  for (auto b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<std::uint32_t> ref_positions(const std::vector<std::string>& fields,
                                         std::uint64_t seed, std::uint64_t m, int d) {
  std::vector<std::uint64_t> digests;
  std::vector<std::uint8_t> buf(fields[0].begin(), fields[0].end());
  digests.push_back(ref_fnv(seed, buf));
  for (std::size_t j = 1; j < fields.size(); ++j) {
    buf.clear();
    for (int i = 0; i < 8; ++i)
      buf.push_back(static_cast<std::uint8_t>(digests.back() >> (8 * i)));
    buf.push_back('/');
    buf.insert(buf.end(), fields[j].begin(), fields[j].end());
    digests.push_back(ref_fnv(seed, buf));
  }
  std::vector<std::uint32_t> out;
  const int wire = std::min<int>(static_cast<int>(fields.size()), d);
  for (int x = 0; x + 1 < wire; ++x)
    out.push_back(static_cast<std::uint32_t>(digests[static_cast<std::size_t>(x)] % m));
  out.push_back(static_cast<std::uint32_t>(digests.back() % m));
  return out;
}

}  // namespace

TEST_CASE("deep names fold their tail into the last level") {
  const auto geometry = FilterGeometry::uniform(4, 32768, 1, 42);
  const std::vector<std::string> fields = {"a", "b", "c", "d", "e", "f"};
  const auto encoded = encode_name(HierarchicalName::parse("a/b/c/d/e/f"), geometry);
  REQUIRE(encoded.levels() == 4);

  const auto expected = ref_positions(fields, geometry.seeds[0], 32768, 4);
  for (std::size_t x = 0; x < 4; ++x) CHECK(encoded.positions[x][0] == expected[x]);

  // The fold must differ from simply truncating the name.
  const auto truncated = encode_name(HierarchicalName::parse("a/b/c/d"), geometry);
  CHECK(encoded.positions[3] != truncated.positions[3]);
  CHECK(encoded.positions[2] == truncated.positions[2]);
}

TEST_CASE("shallow names occupy only their levels") {
  const auto geometry = FilterGeometry::uniform(4, 32768, 1, 42);
  CHECK(encode_name(HierarchicalName::parse("a/b"), geometry).levels() == 2);
}

TEST_CASE("wire form packs sixty bits into eight bytes") {
  const auto geometry = FilterGeometry::uniform(4, 32768, 1, 5);
  const auto encoded = encode_name(HierarchicalName::parse("a/b/c/d"), geometry);
  CHECK(geometry.name_bits(4) == 60);
  const auto wire = encode_wire(encoded, geometry);
  CHECK(wire.size() == 8);
  CHECK(decode_wire(wire, geometry) == encoded);
}

TEST_CASE("wire encoding is a pure function of the encoded name") {
  const auto geometry = FilterGeometry::uniform(4, 32768, 2, 5);
  const auto encoded = encode_name(HierarchicalName::parse("x/y/z"), geometry);
  CHECK(encode_wire(encoded, geometry) == encode_wire(encoded, geometry));
}

TEST_CASE("wire round trip over random names") {
  const auto geometry = FilterGeometry::uniform(4, 23000, 3, 17);  // non-power-of-two m
  std::uint64_t state = 1;
  for (int trial = 0; trial < 10000; ++trial) {
    EncodedName name;
    name.geometry_fp = geometry.fingerprint();
    const int levels = 1 + static_cast<int>(splitmix64(state) % 4);
    name.positions.resize(static_cast<std::size_t>(levels));
    for (auto& level : name.positions)
      for (int s = 0; s < geometry.k_i; ++s)
        level.push_back(static_cast<std::uint32_t>(splitmix64(state) % 23000));
    const auto wire = encode_wire(name, geometry);
    CHECK(decode_wire(wire, geometry) == name);
  }
}

TEST_CASE("wire decode rejects malformed payloads") {
  const auto geometry = FilterGeometry::uniform(4, 32768, 1, 5);
  const auto encoded = encode_name(HierarchicalName::parse("a/b/c/d"), geometry);
  auto wire = encode_wire(encoded, geometry);

  auto truncated = wire;
  truncated.pop_back();
  CHECK_THROWS_AS(decode_wire(truncated, geometry, 4), DecodeError);

  auto padded = wire;
  padded.back() |= 0xf0;  // the four pad bits
  CHECK_THROWS_AS(decode_wire(padded, geometry), DecodeError);

  // A position beyond m_ind can fit in the address bits when m is not a
  // power of two.
  const auto odd_geometry = FilterGeometry::uniform(1, 23000, 1, 5);
  EncodedName name;
  name.geometry_fp = odd_geometry.fingerprint();
  name.positions = {{22999}};
  auto ok_wire = encode_wire(name, odd_geometry);
  CHECK(decode_wire(ok_wire, odd_geometry) == name);
  const std::vector<std::uint8_t> bad_wire = {0xff, 0x7f};  // 32767 >= 23000 in 15 bits
  CHECK_THROWS_AS(decode_wire(bad_wire, odd_geometry), DecodeError);

  EncodedName empty;
  empty.geometry_fp = geometry.fingerprint();
  CHECK_THROWS_AS(encode_wire(empty, geometry), InvalidParameter);
}

TEST_CASE("naming cost anchors") {
  CHECK(hierarchical_name_bits(4 * 4.5, 8.0) == 144.0);
  CHECK(standard_bf_name_bits(4, 17) == 68.0);
  CHECK(ibf_name_bits(2, 2, 16) == 64.0);
  CHECK(ibf_name_bits(4, 1, 15) == 60.0);

  const auto geometry = FilterGeometry::uniform(4, 32768, 1, 0);
  CHECK(ibf_name_bits(geometry) == 60);
}

TEST_CASE("hash-count budgets against the hierarchical cost") {
  CHECK(max_hashes_standard(18.0, 8.0, 17) == 8);  // fewer than 9
  CHECK(max_hashes_ibf(18.0, 8.0, 2, 16) == 4);    // fewer than 5
  CHECK(max_hashes_ibf(18.0, 8.0, 4, 15) == 2);    // fewer than 3
}

TEST_CASE("cost crossover happens exactly at the budget bound") {
  for (int d : {1, 2, 4})
    for (int b = 8; b <= 24; ++b)
      for (int k_i = 1; k_i <= 12; ++k_i) {
        const bool cheaper = ibf_name_bits(d, k_i, b) <= hierarchical_name_bits(18.0, 8.0);
        CHECK(cheaper == (k_i <= max_hashes_ibf(18.0, 8.0, d, b)));
      }
}

TEST_CASE("encoding rejects foreign geometries") {
  const auto geometry = FilterGeometry::uniform(4, 32768, 1, 5);
  const auto other = FilterGeometry::uniform(4, 32768, 1, 6);
  const auto encoded = encode_name(HierarchicalName::parse("a/b"), geometry);
  CHECK_THROWS_AS(encode_wire(encoded, other), GeometryMismatch);
}
