#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace ifibf {

// Seeded FNV-1a, 64 bit. With seed 0 this is plain FNV-1a64, so the
// published reference vectors apply (e.g. fnv1a64(0, "a") ==
// 0xaf63dc4c8601ec8c). Non-zero seeds are folded into the offset basis.
inline constexpr std::uint64_t kFnvOffsetBasis = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

constexpr std::uint64_t fnv1a64(std::uint64_t seed, const void* data, std::size_t len) {
  std::uint64_t h = kFnvOffsetBasis ^ seed;
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= kFnvPrime;
  }
  return h;
}

constexpr std::uint64_t fnv1a64(std::uint64_t seed, std::string_view s) {
  return fnv1a64(seed, s.data(), s.size());
}

// splitmix64 step. Used to derive per-hash-function seeds from one base
// seed and as a portable uniform generator in tests and Monte-Carlo code.
constexpr std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// One step of an iterated hash chain: absorb the previous digest (little
// endian), a '/' byte, then the next field.
inline std::uint64_t chain_step(std::uint64_t seed, std::uint64_t prev_digest,
                                std::string_view field) {
  unsigned char buf[9];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(prev_digest >> (8 * i));
  buf[8] = '/';
  std::uint64_t h = kFnvOffsetBasis ^ seed;
  for (unsigned char c : buf) {
    h ^= c;
    h *= kFnvPrime;
  }
  for (char c : field) {
    h ^= static_cast<unsigned char>(c);
    h *= kFnvPrime;
  }
  return h;
}

}  // namespace ifibf
