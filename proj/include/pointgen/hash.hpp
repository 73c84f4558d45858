#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace pointgen {

// FNV-1a, 64-bit. Used for seed derivation and artifact digests; not crypto.
inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

inline std::uint64_t fnv1a(const void* data, std::size_t n,
                           std::uint64_t h = kFnvOffset) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= kFnvPrime;
  }
  return h;
}

inline std::uint64_t fnv1a(std::string_view s, std::uint64_t h = kFnvOffset) {
  return fnv1a(s.data(), s.size(), h);
}

inline std::uint64_t fnv1a_u64(std::uint64_t v, std::uint64_t h = kFnvOffset) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  return fnv1a(b, 8, h);
}

// Derives an independent seed stream from a base seed and a tag.
inline std::uint64_t mix_seed(std::uint64_t base, std::string_view tag) {
  return fnv1a(tag, fnv1a_u64(base));
}

inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt) {
  return fnv1a_u64(salt, fnv1a_u64(base));
}

std::string hex_digest(std::uint64_t h);

// Digest of a file's raw bytes; throws IoError if unreadable.
std::uint64_t file_digest(const std::string& path);

}  // namespace pointgen
