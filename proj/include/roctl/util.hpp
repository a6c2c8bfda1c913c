// Miscellaneous helpers shared across modules.
#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

namespace roctl {

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v, int digits = 16) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return std::string(buf + (16 - digits));
}

}  // namespace roctl
