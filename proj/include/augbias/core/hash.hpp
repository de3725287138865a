#pragma once

#include <cstdint>
#include <string_view>

namespace augbias {

// 64-bit FNV-1a, used to fingerprint specs in reports and snapshot files.
inline std::uint64_t fnv1a(std::string_view text) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace augbias
