#pragma once

#include <cstdint>
#include <vector>

namespace twistscan {

inline std::vector<std::uint32_t> primes_up_to(std::uint64_t n) {
    std::vector<std::uint32_t> out;
    if (n < 2) return out;
    std::vector<bool> composite(n + 1, false);
    for (std::uint64_t i = 2; i * i <= n; ++i)
        if (!composite[i])
            for (std::uint64_t j = i * i; j <= n; j += i) composite[j] = true;
    for (std::uint64_t i = 2; i <= n; ++i)
        if (!composite[i]) out.push_back(static_cast<std::uint32_t>(i));
    return out;
}

// Squarefree flags for 1..n (index 0 unused).
inline std::vector<bool> squarefree_up_to(std::uint64_t n) {
    std::vector<bool> sf(n + 1, true);
    if (n >= 1) sf[0] = false;
    for (std::uint64_t q = 2; q * q <= n; ++q)
        for (std::uint64_t j = q * q; j <= n; j += q * q) sf[j] = false;
    return sf;
}

}  // namespace twistscan
