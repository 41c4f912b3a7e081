#pragma once

#include <array>
#include <cstdint>

namespace graphon::rng {

// Philox 4x32-10 counter-based generator (Salmon, Moraes, Dror, Shaw 2011).
// Stateless: every draw is a pure function of (key, counter), so sampling a
// graphon entry (i, j) under a seed never depends on evaluation order.  The
// round function and key schedule follow the published construction; tests
// pin the reference known-answer vectors.
struct Philox4x32 {
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                              std::array<std::uint32_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t prod0 = std::uint64_t(kMul0) * ctr[0];
            const std::uint64_t prod1 = std::uint64_t(kMul1) * ctr[2];
            const std::array<std::uint32_t, 4> next = {
                static_cast<std::uint32_t>(prod1 >> 32) ^ ctr[1] ^ key[0],
                static_cast<std::uint32_t>(prod1),
                static_cast<std::uint32_t>(prod0 >> 32) ^ ctr[3] ^ key[1],
                static_cast<std::uint32_t>(prod0),
            };
            ctr = next;
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        return ctr;
    }
};

// Uniform double in [0, 1) from the top 53 bits of a Philox block keyed by
// `seed` with counter words (a, b, c, 0).
double uniform53(std::uint64_t seed, std::uint32_t a, std::uint32_t b, std::uint32_t c = 0);

// splitmix64 finalizer (Steele et al.), used to derive independent stream
// seeds (e.g. one seed per Monte Carlo replicate) from a base seed.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace graphon::rng
