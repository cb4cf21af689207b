#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace dsy::rng {

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers:
/// as easy as 1, 2, 3"). Counter-based: output depends only on (counter, key).
using philox_counter = std::array<std::uint32_t, 4>;
using philox_key = std::array<std::uint32_t, 2>;

inline philox_counter philox4x32(philox_counter ctr, philox_key key) noexcept {
    constexpr std::uint32_t m0 = 0xD2511F53u;
    constexpr std::uint32_t m1 = 0xCD9E8D57u;
    constexpr std::uint32_t w0 = 0x9E3779B9u;
    constexpr std::uint32_t w1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = std::uint64_t{m0} * ctr[0];
        const std::uint64_t p1 = std::uint64_t{m1} * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += w0;
        key[1] += w1;
    }
    return ctr;
}

/// 64-bit finalizer (splitmix64). Bijective on uint64.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

constexpr std::uint64_t root_key = 0x243F6A8885A308D3ull;

/// Key of child `symbol` (1 or 2) given the parent's key. Folding this from
/// `root_key` along a word gives a key that depends only on the word.
constexpr std::uint64_t child_key(std::uint64_t parent, int symbol) noexcept {
    return mix64(parent ^ (0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(symbol)));
}

/// Seed of replica `index` under a master seed.
constexpr std::uint64_t replica_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return mix64(mix64(master) ^ mix64(index + 0x5851F42D4C957F2Dull));
}

/// Independent purposes drawn from the same (seed, vertex) pair.
enum class purpose : std::uint32_t {
    clock = 1,
    children = 2,
    path_step = 3,
    replica = 4,
    auxiliary = 5,
};

/// A counter-based stream keyed by (seed, site, purpose). Drawing from one
/// stream never perturbs another, so a vertex's draws do not depend on the
/// order in which the tree is explored.
class stream {
public:
    using result_type = std::uint64_t;

    stream(std::uint64_t seed, std::uint64_t site, purpose tag) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          site_lo_(static_cast<std::uint32_t>(site)),
          site_hi_(static_cast<std::uint32_t>(site >> 32)),
          tag_(static_cast<std::uint32_t>(tag)) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    std::uint32_t next_u32() noexcept {
        if (pos_ == 4) refill();
        return buf_[pos_++];
    }

    result_type operator()() noexcept {
        const std::uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform() noexcept {
        const std::uint64_t bits = (*this)() >> 11;
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    /// Mean-one exponential.
    double exponential() noexcept { return -std::log(uniform()); }

    /// Uniform integer in [lo, hi] (inclusive), rejection-free for small ranges.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) noexcept {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        // Lemire's multiply-shift; bias below 2^-32 for spans used here.
        const unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * span;
        return lo + static_cast<std::int64_t>(m >> 64);
    }

    std::uint64_t blocks_used() const noexcept { return block_; }

private:
    void refill() noexcept {
        buf_ = philox4x32({site_lo_, site_hi_, tag_, block_}, key_);
        ++block_;
        pos_ = 0;
    }

    philox_key key_;
    std::uint32_t site_lo_;
    std::uint32_t site_hi_;
    std::uint32_t tag_;
    std::uint32_t block_ = 0;
    philox_counter buf_{};
    int pos_ = 4;
};

}  // namespace dsy::rng
