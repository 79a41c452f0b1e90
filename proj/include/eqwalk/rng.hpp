#pragma once

// Counter-based random numbers (Philox4x32-10). A stream is addressed by
// (base_seed, replicate_index); the i-th 128-bit block of a stream is a pure
// function of (key, replicate, i), so replicates can be generated in any order
// on any thread and still reproduce bit for bit.

#include <array>
#include <cstdint>
#include <limits>
#include <numbers>

namespace eqwalk {

struct SeedSpec {
    std::uint64_t base_seed = 0;
    std::uint64_t replicate_index = 0;
};

/// SplitMix64 finalizer; used to derive sub-seeds from (seed, tag) pairs.
constexpr std::uint64_t mix64(std::uint64_t z)
{
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// A base seed for an independent family of streams, e.g. one per n.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag)
{
    return mix64(base ^ mix64(tag + 0x632BE59BD9B4E019ULL));
}

using PhiloxBlock = std::array<std::uint32_t, 4>;

constexpr PhiloxBlock philox4x32_10(PhiloxBlock ctr, std::array<std::uint32_t, 2> key)
{
    constexpr std::uint64_t m0 = 0xD2511F53u, m1 = 0xCD9E8D57u;
    constexpr std::uint32_t w0 = 0x9E3779B9u, w1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = m0 * ctr[0];
        const std::uint64_t p1 = m1 * ctr[2];
        ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
               static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
        key[0] += w0;
        key[1] += w1;
    }
    return ctr;
}

/// Sequential view of one (base_seed, replicate_index) stream. Satisfies
/// UniformRandomBitGenerator.
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit CounterRng(SeedSpec seed) : seed_(seed) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()()
    {
        if (buffered_ == 0) refill();
        --buffered_;
        return buffer_[buffered_];
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform angle on [0, 2 pi).
    double angle() { return 2.0 * std::numbers::pi * uniform(); }

    bool coin() { return ((*this)() >> 63) != 0; }

    /// Uniform integer in [0, bound) by rejection (no modulo bias).
    std::uint64_t below(std::uint64_t bound)
    {
        const std::uint64_t limit = max() - max() % bound;
        std::uint64_t x;
        do {
            x = (*this)();
        } while (x >= limit);
        return x % bound;
    }

    std::uint64_t blocks_used() const { return block_; }
    const SeedSpec& seed() const { return seed_; }

private:
    void refill()
    {
        const PhiloxBlock out = philox4x32_10(
            {static_cast<std::uint32_t>(seed_.replicate_index),
             static_cast<std::uint32_t>(seed_.replicate_index >> 32), static_cast<std::uint32_t>(block_),
             static_cast<std::uint32_t>(block_ >> 32)},
            {static_cast<std::uint32_t>(seed_.base_seed), static_cast<std::uint32_t>(seed_.base_seed >> 32)});
        ++block_;
        buffer_[1] = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
        buffer_[0] = (static_cast<std::uint64_t>(out[2]) << 32) | out[3];
        buffered_ = 2;
    }

    SeedSpec seed_;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int buffered_ = 0;
};

}  // namespace eqwalk
