#pragma once

#include <cstdint>

namespace summakit {

/// Counter-based random stream: the value at (seed, stream, index) is a pure
/// function of its coordinates, so corpora are reproducible in any language
/// and elements can be generated independently. Built from the SplitMix64
/// finalizer.
class CounterRng {
public:
    constexpr CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept : key_(mix(seed ^ mix(stream + kGolden))) {}

    [[nodiscard]] constexpr std::uint64_t bits(std::uint64_t index) const noexcept {
        return mix(key_ + kGolden * (index + 1));
    }
    /// Uniform on [0, 1) with 53 random bits.
    [[nodiscard]] constexpr double uniform(std::uint64_t index) const noexcept {
        return static_cast<double>(bits(index) >> 11) * 0x1.0p-53;
    }
    /// Uniform integer in [lo, hi].
    [[nodiscard]] constexpr std::int64_t integer(std::uint64_t index, std::int64_t lo, std::int64_t hi) const noexcept {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(bits(index) % span);
    }

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
    std::uint64_t key_;
};

}  // namespace summakit
