#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace sfr {

/// Engine used for every random stream in the library.
using Rng = std::mt19937_64;

/// Mixes a base seed with a stream index (splitmix64 finalizer applied
/// twice). Streams for different indices are statistically independent, so
/// work item `index` never depends on how many items ran before it.
[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30U)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27U)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31U);
    };
    return mix(mix(seed) ^ (index + 0x632be59bd9b4e019ULL));
}

[[nodiscard]] inline Rng make_stream(std::uint64_t seed, std::uint64_t index) {
    return Rng(derive_seed(seed, index));
}

/// Draws distinct indices from [0, n) by a partial Fisher-Yates shuffle.
/// The scratch permutation is restored after every draw, so a draw depends
/// only on the engine state, never on earlier draws.
class SubsetSampler {
public:
    explicit SubsetSampler(std::size_t n) : scratch_(n), swapped_with_() {
        for (std::size_t i = 0; i < n; ++i) scratch_[i] = i;
    }

    void draw(Rng& rng, std::span<std::size_t> out) {
        const std::size_t n = scratch_.size();
        swapped_with_.resize(out.size());
        for (std::size_t i = 0; i < out.size(); ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, n - 1);
            const std::size_t j = pick(rng);
            swapped_with_[i] = j;
            std::swap(scratch_[i], scratch_[j]);
            out[i] = scratch_[i];
        }
        for (std::size_t i = out.size(); i-- > 0;) std::swap(scratch_[i], scratch_[swapped_with_[i]]);
    }

private:
    std::vector<std::size_t> scratch_;
    std::vector<std::size_t> swapped_with_;
};

/// `n` indices drawn uniformly with replacement from [0, n).
[[nodiscard]] inline std::vector<std::size_t> resample_rows(Rng& rng, std::size_t n) {
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<std::size_t> rows(n);
    for (auto& r : rows) r = pick(rng);
    return rows;
}

}  // namespace sfr
