#pragma once

#include <cstdint>

#include <boost/random/mersenne_twister.hpp>

namespace chi2dens {

/// Engine used for every stochastic routine. boost's distributions are used on
/// top of it so the numeric stream does not depend on the standard library
/// implementation.
using Rng = boost::random::mt19937_64;

/// SplitMix64 finalizer; derives decorrelated seeds for independent streams.
[[nodiscard]] constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

[[nodiscard]] inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
    return Rng(mix_seed(seed, stream));
}

}  // namespace chi2dens
