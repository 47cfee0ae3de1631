#pragma once
// Seed plumbing. Every randomized component takes an explicit 64-bit seed and
// derives its own stream, so runs are reproducible end to end.

#include <cstdint>

namespace ecoc {

// splitmix64 finalizer (public domain construction by Sebastiano Vigna).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Derives the seed for sub-stream `stream` of a run seeded with `seed`.
// Used so that e.g. the train/test split and the matrix search of one trial
// never consume from the same generator. stream ids are small constants
// documented at the call sites.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream + 1));
}

} // namespace ecoc
