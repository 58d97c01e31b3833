// rng.hpp
// Counter-based random streams. A stream is a 64-bit key derived from
// (master_seed, stream_index); draw i is mix(key + i * golden), so any replication can be
// regenerated on its own and worker scheduling never changes a result.
#pragma once

#include <cstdint>

namespace salab {

inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class RngStream {
public:
    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

    RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
        : key_(mix64(master_seed ^ mix64(stream_index + kGolden) ^ 0x5a1ab5eedULL)) {}

    std::uint64_t next_u64() { return mix64(key_ + (++counter_) * kGolden); }

    // Uniform on the open interval (0,1): (k + 1/2) / 2^53.
    double uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace salab
