#pragma once

#include <cstdint>

namespace ringrec {

// PCG32 generator addressed by (seed, stream_id). Equal pairs reproduce equal
// draw sequences; distinct stream ids give statistically independent streams,
// which is how parallel sample generation stays reproducible.
class SeededRng {
public:
    SeededRng(uint64_t seed, uint64_t stream_id);

    uint64_t seed() const { return seed_; }
    uint64_t stream_id() const { return stream_id_; }

    uint32_t next_u32();
    uint64_t next_u64();

    // Uniform in [0, 1) with 53 random mantissa bits.
    double uniform01();
    double uniform(double lo, double hi);

    // Uniform integer in [0, n), n > 0, rejection-sampled (no modulo bias).
    uint64_t bounded(uint64_t n);

    // Deterministically derived child stream; children with distinct keys are
    // independent of each other and of the parent.
    SeededRng split(uint64_t key) const;

private:
    uint64_t seed_;
    uint64_t stream_id_;
    uint64_t state_;
    uint64_t inc_;
};

// SplitMix64 mixing step, used for stream derivation.
uint64_t splitmix64(uint64_t x);

}  // namespace ringrec
