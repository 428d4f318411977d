#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "pdakit/errors.hpp"

namespace pdakit {

// splitmix64: tiny, platform-stable integer PRNG used for all sampling.
struct SplitMix64 {
    uint64_t state;
    explicit SplitMix64(uint64_t seed) : state(seed) {}
    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform01() {  // in (0,1]
        return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
    }
};

inline uint64_t mix_seed(uint64_t a, uint64_t b) {
    SplitMix64 s(a ^ (b * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL));
    s.next();
    return s.next();
}

// Standard circularly-symmetric complex Gaussian via Box-Muller; real and
// imaginary parts N(0, 1/2) so E|z|^2 = 1.
std::complex<double> sample_cn01(SplitMix64& rng);

// Per-user G x L channel matrices.
struct ChannelSet {
    int K = 0, G = 0, L = 0;
    uint64_t seed = 0;
    std::vector<Eigen::MatrixXcd> H;  // size K
};

// Entries i.i.d. CN(0,1) from a seeded generator; identical seed gives
// identical channels.
ChannelSet sample_channels(int K, int G, int L, uint64_t seed);

// Wraps caller-supplied matrices; throws DimensionMismatch on ragged or
// empty input.
ChannelSet fixed_channels(const std::vector<Eigen::MatrixXcd>& matrices);

}  // namespace pdakit
