#include "pdakit/channel.hpp"

#include <cmath>

namespace pdakit {

std::complex<double> sample_cn01(SplitMix64& rng) {
    double u1 = rng.uniform01();
    double u2 = rng.uniform01();
    double r = std::sqrt(-std::log(u1));  // Rayleigh with E[r^2] = 1
    return {r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
}

ChannelSet sample_channels(int K, int G, int L, uint64_t seed) {
    if (K < 1 || G < 1 || L < 1) fail(ErrorKind::BadParams, "K, G, L must be positive");
    ChannelSet ch;
    ch.K = K;
    ch.G = G;
    ch.L = L;
    ch.seed = seed;
    SplitMix64 rng(mix_seed(seed, 0x4368616e6e656cULL));
    ch.H.reserve(K);
    for (int k = 0; k < K; ++k) {
        Eigen::MatrixXcd m(G, L);
        for (int i = 0; i < G; ++i)
            for (int j = 0; j < L; ++j) m(i, j) = sample_cn01(rng);
        ch.H.push_back(std::move(m));
    }
    return ch;
}

ChannelSet fixed_channels(const std::vector<Eigen::MatrixXcd>& matrices) {
    if (matrices.empty()) fail(ErrorKind::DimensionMismatch, "no channel matrices given");
    ChannelSet ch;
    ch.K = static_cast<int>(matrices.size());
    ch.G = static_cast<int>(matrices[0].rows());
    ch.L = static_cast<int>(matrices[0].cols());
    if (ch.G < 1 || ch.L < 1) fail(ErrorKind::DimensionMismatch, "empty channel matrix");
    for (const auto& m : matrices)
        if (m.rows() != ch.G || m.cols() != ch.L)
            fail(ErrorKind::DimensionMismatch, "channel matrices have mixed dimensions");
    ch.H = matrices;
    return ch;
}

}  // namespace pdakit
