#include "pdakit/delivery.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <sstream>
#include <thread>

#include <Eigen/SVD>

#include "pdakit/validate.hpp"

namespace pdakit {

std::vector<DeliveryBlock> plan_delivery(const PdaArray& p) {
    ValidationReport v = validate(p);
    if (!v.ok()) fail(ErrorKind::InvalidArray, "plan_delivery requires a validated array");
    std::vector<DeliveryBlock> blocks(p.S);
    for (int s = 1; s <= p.S; ++s) {
        DeliveryBlock& b = blocks[s - 1];
        b.symbol = s;
        for (int k = 0; k < p.K; ++k)
            for (int f = 0; f < p.F; ++f)
                if (p.at(f, k) == s) {
                    if (b.served_users.empty() || b.served_users.back() != k)
                        b.served_users.push_back(k);
                    b.packets.push_back({k, f, {}});
                }
        for (auto& pk : b.packets)
            for (int u : b.served_users)
                if (u != pk.user && !p.is_star(pk.row, u)) pk.interferers.push_back(u);
    }
    return blocks;
}

Eigen::MatrixXcd null_space(const Eigen::MatrixXcd& M, double tol) {
    if (tol <= 0) fail(ErrorKind::BadParams, "tol must be positive");
    const int n = static_cast<int>(M.cols());
    if (M.rows() == 0) return Eigen::MatrixXcd::Identity(n, n);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > tol * sv(0)) ++rank;
    return svd.matrixV().rightCols(n - rank);
}

CacheMask cache_mask(const PdaArray& p) {
    CacheMask m;
    m.F = p.F;
    m.K = p.K;
    m.starred.assign(static_cast<size_t>(p.F) * p.K, 0);
    for (int f = 0; f < p.F; ++f)
        for (int k = 0; k < p.K; ++k)
            if (p.is_star(f, k)) m.starred[static_cast<size_t>(f) * p.K + k] = 1;
    return m;
}

PrecoderSet zf_precoders(const DeliveryBlock& b, const ChannelSet& ch, double tol) {
    PrecoderSet out;
    // One SVD per distinct interferer set in the block.
    struct NullInfo {
        Eigen::MatrixXcd stacked;
        Eigen::MatrixXcd basis;
        double norm = 0.0;  // spectral norm of the stacked matrix
    };
    std::map<std::vector<int>, NullInfo> spaces;
    std::map<std::pair<int, std::vector<int>>, int> next_index;  // (user, set)
    for (const auto& pk : b.packets) {
        auto it = spaces.find(pk.interferers);
        if (it == spaces.end()) {
            NullInfo info;
            if (pk.interferers.empty()) {
                info.basis = Eigen::MatrixXcd::Identity(ch.L, ch.L);
                info.norm = 0.0;
            } else {
                info.stacked.resize(static_cast<int>(pk.interferers.size()) * ch.G, ch.L);
                for (size_t i = 0; i < pk.interferers.size(); ++i)
                    info.stacked.middleRows(static_cast<int>(i) * ch.G, ch.G) =
                        ch.H[pk.interferers[i]];
                Eigen::JacobiSVD<Eigen::MatrixXcd> svd(info.stacked, Eigen::ComputeFullV);
                const auto& sv = svd.singularValues();
                int rank = 0;
                for (int i = 0; i < sv.size(); ++i)
                    if (sv(i) > tol * sv(0)) ++rank;
                info.basis = svd.matrixV().rightCols(ch.L - rank);
                info.norm = sv(0);
            }
            it = spaces.emplace(pk.interferers, std::move(info)).first;
        }
        const NullInfo& info = it->second;
        int& idx = next_index[{pk.user, pk.interferers}];
        if (idx >= info.basis.cols()) {
            std::ostringstream os;
            os << "block " << b.symbol << ", user " << pk.user << ", row " << pk.row
               << ": more packets share an interference set than the null-space "
                  "dimension (C4-b violation upstream)";
            fail(ErrorKind::NullSpaceExhausted, os.str());
        }
        Eigen::VectorXcd v = info.basis.col(idx++);
        if (info.norm > 0)
            out.max_residual =
                std::max(out.max_residual, (info.stacked * v).norm() / info.norm);
        out.v.emplace(PacketKey{pk.user, pk.row}, std::move(v));
    }
    return out;
}

BlockDecode decode_block(const DeliveryBlock& b, const ChannelSet& ch,
                         const PrecoderSet& pre,
                         const std::map<PacketKey, std::complex<double>>& payload,
                         const CacheMask& mask, double tol) {
    BlockDecode out;
    // transmitted L-vector
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(ch.L);
    for (const auto& pk : b.packets)
        x += pre.v.at({pk.user, pk.row}) * payload.at({pk.user, pk.row});

    for (int u : b.served_users) {
        Eigen::VectorXcd y = ch.H[u] * x;
        std::vector<const DeliveryBlock::Packet*> mine;
        for (const auto& pk : b.packets) {
            if (pk.user == u) {
                mine.push_back(&pk);
            } else if (mask.at(pk.row, u)) {
                // cached at user u: cancel from the received signal
                y -= ch.H[u] * pre.v.at({pk.user, pk.row}) * payload.at({pk.user, pk.row});
            }
        }
        const int gi = static_cast<int>(mine.size());
        Eigen::MatrixXcd effective(ch.G, gi);
        for (int j = 0; j < gi; ++j)
            effective.col(j) = ch.H[u] * pre.v.at({mine[j]->user, mine[j]->row});
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(effective,
                                               Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& sv = svd.singularValues();
        int rank = 0;
        for (int i = 0; i < sv.size(); ++i)
            if (sv(i) > tol * sv(0)) ++rank;
        if (rank < gi) {
            out.rank_ok = false;
            std::ostringstream os;
            os << "user " << u << ", block " << b.symbol << ": effective matrix rank "
               << rank << " < " << gi;
            fail(ErrorKind::RankDeficient, os.str());
        }
        Eigen::VectorXcd sol = svd.solve(y);
        for (int j = 0; j < gi; ++j) {
            PacketKey key{mine[j]->user, mine[j]->row};
            std::complex<double> want = payload.at(key);
            double err = std::abs(sol(j) - want) / std::max(1e-300, std::abs(want));
            out.recovered[key] = sol(j);
            out.rel_error[key] = err;
            out.max_rel_error = std::max(out.max_rel_error, err);
        }
    }
    return out;
}

namespace {

int worker_count(size_t jobs) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("PDAKIT_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) hw = static_cast<unsigned>(std::min<long>(v, 1024));
    }
    return static_cast<int>(std::min<size_t>(hw, jobs == 0 ? 1 : jobs));
}

}  // namespace

SimReport simulate(const PdaArray& p, uint64_t seed, int trials, double tol,
                   std::vector<DumpRow>* dump) {
    if (trials < 1) fail(ErrorKind::BadParams, "trials must be positive");
    auto blocks = plan_delivery(p);
    CacheMask mask = cache_mask(p);

    SimReport rep;
    rep.per_block_dof.reserve(blocks.size());
    long long total_packets = 0;
    for (const auto& b : blocks) {
        rep.per_block_dof.push_back(static_cast<int>(b.packets.size()));
        total_packets += static_cast<long long>(b.packets.size());
    }
    rep.mean_block_dof = Rational(total_packets, static_cast<long long>(blocks.size()));

    struct BlockResult {
        double residual = 0.0;
        double decode_err = 0.0;
        std::string error;  // non-empty on exception
    };

    for (int trial = 0; trial < trials; ++trial) {
        ChannelSet ch = sample_channels(p.K, p.G, p.L, mix_seed(seed, trial));
        std::vector<BlockResult> results(blocks.size());
        std::atomic<size_t> cursor{0};
        auto run_block = [&](size_t bi) {
            const DeliveryBlock& b = blocks[bi];
            BlockResult& res = results[bi];
            try {
                std::map<PacketKey, std::complex<double>> payload;
                SplitMix64 rng(mix_seed(mix_seed(seed, trial),
                                        0x5061796cULL + static_cast<uint64_t>(bi)));
                for (const auto& pk : b.packets)
                    payload[{pk.user, pk.row}] = sample_cn01(rng);
                PrecoderSet pre = zf_precoders(b, ch, tol);
                BlockDecode dec = decode_block(b, ch, pre, payload, mask, tol);
                res.residual = pre.max_residual;
                res.decode_err = dec.max_rel_error;
                if (trial == 0 && dump) {
                    // collected after the parallel phase, see below
                }
            } catch (const Error& e) {
                res.error = e.what();
            }
        };
        const int nthreads = worker_count(blocks.size());
        if (nthreads <= 1) {
            for (size_t bi = 0; bi < blocks.size(); ++bi) run_block(bi);
        } else {
            std::vector<std::thread> pool;
            for (int t = 0; t < nthreads; ++t)
                pool.emplace_back([&]() {
                    for (size_t bi = cursor.fetch_add(1); bi < blocks.size();
                         bi = cursor.fetch_add(1))
                        run_block(bi);
                });
            for (auto& th : pool) th.join();
        }
        for (size_t bi = 0; bi < blocks.size(); ++bi) {
            const BlockResult& res = results[bi];
            if (!res.error.empty())
                fail(ErrorKind::RankDeficient,
                     "trial " + std::to_string(trial) + ": " + res.error);
            rep.max_zf_residual = std::max(rep.max_zf_residual, res.residual);
            rep.max_decode_error = std::max(rep.max_decode_error, res.decode_err);
        }
        rep.blocks_run += static_cast<long>(blocks.size());
        if (trial == 0 && dump) {
            // Re-run sequentially for the dump rows (small, first trial only).
            for (const auto& b : blocks) {
                std::map<PacketKey, std::complex<double>> payload;
                SplitMix64 rng(mix_seed(mix_seed(seed, trial),
                                        0x5061796cULL +
                                            static_cast<uint64_t>(b.symbol - 1)));
                for (const auto& pk : b.packets)
                    payload[{pk.user, pk.row}] = sample_cn01(rng);
                PrecoderSet pre = zf_precoders(b, ch, tol);
                BlockDecode dec = decode_block(b, ch, pre, payload, mask, tol);
                for (const auto& pk : b.packets) {
                    Eigen::VectorXcd v = pre.v.at({pk.user, pk.row});
                    double resid = 0.0;
                    if (!pk.interferers.empty()) {
                        Eigen::MatrixXcd stacked(
                            static_cast<int>(pk.interferers.size()) * ch.G, ch.L);
                        for (size_t i = 0; i < pk.interferers.size(); ++i)
                            stacked.middleRows(static_cast<int>(i) * ch.G, ch.G) =
                                ch.H[pk.interferers[i]];
                        resid = (stacked * v).norm() / stacked.norm();
                    }
                    dump->push_back({b.symbol, pk.user, pk.row, resid,
                                     dec.rel_error.at({pk.user, pk.row})});
                }
            }
        }
    }
    rep.success = rep.min_precoder_rank_ok && rep.max_zf_residual < kZfResidualTol &&
                  rep.max_decode_error < kDecodeTol;
    return rep;
}

}  // namespace pdakit
