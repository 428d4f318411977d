#pragma once

#include <complex>
#include <map>
#include <vector>

#include "pdakit/channel.hpp"
#include "pdakit/core.hpp"

namespace pdakit {

// One transmission block: the users served by a symbol and, per packet, the
// interfering served users (whose column is non-star at the packet row).
struct DeliveryBlock {
    int symbol = 0;
    std::vector<int> served_users;  // ascending, 0-based columns
    struct Packet {
        int user = 0;  // 0-based column
        int row = 0;   // 0-based row
        std::vector<int> interferers;  // ascending served users, excludes user
    };
    std::vector<Packet> packets;  // (user, row) order
};

// One block per symbol 1..S.  Requires validate(p).ok().
std::vector<DeliveryBlock> plan_delivery(const PdaArray& p);

// Orthonormal basis of the right null space of M; columns v satisfy
// ||Mv|| <= tol * ||M||.  dimension = cols - numerical rank.
Eigen::MatrixXcd null_space(const Eigen::MatrixXcd& M, double tol);

using PacketKey = std::pair<int, int>;  // (user, row)

struct PrecoderSet {
    std::map<PacketKey, Eigen::VectorXcd> v;  // per packet, L-vector
    double max_residual = 0.0;  // max ||Hbar v|| / ||Hbar|| over packets
};

// Null-space precoders per packet.  Packets of one user sharing an identical
// interferer set receive successive orthonormal basis vectors of the common
// null space; throws NullSpaceExhausted if such a group outgrows the null
// space (the delivery-side symptom of a C4-b violation).
PrecoderSet zf_precoders(const DeliveryBlock& b, const ChannelSet& ch, double tol = 1e-8);

// Star pattern of an array (true = cached by that user).
struct CacheMask {
    int F = 0, K = 0;
    std::vector<char> starred;  // row-major
    bool at(int f, int k) const { return starred[static_cast<size_t>(f) * K + k] != 0; }
};
CacheMask cache_mask(const PdaArray& p);

struct BlockDecode {
    std::map<PacketKey, std::complex<double>> recovered;
    std::map<PacketKey, double> rel_error;
    double max_rel_error = 0.0;
    bool rank_ok = true;
};

// Received-signal simulation for every served user of one block: cached
// packets are cancelled, the effective G x g_i matrix must have numerical
// rank g_i (else RankDeficient), and the desired symbols are solved for.
BlockDecode decode_block(const DeliveryBlock& b, const ChannelSet& ch,
                         const PrecoderSet& pre,
                         const std::map<PacketKey, std::complex<double>>& payload,
                         const CacheMask& mask, double tol = 1e-8);

struct SimReport {
    long blocks_run = 0;
    double max_zf_residual = 0.0;
    double max_decode_error = 0.0;
    bool min_precoder_rank_ok = true;
    std::vector<int> per_block_dof;  // packets per block, index s-1
    bool success = false;
    Rational mean_block_dof;
};

// Report thresholds (noiseless double precision).
inline constexpr double kZfResidualTol = 1e-10;
inline constexpr double kDecodeTol = 1e-6;

struct DumpRow {
    int block;  // symbol id
    int user;
    int packet_row;
    double zf_residual;
    double decode_error;
};

// trials x (all blocks) with per-trial channels and payloads derived from
// (seed, trial).  Parallelises over blocks (PDAKIT_THREADS caps workers);
// aggregates are reduced in block order so results are schedule-independent.
// dump, when non-null, receives one row per packet of the first trial.
SimReport simulate(const PdaArray& p, uint64_t seed, int trials, double tol = 1e-8,
                   std::vector<DumpRow>* dump = nullptr);

}  // namespace pdakit
