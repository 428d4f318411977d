#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "pdakit/errors.hpp"

namespace pdakit {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Entry of a placement delivery array: kStar, or a symbol id in [1..S].
using Entry = int;
inline constexpr Entry kStar = 0;

inline int ceil_div(int a, int b) { return (a + b - 1) / b; }

// <a>_q: least non-negative residue of a mod q, except that multiples of q
// map to q itself (so the value always lies in [1..q]).
inline int least_positive_residue(long long a, int q) {
    long long r = a % q;
    if (r < 0) r += q;
    return r == 0 ? q : static_cast<int>(r);
}

// An F x K array over {star} (union) [1..S] with antenna parameters G
// (receive antennas per user) and L (server antennas).  Rows index packets,
// columns index users.  Value type; all operations on it are pure.
struct PdaArray {
    int G = 1;
    int L = 1;
    int F = 0;  // rows
    int K = 0;  // columns
    int S = 0;  // symbol count
    std::vector<Entry> cells;  // row-major, F*K

    Entry at(int f, int k) const { return cells[static_cast<size_t>(f) * K + k]; }
    Entry& at(int f, int k) { return cells[static_cast<size_t>(f) * K + k]; }

    bool is_star(int f, int k) const { return at(f, k) == kStar; }

    int tau() const { return ceil_div(L, G); }
    int rho() const { return least_positive_residue(L, G); }
};

inline PdaArray make_array(int G, int L, int F, int K, int S) {
    PdaArray p;
    p.G = G;
    p.L = L;
    p.F = F;
    p.K = K;
    p.S = S;
    p.cells.assign(static_cast<size_t>(F) * K, kStar);
    return p;
}

// Structural well-formedness (shape and id ranges); the Definition-1
// conditions are checked by validate().
void check_well_formed(const PdaArray& p);

// Renumber symbols 1..S by first occurrence in row-major order.  The star
// pattern is unchanged and validation/metrics results are invariant.
PdaArray relabel_symbols(const PdaArray& p);

std::string render_rational(const Rational& r);  // "P/Q", Q always printed

}  // namespace pdakit
