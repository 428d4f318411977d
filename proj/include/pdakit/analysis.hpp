#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pdakit/core.hpp"

namespace pdakit {

struct BoundInput {
    int G = 1, L = 1, K = 1;
    Rational gamma;  // Z/F in [0,1]
};

// min{KG, G*K*gamma + G*ceil(L/G)} as an exact rational.
Rational dof_upper_bound(const BoundInput& in);

struct TmmaResult {
    long long best = 0;  // max Omega*beta
    int omega = 0;
    int beta = 0;
};

// Brute-force one-shot linear-delivery optimum: max Omega*beta over
// Omega in [t+1..K], beta in [1..G] with
// beta <= min(G, L*C(Omega-1,t) / (1 + (Omega-t-1)*C(Omega-1,t))),
// compared with exact rationals.
TmmaResult tmma_opt(int G, int L, int K, int t);

// Closed forms of the TST array parameters.
BigInt f_tst(int G, int L, int K, int t);
BigInt z_tst(int G, int L, int K, int t);
BigInt s_tst(int G, int L, int K, int t);

struct HybridParams {
    BigInt F, Z, S;
    int m = 0, tau1 = 0, tau2 = 0;
    BigInt Lam1, Lam2, Lam3;
};

// Closed forms of the hybrid array parameters.
HybridParams f_hybrid(int G, int L, int L1, int K1, int t1);

// Binary entropy, log base 2.
double entropy2(double gamma);

// F_hybrid / F_tst at the matched point K = m*K1, t = m*t1.
double ratio_exact(int G, int L, int L1, int K1, int t1);

// Final O-term of the subpacketization ratio:
// 2^{-(m-1) K1 H(gamma)} * K1^{-((m-1)tau1 + tau2)}.
double ratio_asymptotic(int G, int L, int L1, int K1, int t1);

struct CompareRow {
    std::string family;
    int G = 0, L = 0, K = 0;
    Rational gamma;
    bool feasible = false;
    BigInt F, S;
    Rational sum_dof;
    double ratio_to_baseline = 0.0;
};

struct CompareSpec {
    int G = 0, L = 0, L1 = 0, K1 = 0;
    std::vector<int> t1_values;  // sweep points (per-group t)
    std::vector<std::string> families;  // subset of {"tst","hybrid"}
    std::string baseline = "tst";
};

// One row per (sweep point, family); infeasible points are emitted with
// feasible=false and empty numeric columns.
std::vector<CompareRow> sweep_compare(const CompareSpec& spec);

std::string compare_csv(const std::vector<CompareRow>& rows);

// Exhaustive minimal symbol count over all (G,L,K,F,Z) arrays satisfying
// Definition 1 (stars: Z per column, any pattern; symbols: any assignment).
// Guarded to F*K <= 12 cells; throws TooLarge beyond.  The optional visitor
// sees every valid array found (used to cross-check the sum-DoF bound).
std::optional<int> brute_force_min_S(
    int G, int L, int K, int F, int Z,
    const std::function<void(const PdaArray&)>& visit = nullptr);

}  // namespace pdakit
