#include "pdakit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "pdakit/combinatorics.hpp"
#include "pdakit/validate.hpp"

namespace pdakit {

Rational dof_upper_bound(const BoundInput& in) {
    Rational cap = Rational(in.G) * in.K * in.gamma +
                   Rational(static_cast<long long>(in.G) * ceil_div(in.L, in.G));
    Rational kg(static_cast<long long>(in.K) * in.G);
    return std::min(kg, cap);
}

TmmaResult tmma_opt(int G, int L, int K, int t) {
    if (t < 1 || t >= K) fail(ErrorKind::BadParams, "requires 1 <= t < K");
    TmmaResult best;
    for (int omega = t + 1; omega <= K; ++omega) {
        BigInt c = binomial(omega - 1, t);
        Rational cap(static_cast<BigInt>(L) * c, 1 + BigInt(omega - t - 1) * c);
        for (int beta = G; beta >= 1; --beta) {
            if (Rational(beta) > cap) continue;
            long long val = static_cast<long long>(omega) * beta;
            if (val > best.best) best = {val, omega, beta};
            break;  // larger beta dominates
        }
    }
    return best;
}

BigInt f_tst(int G, int L, int K, int t) {
    int tau = ceil_div(L, G);
    if (t < 1 || t + tau > K) fail(ErrorKind::BadParams, "requires t + ceil(L/G) <= K");
    return BigInt(G) * binomial(K, t) * binomial(K - t - 1, tau - 1);
}

BigInt z_tst(int G, int L, int K, int t) {
    int tau = ceil_div(L, G);
    if (t < 1 || t + tau > K) fail(ErrorKind::BadParams, "requires t + ceil(L/G) <= K");
    return BigInt(G) * binomial(K - 1, t - 1) * binomial(K - t - 1, tau - 1);
}

BigInt s_tst(int G, int L, int K, int t) {
    int tau = ceil_div(L, G);
    if (t < 1 || t + tau > K) fail(ErrorKind::BadParams, "requires t + ceil(L/G) <= K");
    return binomial(K, t + tau) * binomial(t + tau - 1, t);
}

HybridParams f_hybrid(int G, int L, int L1, int K1, int t1) {
    HybridParams h;
    h.tau1 = ceil_div(L1, G);
    int tau = ceil_div(L, G);
    h.m = tau / h.tau1;
    h.tau2 = tau - h.m * h.tau1;
    if (h.m < 1 || h.tau2 <= 0)
        fail(ErrorKind::BadParams, "requires ceil(L/G) = m*ceil(L1/G) + tau2 with tau2 > 0");
    if (t1 % h.tau1 != 0 || K1 % h.tau1 != 0)
        fail(ErrorKind::BadParams, "requires tau1 | t1 and tau1 | K1");
    if (t1 + h.tau1 >= K1) fail(ErrorKind::BadParams, "requires t1 + tau1 < K1");
    if ((t1 + h.tau1) % h.tau2 != 0) fail(ErrorKind::BadParams, "requires tau2 | (t1 + tau1)");
    h.Lam1 = binomial(K1 - t1 - 1, h.tau1 - 1);
    h.Lam2 = binomial(t1 + h.tau1 - 1, h.tau1 - 1);
    h.Lam3 = binomial(t1 + h.tau1 - 1, h.tau2 - 1);
    if (2 * BigInt(G) > h.Lam2) fail(ErrorKind::BadParams, "requires 2G <= C(t1+tau1-1, t1)");
    BigInt g = boost::multiprecision::gcd(BigInt(G), h.Lam2);
    BigInt blocks(h.m * (t1 + h.tau1) / h.tau2 + 1);
    h.F = BigInt(G) * h.Lam1 * h.Lam3 / g * blocks * binomial(K1, t1);
    h.Z = BigInt(G) * h.Lam1 * h.Lam3 / g * blocks * binomial(K1 - 1, t1 - 1);
    h.S = BigInt(h.m) * h.Lam2 * h.Lam3 / g * ((t1 + h.tau1) / h.tau2) *
          binomial(K1, t1 + h.tau1);
    return h;
}

double entropy2(double gamma) {
    if (gamma <= 0.0 || gamma >= 1.0) return 0.0;
    return -gamma * std::log2(gamma) - (1.0 - gamma) * std::log2(1.0 - gamma);
}

double ratio_exact(int G, int L, int L1, int K1, int t1) {
    HybridParams h = f_hybrid(G, L, L1, K1, t1);
    BigInt ft = f_tst(G, L, h.m * K1, h.m * t1);
    return static_cast<double>(Rational(h.F, ft));
}

double ratio_asymptotic(int G, int L, int L1, int K1, int t1) {
    HybridParams h = f_hybrid(G, L, L1, K1, t1);
    double gamma = static_cast<double>(t1) / K1;
    double log2r = -(h.m - 1.0) * K1 * entropy2(gamma) -
                   ((h.m - 1.0) * h.tau1 + h.tau2) * std::log2(static_cast<double>(K1));
    return std::exp2(log2r);
}

std::vector<CompareRow> sweep_compare(const CompareSpec& spec) {
    std::vector<CompareRow> rows;
    for (int t1 : spec.t1_values) {
        // baseline F at this point (when computable)
        std::optional<BigInt> baseF;
        auto family_params = [&](const std::string& fam)
            -> std::optional<std::tuple<int, int, BigInt, BigInt>> {
            // returns (K, t, F, S)
            try {
                if (fam == "tst") {
                    HybridParams h = f_hybrid(spec.G, spec.L, spec.L1, spec.K1, t1);
                    int K = h.m * spec.K1, t = h.m * t1;
                    return std::make_tuple(K, t, f_tst(spec.G, spec.L, K, t),
                                           s_tst(spec.G, spec.L, K, t));
                }
                HybridParams h = f_hybrid(spec.G, spec.L, spec.L1, spec.K1, t1);
                return std::make_tuple(h.m * spec.K1, h.m * t1, h.F, h.S);
            } catch (const Error&) {
                return std::nullopt;
            }
        };
        if (auto bp = family_params(spec.baseline)) baseF = std::get<2>(*bp);
        for (const auto& fam : spec.families) {
            CompareRow row;
            row.family = fam;
            row.G = spec.G;
            row.L = spec.L;
            auto fp = family_params(fam);
            if (!fp) {
                row.K = 0;
                row.feasible = false;
                rows.push_back(row);
                continue;
            }
            auto [K, t, F, S] = *fp;
            row.K = K;
            row.gamma = Rational(t, K);
            row.feasible = true;
            row.F = F;
            row.S = S;
            BoundInput bi{spec.G, spec.L, K, row.gamma};
            row.sum_dof = dof_upper_bound(bi);  // both families are optimal
            if (baseF && *baseF > 0)
                row.ratio_to_baseline = static_cast<double>(Rational(F, *baseF));
            rows.push_back(row);
        }
    }
    return rows;
}

std::string compare_csv(const std::vector<CompareRow>& rows) {
    std::ostringstream os;
    os << "family,G,L,K,gamma,F,S,sum_dof,ratio\n";
    for (const auto& r : rows) {
        os << r.family << ',' << r.G << ',' << r.L << ',';
        if (!r.feasible) {
            os << "na,na,na,na,na,na\n";
            continue;
        }
        os << r.K << ',' << render_rational(r.gamma) << ',' << r.F << ',' << r.S << ','
           << render_rational(r.sum_dof) << ',' << r.ratio_to_baseline << '\n';
    }
    return os.str();
}

namespace {

// Enumerate star patterns column by column (Z stars per column), then symbol
// assignments as restricted-growth strings so each partition of the integer
// cells is visited once.  Prunes on C3 while assigning.
struct BruteSearch {
    int G, L, K, F, Z;
    const std::function<void(const PdaArray&)>* visit;
    std::optional<int> best;

    std::vector<std::vector<int>> col_star_choices;  // Z-subsets of rows
    std::vector<int> col_choice;                     // current pattern index
    std::vector<std::pair<int, int>> cells;          // integer cells (row, col)
    std::vector<int> assign;                         // class per cell

    void run() {
        auto patterns = ksubsets(F, Z);  // rows are 1-based in the subsets
        col_star_choices.clear();
        for (auto& p : patterns) col_star_choices.push_back(p);
        col_choice.assign(K, 0);
        descend_columns(0);
    }

    void descend_columns(int k) {
        if (k == K) {
            assign_symbols();
            return;
        }
        for (int c = 0; c < static_cast<int>(col_star_choices.size()); ++c) {
            col_choice[k] = c;
            descend_columns(k + 1);
        }
    }

    void assign_symbols() {
        cells.clear();
        for (int f = 0; f < F; ++f)
            for (int k = 0; k < K; ++k) {
                const auto& stars = col_star_choices[col_choice[k]];
                if (!std::binary_search(stars.begin(), stars.end(), f + 1))
                    cells.push_back({f, k});
            }
        assign.assign(cells.size(), -1);
        recurse(0, 0);
    }

    void recurse(size_t i, int nclasses) {
        if (i == cells.size()) {
            if (nclasses == 0) return;  // all-star array carries no symbols
            check(nclasses);
            return;
        }
        for (int c = 0; c <= nclasses && c < static_cast<int>(cells.size()); ++c) {
            // the class count never shrinks, so reaching best already loses
            if (best && std::max(nclasses, c + 1) >= *best) continue;
            assign[i] = c;
            if (c3_violated(i)) continue;
            recurse(i + 1, std::max(nclasses, c + 1));
        }
    }

    bool c3_violated(size_t i) const {
        int count = 1;
        const int col = cells[i].second;
        for (size_t j = 0; j < i; ++j)
            if (cells[j].second == col && assign[j] == assign[i]) ++count;
        return count > G;
    }

    void check(int nclasses) {
        PdaArray p = make_array(G, L, F, K, nclasses);
        for (size_t i = 0; i < cells.size(); ++i)
            p.at(cells[i].first, cells[i].second) = assign[i] + 1;
        ValidationReport v = validate(p);
        if (!v.ok()) return;
        if (visit && *visit) (*visit)(p);
        if (!best || nclasses < *best) best = nclasses;
    }
};

}  // namespace

std::optional<int> brute_force_min_S(int G, int L, int K, int F, int Z,
                                     const std::function<void(const PdaArray&)>& visit) {
    if (F < 1 || K < 1 || Z < 0 || Z > F) fail(ErrorKind::BadParams, "bad (F,K,Z)");
    if (static_cast<long long>(F) * K > 12)
        fail(ErrorKind::TooLarge, "brute force guarded to F*K <= 12");
    BruteSearch s;
    s.G = G;
    s.L = L;
    s.K = K;
    s.F = F;
    s.Z = Z;
    s.visit = &visit;
    s.run();
    return s.best;
}

}  // namespace pdakit
