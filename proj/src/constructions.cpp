#include "pdakit/constructions.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "pdakit/validate.hpp"

namespace pdakit {

namespace {

constexpr long long kMaxCells = 50'000'000;

void guard_size(long long rows, long long cols) {
    if (rows <= 0 || cols <= 0 || rows * cols > kMaxCells)
        fail(ErrorKind::TooLarge, "array would have " + std::to_string(rows) + "x" +
                                      std::to_string(cols) + " cells");
}

// 1-based lexicographic rank of a sorted k-subset of [v].
long long subset_rank(const std::vector<int>& sub, int v) {
    const int k = static_cast<int>(sub.size());
    long long r = 0;
    int prev = 0;
    for (int i = 0; i < k; ++i) {
        for (int x = prev + 1; x < sub[i]; ++x) r += binomial_ll(v - x, k - 1 - i);
        prev = sub[i];
    }
    return r + 1;
}

std::vector<int> complement(const std::vector<int>& sub, int v) {
    std::vector<int> out;
    auto it = sub.begin();
    for (int x = 1; x <= v; ++x) {
        if (it != sub.end() && *it == x) {
            ++it;
            continue;
        }
        out.push_back(x);
    }
    return out;
}

}  // namespace

std::string StructuredSymbol::render() const {
    std::ostringstream os;
    os << '{';
    for (size_t i = 0; i < set.size(); ++i) {
        if (i) os << ',';
        os << set[i];
    }
    os << '}';
    for (int t : tail) os << ':' << t;
    return os.str();
}

int32_t StructuredArray::intern(const StructuredSymbol& s) {
    auto it = index.find(s);
    if (it != index.end()) return it->second;
    int32_t id = static_cast<int32_t>(symbols.size());
    symbols.push_back(s);
    index.emplace(s, id);
    return id;
}

PdaArray flatten(const StructuredArray& a) {
    PdaArray p = make_array(a.G, a.L, a.rows, a.cols, 0);
    std::vector<int> remap(a.symbols.size(), 0);
    int next = 0;
    for (int f = 0; f < a.rows; ++f)
        for (int k = 0; k < a.cols; ++k) {
            int32_t id = a.at(f, k);
            if (id < 0) continue;
            if (remap[id] == 0) remap[id] = ++next;
            p.at(f, k) = remap[id];
        }
    p.S = next;
    return p;
}

PdaArray mn_pda(int K, int t) {
    if (t < 1 || t >= K) fail(ErrorKind::BadParams, "mn_pda requires 1 <= t < K");
    const long long F = binomial_ll(K, t);
    guard_size(F, K);
    PdaArray p = make_array(1, 1, static_cast<int>(F), K, static_cast<int>(binomial_ll(K, t + 1)));
    auto rows = ksubsets(K, t);
    for (int f = 0; f < p.F; ++f) {
        const auto& T = rows[f];
        for (int k = 1; k <= K; ++k) {
            if (std::binary_search(T.begin(), T.end(), k)) continue;
            std::vector<int> s = T;
            s.insert(std::lower_bound(s.begin(), s.end(), k), k);
            p.at(f, k - 1) = static_cast<int>(subset_rank(s, K));
        }
    }
    return p;
}

PdaArray tst(int G, int L, int K, int t) {
    if (G < 1 || L < 1 || t < 1) fail(ErrorKind::BadParams, "G, L, t must be positive");
    const int tau = ceil_div(L, G);
    if (t + tau > K)
        fail(ErrorKind::BadParams, "requires t + ceil(L/G) <= K");
    // Feasibility (relaxed TST condition): the construction's consistency
    // number ceil(G / C(t+tau-1, t)) must not exceed <L>_G.
    const long long nc = binomial_ll(t + tau - 1, t);
    const int mu = static_cast<int>((G + nc - 1) / nc);
    if (mu > least_positive_residue(L, G))
        fail(ErrorKind::Infeasible,
             "consistency number ceil(G/C(t+tau-1,t))=" + std::to_string(mu) +
                 " exceeds <L>_G=" + std::to_string(least_positive_residue(L, G)));

    auto Ts = ksubsets(K, t);
    auto Rs = ksubsets(K - t - 1, tau - 1);
    const long long F = static_cast<long long>(G) * Ts.size() * Rs.size();
    guard_size(F, K);

    StructuredArray a;
    a.G = G;
    a.L = L;
    a.rows = static_cast<int>(F);
    a.cols = K;
    a.cells.assign(static_cast<size_t>(F) * K, -1);

    // Row order: l outermost, then T lexicographic, then R lexicographic.
    // The top-down scan below then spreads the l-layers of one (T,R) across
    // distinct ceil(o/G) buckets, which is what keeps C4-b happy.
    struct RowLabel {
        const std::vector<int>* T;
        const std::vector<int>* R;
    };
    std::vector<RowLabel> rows;
    rows.reserve(F);
    for (int l = 1; l <= G; ++l)
        for (const auto& T : Ts)
            for (const auto& R : Rs) rows.push_back({&T, &R});

    for (int k = 1; k <= K; ++k) {
        std::map<std::vector<int>, int> order;
        for (int f = 0; f < a.rows; ++f) {
            const auto& T = *rows[f].T;
            if (std::binary_search(T.begin(), T.end(), k)) continue;
            std::vector<int> comp;  // [K] \ ({k} u T), ascending
            comp.reserve(K - t - 1);
            auto it = T.begin();
            for (int x = 1; x <= K; ++x) {
                if (it != T.end() && *it == x) {
                    ++it;
                    continue;
                }
                if (x != k) comp.push_back(x);
            }
            std::vector<int> s = T;
            for (int pos : *rows[f].R) s.push_back(comp[pos - 1]);
            s.push_back(k);
            std::sort(s.begin(), s.end());
            int o = ++order[s];
            StructuredSymbol sym{std::move(s), {ceil_div(o, G)}};
            a.set(f, k - 1, a.intern(sym));
        }
    }
    return flatten(a);
}

PdaArray square_cyclic(int G, int L, int K, int t) {
    if (G < 1 || L < 1 || t < 1 || t >= K)
        fail(ErrorKind::BadParams, "requires positive G, L and 1 <= t < K");
    const int tau = ceil_div(L, G);
    if (K > tau + t) fail(ErrorKind::BadParams, "requires K <= ceil(L/G) + t");
    if (least_positive_residue(L, G) > K - t)
        fail(ErrorKind::BadParams, "requires <L>_G <= K - t");
    guard_size(static_cast<long long>(G) * K, K);

    PdaArray p = make_array(G, L, G * K, K, K - t);
    // row (i-1)*K + (j-1) has stars at columns {j, <j+1>_K, ..., <j+t-1>_K}
    std::vector<std::vector<char>> star(K + 1, std::vector<char>(K + 1, 0));
    for (int j = 1; j <= K; ++j)
        for (int d = 0; d < t; ++d) star[j][least_positive_residue(j + d, K)] = 1;
    for (int k = 1; k <= K; ++k) {
        int lambda = 0;
        for (int i = 0; i < G; ++i)
            for (int j = 1; j <= K; ++j) {
                if (star[j][k]) continue;
                p.at(i * K + j - 1, k - 1) = ceil_div(++lambda, G);
            }
    }
    return p;
}

PdaArray group_replicate(const PdaArray& base, int m, int L) {
    if (m < 1) fail(ErrorKind::BadParams, "m must be positive");
    PdaMetrics mt = metrics(base);  // throws InvalidArray when base is invalid
    if (!mt.is_optimal) fail(ErrorKind::BadParams, "base array is not optimal");
    if (m * ceil_div(base.L, base.G) != ceil_div(L, base.G))
        fail(ErrorKind::BadParams,
             "requires m*ceil(L1/G) == ceil(L/G); got m=" + std::to_string(m) +
                 ", L1=" + std::to_string(base.L) + ", L=" + std::to_string(L));
    if (least_positive_residue(L, base.G) < mt.mu)
        fail(ErrorKind::BadParams, "requires <L>_G >= consistency number of the base");
    // uniform star count per row (K1*Z1/F1 each)
    if ((static_cast<long long>(base.K) * mt.Z) % base.F != 0)
        fail(ErrorKind::BadParams, "K1*Z1/F1 is not an integer");
    const int row_stars = static_cast<int>(static_cast<long long>(base.K) * mt.Z / base.F);
    for (int f = 0; f < base.F; ++f) {
        int c = 0;
        for (int k = 0; k < base.K; ++k)
            if (base.is_star(f, k)) ++c;
        if (c != row_stars)
            fail(ErrorKind::BadParams, "row " + std::to_string(f) + " has " +
                                           std::to_string(c) + " stars, expected " +
                                           std::to_string(row_stars));
    }
    guard_size(base.F, static_cast<long long>(m) * base.K);
    PdaArray p = make_array(base.G, L, base.F, m * base.K, base.S);
    for (int f = 0; f < p.F; ++f)
        for (int k = 1; k <= p.K; ++k)
            p.at(f, k - 1) = base.at(f, least_positive_residue(k, base.K) - 1);
    return p;
}

StructuredArray new_tst_b(int G, int K1, int t1, int tau1, int L1) {
    if (G < 1 || tau1 < 1 || t1 < 1) fail(ErrorKind::BadParams, "G, t1, tau1 must be positive");
    if (t1 % tau1 != 0) fail(ErrorKind::BadParams, "requires tau1 | t1");
    if (K1 % tau1 != 0) fail(ErrorKind::BadParams, "requires tau1 | K1");
    if (t1 + tau1 >= K1) fail(ErrorKind::BadParams, "requires t1 + tau1 < K1");
    const long long Lam1 = binomial_ll(K1 - t1 - 1, tau1 - 1);
    const long long Lam2 = binomial_ll(t1 + tau1 - 1, tau1 - 1);
    if (2LL * G > Lam2)
        fail(ErrorKind::BadParams, "requires 2G <= C(t1+tau1-1, t1)");
    const long long g = std::gcd(static_cast<long long>(G), Lam2);
    const int nl = static_cast<int>(G / g);

    auto Ts = ksubsets(K1, t1);
    const long long F1 = static_cast<long long>(nl) * Ts.size() * Lam1;
    guard_size(F1, K1);

    StructuredArray a;
    a.G = G;
    a.L = L1;
    a.rows = static_cast<int>(F1);
    a.cols = K1;
    a.cells.assign(static_cast<size_t>(F1) * K1, -1);

    int f = 0;
    for (int l = 1; l <= nl; ++l)
        for (const auto& T : Ts) {
            std::vector<int> R = complement(T, K1);
            Factorization fr = baranyai(R, tau1);
            for (int r = 1; r <= Lam1; ++r, ++f) {
                for (const auto& blk : fr.classes[r - 1]) {
                    std::vector<int> S = T;
                    S.insert(S.end(), blk.begin(), blk.end());
                    std::sort(S.begin(), S.end());
                    Factorization fs = baranyai(S, tau1);
                    auto [d, j] = locate(fs, blk);
                    (void)j;
                    int second = ceil_div(d + (l - 1) * static_cast<int>(Lam2), G);
                    StructuredSymbol sym{S, {second}};
                    int32_t id = a.intern(sym);
                    for (int k : blk) a.set(f, k - 1, id);
                }
            }
        }
    return a;
}

namespace {

StructuredArray replicate_horizontal(const StructuredArray& b, int m, int L,
                                     bool append_copy_index) {
    StructuredArray out;
    out.G = b.G;
    out.L = L;
    out.rows = b.rows;
    out.cols = b.cols * m;
    out.cells.assign(static_cast<size_t>(out.rows) * out.cols, -1);
    for (int f = 0; f < b.rows; ++f)
        for (int c = 0; c < m; ++c)
            for (int k = 0; k < b.cols; ++k) {
                int32_t id = b.at(f, k);
                if (id < 0) continue;
                StructuredSymbol s = b.symbols[id];
                if (append_copy_index) s.tail.push_back(c + 1);
                out.set(f, c * b.cols + k, out.intern(s));
            }
    return out;
}

StructuredArray replicate_vertical_indexed(const StructuredArray& b, int copies, int L) {
    StructuredArray out;
    out.G = b.G;
    out.L = L;
    out.rows = b.rows * copies;
    out.cols = b.cols;
    out.cells.assign(static_cast<size_t>(out.rows) * out.cols, -1);
    for (int c = 0; c < copies; ++c)
        for (int f = 0; f < b.rows; ++f)
            for (int k = 0; k < b.cols; ++k) {
                int32_t id = b.at(f, k);
                if (id < 0) continue;
                StructuredSymbol s = b.symbols[id];
                s.tail.push_back(c + 1);
                out.set(c * b.rows + f, k, out.intern(s));
            }
    return out;
}

}  // namespace

HybridTrace hybrid(int G, int L, int L1, int K1, int t1) {
    const int tau1 = ceil_div(L1, G);
    const int tau = ceil_div(L, G);
    const int m = tau / tau1;
    const int tau2 = tau - m * tau1;
    if (m < 1) fail(ErrorKind::BadParams, "requires ceil(L/G) >= ceil(L1/G)");
    if (tau2 == 0)
        fail(ErrorKind::BadParams,
             "tau2 = 0 (ceil(L1/G) divides ceil(L/G)); use group_replicate instead");
    if ((t1 + tau1) % tau2 != 0) fail(ErrorKind::BadParams, "requires tau2 | (t1 + tau1)");

    auto trace = std::make_shared<HybridTrace>();
    trace->m = m;
    trace->tau1 = tau1;
    trace->tau2 = tau2;
    trace->Lam1 = binomial_ll(K1 - t1 - 1, tau1 - 1);
    trace->Lam2 = binomial_ll(t1 + tau1 - 1, tau1 - 1);
    trace->Lam3 = binomial_ll(t1 + tau1 - 1, tau2 - 1);
    const long long Lam2 = trace->Lam2;
    const long long Lam3 = trace->Lam3;

    // Step 1: base array B.
    trace->B = new_tst_b(G, K1, t1, tau1, L1);
    const StructuredArray& B = trace->B;

    // Step 2: Q = m horizontal copies of B (shared symbols), then X = vertical
    // copies of Q with the replication index appended.  X's antenna parameter
    // keeps the residue of L1 so that ceil(L_X/G) = m*tau1.
    const int LX = G * (m * tau1 - 1) + least_positive_residue(L1, G);
    trace->Q = replicate_horizontal(B, m, LX, /*append_copy_index=*/false);
    const long long nx = static_cast<long long>(m) * binomial_ll(t1 + tau1, tau2);
    guard_size(trace->Q.rows * nx, trace->Q.cols);
    trace->X = replicate_vertical_indexed(trace->Q, static_cast<int>(nx), LX);

    // Step 3: T = Lam3 vertical copies of B; non-star entries gain (y1, y2)
    // where the column sits in block y2 of parallel class y1 of the
    // tau2-factorization of the entry's subset.  Y = m horizontal copies of T
    // with y3 appended.
    StructuredArray T;
    T.G = G;
    T.L = L;
    T.rows = B.rows * static_cast<int>(Lam3);
    T.cols = B.cols;
    T.cells.assign(static_cast<size_t>(T.rows) * T.cols, -1);
    for (int y1 = 1; y1 <= Lam3; ++y1)
        for (int f = 0; f < B.rows; ++f)
            for (int k = 1; k <= B.cols; ++k) {
                int32_t id = B.at(f, k - 1);
                if (id < 0) continue;
                const StructuredSymbol& base = B.symbols[id];
                Factorization u = baranyai(base.set, tau2);
                int y2 = 0;
                const auto& cls = u.classes[y1 - 1];
                for (size_t j = 0; j < cls.size(); ++j)
                    if (std::binary_search(cls[j].begin(), cls[j].end(), k)) {
                        y2 = static_cast<int>(j) + 1;
                        break;
                    }
                StructuredSymbol s = base;
                s.tail.push_back(y1);
                s.tail.push_back(y2);
                T.set((y1 - 1) * B.rows + f, k - 1, T.intern(s));
            }
    trace->T = T;
    trace->Y = replicate_horizontal(T, m, L, /*append_copy_index=*/true);
    const StructuredArray& X = trace->X;
    const StructuredArray& Y = trace->Y;

    // Step 4: bipartite symbol graph.  x = (S, a, x3) is adjacent to
    // y = (S', a', y1, y2, y3) iff |S u S'| = t1+tau1+tau2, S' \ S is block
    // (y1, y2) of the tau2-factorization of S', and
    // G <= <(a - a')G>_{Lam2} <= Lam2 - G.
    std::vector<StructuredSymbol> xs = X.symbols;
    std::sort(xs.begin(), xs.end());
    std::vector<StructuredSymbol> ys = Y.symbols;
    std::sort(ys.begin(), ys.end());
    SymbolGraph graph;
    for (const auto& s : xs) graph.x_labels.push_back(s.render());
    for (const auto& s : ys) graph.y_labels.push_back(s.render());
    std::map<StructuredSymbol, int> yid;
    for (size_t i = 0; i < ys.size(); ++i) yid.emplace(ys[i], static_cast<int>(i));

    auto Ssets = ksubsets(K1, t1 + tau1);
    const int na = static_cast<int>(Lam2 / std::gcd(static_cast<long long>(G), Lam2));
    for (size_t xi = 0; xi < xs.size(); ++xi) {
        const auto& S = xs[xi].set;
        const int a = xs[xi].tail[0];
        for (const auto& Sp : Ssets) {
            std::vector<int> uni;
            std::set_union(S.begin(), S.end(), Sp.begin(), Sp.end(), std::back_inserter(uni));
            if (static_cast<int>(uni.size()) != t1 + tau1 + tau2) continue;
            std::vector<int> diff;
            std::set_difference(Sp.begin(), Sp.end(), S.begin(), S.end(),
                                std::back_inserter(diff));
            Factorization u = baranyai(Sp, tau2);
            auto [y1, y2] = locate(u, diff);
            for (int ap = 1; ap <= na; ++ap) {
                int r = least_positive_residue(static_cast<long long>(a - ap) * G,
                                               static_cast<int>(Lam2));
                if (r < G || r > Lam2 - G) continue;
                for (int y3 = 1; y3 <= m; ++y3) {
                    StructuredSymbol y{Sp, {ap, y1, y2, y3}};
                    auto it = yid.find(y);
                    if (it != yid.end())
                        graph.edges.push_back({static_cast<int>(xi), it->second});
                }
            }
        }
    }
    trace->graph = graph;
    trace->matching = max_matching(graph);
    if (!trace->matching.perfect)
        throw HybridError(ErrorKind::NoPerfectMatching,
                          "NoPerfectMatching: symbol graph has no perfect matching", trace);

    // Replace each Y symbol by its matched X symbol and stack X over Y.
    std::vector<int32_t> y_to_x(ys.size(), -1);
    for (auto& [xi, yi] : trace->matching.pairs) y_to_x[yi] = xi;

    StructuredArray P;
    P.G = G;
    P.L = L;
    P.rows = X.rows + Y.rows;
    P.cols = X.cols;
    P.cells.assign(static_cast<size_t>(P.rows) * P.cols, -1);
    std::vector<int32_t> xmap(X.symbols.size());  // X table id -> P table id
    for (size_t i = 0; i < X.symbols.size(); ++i) xmap[i] = P.intern(X.symbols[i]);
    for (int f = 0; f < X.rows; ++f)
        for (int k = 0; k < X.cols; ++k) {
            int32_t id = X.at(f, k);
            if (id >= 0) P.set(f, k, xmap[id]);
        }
    std::map<StructuredSymbol, int> yrank;
    for (size_t i = 0; i < ys.size(); ++i) yrank.emplace(ys[i], static_cast<int>(i));
    for (int f = 0; f < Y.rows; ++f)
        for (int k = 0; k < Y.cols; ++k) {
            int32_t id = Y.at(f, k);
            if (id < 0) continue;
            int yi = yrank.at(Y.symbols[id]);
            P.set(X.rows + f, k, P.intern(xs[y_to_x[yi]]));
        }
    trace->P = flatten(P);
    ValidationReport v = validate(trace->P);
    if (!v.ok())
        throw HybridError(ErrorKind::PostValidationFailed,
                          "PostValidationFailed: assembled array fails C1-C4", trace);
    return std::move(*trace);
}

}  // namespace pdakit
