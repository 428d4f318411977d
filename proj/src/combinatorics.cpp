#include "pdakit/combinatorics.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <mutex>

namespace pdakit {

BigInt binomial(long n, long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (long i = 1; i <= k; ++i) {
        r *= (n - k + i);
        r /= i;
    }
    return r;
}

long long binomial_ll(long n, long k) {
    BigInt b = binomial(n, k);
    if (b > std::numeric_limits<long long>::max())
        fail(ErrorKind::TooLarge, "binomial does not fit in 64 bits");
    return static_cast<long long>(b);
}

std::vector<std::vector<int>> ksubsets(int v, int k) {
    if (k < 0 || k > v) fail(ErrorKind::BadParams, "ksubsets requires 0 <= k <= v");
    std::vector<std::vector<int>> out;
    std::vector<int> cur(k);
    for (int i = 0; i < k; ++i) cur[i] = i + 1;
    while (true) {
        out.push_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[i] == v - k + i + 1) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < k; ++j) cur[j] = cur[i] + j - i;
    }
    if (k == 0) out = {{}};
    return out;
}

namespace {

using Classes = std::vector<std::vector<std::vector<int>>>;

// Round-robin (circle method) 1-factorization of the complete graph on [v].
Classes circle_method(int v) {
    Classes classes;
    for (int r = 0; r < v - 1; ++r) {
        std::vector<std::vector<int>> cl;
        cl.push_back({std::min(v, r + 1), std::max(v, r + 1)});
        for (int i = 1; i < v / 2; ++i) {
            int a = (r + i) % (v - 1) + 1;
            int b = ((r - i) % (v - 1) + (v - 1)) % (v - 1) + 1;
            cl.push_back({std::min(a, b), std::max(a, b)});
        }
        classes.push_back(cl);
    }
    return classes;
}

// General alpha | v case via the integral-flow induction behind Baranyai's
// theorem.  Invariant after processing element n: every class holds v/alpha
// partial blocks (subsets of [n], empties allowed), and each subset B of [n]
// appears across all classes exactly C(v-n, alpha-|B|) times.  Adding element
// n+1 amounts to routing one unit of flow per class into partial blocks so
// that each subset B receives exactly C(v-n-1, alpha-|B|-1) units; a feasible
// fractional flow exists, hence an integral one does.
Classes flow_method(int v, int alpha) {
    const long long lam = binomial_ll(v - 1, alpha - 1);
    const int per = v / alpha;
    std::vector<std::vector<std::vector<int>>> classes(
        lam, std::vector<std::vector<int>>(per));
    for (int n = 1; n <= v; ++n) {
        const int remaining = v - n;
        // distinct partial subsets still open (|B| < alpha), with demands
        std::map<std::vector<int>, long long> demand;
        for (auto& cl : classes)
            for (auto& b : cl)
                if (static_cast<int>(b.size()) < alpha)
                    demand[b] = binomial_ll(remaining, alpha - static_cast<int>(b.size()) - 1);
        std::vector<std::vector<int>> subs;
        std::map<std::vector<int>, int> sub_id;
        for (auto& [b, d] : demand) {
            sub_id[b] = static_cast<int>(subs.size());
            subs.push_back(b);
        }
        const int ns = static_cast<int>(subs.size());
        std::vector<long long> used(ns, 0);
        // flow[c] = subset id the class c routes element n into (-1 = none)
        std::vector<int> flow(classes.size(), -1);
        std::vector<std::vector<int>> cand(classes.size());
        for (size_t c = 0; c < classes.size(); ++c) {
            std::set<int> ids;
            for (auto& b : classes[c])
                if (static_cast<int>(b.size()) < alpha) ids.insert(sub_id[b]);
            cand[c].assign(ids.begin(), ids.end());
        }
        // one augmenting path per class (unit source capacities)
        for (size_t c0 = 0; c0 < classes.size(); ++c0) {
            // BFS over alternating class/subset layers
            std::vector<int> par_sub(ns, -2);           // subset <- class
            std::vector<int> par_cls(classes.size(), -2);  // class <- subset
            std::deque<std::pair<bool, int>> q;  // (is_class, index)
            q.push_back({true, static_cast<int>(c0)});
            par_cls[c0] = -1;
            int reached = -1;
            while (!q.empty() && reached < 0) {
                auto [is_class, x] = q.front();
                q.pop_front();
                if (is_class) {
                    for (int sid : cand[x])
                        if (flow[x] != sid && par_sub[sid] == -2) {
                            par_sub[sid] = x;
                            if (used[sid] < demand[subs[sid]]) {
                                reached = sid;
                                break;
                            }
                            q.push_back({false, sid});
                        }
                } else {
                    for (size_t c = 0; c < classes.size(); ++c)
                        if (flow[c] == x && par_cls[c] == -2) {
                            par_cls[c] = x;
                            q.push_back({true, static_cast<int>(c)});
                        }
                }
            }
            if (reached < 0)
                fail(ErrorKind::BadParams, "baranyai flow: no augmenting path");
            ++used[reached];
            int sid = reached;
            while (true) {
                int c = par_sub[sid];
                int prev = flow[c];
                flow[c] = sid;
                if (par_cls[c] == -1) break;
                sid = par_cls[c];
                // prev must be sid by construction of the alternating path
                (void)prev;
            }
        }
        for (size_t c = 0; c < classes.size(); ++c) {
            // place n into one copy of the chosen subset
            const std::vector<int>& b = subs[flow[c]];
            for (auto& blk : classes[c])
                if (blk == b && static_cast<int>(blk.size()) < alpha) {
                    blk.push_back(n);
                    break;
                }
        }
    }
    return classes;
}

Classes canonical_classes(int v, int alpha) {
    Classes classes;
    if (alpha == 1) {
        std::vector<std::vector<int>> cl;
        for (int i = 1; i <= v; ++i) cl.push_back({i});
        classes = {cl};
    } else if (alpha == v) {
        std::vector<int> all(v);
        for (int i = 0; i < v; ++i) all[i] = i + 1;
        classes = {{all}};
    } else if (alpha == 2) {
        classes = circle_method(v);
    } else {
        classes = flow_method(v, alpha);
    }
    for (auto& cl : classes) {
        for (auto& b : cl) std::sort(b.begin(), b.end());
        std::sort(cl.begin(), cl.end());
    }
    std::sort(classes.begin(), classes.end());
    return classes;
}

// Process-wide cache of canonical factorizations of [v].
const Classes& cached_canonical(int v, int alpha) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, Classes> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(v, alpha);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, canonical_classes(v, alpha)).first;
    return it->second;
}

}  // namespace

Factorization baranyai(const std::vector<int>& ground, int alpha) {
    Factorization f;
    f.ground = ground;
    std::sort(f.ground.begin(), f.ground.end());
    f.ground.erase(std::unique(f.ground.begin(), f.ground.end()), f.ground.end());
    f.alpha = alpha;
    const int v = static_cast<int>(f.ground.size());
    if (alpha < 1) fail(ErrorKind::BadParams, "alpha must be positive");
    if (v % alpha != 0)
        fail(ErrorKind::NotDivisible,
             "alpha=" + std::to_string(alpha) + " does not divide |ground|=" + std::to_string(v));
    // Generate on [v], then map through the order-preserving bijection.  The
    // map keeps sorted order, so canonical form is preserved.
    const Classes& base = cached_canonical(v, alpha);
    f.classes = base;
    for (auto& cl : f.classes)
        for (auto& b : cl)
            for (auto& e : b) e = f.ground[e - 1];
    return f;
}

std::pair<int, int> locate(const Factorization& f, const std::vector<int>& block) {
    std::vector<int> b = block;
    std::sort(b.begin(), b.end());
    if (static_cast<int>(b.size()) != f.alpha)
        fail(ErrorKind::BlockNotFound, "block size != alpha");
    for (int e : b)
        if (!std::binary_search(f.ground.begin(), f.ground.end(), e))
            fail(ErrorKind::BlockNotFound, "block not within ground set");
    for (int d = 0; d < f.num_classes(); ++d) {
        const auto& cl = f.classes[d];
        auto it = std::lower_bound(cl.begin(), cl.end(), b);
        if (it != cl.end() && *it == b)
            return {d + 1, static_cast<int>(it - cl.begin()) + 1};
    }
    fail(ErrorKind::BlockNotFound, "block missing from factorization");
}

Matching max_matching(const SymbolGraph& g) {
    const int nx = static_cast<int>(g.x_labels.size());
    const int ny = static_cast<int>(g.y_labels.size());
    std::vector<std::vector<int>> adj(nx);
    for (auto& [x, y] : g.edges) adj[x].push_back(y);

    const int kInf = std::numeric_limits<int>::max();
    std::vector<int> match_x(nx, -1), match_y(ny, -1), dist(nx);
    auto bfs = [&]() {
        std::deque<int> q;
        bool found = false;
        for (int x = 0; x < nx; ++x) {
            if (match_x[x] < 0) {
                dist[x] = 0;
                q.push_back(x);
            } else {
                dist[x] = kInf;
            }
        }
        while (!q.empty()) {
            int x = q.front();
            q.pop_front();
            for (int y : adj[x]) {
                int x2 = match_y[y];
                if (x2 < 0)
                    found = true;
                else if (dist[x2] == kInf) {
                    dist[x2] = dist[x] + 1;
                    q.push_back(x2);
                }
            }
        }
        return found;
    };
    std::function<bool(int)> dfs = [&](int x) {
        for (int y : adj[x]) {
            int x2 = match_y[y];
            if (x2 < 0 || (dist[x2] == dist[x] + 1 && dfs(x2))) {
                match_x[x] = y;
                match_y[y] = x;
                return true;
            }
        }
        dist[x] = kInf;
        return false;
    };
    int size = 0;
    while (bfs())
        for (int x = 0; x < nx; ++x)
            if (match_x[x] < 0 && dfs(x)) ++size;

    Matching m;
    for (int x = 0; x < nx; ++x)
        if (match_x[x] >= 0) m.pairs.push_back({x, match_x[x]});
    m.perfect = (size == nx && size == ny);
    return m;
}

std::pair<std::set<int>, std::set<int>> degree_profile(const SymbolGraph& g) {
    std::vector<int> dx(g.x_labels.size(), 0), dy(g.y_labels.size(), 0);
    for (auto& [x, y] : g.edges) {
        ++dx[x];
        ++dy[y];
    }
    std::set<int> sx(dx.begin(), dx.end()), sy(dy.begin(), dy.end());
    if (sx.empty()) sx.insert(0);
    if (sy.empty()) sy.insert(0);
    return {sx, sy};
}

}  // namespace pdakit
