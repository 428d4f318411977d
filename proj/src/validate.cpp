#include "pdakit/validate.hpp"

#include <algorithm>
#include <sstream>

namespace pdakit {

void check_well_formed(const PdaArray& p) {
    if (p.F < 1 || p.K < 1 || p.G < 1 || p.L < 1)
        fail(ErrorKind::MalformedArray, "F, K, G, L must all be positive");
    if (p.cells.size() != static_cast<size_t>(p.F) * p.K)
        fail(ErrorKind::MalformedArray, "cell count does not match F*K");
    for (int f = 0; f < p.F; ++f)
        for (int k = 0; k < p.K; ++k) {
            Entry e = p.at(f, k);
            if (e != kStar && (e < 1 || e > p.S)) {
                std::ostringstream os;
                os << "entry " << e << " at (" << f << "," << k
                   << ") outside [1.." << p.S << "]";
                fail(ErrorKind::MalformedArray, os.str());
            }
        }
}

PdaArray relabel_symbols(const PdaArray& p) {
    check_well_formed(p);
    PdaArray out = p;
    std::vector<int> remap(p.S + 1, 0);
    int next = 0;
    for (int f = 0; f < p.F; ++f)
        for (int k = 0; k < p.K; ++k) {
            Entry e = p.at(f, k);
            if (e == kStar) continue;
            if (remap[e] == 0) remap[e] = ++next;
            out.at(f, k) = remap[e];
        }
    out.S = next;
    return out;
}

std::string render_rational(const Rational& r) {
    std::ostringstream os;
    os << boost::multiprecision::numerator(r) << "/"
       << boost::multiprecision::denominator(r);
    return os.str();
}

namespace {

// Occurrence lists per symbol, 1-based symbol index.
std::vector<std::vector<std::pair<int, int>>> occurrences(const PdaArray& p) {
    std::vector<std::vector<std::pair<int, int>>> occ(p.S + 1);
    for (int f = 0; f < p.F; ++f)
        for (int k = 0; k < p.K; ++k) {
            Entry e = p.at(f, k);
            if (e != kStar) occ[e].push_back({f, k});
        }
    return occ;
}

SymbolBlock build_block(const PdaArray& p,
                        const std::vector<std::pair<int, int>>& cells, int s) {
    SymbolBlock b;
    b.symbol = s;
    b.s_positions = cells;
    std::vector<int> rows, cols;
    for (auto& [f, k] : cells) {
        rows.push_back(f);
        cols.push_back(k);
    }
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    b.row_ids = rows;
    b.col_ids = cols;
    b.nonstar_cols_per_row.resize(rows.size());
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < cols.size(); ++j)
            if (!p.is_star(rows[i], cols[j]))
                b.nonstar_cols_per_row[i].push_back(static_cast<int>(j));
    return b;
}

}  // namespace

SymbolBlock symbol_block(const PdaArray& p, int s) {
    check_well_formed(p);
    if (s < 1 || s > p.S) fail(ErrorKind::UnknownSymbol, "symbol " + std::to_string(s));
    std::vector<std::pair<int, int>> cells;
    for (int f = 0; f < p.F; ++f)
        for (int k = 0; k < p.K; ++k)
            if (p.at(f, k) == s) cells.push_back({f, k});
    return build_block(p, cells, s);
}

ValidationReport validate(const PdaArray& p) {
    check_well_formed(p);
    ValidationReport r;
    const int tau = p.tau();
    const int rho = p.rho();

    // C1: equal star count per column
    r.z_per_column.assign(p.K, 0);
    for (int k = 0; k < p.K; ++k)
        for (int f = 0; f < p.F; ++f)
            if (p.is_star(f, k)) ++r.z_per_column[k];
    r.c1_ok = true;
    for (int k = 1; k < p.K; ++k)
        if (r.z_per_column[k] != r.z_per_column[0]) {
            r.c1_ok = false;
            r.violations.push_back({"C1", 0, -1, k});
        }

    auto occ = occurrences(p);

    // C2: every id in [1..S] occurs
    r.c2_ok = true;
    for (int s = 1; s <= p.S; ++s)
        if (occ[s].empty()) {
            r.c2_ok = false;
            r.violations.push_back({"C2", s, -1, -1});
        }

    // C3: each symbol at most G times per column
    r.c3_ok = true;
    for (int s = 1; s <= p.S; ++s) {
        std::map<int, int> per_col;
        for (auto& [f, k] : occ[s]) ++per_col[k];
        for (auto& [k, c] : per_col)
            if (c > p.G) {
                r.c3_ok = false;
                r.violations.push_back({"C3", s, -1, k});
            }
    }

    // C4 on each symbol block
    r.c4a_ok = r.c4b_ok = true;
    for (int s = 1; s <= p.S; ++s) {
        if (occ[s].empty()) continue;
        SymbolBlock b = build_block(p, occ[s], s);
        for (size_t i = 0; i < b.row_ids.size(); ++i)
            if (static_cast<int>(b.nonstar_cols_per_row[i].size()) > tau) {
                r.c4a_ok = false;
                r.violations.push_back({"C4a", s, b.row_ids[i], -1});
            }
        // C4b: per column, rows carrying s grouped by identical non-star set
        // must have group size <= rho.
        for (int k : b.col_ids) {
            std::map<std::vector<int>, std::vector<int>> groups;
            for (size_t i = 0; i < b.row_ids.size(); ++i)
                if (p.at(b.row_ids[i], k) == s)
                    groups[b.nonstar_cols_per_row[i]].push_back(b.row_ids[i]);
            for (auto& [pset, rows] : groups)
                if (static_cast<int>(rows.size()) > rho) {
                    r.c4b_ok = false;
                    r.violations.push_back({"C4b", s, rows[0], k});
                }
        }
    }
    return r;
}

int consistency_number(const PdaArray& p) {
    check_well_formed(p);
    auto occ = occurrences(p);
    int mu = 0;
    for (int s = 1; s <= p.S; ++s) {
        if (occ[s].empty()) continue;
        SymbolBlock b = build_block(p, occ[s], s);
        for (int k : b.col_ids) {
            std::map<std::vector<int>, int> groups;
            for (size_t i = 0; i < b.row_ids.size(); ++i)
                if (p.at(b.row_ids[i], k) == s)
                    mu = std::max(mu, ++groups[b.nonstar_cols_per_row[i]]);
        }
    }
    return mu;
}

PdaMetrics metrics(const PdaArray& p) {
    ValidationReport v = validate(p);
    if (!v.ok()) fail(ErrorKind::InvalidArray, "metrics requires a validated array");
    PdaMetrics m;
    m.Z = v.z_per_column[0];
    m.memory_ratio = Rational(m.Z, p.F);
    m.rho = p.rho();
    m.per_symbol_occurrences.assign(p.S, 0);
    for (int f = 0; f < p.F; ++f)
        for (int k = 0; k < p.K; ++k)
            if (!p.is_star(f, k)) ++m.per_symbol_occurrences[p.at(f, k) - 1];
    m.sum_dof = Rational(static_cast<long long>(p.K) * (p.F - m.Z), p.S);
    m.mu = consistency_number(p);
    Rational cap = Rational(static_cast<long long>(p.G) * p.K * m.Z, p.F) +
                   Rational(static_cast<long long>(p.G) * p.tau());
    Rational kg(static_cast<long long>(p.K) * p.G);
    m.dof_upper_bound = std::min(kg, cap);
    m.is_optimal = (m.sum_dof == m.dof_upper_bound);
    return m;
}

}  // namespace pdakit
