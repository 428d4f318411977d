#include <doctest.h>

#include <random>
#include <sstream>

#include "pdakit/constructions.hpp"
#include "pdakit/io.hpp"
#include "pdakit/validate.hpp"
#include "test_util.hpp"

using namespace pdakit;
using testutil::arr;

TEST_CASE("golden 8x4 array validates with Z=2 and sum-DoF 6") {
    PdaArray p = testutil::example1();
    ValidationReport v = validate(p);
    CHECK(v.ok());
    for (int z : v.z_per_column) CHECK(z == 2);
    CHECK(v.violations.empty());
    PdaMetrics m = metrics(p);
    CHECK(m.Z == 2);
    CHECK(m.memory_ratio == Rational(1, 4));
    CHECK(m.sum_dof == Rational(6));
    CHECK(m.dof_upper_bound == Rational(6));
    CHECK(m.is_optimal);
    CHECK(m.mu == 1);
    CHECK(m.rho == 1);
    long long total = 0;
    for (long c : m.per_symbol_occurrences) total += c;
    CHECK(total == static_cast<long long>(p.K) * (p.F - m.Z));
}

TEST_CASE("smallest MN PDA validates") {
    PdaArray p = arr(1, 1, {"* 1", "1 *"});
    CHECK(validate(p).ok());
    CHECK(metrics(p).sum_dof == Rational(2));
}

TEST_CASE("mutated golden array reports a violation with witness") {
    PdaArray p = testutil::example1();
    // entry (row 3, col 0) changed from 3 to 1: symbol 1 now appears three
    // times in column 0
    p.at(3, 0) = 1;
    ValidationReport v = validate(p);
    CHECK(!v.ok());
    CHECK(!v.c3_ok);
    bool witnessed = false;
    for (const auto& viol : v.violations)
        if (viol.condition == "C3" && viol.symbol == 1 && viol.col == 0) witnessed = true;
    CHECK(witnessed);
}

TEST_CASE("malformed arrays are rejected") {
    PdaArray p = make_array(1, 1, 2, 2, 1);
    p.at(0, 1) = 2;  // exceeds S
    CHECK_THROWS_AS(validate(p), Error);
}

TEST_CASE("symbol_block of the golden array") {
    PdaArray p = testutil::example1();
    SymbolBlock b = symbol_block(p, 1);
    CHECK(b.row_ids == std::vector<int>{0, 1, 2});
    CHECK(b.col_ids == std::vector<int>{0, 1, 2});
    for (const auto& ns : b.nonstar_cols_per_row) CHECK(ns.size() == 2);
    CHECK(b.s_positions.size() == 6);
    CHECK_THROWS_AS(symbol_block(p, 5), Error);
}

TEST_CASE("symbol_block of a single-cell array") {
    PdaArray p = arr(1, 1, {"1"});
    SymbolBlock b = symbol_block(p, 1);
    CHECK(b.row_ids == std::vector<int>{0});
    CHECK(b.col_ids == std::vector<int>{0});
}

TEST_CASE("symbol_block of a TST array has 4 columns, 2 integers per row") {
    PdaArray p = tst(2, 3, 4, 2);
    for (int s = 1; s <= p.S; ++s) {
        SymbolBlock b = symbol_block(p, s);
        CHECK(b.col_ids.size() == 4);
        for (const auto& ns : b.nonstar_cols_per_row) CHECK(ns.size() == 2);
    }
}

TEST_CASE("consistency number examples") {
    // two identical non-star rows in a single column
    PdaArray p = arr(2, 2, {"1", "1"});
    CHECK(validate(p).ok());
    CHECK(consistency_number(p) == 2);
    CHECK(consistency_number(tst(2, 3, 4, 2)) == 1);
    CHECK(consistency_number(square_cyclic(2, 3, 4, 2)) == 1);
}

TEST_CASE("relabel_symbols renumbers by first occurrence and is idempotent") {
    PdaArray p = arr(1, 1, {"* 5", "2 *"});
    p.S = 5;
    PdaArray r = relabel_symbols(p);
    CHECK(r.S == 2);
    CHECK(r.at(0, 1) == 1);
    CHECK(r.at(1, 0) == 2);
    for (int f = 0; f < p.F; ++f)
        for (int k = 0; k < p.K; ++k) CHECK(p.is_star(f, k) == r.is_star(f, k));
    PdaArray rr = relabel_symbols(r);
    CHECK(rr.cells == r.cells);
    CHECK(rr.S == r.S);
}

TEST_CASE("validate and metrics are invariant under relabeling and column permutation") {
    std::mt19937 rng(12345);
    std::vector<PdaArray> corpus = {testutil::example1(), tst(2, 3, 4, 2),
                                    square_cyclic(2, 3, 4, 2), mn_pda(4, 2)};
    for (const PdaArray& p : corpus) {
        PdaMetrics base = metrics(p);
        // random symbol relabeling (a permutation of [1..S])
        std::vector<int> perm(p.S + 1);
        for (int i = 1; i <= p.S; ++i) perm[i] = i;
        std::shuffle(perm.begin() + 1, perm.end(), rng);
        PdaArray q = p;
        for (auto& e : q.cells)
            if (e != kStar) e = perm[e];
        PdaMetrics mq = metrics(q);
        CHECK(validate(q).ok());
        CHECK(mq.sum_dof == base.sum_dof);
        CHECK(mq.mu == base.mu);
        // random column permutation
        std::vector<int> cols(p.K);
        for (int i = 0; i < p.K; ++i) cols[i] = i;
        std::shuffle(cols.begin(), cols.end(), rng);
        PdaArray w = p;
        for (int f = 0; f < p.F; ++f)
            for (int k = 0; k < p.K; ++k) w.at(f, k) = p.at(f, cols[k]);
        PdaMetrics mw = metrics(w);
        CHECK(validate(w).ok());
        CHECK(mw.sum_dof == base.sum_dof);
        CHECK(mw.mu == base.mu);
    }
}

namespace {

// Classical PDA conditions (the G=L=1 specialisation): each symbol at most
// once per column, and when two cells share a symbol, each row is starred in
// the other cell's column.
bool classical_pda_ok(const PdaArray& p) {
    std::vector<int> z(p.K, 0);
    for (int k = 0; k < p.K; ++k)
        for (int f = 0; f < p.F; ++f)
            if (p.is_star(f, k)) ++z[k];
    for (int k = 1; k < p.K; ++k)
        if (z[k] != z[0]) return false;
    std::vector<char> seen(p.S + 1, 0);
    for (const auto& e : p.cells)
        if (e != kStar) seen[e] = 1;
    for (int s = 1; s <= p.S; ++s)
        if (!seen[s]) return false;
    std::vector<std::vector<std::pair<int, int>>> occ(p.S + 1);
    for (int f = 0; f < p.F; ++f)
        for (int k = 0; k < p.K; ++k)
            if (p.at(f, k) != kStar) occ[p.at(f, k)].push_back({f, k});
    for (int s = 1; s <= p.S; ++s)
        for (size_t i = 0; i < occ[s].size(); ++i)
            for (size_t j = i + 1; j < occ[s].size(); ++j) {
                auto [f1, k1] = occ[s][i];
                auto [f2, k2] = occ[s][j];
                if (k1 == k2) return false;  // once per column
                if (!p.is_star(f1, k2) || !p.is_star(f2, k1)) return false;
            }
    return true;
}

}  // namespace

TEST_CASE("G=L=1 validate agrees with the classical PDA conditions") {
    std::mt19937 rng(777);
    int agree = 0;
    for (int trial = 0; trial < 300; ++trial) {
        int F = 2 + static_cast<int>(rng() % 3);
        int K = 2 + static_cast<int>(rng() % 3);
        int S = 1 + static_cast<int>(rng() % 3);
        PdaArray p = make_array(1, 1, F, K, S);
        for (auto& e : p.cells) e = static_cast<int>(rng() % (S + 1));  // 0 = star
        bool ours = validate(p).ok();
        bool classical = classical_pda_ok(p);
        CHECK(ours == classical);
        if (ours) ++agree;
    }
    CHECK(classical_pda_ok(mn_pda(4, 2)));
    CHECK(classical_pda_ok(mn_pda(5, 2)));
    (void)agree;
}

TEST_CASE("array text format round trip is byte-identical") {
    for (PdaArray p : {testutil::example1(), tst(2, 3, 5, 2), square_cyclic(2, 3, 4, 2)}) {
        std::string text = write_array(p);
        std::istringstream is(text);
        PdaArray q = read_array(is);
        CHECK(q.cells == p.cells);
        CHECK(q.G == p.G);
        CHECK(q.L == p.L);
        CHECK(q.S == p.S);
        CHECK(write_array(q) == text);
    }
}

TEST_CASE("reader skips comments and rejects malformed input") {
    std::istringstream ok("# preamble\nMIMOPDA 1\n# params\nG 1 L 1 K 2 F 2 Z 1 S 1\n* 1\n1 *\n");
    PdaArray p = read_array(ok);
    CHECK(p.K == 2);
    CHECK(p.at(0, 1) == 1);

    auto expect_parse_error = [](const std::string& text) {
        std::istringstream is(text);
        try {
            read_array(is);
            return false;
        } catch (const Error& e) {
            return e.kind() == ErrorKind::ParseError;
        }
    };
    CHECK(expect_parse_error(""));
    CHECK(expect_parse_error("MIMOPDA 2\nG 1 L 1 K 1 F 1 Z 0 S 1\n1\n"));
    CHECK(expect_parse_error("MIMOPDA 1\nG 1 L 1 K 2 F 1 Z 0 S 1\n1\n"));       // short row
    CHECK(expect_parse_error("MIMOPDA 1\nG 1 L 1 K 1 F 1 Z 0 S 1\n2\n"));       // id > S
    CHECK(expect_parse_error("MIMOPDA 1\nG 1 L 1 K 1 F 1 Z 0 S 1\n1\n1\n"));    // extra row
}

TEST_CASE("C4-b holds exactly when the consistency number stays within rho") {
    std::mt19937 rng(4242);
    int violations_seen = 0;
    for (int trial = 0; trial < 400; ++trial) {
        int F = 2 + static_cast<int>(rng() % 4);
        int K = 2 + static_cast<int>(rng() % 3);
        int S = 1 + static_cast<int>(rng() % 3);
        int G = 1 + static_cast<int>(rng() % 3);
        int L = 1 + static_cast<int>(rng() % 5);
        PdaArray p = make_array(G, L, F, K, S);
        for (auto& e : p.cells) e = static_cast<int>(rng() % (S + 1));
        ValidationReport v = validate(p);
        CHECK(v.c4b_ok == (consistency_number(p) <= p.rho()));
        if (!v.c4b_ok) ++violations_seen;
        if (v.ok()) CHECK(consistency_number(p) <= p.rho());
    }
    CHECK(violations_seen > 0);
}

TEST_CASE("total integer entries equal K(F-Z) for accepted arrays") {
    for (const PdaArray& p : {testutil::example1(), tst(2, 3, 4, 2), mn_pda(4, 2)}) {
        PdaMetrics m = metrics(p);
        long long ints = 0;
        for (const auto& e : p.cells)
            if (e != kStar) ++ints;
        CHECK(ints == static_cast<long long>(p.K) * (p.F - m.Z));
        CHECK(m.sum_dof * p.S == Rational(ints));
    }
}
