#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "pdakit/combinatorics.hpp"
#include "pdakit/core.hpp"

namespace pdakit {

// Construction-time symbol label: a subset plus a tuple of small indices
// (layer / copy / class / position, arity depends on the construction stage).
// These never escape this module: arrays are flattened to dense ids.
struct StructuredSymbol {
    std::vector<int> set;
    std::vector<int> tail;

    auto operator<=>(const StructuredSymbol&) const = default;
    std::string render() const;  // e.g. "{1,2,3,4,5,6}:1:3"
};

// Array whose non-star entries are structured symbols, interned in a table.
struct StructuredArray {
    int G = 1;
    int L = 1;
    int rows = 0;
    int cols = 0;
    std::vector<int32_t> cells;  // row-major; -1 = star, else symbol table id
    std::vector<StructuredSymbol> symbols;
    std::map<StructuredSymbol, int32_t> index;

    int32_t intern(const StructuredSymbol& s);
    int32_t at(int f, int k) const { return cells[static_cast<size_t>(f) * cols + k]; }
    void set(int f, int k, int32_t v) { cells[static_cast<size_t>(f) * cols + k] = v; }
    int symbol_count() const { return static_cast<int>(symbols.size()); }
};

// Dense ids [1..S] assigned by first occurrence in row-major order.
PdaArray flatten(const StructuredArray& a);

// Classical MN PDA: G=L=1, rows indexed by t-subsets of [K], star iff the
// column belongs to the row subset, symbol = rank of T u {k} among the
// (t+1)-subsets.
PdaArray mn_pda(int K, int t);

// TST array: rows (l, T, R) with l outermost (scan order fixes the top-down
// occurrence order o(S) per column), entries (S, ceil(o/G)).
PdaArray tst(int G, int L, int K, int t);

// Cyclic square construction: GK x K, stars wrap around by t per base row,
// non-star entries numbered ceil(lambda/G) by top-down order per column.
PdaArray square_cyclic(int G, int L, int K, int t);

// Horizontal replication of an optimal base array; column k carries base
// column <k>_{K1}.  Same F, Z, S; antenna parameter L attached.
PdaArray group_replicate(const PdaArray& base, int m, int L);

// TST variant whose second coordinate comes from hypergraph factorizations:
// entry (S, ceil((d + (l-1)*Lam2)/G)) with d located via the factorization
// of S.  Consistency number 1 by construction.
StructuredArray new_tst_b(int G, int K1, int t1, int tau1, int L1);

struct HybridTrace {
    StructuredArray B, Q, X, T, Y;
    SymbolGraph graph;
    Matching matching;
    PdaArray P;
    int m = 0, tau1 = 0, tau2 = 0;
    long long Lam1 = 0, Lam2 = 0, Lam3 = 0;
};

// Error that still carries the partially built trace for debugging.
class HybridError : public Error {
  public:
    HybridError(ErrorKind kind, const std::string& msg, std::shared_ptr<HybridTrace> trace)
        : Error(kind, msg), trace_(std::move(trace)) {}
    const std::shared_ptr<HybridTrace>& trace() const { return trace_; }

  private:
    std::shared_ptr<HybridTrace> trace_;
};

// Four-step hybrid construction (replicate a factorization-based TST array
// into X and Y, then glue them with a perfect matching on the symbol graph).
// The result is post-validated; a failed matching or validation throws with
// the trace attached.
HybridTrace hybrid(int G, int L, int L1, int K1, int t1);

}  // namespace pdakit
