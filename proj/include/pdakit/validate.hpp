#pragma once

#include <map>
#include <string>
#include <vector>

#include "pdakit/core.hpp"

namespace pdakit {

// Witness of a failed condition: which condition, for which symbol (0 when
// not symbol-specific), and at which row/column (-1 when not applicable).
// Rows and columns are 0-based throughout the API.
struct Violation {
    std::string condition;  // "C1", "C2", "C3", "C4a", "C4b"
    int symbol = 0;
    int row = -1;
    int col = -1;
};

struct ValidationReport {
    bool c1_ok = false;
    bool c2_ok = false;
    bool c3_ok = false;
    bool c4a_ok = false;
    bool c4b_ok = false;
    std::vector<int> z_per_column;
    std::vector<Violation> violations;

    bool ok() const { return c1_ok && c2_ok && c3_ok && c4a_ok && c4b_ok; }
};

// Subarray of rows/columns containing symbol s (the P^(s) of the C4 checks).
struct SymbolBlock {
    int symbol = 0;
    std::vector<int> row_ids;  // ascending, 0-based rows of the parent array
    std::vector<int> col_ids;  // ascending, 0-based columns
    // For each block row (aligned with row_ids): ascending block-column
    // indices (positions into col_ids) holding any integer entry.
    std::vector<std::vector<int>> nonstar_cols_per_row;
    std::vector<std::pair<int, int>> s_positions;  // (row, col) where entry == s
};

// Definition-1 conditions C1..C4b with witnesses for every failure.
ValidationReport validate(const PdaArray& p);

SymbolBlock symbol_block(const PdaArray& p, int s);

struct PdaMetrics {
    int Z = 0;
    Rational memory_ratio;   // Z/F
    Rational sum_dof;        // K(F-Z)/S
    int mu = 0;              // consistency number
    int rho = 0;             // <L>_G
    std::vector<long> per_symbol_occurrences;  // index s-1
    Rational dof_upper_bound;                  // min{KG, GKZ/F + G ceil(L/G)}
    bool is_optimal = false;
};

// Requires validate(p).ok(); throws InvalidArray otherwise.
PdaMetrics metrics(const PdaArray& p);

// Largest group of rows of any symbol block that carry the symbol in one
// column and share an identical non-star column set.  Needs only C1..C3.
int consistency_number(const PdaArray& p);

}  // namespace pdakit
