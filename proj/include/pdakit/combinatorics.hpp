#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pdakit/core.hpp"

namespace pdakit {

// Exact binomial coefficient; C(n,k) = 0 when k > n.
BigInt binomial(long n, long k);

// binomial() narrowed to long long; throws TooLarge on overflow.
long long binomial_ll(long n, long k);

// All k-subsets of [v] = {1..v} in lexicographic order on the sorted tuples.
// The position in this enumeration is the subset's stable rank.
std::vector<std::vector<int>> ksubsets(int v, int k);

// Baranyai factorization of the alpha-subsets of a ground set into
// C(v-1, alpha-1) parallel classes, each a partition of the ground set.
// Canonical form: blocks sorted ascending, each class sorted by its blocks,
// classes sorted lexicographically by their block lists.  Deterministic.
struct Factorization {
    std::vector<int> ground;  // sorted, distinct
    int alpha = 0;
    std::vector<std::vector<std::vector<int>>> classes;

    int num_classes() const { return static_cast<int>(classes.size()); }
};

Factorization baranyai(const std::vector<int>& ground, int alpha);

// Class index d and position j of a block inside f, both 1-based in the
// canonical order.  Throws BlockNotFound for foreign or mis-sized blocks.
std::pair<int, int> locate(const Factorization& f, const std::vector<int>& block);

// Bipartite graph between X-side and Y-side symbol labels.
struct SymbolGraph {
    std::vector<std::string> x_labels;
    std::vector<std::string> y_labels;
    std::vector<std::pair<int, int>> edges;  // (x index, y index), 0-based
};

struct Matching {
    std::vector<std::pair<int, int>> pairs;  // (x index, y index)
    bool perfect = false;
};

// Maximum-cardinality matching (Hopcroft-Karp).  Deterministic given the
// edge order; perfect is set when the matching saturates both sides.
Matching max_matching(const SymbolGraph& g);

// Distinct vertex degrees on each side.
std::pair<std::set<int>, std::set<int>> degree_profile(const SymbolGraph& g);

}  // namespace pdakit
