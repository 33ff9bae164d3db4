#pragma once

#include <optional>
#include <set>
#include <vector>

#include "cubestruct/hypercube.hpp"
#include "cubestruct/rational.hpp"

namespace cubestruct {

struct DenseSet {
    AlphabetPtr alphabet;
    int n = 0;
    std::set<Word> members;

    Rational density() const;
};

DenseSet make_dense_set(AlphabetPtr alphabet, int n, std::set<Word> members);

/// First variable word whose full line lies inside D, in enumeration order.
std::optional<VariableWord> find_line_in_set(const DenseSet& D);

struct LinefreeResult {
    Rational density;
    std::vector<Word> witness;
    bool exact = true;  // false when the node budget ran out
};

/// Exact maximum density of a line-free subset of A^n, by branch and bound.
LinefreeResult max_linefree_density(int k, int n,
                                    long long node_budget = 5000000);

struct SectionsResult {
    bool found = false;
    int ell = 0;
    CombinatorialSpace V;  // the hit, or the best candidate when not found
    std::vector<Rational> section_densities;  // aligned with V.points()
    Rational threshold;            // |D|/k^n - eta
    Rational best_worst_section;   // largest minimum section density seen
    bool threshold_guaranteed = false;  // n >= k^m m / eta
};

/// Scans l in {m..n-1} and m-dimensional subspaces of A^l for one whose
/// sections are all at least |D|/k^n - eta dense; first hit wins.
SectionsResult dense_sections_search(const DenseSet& D, int m, const Rational& eta);

/// The final counting step of the density increment: S and D live over
/// index x tail with uniform counting measures; sections are tail subsets.
struct IncrementInput {
    long long index_count = 0;  // the subspace V3's cardinality
    long long tail_count = 0;
    std::vector<std::set<long long>> S;  // per index, a tail subset
    std::vector<std::set<long long>> D;
    Rational epsilon;
    Rational sigma;
    int k = 2;
};

struct IncrementResult {
    long long s = -1;      // first tail point outside B meeting the bound
    Rational conditional;  // P2(D^s | S^s)
    Rational p3_S;
    Rational p3_D_given_S;
    Rational b_threshold;  // epsilon^k sigma / (2(k+1) 4^(k+1))
    Rational lower;        // epsilon + sigma / (2 * 4^k)
    long long b_size = 0;
};

IncrementResult density_increment_step(const IncrementInput& in);

/// Greedy disjoint packing of m-dimensional subspaces into S. Utility only:
/// it carries no leftover guarantee.
struct TilingResult {
    std::vector<CombinatorialSpace> pieces;
    long long covered = 0;
    long long leftover = 0;
};

TilingResult greedy_tiling(const DenseSet& S, int m);

}  // namespace cubestruct
