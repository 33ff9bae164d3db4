#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cubestruct/hypercube.hpp"
#include "cubestruct/rational.hpp"

namespace cubestruct {

/// The type of a p-tuple: the columns of the reduced coordinate matrix.
/// p = 1 gives the empty type (dim 0, a single empty column).
struct TypeTuple {
    std::vector<Word> columns;  // p words of common length dim
    int dim = 0;

    int p() const { return static_cast<int>(columns.size()); }
    auto operator<=>(const TypeTuple&) const = default;
};

/// The unordered variant; elements are sorted for a canonical key.
struct TypeSet {
    std::vector<Word> elements;  // sorted, distinct
    int dim = 0;

    int size() const { return static_cast<int>(elements.size()); }
    auto operator<=>(const TypeSet&) const = default;
};

struct SeparationIndex {
    int value = 1;
    // For sets: an ordering achieving value (indices into the input order).
    std::optional<std::vector<int>> witness_enumeration;
    // Set when |G| exceeded the exact cap and only a greedy bound was computed.
    bool exact = true;
};

TypeTuple type_of_tuple(const std::vector<Word>& tuple);
TypeSet type_of_set(const std::vector<Word>& G);

/// Canonical sorted-element form used to group sets by type.
TypeSet type_set_key(const TypeSet& t);

/// Per-element separation cost against its predecessors; entry 0 is always 0.
std::vector<int> separation_costs_tuple(const std::vector<Word>& tuple);

SeparationIndex separation_index_tuple(const std::vector<Word>& tuple);
SeparationIndex separation_index_set(const std::vector<Word>& G, int exact_cap = 8);

struct McSepResult {
    long long one_separated = 0;
    long long duplicates = 0;  // tuples with repeated entries (never 1-separated)
    long long samples = 0;
    double empirical_rate = 0.0;
    double bound = 0.0;  // analytic lower bound on the 1-separated rate
};

/// Samples uniform p-tuples from (A^n)^p and reports the observed
/// 1-separated fraction next to the closed-form lower bound.
McSepResult mc_one_separated_rate(int k, int n, int p, long long samples,
                                  std::uint64_t seed);

}  // namespace cubestruct
