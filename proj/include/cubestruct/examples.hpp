#pragma once

#include <cstdint>

#include "cubestruct/process.hpp"

namespace cubestruct {

/// The two-projection process over {1,2,3}^n: independent generators indexed
/// by {1,2}^n, D_t the intersection of the events at t's two projections.
CubeProcess example_intro(int n, const Rational& epsilon);

/// example_intro(n) restricted to the subspace fixing the first letter to 3;
/// lives on {1,2,3}^(n-1) and has constant marginals.
CubeProcess example_intro_restricted(int n, const Rational& epsilon);

/// The prefix-swap process over {1,2,3}^n whose correlations deviate on
/// 1-separated triples. Requires n >= 5; relaxed = true admits n >= 4 for
/// small sweeps.
CubeProcess example_one_sep(int n, const Rational& epsilon, bool relaxed = false);

/// The two-block process over {1,2,3}^(2n) built from locally insensitive
/// halves; deviates on 9-point 2-dimensional subspaces.
CubeProcess example_simplicial(int n, const Rational& epsilon);

/// One fresh generator per index.
CubeProcess independent_process(const AlphabetPtr& alphabet, int n,
                                const Rational& epsilon);

/// Seeded random formulas over a shared generator pool; deterministic in
/// (alphabet, n, epsilon, seed).
CubeProcess random_process(const AlphabetPtr& alphabet, int n,
                           const Rational& epsilon, std::uint64_t seed);

}  // namespace cubestruct
