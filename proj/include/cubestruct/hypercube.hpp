#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace cubestruct {

// Symbols are indices into an Alphabet's ordered token list; all comparisons
// use indices so tie-breaking is deterministic everywhere downstream.
using Symbol = int;

struct Alphabet {
    std::vector<std::string> symbols;

    explicit Alphabet(std::vector<std::string> syms);

    int k() const { return static_cast<int>(symbols.size()); }
    const std::string& token(Symbol s) const { return symbols.at(s); }
    Symbol index_of(const std::string& token) const;

    /// The alphabet {"1",...,"k"}; symbol i carries token std::to_string(i+1).
    static std::shared_ptr<const Alphabet> integers(int k);
};

using AlphabetPtr = std::shared_ptr<const Alphabet>;

/// A point of A^n, stored as symbol indices. n = 0 is the empty word.
struct Word {
    std::vector<Symbol> letters;

    Word() = default;
    explicit Word(std::vector<Symbol> ls) : letters(std::move(ls)) {}

    int n() const { return static_cast<int>(letters.size()); }
    Symbol operator[](int i) const { return letters[i]; }
    bool contains(Symbol s) const;
    Word concat(const Word& tail) const;

    auto operator<=>(const Word&) const = default;
};

/// Index of a word in the lexicographic order of A^n (first letter most
/// significant). Words of common length are ranked 0..k^n-1.
long long word_rank(const Word& w, int k);
Word word_unrank(long long rank, int k, int n);

/// An m-variable word: entries are symbols (< k) or variables x_1..x_m
/// (encoded as k, k+1, ...). Each x_i appears at least once and, for i < j,
/// every appearance of x_i precedes every appearance of x_j.
struct VariableWord {
    AlphabetPtr alphabet;
    std::vector<int> entries;  // entry < k: symbol; entry = k+i: x_{i+1}
    int m = 0;

    VariableWord() = default;
    VariableWord(AlphabetPtr a, std::vector<int> es);

    int n() const { return static_cast<int>(entries.size()); }
    int k() const { return alphabet->k(); }
    bool is_variable(int pos) const { return entries[pos] >= k(); }
    int variable_at(int pos) const { return entries[pos] - k(); }  // 0-based

    auto operator<=>(const VariableWord& o) const { return entries <=> o.entries; }
    bool operator==(const VariableWord& o) const { return entries == o.entries; }
};

struct CombinatorialSpace {
    VariableWord generator;

    CombinatorialSpace() = default;
    explicit CombinatorialSpace(VariableWord gen) : generator(std::move(gen)) {}

    int dim() const { return generator.m; }
    int ambient_n() const { return generator.n(); }
    std::vector<Word> points() const;
};

Word substitute(const VariableWord& v, const std::vector<Symbol>& letters);
Word substitute(const VariableWord& v, const Word& letters);

/// The combinatorial line {v(alpha) : alpha in A}; requires v.m = 1.
std::vector<Word> line_of(const VariableWord& v);

/// I_V: A^dim(V) -> V, the substitution bijection.
Word canonical_iso(const CombinatorialSpace& V, const Word& s);
/// Inverse of I_V; throws if t is not a point of V.
Word canonical_iso_inverse(const CombinatorialSpace& V, const Word& t);
std::optional<Word> try_canonical_iso_inverse(const CombinatorialSpace& V, const Word& t);

/// t^{beta->alpha}: replace every beta in t by alpha. Requires alpha != beta.
Word project(const Word& t, Symbol beta, Symbol alpha);

/// (alpha,beta)-equivalence; with I given, additionally s_i = t_i off I.
/// I holds 0-based coordinate indices.
bool equivalent(const Word& s, const Word& t, Symbol alpha, Symbol beta,
                const std::optional<std::set<int>>& I = std::nullopt);

/// The Shelah line {alpha^{n-m} ^ beta^m : 0 <= m <= n}.
std::vector<Word> shelah_line(const AlphabetPtr& alphabet, int n, Symbol alpha, Symbol beta);

/// All m-variable words over A of length n in lexicographic order on entries,
/// with variables ordered after alphabet symbols. Returns false from the
/// callback to stop early.
void enumerate_variable_words(const AlphabetPtr& alphabet, int n, int m,
                              const std::function<bool(const VariableWord&)>& yield);

/// Every m-dimensional combinatorial subspace of A^n exactly once, in the
/// enumeration order of its generator.
void enumerate_subspaces(const AlphabetPtr& alphabet, int n, int m,
                         const std::function<bool(const CombinatorialSpace&)>& yield);
std::vector<CombinatorialSpace> all_subspaces(const AlphabetPtr& alphabet, int n, int m);
std::vector<VariableWord> all_variable_words(const AlphabetPtr& alphabet, int n, int m = 1);

std::vector<Word> all_words(int k, int n);

std::string word_str(const Alphabet& a, const Word& w);
std::string variable_word_str(const VariableWord& v);

}  // namespace cubestruct
