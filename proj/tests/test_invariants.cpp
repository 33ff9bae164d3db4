#include <algorithm>
#include <cmath>

#include "cubestruct/hypercube.hpp"
#include "cubestruct/invariants.hpp"
#include "doctest.h"

using namespace cubestruct;

namespace {

Word w(std::initializer_list<int> one_based) {
    Word out;
    for (int v : one_based) out.letters.push_back(v - 1);
    return out;
}

std::vector<std::vector<Word>> subsets_up_to(const std::vector<Word>& pts, int max_size) {
    std::vector<std::vector<Word>> out;
    int n = static_cast<int>(pts.size());
    for (int mask = 1; mask < (1 << n); ++mask) {
        if (__builtin_popcount(mask) > max_size) continue;
        std::vector<Word> g;
        for (int i = 0; i < n; ++i)
            if (mask >> i & 1) g.push_back(pts[i]);
        out.push_back(std::move(g));
    }
    return out;
}

}  // namespace

TEST_CASE("type of the worked 5-tuple over [4]") {
    std::vector<Word> t{w({2, 1, 3, 2, 3}), w({3, 1, 4, 2, 4}), w({4, 1, 3, 2, 3}),
                        w({3, 1, 4, 2, 4}), w({4, 1, 2, 2, 2})};
    // entries 2 and 4 coincide; repeats are admitted and yield repeated columns
    TypeTuple tau = type_of_tuple(t);
    CHECK(tau.dim == 2);
    CHECK(tau.columns == std::vector<Word>{w({2, 3}), w({3, 4}), w({4, 3}), w({3, 4}),
                                           w({4, 2})});
    // the distinct core reduces to the same matrix minus the repeated column
    std::vector<Word> core{t[0], t[1], t[2], t[4]};
    TypeTuple core_tau = type_of_tuple(core);
    CHECK(core_tau.dim == 2);
    CHECK(core_tau.columns ==
          std::vector<Word>{w({2, 3}), w({3, 4}), w({4, 3}), w({4, 2})});
    // separation still demands distinct elements
    CHECK_THROWS(separation_index_tuple(t));
}

TEST_CASE("type degenerate and line cases") {
    CHECK(type_of_tuple({w({1, 2, 3})}).dim == 0);
    CHECK(type_of_tuple({w({1, 2, 3})}).columns == std::vector<Word>{Word{}});

    auto a3 = Alphabet::integers(3);
    for (const VariableWord& v : all_variable_words(a3, 3)) {
        std::vector<Word> line{substitute(v, {2}), substitute(v, {0}), substitute(v, {1})};
        TypeTuple tau = type_of_tuple(line);
        CHECK(tau.dim == 1);
        CHECK(tau.columns == std::vector<Word>{Word({2}), Word({0}), Word({1})});
    }
}

TEST_CASE("type of sets is enumeration independent") {
    CHECK(type_of_set({w({2, 2})}).dim == 0);
    std::vector<Word> square = all_words(2, 2);
    TypeSet tau = type_of_set(square);
    CHECK(tau.dim == 2);
    CHECK(tau.elements.size() == 4);

    std::vector<Word> shuffled{square[2], square[0], square[3], square[1]};
    CHECK(type_of_set(shuffled) == tau);
}

TEST_CASE("permutation equivariance of tuple types") {
    std::vector<Word> pts = all_words(3, 2);
    std::vector<int> idx{0, 3, 7};
    std::vector<Word> base{pts[idx[0]], pts[idx[1]], pts[idx[2]]};
    TypeTuple tau = type_of_tuple(base);
    std::vector<int> perm{0, 1, 2};
    do {
        std::vector<Word> permuted;
        std::vector<Word> expected_cols;
        for (int i : perm) {
            permuted.push_back(base[i]);
            expected_cols.push_back(tau.columns[i]);
        }
        TypeTuple got = type_of_tuple(permuted);
        CHECK(got.dim == tau.dim);
        CHECK(got.columns == expected_cols);
    } while (std::next_permutation(perm.begin(), perm.end()));
}

TEST_CASE("separation indices of the two-letter example") {
    auto bits = std::make_shared<const Alphabet>(std::vector<std::string>{"0", "1"});
    Word oo({0, 0}), io({1, 0}), oi({0, 1});
    CHECK(separation_index_tuple({io, oi, oo}).value == 2);
    CHECK(separation_index_tuple({oo, io, oi}).value == 1);
    CHECK(separation_index_tuple({oo}).value == 1);

    SeparationIndex set_idx = separation_index_set({io, oi, oo});
    CHECK(set_idx.value == 1);
    CHECK(set_idx.exact);
    REQUIRE(set_idx.witness_enumeration.has_value());
    std::vector<Word> input{io, oi, oo};
    std::vector<Word> ordered;
    for (int i : *set_idx.witness_enumeration) ordered.push_back(input[i]);
    CHECK(separation_index_tuple(ordered).value == 1);
}

TEST_CASE("separation of lines and full cubes") {
    auto a3 = Alphabet::integers(3);
    for (const VariableWord& v : all_variable_words(a3, 2))
        CHECK(separation_index_set(line_of(v)).value == 1);
    for (int k = 2; k <= 3; ++k)
        for (int n = 1; n <= 3; ++n) {
            if (std::pow(k, n) > 9) continue;
            CHECK(separation_index_set(all_words(k, n)).value == n);
        }
}

TEST_CASE("type determines separation on the 3x3 square") {
    std::vector<Word> pts = all_words(3, 2);
    std::map<TypeSet, int> by_type;
    for (const auto& g : subsets_up_to(pts, 3)) {
        TypeSet tau = type_of_set(g);
        int s = separation_index_set(g).value;
        CHECK(static_cast<int>(tau.elements.size()) == static_cast<int>(g.size()));
        auto [it, fresh] = by_type.emplace(tau, s);
        if (!fresh) CHECK(it->second == s);
        // the type's dimension bounds the separation index
        if (tau.dim >= 1) CHECK(s <= tau.dim);
    }
}

TEST_CASE("monte carlo one-separation matches the exhaustive small case") {
    McSepResult one = mc_one_separated_rate(2, 2, 1, 100, 7);
    CHECK(one.empirical_rate == 1.0);

    // (A^2)^2 has 16 pairs: 4 duplicate pairs, the 12 distinct ones 1-separated
    McSepResult r = mc_one_separated_rate(2, 2, 2, 20000, 42);
    CHECK(r.duplicates > 0);
    CHECK(std::abs(r.empirical_rate - 12.0 / 16.0) < 0.02);
    CHECK(r.bound <= r.empirical_rate + 0.05);
    CHECK_THROWS(mc_one_separated_rate(2, 1, 3, 10, 1));
}
