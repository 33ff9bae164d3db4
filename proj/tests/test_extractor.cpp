#include <vector>

#include "cubestruct/examples.hpp"
#include "cubestruct/extractor.hpp"
#include "doctest.h"

using namespace cubestruct;

namespace {

const Rational kHalf(1, 2);
const Rational kQuarter(1, 4);

AnalysisParams restricted_params() {
    return AnalysisParams{kQuarter, Rational(1, 96), Rational(0), 3, 1};
}

}  // namespace

TEST_CASE("projection family members are insensitive by construction") {
    CubeProcess proc = example_intro(3, kHalf);
    auto family = build_insensitive_family(proc, {0, 1}, 2);
    REQUIRE(family.size() == 2);
    for (const auto& [a, f] : family) {
        for (const Word& t : all_words(3, 3))
            CHECK(events_equal(f.at(t), proc.at(project(t, 2, a))));
        CHECK(verify_insensitive(f, a, 2).insensitive);
    }
    // the source process itself fails, with a checkable counterexample
    InsensitivityReport bad = verify_insensitive(proc, 0, 2);
    CHECK_FALSE(bad.insensitive);
    REQUIRE(bad.counterexample.has_value());
    auto [s, t] = *bad.counterexample;
    CHECK(equivalent(s, t, 0, 2));
    CHECK_FALSE(events_equal(proc.at(s), proc.at(t)));

    CHECK_THROWS(build_insensitive_family(proc, {0, 2}, 2));
}

TEST_CASE("windowed insensitivity sees only the chosen block") {
    // D_(a,b) depends on a only through the 3 -> 1 projection
    auto a3 = Alphabet::integers(3);
    auto product = std::make_shared<BernoulliProduct>(kHalf);
    std::vector<Event> events;
    for (const Word& t : all_words(3, 2)) {
        Word key({project(Word({t[0]}), 2, 0)[0], t[1]});
        events.push_back(formula_event(
            product, product->f_var(product->generator(word_str(*a3, key)))));
    }
    CubeProcess proc = make_process(a3, 2, product, std::move(events));
    CHECK(verify_insensitive(proc, 0, 2, std::nullopt, std::set<int>{0}).insensitive);
    CHECK_FALSE(verify_insensitive(proc, 0, 2, std::nullopt, std::set<int>{1}).insensitive);
    CHECK(verify_insensitive(proc, 0, 2).insensitive == false);
    CHECK_THROWS(verify_insensitive(proc, 0, 0));
    CHECK_THROWS(verify_insensitive(proc, 0, 2, std::nullopt, std::set<int>{7}));
}

TEST_CASE("line extraction certifies the independent process") {
    auto a3 = Alphabet::integers(3);
    CubeProcess proc = independent_process(a3, 3, kHalf);
    AnalysisParams params{kHalf, Rational(1, 24), Rational(0), 3, 1};
    LineExtractResult res = extract_line_witness(proc, params);
    REQUIRE(res.certificate.has_value());
    CHECK_FALSE(res.witness.has_value());
    CHECK(res.certificate->worst_deviation == 0);
    CHECK(res.certificate->gamma_reports.size() == 7);
    for (const GammaReport& r : res.certificate->gamma_reports)
        CHECK(r.report.label == Label::Pseudorandom);
}

TEST_CASE("line extraction finds the correlated pair of the restricted process") {
    CubeProcess proc = example_intro_restricted(3, kHalf);
    ExtractOptions opts;
    opts.relax_dimension = true;  // the square is shorter than the alphabet
    LineExtractResult res = extract_line_witness(proc, restricted_params(), opts);
    REQUIRE(res.witness.has_value());
    const LineWitness& w = *res.witness;
    CHECK(w.gamma0 == std::set<Symbol>{0, 2});
    CHECK(w.beta == 2);
    CHECK(w.gamma == std::set<Symbol>{0});
    CHECK(w.branch == Label::Supercorrelated);
    CHECK_FALSE(w.complemented.has_value());
    CHECK(w.theta == 0);
    CHECK(w.Theta == Rational(1, 384));
    CHECK(w.p_S_lower == Rational(1, 192));
    CHECK(w.conditional_lower == kQuarter + Rational(1, 1536));
    CHECK(w.bounds_hold);
    REQUIRE(w.factors.size() == 1);
    for (const Word& t : all_words(3, 2))
        CHECK(events_equal(w.S.at(t), proc.at(project(t, 2, 0))));
    int relevant = 0;
    for (const IndexStat& st : w.stats) {
        CHECK(st.p_S == kQuarter);
        if (st.relevant) {
            ++relevant;
            CHECK(st.t.contains(2));
            REQUIRE(st.p_D_given_S.has_value());
            CHECK(*st.p_D_given_S == kHalf);
        }
    }
    CHECK(relevant == 5);
}

TEST_CASE("the restricted-process witness survives materialization") {
    CubeProcess proc = example_intro_restricted(3, kHalf);
    ExtractOptions opts;
    opts.relax_dimension = true;
    LineExtractResult res = extract_line_witness(proc, restricted_params(), opts);
    REQUIRE(res.witness.has_value());
    const LineWitness& w = *res.witness;
    std::vector<int> gens;
    for (int g = 0; g < proc.product->generator_count(); ++g) gens.push_back(g);
    Materialization m = materialize(proc.product, gens);
    CHECK(m.space->atom_count() == 256);
    for (const IndexStat& st : w.stats) {
        if (!st.relevant) continue;
        Event S = m.to_mask(w.S.at(st.t));
        Event D = m.to_mask(proc.at(st.t));
        CHECK(prob(S) == st.p_S);
        CHECK(conditional(D, S) == *st.p_D_given_S);
    }
}

TEST_CASE("line extraction rejects bad inputs") {
    CubeProcess intro3 = example_intro(3, kHalf);
    AnalysisParams params{kHalf, Rational(1, 24), Rational(0), 3, 1};
    // marginals are not within eta of epsilon
    CHECK_THROWS_AS(extract_line_witness(intro3, params), std::invalid_argument);
    AnalysisParams wrong_kappa = params;
    wrong_kappa.kappa = 2;
    wrong_kappa.sigma = Rational(1, 8);
    CHECK_THROWS_AS(extract_line_witness(intro3, wrong_kappa), std::invalid_argument);
    CubeProcess square = example_intro_restricted(3, kHalf);
    // n < |A| without the relaxation
    CHECK_THROWS_AS(extract_line_witness(square, restricted_params()),
                    std::invalid_argument);
}

TEST_CASE("splitting a line tuple") {
    auto a3 = Alphabet::integers(3);
    VariableWord v(a3, {3, 0, 1});  // (x, 1, 2)
    std::vector<Word> tuple = line_of(v);
    OneSepConstruction c = one_sep_construction(a3, tuple);
    CHECK(c.p == 2);
    CHECK(c.d == 1);
    CHECK(c.iota == 0);
    CHECK(c.beta == 2);
    CHECK(c.betas == std::vector<Symbol>{0, 1});
    CHECK(c.gamma == std::set<Symbol>{0, 1});
    CHECK(c.V.generator.entries == std::vector<int>{2, 3, 4});
    Word t({2, 0, 2});  // (3,1,3) in V
    CHECK(c.map_point(0, t) == Word({0, 0, 0}));
    CHECK(c.map_point(1, t) == Word({1, 0, 1}));
    CHECK_THROWS(c.map_point(2, t));
    CHECK_THROWS(c.map_point(0, Word({0, 0, 0})));  // outside V
}

TEST_CASE("splitting the prefix-swap triple") {
    auto a3 = Alphabet::integers(3);
    Word w({0, 0});  // tail (1,1)
    std::vector<Word> tuple{Word({0, 1, 0}).concat(w), Word({1, 0, 1}).concat(w),
                            Word({1, 1, 2}).concat(w)};
    OneSepConstruction c = one_sep_construction(a3, tuple);
    CHECK(c.d == 3);
    CHECK(c.iota == 2);
    CHECK(c.beta == 2);
    CHECK(c.betas == std::vector<Symbol>{0, 1});
    CHECK(c.gamma == std::set<Symbol>{0, 1});
    // V is generated by (2,2,3,x1,x2)
    CHECK(c.V.generator.entries == std::vector<int>{1, 1, 2, 3, 4});
    Word t({1, 1, 2, 2, 0});  // (2,2,3,3,1)
    CHECK(c.map_point(0, t) == Word({0, 1, 0, 0, 0}));  // (1,2,1,1,1)
    CHECK(c.map_point(1, t) == Word({1, 0, 1, 1, 0}));  // (2,1,2,2,1)
}

TEST_CASE("splitting rejects unsuitable tuples") {
    auto a3 = Alphabet::integers(3);
    // not 1-separated in the given order
    CHECK_THROWS(one_sep_construction(
        a3, {Word({0, 0, 0}), Word({1, 1, 0}), Word({0, 1, 0})}));
    // the type fills the cube, leaving no room for the subspace
    CHECK_THROWS(one_sep_construction(a3, {Word({0}), Word({1}), Word({2})}));
    CHECK_THROWS(one_sep_construction(a3, {Word({0, 0})}));
}

TEST_CASE("one-separated extraction on the restricted two-projection process") {
    CubeProcess proc = example_intro_restricted(3, kHalf);
    OneSepExtractResult res = extract_one_sep_witness(proc, restricted_params());
    REQUIRE(res.witness.has_value());
    const OneSepWitness& w = *res.witness;
    CHECK(w.tau.elements == std::vector<Word>{Word({0}), Word({2})});
    CHECK(w.tau.dim == 1);
    CHECK(w.branch == Label::Supercorrelated);
    CHECK_FALSE(w.last_complemented);
    CHECK(w.G == std::vector<Word>{Word({0, 0}), Word({0, 2})});
    CHECK(w.bounds_hold);
    for (const IndexStat& st : w.stats) {
        CHECK(st.p_S == kQuarter);
        REQUIRE(st.p_D_given_S.has_value());
        CHECK(*st.p_D_given_S == kHalf);
    }
}

TEST_CASE("one-separated extraction on the restricted prefix-swap process") {
    CubeProcess base = example_one_sep(7, kHalf);
    CombinatorialSpace V0(VariableWord(base.alphabet, {1, 1, 2, 3, 4, 5, 6}));
    CubeProcess proc = restrict_process(base, V0);
    REQUIRE(proc.n == 4);
    for (const Word& t : all_words(3, 4)) CHECK(prob(proc.at(t)) == kQuarter);

    ExtractOptions opts;
    opts.relax_hypotheses = true;  // skip the quartic stationarity sweep
    OneSepExtractResult res = extract_one_sep_witness(proc, restricted_params(), opts);
    REQUIRE(res.witness.has_value());
    const OneSepWitness& w = *res.witness;
    CHECK(w.tau.elements == std::vector<Word>{Word({0}), Word({2})});
    CHECK(w.branch == Label::Supercorrelated);
    CHECK(w.bounds_hold);
    for (const IndexStat& st : w.stats) {
        CHECK(st.p_S == kQuarter);
        REQUIRE(st.p_D_given_S.has_value());
        CHECK(*st.p_D_given_S == kHalf);
    }
}

TEST_CASE("one-separated extraction certifies the independent process") {
    auto a3 = Alphabet::integers(3);
    CubeProcess proc = independent_process(a3, 2, kHalf);
    AnalysisParams params{kHalf, Rational(1, 8), Rational(1, 32), 2, 1};
    OneSepExtractResult res = extract_one_sep_witness(proc, params);
    REQUIRE(res.certificate.has_value());
    CHECK(res.certificate->type_reports.size() == 4);
    CHECK(res.certificate->worst_deviation == 0);
}

TEST_CASE("simplicial splitting reduces to the one-variable case") {
    auto a3 = Alphabet::integers(3);
    std::vector<Word> tuple{Word({0, 0, 0}), Word({1, 0, 0}), Word({2, 0, 0})};
    SimplicialConstruction c = simplicial_construction(a3, tuple, {1});
    CHECK(c.p == 2);
    CHECK(c.d == 1);
    CHECK(c.ell == 1);
    CHECK(c.J == std::vector<int>{0});
    CHECK(c.betas == std::vector<Symbol>{2});
    CHECK(c.V.generator.entries == std::vector<int>{2, 3, 0});
    Word t({2, 2, 0});  // (3,3,1)
    CHECK(c.map_point(0, t) == Word({0, 0, 0}));
    CHECK(c.map_point(1, t) == Word({1, 1, 0}));
}

TEST_CASE("simplicial splitting of the nine-point square") {
    auto a3 = Alphabet::integers(3);
    std::vector<Word> tuple;
    for (const Word& s : all_words(3, 2)) tuple.push_back(s.concat(Word({0, 0})));
    CHECK(separation_index_tuple(tuple).value == 2);
    SimplicialConstruction c = simplicial_construction(a3, tuple, {1, 1});
    CHECK(c.p == 8);
    CHECK(c.d == 2);
    CHECK(c.J == std::vector<int>{0, 1});
    CHECK(c.betas == std::vector<Symbol>{2, 2});
    // V is generated by (3, x1, 3, x2)
    CHECK(c.V.generator.entries == std::vector<int>{2, 3, 2, 4});
    Word t({2, 0, 2, 1});  // (3,1,3,2)
    CHECK(c.map_point(0, t) == Word({0, 0, 0, 1}));  // tuple[0] = (1,1,..)
    CHECK(c.map_point(5, t) == Word({1, 0, 2, 1}));  // tuple[5] = (2,3,..)
    // the distinguished point maps blocks through untouched
    CHECK(c.map_point(7, t) == Word({2, 0, 1, 1}));  // tuple[7] = (3,2,..)

    CHECK_THROWS(simplicial_construction(a3, tuple, {1}));
    CHECK_THROWS(simplicial_construction(a3, tuple, {2, 2}));
}

TEST_CASE("simplicial extraction works on the two-block process") {
    CubeProcess proc = example_simplicial(2, kHalf);
    AnalysisParams params{kHalf, Rational(1, 4608), Rational(0), 9, 2};
    ExtractOptions opts;
    opts.relax_hypotheses = true;
    SimplicialExtractResult res = extract_simplicial_witness(proc, params, {1, 1}, opts);
    REQUIRE(res.witness.has_value());
    const SimplicialWitness& w = *res.witness;
    CHECK(separation_index_set(w.G).value == 2);
    CHECK(w.shape.ell == 2);
    CHECK(w.shape.r == std::vector<int>{1, 1});
    CHECK(w.shape.intervals ==
          std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});
    REQUIRE(w.factor_blocks.size() == w.factors.size());
    for (auto [block, alpha] : w.factor_blocks) {
        CHECK(block >= 0);
        CHECK(block < 2);
        CHECK(alpha != w.shape.betas[block]);
    }
    // the selector process is the conjunction of its factors
    for (size_t i = 0; i < w.S.events.size(); ++i) {
        Event e = formula_event(proc.product, proc.product->f_true());
        for (const CubeProcess& f : w.factors) e = event_and(e, f.events[i]);
        CHECK(events_equal(e, w.S.events[i]));
    }
}
