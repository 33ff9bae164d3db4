// Acceptance gate: one pass/fail line per criterion, pinned exact values.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cubestruct/dhjlab.hpp"
#include "cubestruct/examples.hpp"
#include "cubestruct/extractor.hpp"
#include "cubestruct/invariants.hpp"
#include "cubestruct/process.hpp"

using namespace cubestruct;

namespace {

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

double run_ms(const std::function<void()>& f) {
    auto start = std::chrono::steady_clock::now();
    f();
    auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(stop - start).count();
}

Word w1(std::initializer_list<int> one_based) {
    Word out;
    for (int v : one_based) out.letters.push_back(v - 1);
    return out;
}

const Rational kHalf(1, 2);
const Rational kQuarter(1, 4);

// ---------------------------------------------------------------- criterion 1

void criterion1(Check& c) {
    std::vector<Word> tuple{w1({2, 1, 3, 2, 3}), w1({3, 1, 4, 2, 4}),
                            w1({4, 1, 3, 2, 3}), w1({3, 1, 4, 2, 4}),
                            w1({4, 1, 2, 2, 2})};
    TypeTuple tau;
    double ms = run_ms([&] { tau = type_of_tuple(tuple); });
    c.require(tau.dim == 2, "dim != 2");
    std::vector<Word> expected{w1({2, 3}), w1({3, 4}), w1({4, 3}), w1({3, 4}),
                               w1({4, 2})};
    c.require(tau.columns == expected, "columns differ from the published type");
    c.require(ms < 1.0, "runtime " + std::to_string(ms) + " ms >= 1 ms");
}

// ---------------------------------------------------------------- criterion 2

void criterion2(Check& c) {
    // the two-letter square example
    Word oo({0, 0}), io({1, 0}), oi({0, 1});
    c.require(separation_index_tuple({io, oi, oo}).value == 2, "s(tuple) != 2");
    SeparationIndex si = separation_index_set({io, oi, oo});
    c.require(si.value == 1, "s(set) != 1");
    c.require(si.witness_enumeration.has_value(), "missing witness enumeration");
    if (si.witness_enumeration) {
        std::vector<Word> input{io, oi, oo}, ordered;
        for (int i : *si.witness_enumeration) ordered.push_back(input[i]);
        c.require(separation_index_tuple(ordered).value == 1, "witness order invalid");
    }

    auto a3 = Alphabet::integers(3);
    std::vector<Word> pts = all_words(3, 2);
    std::vector<CombinatorialSpace> spaces = all_subspaces(a3, 3, 2);
    std::map<TypeSet, int> sep_by_type;
    for (int mask = 1; mask < (1 << 9); ++mask) {
        std::vector<Word> G;
        for (int i = 0; i < 9; ++i)
            if (mask >> i & 1) G.push_back(pts[i]);
        int p = static_cast<int>(G.size());
        TypeTuple tt = type_of_tuple(G);
        TypeSet ts = type_of_set(G);
        // permutation equivariance on small tuples
        if (p <= 3) {
            std::vector<int> perm(p);
            for (int i = 0; i < p; ++i) perm[i] = i;
            do {
                std::vector<Word> permuted, cols;
                for (int i : perm) {
                    permuted.push_back(G[i]);
                    cols.push_back(tt.columns[i]);
                }
                TypeTuple got = type_of_tuple(permuted);
                c.require(got.dim == tt.dim && got.columns == cols,
                          "permutation equivariance violated");
            } while (std::next_permutation(perm.begin(), perm.end()));
        }
        int s = separation_index_set(G, 9).value;
        auto [it, fresh] = sep_by_type.emplace(ts, s);
        c.require(fresh || it->second == s, "type fails to determine separation");
        // invariance under every 2-dimensional subspace of the cube
        for (const CombinatorialSpace& V : spaces) {
            std::vector<Word> image;
            for (const Word& t : G) image.push_back(canonical_iso(V, t));
            c.require(type_of_tuple(image) == tt, "tuple type not iso-invariant");
            c.require(type_of_set(image) == ts, "set type not iso-invariant");
            if (p <= 4)
                c.require(separation_index_set(image, 9).value == s,
                          "separation not iso-invariant");
        }
        if (!c.ok) return;
    }
}

// ---------------------------------------------------------------- criterion 3

void criterion3(Check& c) {
    CubeProcess proc = example_intro(3, kHalf);
    for (const Word& t : all_words(3, 3))
        if (t.contains(2))
            c.require(prob(proc.at(t)) == kQuarter, "marginal with a 3 is not 1/4");
    std::vector<VariableWord> lines = all_variable_words(proc.alphabet, 3);
    c.require(lines.size() == 37, "expected 37 variable words");
    for (const VariableWord& v : lines) {
        Event two = event_and(proc.at(substitute(v, {0})), proc.at(substitute(v, {1})));
        Event three = event_and(two, proc.at(substitute(v, {2})));
        c.require(events_equal(three, two), "third line point not implied");
        bool const3 = false;
        for (int i = 0; i < v.n(); ++i)
            const3 = const3 || (!v.is_variable(i) && v.entries[i] == 2);
        if (const3)
            c.require(prob(three) == Rational(1, 16),
                      "line correlation with constant 3 is not 1/16");
    }
}

// ---------------------------------------------------------------- criterion 4

void criterion4(Check& c) {
    CubeProcess proc = example_intro_restricted(3, kHalf);
    AnalysisParams params{kQuarter, Rational(1, 96), Rational(0), 3, 1};
    ExtractOptions opts;
    opts.relax_dimension = true;
    LineExtractResult res = extract_line_witness(proc, params, opts);
    c.require(res.witness.has_value(), "no witness extracted");
    if (!res.witness) return;
    const LineWitness& w = *res.witness;
    c.require(w.branch == Label::Supercorrelated, "branch is not supercorrelated");
    c.require(w.gamma0 == std::set<Symbol>{0, 2}, "gamma0 != {1,3}");
    c.require(w.beta == 2, "beta != 3");
    c.require(w.p_S_lower == Rational(1, 192), "P(S) floor != 1/192");
    c.require(w.conditional_lower == kQuarter + Rational(1, 1536),
              "conditional floor != 1/4 + 1/1536");
    for (const IndexStat& st : w.stats) {
        if (!st.relevant) continue;
        c.require(st.p_S == kQuarter && st.p_S >= w.p_S_lower, "P(S_t) != 1/4");
        c.require(st.p_D_given_S && *st.p_D_given_S == kHalf &&
                      *st.p_D_given_S >= w.conditional_lower,
                  "P(D_t | S_t) != 1/2");
    }
    // independent re-verification over the explicit 256-atom product measure
    std::vector<int> gens;
    for (int g = 0; g < proc.product->generator_count(); ++g) gens.push_back(g);
    Materialization m = materialize(proc.product, gens);
    c.require(m.space->atom_count() == 256, "materialization is not 256 atoms");
    for (const IndexStat& st : w.stats) {
        if (!st.relevant) continue;
        Event S = m.to_mask(w.S.at(st.t));
        Event D = m.to_mask(proc.at(st.t));
        c.require(prob(S) == st.p_S, "materialized P(S_t) disagrees");
        c.require(conditional(D, S) == *st.p_D_given_S,
                  "materialized P(D_t | S_t) disagrees");
    }
}

// ---------------------------------------------------------------- criterion 5

void collect_vars(const BernoulliProduct& P, int node, std::set<int>& out) {
    switch (P.node_kind(node)) {
        case BernoulliProduct::Kind::Var: out.insert(P.node_var(node)); break;
        case BernoulliProduct::Kind::Not:
        case BernoulliProduct::Kind::And:
        case BernoulliProduct::Kind::Or:
            for (int ch : P.node_children(node)) collect_vars(P, ch, out);
            break;
        default: break;
    }
}

void criterion5(Check& c) {
    CubeProcess proc = example_simplicial(2, kHalf);
    for (const Word& t : all_words(3, 4)) {
        bool t3 = t[0] == 2 || t[1] == 2, s3 = t[2] == 2 || t[3] == 2;
        Rational expect = t3 && s3   ? Rational(1, 256)
                          : t3 || s3 ? Rational(1, 8)
                                     : kHalf;
        c.require(prob(proc.at(t)) == expect, "marginal trichotomy violated");
    }
    // nine diagonal points: intersection is the distinguished event, 1/256
    CombinatorialSpace diag(VariableWord(proc.alphabet, {3, 3, 4, 4}));
    Event nine = formula_event(proc.product, proc.product->f_true());
    for (const Word& t : diag.points()) nine = event_and(nine, proc.at(t));
    c.require(prob(nine) == Rational(1, 256), "9-point correlation != 1/256");
    c.require(events_equal(nine, proc.at(Word({2, 2, 2, 2}))),
              "9-point intersection differs from the distinguished event");

    AnalysisParams params{kHalf, Rational(1, 4608), Rational(0), 9, 2};
    ExtractOptions opts;
    opts.relax_hypotheses = true;
    SimplicialExtractResult res = extract_simplicial_witness(proc, params, {1, 1}, opts);
    c.require(res.witness.has_value(), "no simplicial witness extracted");
    if (!res.witness) return;
    const SimplicialWitness& sw = *res.witness;
    c.require(sw.shape.ell == 2, "certificate is not 2-block");
    c.require(sw.shape.r == std::vector<int>{1, 1}, "block pattern != (1,1)");
    c.require(separation_index_set(sw.G).value == 2, "witness set is not 2-separated");
    // certificate re-verified: each factor locally insensitive on its block
    for (size_t j = 0; j < sw.factors.size(); ++j) {
        auto [block, alpha] = sw.factor_blocks[j];
        std::set<int> I;
        for (int i = sw.shape.intervals[block].first;
             i < sw.shape.intervals[block].second; ++i)
            I.insert(i);
        InsensitivityReport rep =
            verify_insensitive(sw.factors[j], alpha, sw.shape.betas[block],
                               std::nullopt, I);
        c.require(rep.insensitive, "factor fails its local insensitivity");
    }
    for (size_t i = 0; i < sw.S.events.size(); ++i) {
        Event e = formula_event(proc.product, proc.product->f_true());
        for (const CubeProcess& f : sw.factors) e = event_and(e, f.events[i]);
        c.require(events_equal(e, sw.S.events[i]), "selector is not the factor meet");
    }

    // backend agreement on 200 sampled subformulas of at most 12 generators
    std::mt19937_64 rng(20260824);
    std::uniform_int_distribution<long long> pick(0, 80);
    std::uniform_int_distribution<int> mode(0, 2);
    int checked = 0;
    while (checked < 200) {
        Event e = proc.events[pick(rng)];
        int m = mode(rng);
        if (m == 1) e = event_and(e, proc.events[pick(rng)]);
        if (m == 2) e = event_or(e, proc.events[pick(rng)]);
        std::set<int> support;
        collect_vars(*proc.product, e.node, support);
        if (support.size() > 12) continue;
        Materialization mat =
            materialize(proc.product, {support.begin(), support.end()});
        c.require(prob(mat.to_mask(e)) == prob(e), "mask backend disagrees");
        ++checked;
        if (!c.ok) return;
    }
}

// ---------------------------------------------------------------- criterion 6

void criterion6(Check& c) {
    auto a3 = Alphabet::integers(3);
    std::vector<Word> pts = all_words(3, 3);
    long long built = 0;
    auto feasible_one_sep = [&](const std::vector<Word>& tuple) {
        std::set<Word> distinct(tuple.begin(), tuple.end());
        if (distinct.size() != tuple.size()) return false;
        for (size_t j = 1; j < tuple.size(); ++j) {
            bool sep = false;
            for (int i = 0; i < 3 && !sep; ++i) {
                sep = true;
                for (size_t q = 0; q < j && sep; ++q)
                    sep = tuple[j][i] != tuple[q][i];
            }
            if (!sep) return false;
        }
        return type_of_tuple(tuple).dim < 3;
    };
    // every ordered pair and triple; the construction self-verifies its maps
    try {
        for (const Word& a : pts)
            for (const Word& b : pts) {
                std::vector<Word> pair{a, b};
                if (feasible_one_sep(pair)) {
                    one_sep_construction(a3, pair);
                    ++built;
                }
                for (const Word& d : pts) {
                    std::vector<Word> triple{a, b, d};
                    if (!feasible_one_sep(triple)) continue;
                    one_sep_construction(a3, triple);
                    ++built;
                }
            }
    } catch (const std::logic_error& e) {
        c.require(false, std::string("type preservation violated: ") + e.what());
        return;
    }
    c.require(built > 500, "exhaustive sweep built only " + std::to_string(built));

    // 500 seeded separated tuples through the multi-block splitting
    std::mt19937_64 rng(424242);
    std::uniform_int_distribution<int> letter(0, 2);
    std::uniform_int_distribution<int> size(3, 4);
    int accepted = 0;
    long long attempts = 0;
    try {
        while (accepted < 500 && ++attempts < 200000) {
            int p1 = size(rng);
            std::vector<Word> tuple(p1);
            for (Word& t : tuple) {
                t.letters.resize(5);
                for (Symbol& s : t.letters) s = letter(rng);
            }
            std::set<Word> distinct(tuple.begin(), tuple.end());
            if (distinct.size() != tuple.size()) continue;
            int ell = separation_index_tuple(tuple).value;
            int d = type_of_tuple(tuple).dim;
            if (ell > 5 - d) continue;
            simplicial_construction(a3, tuple, std::vector<int>(ell, 1));
            ++accepted;
        }
    } catch (const std::logic_error& e) {
        c.require(false, std::string("type preservation violated: ") + e.what());
        return;
    }
    c.require(accepted == 500, "seeded sweep accepted " + std::to_string(accepted));
}

// ---------------------------------------------------------------- criterion 7

void criterion7(Check& c) {
    auto a3 = Alphabet::integers(3);
    std::vector<VariableWord> lines = all_variable_words(a3, 2);
    std::vector<CombinatorialSpace> spaces = all_subspaces(a3, 2, 1);
    std::vector<Word> letters = all_words(3, 1);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        CubeProcess proc = random_process(a3, 2, kHalf, seed);
        Rational line_star = stationarity_modulus_lines(proc).eta_star;
        for (int g1 = 1; g1 < 8; ++g1)
            for (int g2 = 0; g2 < 8; ++g2) {
                if (g1 & g2) continue;
                std::set<Symbol> gamma1, gamma2;
                for (Symbol a = 0; a < 3; ++a) {
                    if (g1 >> a & 1) gamma1.insert(a);
                    if (g2 >> a & 1) gamma2.insert(a);
                }
                Rational bound =
                    pow_rat(2, static_cast<unsigned>(gamma2.size())) * line_star;
                for (const VariableWord& u : lines)
                    for (const VariableWord& v : lines)
                        c.require(boolean_stability_check(proc, gamma1, gamma2, u, v) <=
                                      bound,
                                  "line stability bound violated");
                if (!c.ok) return;
            }
        Rational type_star = stationarity_modulus_types(proc, 3, 1).eta_star;
        for (int gm = 1; gm < 8; ++gm) {
            std::vector<Word> G;
            for (int i = 0; i < 3; ++i)
                if (gm >> i & 1) G.push_back(letters[i]);
            for (int qm = 0; qm < 8; ++qm) {
                if ((qm & gm) != qm) continue;
                std::vector<Word> Q;
                for (int i = 0; i < 3; ++i)
                    if (qm >> i & 1) Q.push_back(letters[i]);
                Rational bound =
                    pow_rat(2, static_cast<unsigned>(Q.size())) * type_star;
                for (const CombinatorialSpace& U : spaces)
                    for (const CombinatorialSpace& V : spaces)
                        c.require(
                            boolean_stability_check_types(proc, G, Q, U, V) <= bound,
                            "subspace stability bound violated");
                if (!c.ok) return;
            }
        }
    }
}

// ---------------------------------------------------------------- criterion 8

void criterion8(Check& c, std::string& note) {
    McSepResult r = mc_one_separated_rate(3, 30, 3, 10000, 2026);
    double stderr_hat =
        std::sqrt(r.empirical_rate * (1.0 - r.empirical_rate) / r.samples);
    c.require(std::fabs(r.bound -
                        (1.0 - 3.0 * std::exp(-30.0 * std::pow(2.0 / 3.0, 3)))) <
                  1e-12,
              "closed-form bound mismatch");
    c.require(r.empirical_rate >= r.bound - 3.0 * stderr_hat,
              "empirical rate below the bound");
    note = "bound = " + std::to_string(r.bound) +
           ", empirical = " + std::to_string(r.empirical_rate);
}

// ---------------------------------------------------------------- criterion 9

void criterion9(Check& c) {
    c.require(max_linefree_density(2, 2).density == Rational(1, 2), "n=2 != 1/2");
    LinefreeResult r3 = max_linefree_density(2, 3);
    LinefreeResult r4 = max_linefree_density(2, 4);
    c.require(r3.density == Rational(3, 8) && r3.exact, "n=3 != 3/8");
    c.require(r4.density == Rational(3, 8) && r4.exact, "n=4 != 3/8");
}

// ---------------------------------------------------------------- criterion 10

void criterion10(Check& c) {
    auto a3 = Alphabet::integers(3);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        CubeProcess proc = random_process(a3, 2, kHalf, seed);
        Rational eps = base_rate(proc).epsilon;
        Rational line_star = stationarity_modulus_lines(proc).eta_star;
        for (int gm = 1; gm < 8; ++gm) {
            std::set<Symbol> gamma;
            for (Symbol a = 0; a < 3; ++a)
                if (gm >> a & 1) gamma.insert(a);
            Label l = classify_gamma(proc, gamma, line_star, eps).label;
            c.require(l != Label::Mixed, "gamma classification is mixed");
        }
        Rational type_star = stationarity_modulus_types(proc, 3, 2).eta_star;
        std::vector<TypeSet> taus{TypeSet{{Word{}}, 0}};
        for (int q = 2; q <= 3; ++q)
            for (int d = 1; d <= 2; ++d) {
                std::vector<Word> words = all_words(3, d);
                int nw = static_cast<int>(words.size());
                for (int mask = 1; mask < (1 << nw); ++mask) {
                    if (__builtin_popcount(mask) != q) continue;
                    std::vector<Word> elements;
                    for (int i = 0; i < nw; ++i)
                        if (mask >> i & 1) elements.push_back(words[i]);
                    TypeSet ts = type_of_set(elements);
                    if (ts.dim == d && ts.elements == elements)
                        taus.push_back(std::move(ts));
                }
            }
        for (const TypeSet& tau : taus) {
            Label l = classify_type(proc, tau, type_star, eps).label;
            c.require(l != Label::Mixed, "type classification is mixed");
        }
        if (!c.ok) return;
    }
}

// ---------------------------------------------------------------- criterion 11

void criterion11(Check& c) {
    std::mt19937_64 rng(77);
    std::bernoulli_distribution in_s(0.75), in_d(0.5);
    int accepted = 0;
    long long attempts = 0;
    while (accepted < 20 && ++attempts < 2000) {
        IncrementInput in;
        in.index_count = 4;
        in.tail_count = 8;
        in.epsilon = kQuarter;
        in.sigma = Rational(1, 8);
        in.k = 2;
        in.S.resize(4);
        in.D.resize(4);
        for (int t = 0; t < 4; ++t)
            for (long long s = 0; s < 8; ++s) {
                if (in_s(rng)) in.S[t].insert(s);
                if (in_d(rng)) in.D[t].insert(s);
            }
        IncrementResult out;
        try {
            out = density_increment_step(in);
        } catch (const std::invalid_argument&) {
            continue;  // entry hypotheses not met; draw again
        } catch (const std::logic_error& e) {
            c.require(false, std::string("first moment failed: ") + e.what());
            return;
        }
        c.require(out.s >= 0 && out.s < 8, "returned column out of range");
        c.require(out.conditional >= out.lower,
                  "returned conditional below eps + sigma/(2 4^k)");
        c.require(out.lower == kQuarter + Rational(1, 256), "wrong lower bound");
        ++accepted;
    }
    c.require(accepted == 20, "could not draw 20 satisfying instances");

    int named = 0;
    for (int i = 0; i < 5; ++i) {
        IncrementInput bad;
        bad.epsilon = kQuarter;
        bad.sigma = Rational(1, 8);
        bad.k = 2;
        if (i < 3) {  // P(S) too small
            bad.index_count = 1;
            bad.tail_count = 512 + i;
            bad.S = {{static_cast<long long>(i)}};
            bad.D = {{}};
        } else {  // P(D|S) too small
            bad.index_count = 1;
            bad.tail_count = 4;
            bad.S = {{0, 1, 2, 3}};
            bad.D = {{static_cast<long long>(i - 3)}};
        }
        try {
            density_increment_step(bad);
        } catch (const std::invalid_argument& e) {
            if (std::string(e.what()).rfind("entry bound", 0) == 0) ++named;
        }
    }
    c.require(named == 5, "named entry-bound errors: " + std::to_string(named));
}

}  // namespace

int main() {
    struct Entry {
        int id;
        const char* name;
        double limit_ms;
        std::function<void(Check&, std::string&)> run;
    };
    std::vector<Entry> entries{
        {1, "worked type example", 1e9, [](Check& c, std::string&) { criterion1(c); }},
        {2, "separation and invariance sweep", 10000,
         [](Check& c, std::string&) { criterion2(c); }},
        {3, "two-projection identities", 5000,
         [](Check& c, std::string&) { criterion3(c); }},
        {4, "line witness with materialized recheck", 10000,
         [](Check& c, std::string&) { criterion4(c); }},
        {5, "two-block process and simplicial witness", 60000,
         [](Check& c, std::string&) { criterion5(c); }},
        {6, "type preservation of constructed maps", 60000,
         [](Check& c, std::string&) { criterion6(c); }},
        {7, "boolean stability bounds", 1e9,
         [](Check& c, std::string&) { criterion7(c); }},
        {8, "monte carlo separation rate", 10000, criterion8},
        {9, "line-free densities", 60000,
         [](Check& c, std::string&) { criterion9(c); }},
        {10, "trichotomy soundness", 1e9,
         [](Check& c, std::string&) { criterion10(c); }},
        {11, "density increment step", 30000,
         [](Check& c, std::string&) { criterion11(c); }},
    };
    int failures = 0;
    for (Entry& e : entries) {
        Check c;
        std::string note;
        double ms = run_ms([&] { e.run(c, note); });
        c.require(ms < e.limit_ms, "over the time budget");
        if (c.ok) {
            std::printf("PASS criterion %2d: %s (%.0f ms%s%s)\n", e.id, e.name, ms,
                        note.empty() ? "" : "; ", note.c_str());
        } else {
            ++failures;
            std::printf("FAIL criterion %2d: %s (%.0f ms) -- %s\n", e.id, e.name, ms,
                        c.detail.c_str());
        }
    }
    return failures == 0 ? 0 : 1;
}
