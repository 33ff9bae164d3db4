#include "cubestruct/examples.hpp"

#include <random>
#include <stdexcept>

namespace cubestruct {

namespace {

void check_epsilon(const Rational& epsilon) {
    if (epsilon <= 0 || epsilon >= 1)
        throw std::invalid_argument("epsilon must lie in (0,1)");
}

Event generator_event(const ProductPtr& product, const Alphabet& a, const Word& s) {
    return formula_event(product, product->f_var(product->generator(word_str(a, s))));
}

}  // namespace

CubeProcess example_intro(int n, const Rational& epsilon) {
    if (n < 1) throw std::invalid_argument("n must be positive");
    check_epsilon(epsilon);
    auto alphabet = Alphabet::integers(3);
    const Symbol one = 0, two = 1, three = 2;
    auto product = std::make_shared<BernoulliProduct>(epsilon);
    // register generators in the order of {1,2}^n
    for (const Word& s : all_words(2, n)) product->generator(word_str(*alphabet, s));
    std::vector<Event> events;
    for (const Word& t : all_words(3, n))
        events.push_back(event_and(generator_event(product, *alphabet, project(t, three, one)),
                                   generator_event(product, *alphabet, project(t, three, two))));
    return make_process(alphabet, n, product, std::move(events));
}

CubeProcess example_intro_restricted(int n, const Rational& epsilon) {
    if (n < 2) throw std::invalid_argument("n must be at least 2");
    CubeProcess base = example_intro(n, epsilon);
    std::vector<int> entries{2};
    for (int i = 0; i < n - 1; ++i) entries.push_back(3 + i);
    CombinatorialSpace V{VariableWord(base.alphabet, std::move(entries))};
    return restrict_process(base, V);
}

CubeProcess example_one_sep(int n, const Rational& epsilon, bool relaxed) {
    if (n < (relaxed ? 4 : 5))
        throw std::invalid_argument(relaxed ? "n must be at least 4"
                                            : "n must be at least 5");
    check_epsilon(epsilon);
    auto alphabet = Alphabet::integers(3);
    const Symbol one = 0, two = 1, three = 2;
    auto product = std::make_shared<BernoulliProduct>(epsilon);
    const Word special{{two, two, three}};
    const Word swap_a{{one, two, one}};
    const Word swap_b{{two, one, two}};
    for (const Word& y : all_words(3, 3)) {
        if (y == special) continue;
        for (const Word& s : all_words(2, n - 3))
            product->generator(word_str(*alphabet, y.concat(s)));
    }
    std::vector<Event> events;
    for (const Word& t : all_words(3, n)) {
        Word y{std::vector<Symbol>(t.letters.begin(), t.letters.begin() + 3)};
        Word z{std::vector<Symbol>(t.letters.begin() + 3, t.letters.end())};
        Word z1 = project(z, three, one);
        Word z2 = project(z, three, two);
        Event e = y == special
            ? event_and(generator_event(product, *alphabet, swap_a.concat(z1)),
                        generator_event(product, *alphabet, swap_b.concat(z2)))
            : event_and(generator_event(product, *alphabet, y.concat(z1)),
                        generator_event(product, *alphabet, y.concat(z2)));
        events.push_back(std::move(e));
    }
    return make_process(alphabet, n, product, std::move(events));
}

CubeProcess example_simplicial(int n, const Rational& epsilon) {
    if (n < 1) throw std::invalid_argument("n must be positive");
    check_epsilon(epsilon);
    auto alphabet = Alphabet::integers(3);
    const Symbol one = 0, two = 1, three = 2;
    auto product = std::make_shared<BernoulliProduct>(epsilon);
    // index family: one factor over {1,2}^n, the other free
    for (const Word& t : all_words(2, n))
        for (const Word& s : all_words(3, n))
            product->generator(word_str(*alphabet, t.concat(s)));
    for (const Word& t : all_words(3, n))
        for (const Word& s : all_words(2, n)) product->generator(word_str(*alphabet, t.concat(s)));
    std::vector<Event> events;
    for (const Word& w : all_words(3, 2 * n)) {
        Word t{std::vector<Symbol>(w.letters.begin(), w.letters.begin() + n)};
        Word s{std::vector<Symbol>(w.letters.begin() + n, w.letters.end())};
        Word t1 = project(t, three, one), t2 = project(t, three, two);
        Word s1 = project(s, three, one), s2 = project(s, three, two);
        Event first = event_and(product, {generator_event(product, *alphabet, t1.concat(s1)),
                                          generator_event(product, *alphabet, t1.concat(s2)),
                                          generator_event(product, *alphabet, t1.concat(s)),
                                          generator_event(product, *alphabet, t2.concat(s1)),
                                          generator_event(product, *alphabet, t2.concat(s2)),
                                          generator_event(product, *alphabet, t2.concat(s))});
        Event second = event_and(generator_event(product, *alphabet, t.concat(s1)),
                                 generator_event(product, *alphabet, t.concat(s2)));
        events.push_back(event_and(first, second));
    }
    return make_process(alphabet, 2 * n, product, std::move(events));
}

CubeProcess independent_process(const AlphabetPtr& alphabet, int n,
                                const Rational& epsilon) {
    if (n < 1) throw std::invalid_argument("n must be positive");
    check_epsilon(epsilon);
    auto product = std::make_shared<BernoulliProduct>(epsilon);
    std::vector<Event> events;
    for (const Word& t : all_words(alphabet->k(), n))
        events.push_back(generator_event(product, *alphabet, t));
    return make_process(alphabet, n, product, std::move(events));
}

CubeProcess random_process(const AlphabetPtr& alphabet, int n,
                           const Rational& epsilon, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("n must be positive");
    check_epsilon(epsilon);
    auto product = std::make_shared<BernoulliProduct>(epsilon);
    int pool = std::max(4, alphabet->k() + n);
    std::vector<int> vars;
    for (int g = 0; g < pool; ++g)
        vars.push_back(product->f_var(product->generator("g" + std::to_string(g))));
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> arity(1, 3);
    std::uniform_int_distribution<int> pick(0, pool - 1);
    std::uniform_int_distribution<int> coin(0, 1);
    std::vector<Event> events;
    long long count = 1;
    for (int i = 0; i < n; ++i) count *= alphabet->k();
    for (long long r = 0; r < count; ++r) {
        std::vector<int> literals;
        int a = arity(rng);
        for (int j = 0; j < a; ++j) {
            int v = vars[pick(rng)];
            literals.push_back(coin(rng) ? v : product->f_not(v));
        }
        events.push_back(formula_event(product, product->f_and(std::move(literals))));
    }
    return make_process(alphabet, n, product, std::move(events));
}

}  // namespace cubestruct
