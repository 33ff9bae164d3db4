#include "cubestruct/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

namespace cubestruct {

namespace {

void check_lengths(const std::vector<Word>& tuple) {
    if (tuple.empty()) throw std::invalid_argument("empty tuple");
    // length 0 is allowed: the empty word is the dim-0 type's element
    int n = tuple[0].n();
    for (const Word& w : tuple)
        if (w.n() != n) throw std::invalid_argument("words have mixed lengths");
}

void check_tuple(const std::vector<Word>& tuple) {
    check_lengths(tuple);
    std::set<Word> distinct(tuple.begin(), tuple.end());
    if (distinct.size() != tuple.size())
        throw std::invalid_argument("tuple elements must be distinct");
}

}  // namespace

// Repeated entries are admitted: the reduction is well defined on them and
// repeats simply yield repeated columns.
TypeTuple type_of_tuple(const std::vector<Word>& tuple) {
    check_lengths(tuple);
    int p = static_cast<int>(tuple.size());
    TypeTuple t;
    if (p == 1) {
        t.columns.assign(1, Word{});
        t.dim = 0;
        return t;
    }
    int n = tuple[0].n();
    // rows of the coordinate matrix, constant rows erased
    std::vector<std::vector<Symbol>> rows;
    for (int i = 0; i < n; ++i) {
        std::vector<Symbol> row(p);
        bool constant = true;
        for (int j = 0; j < p; ++j) {
            row[j] = tuple[j][i];
            constant = constant && row[j] == row[0];
        }
        if (!constant) rows.push_back(std::move(row));
    }
    // shrink consecutive duplicate rows in one left-to-right pass
    std::vector<std::vector<Symbol>> reduced;
    for (auto& row : rows)
        if (reduced.empty() || reduced.back() != row) reduced.push_back(std::move(row));
    t.dim = static_cast<int>(reduced.size());
    t.columns.assign(p, Word{});
    for (int j = 0; j < p; ++j) {
        t.columns[j].letters.reserve(t.dim);
        for (const auto& row : reduced) t.columns[j].letters.push_back(row[j]);
    }
    return t;
}

TypeSet type_of_set(const std::vector<Word>& G) {
    std::vector<Word> sorted(G.begin(), G.end());
    std::sort(sorted.begin(), sorted.end());
    TypeTuple t = type_of_tuple(sorted);
    TypeSet s;
    s.elements = t.columns;
    std::sort(s.elements.begin(), s.elements.end());
    s.dim = t.dim;
    return s;
}

TypeSet type_set_key(const TypeSet& t) {
    TypeSet s = t;
    std::sort(s.elements.begin(), s.elements.end());
    return s;
}

namespace {

// Exact minimum hitting set over nonempty coordinate sets, branch and bound
// on the first uncovered set.
struct HittingSolver {
    const std::vector<std::vector<int>>& sets;
    int best;

    bool covered(const std::vector<int>& s, const std::vector<int>& chosen) const {
        for (int c : chosen)
            for (int e : s)
                if (c == e) return true;
        return false;
    }

    void solve(std::vector<int>& chosen) {
        if (static_cast<int>(chosen.size()) >= best) return;
        const std::vector<int>* target = nullptr;
        for (const auto& s : sets)
            if (!covered(s, chosen)) { target = &s; break; }
        if (!target) {
            best = static_cast<int>(chosen.size());
            return;
        }
        for (int e : *target) {
            chosen.push_back(e);
            solve(chosen);
            chosen.pop_back();
        }
    }
};

int min_hitting_set(const std::vector<std::vector<int>>& sets) {
    if (sets.empty()) return 0;
    HittingSolver solver{sets, std::numeric_limits<int>::max()};
    // greedy upper bound: repeatedly take the most frequent element
    {
        std::vector<bool> hit(sets.size(), false);
        int size = 0;
        while (true) {
            std::map<int, int> freq;
            bool any = false;
            for (size_t i = 0; i < sets.size(); ++i)
                if (!hit[i]) {
                    any = true;
                    for (int e : sets[i]) ++freq[e];
                }
            if (!any) break;
            int pick = -1, count = -1;
            for (auto [e, c] : freq)
                if (c > count) { pick = e; count = c; }
            for (size_t i = 0; i < sets.size(); ++i)
                if (!hit[i])
                    for (int e : sets[i])
                        if (e == pick) { hit[i] = true; break; }
            ++size;
        }
        solver.best = size;
    }
    std::vector<int> chosen;
    solver.solve(chosen);
    return solver.best;
}

// Difference coordinates of two words of common length.
std::vector<int> diff_set(const Word& a, const Word& b) {
    std::vector<int> d;
    for (int i = 0; i < a.n(); ++i)
        if (a[i] != b[i]) d.push_back(i);
    return d;
}

// Min window size separating `w` from every word in `prior`.
int separation_cost(const Word& w, const std::vector<const Word*>& prior) {
    std::vector<std::vector<int>> sets;
    sets.reserve(prior.size());
    for (const Word* q : prior) sets.push_back(diff_set(w, *q));
    return min_hitting_set(sets);
}

}  // namespace

std::vector<int> separation_costs_tuple(const std::vector<Word>& tuple) {
    check_tuple(tuple);
    std::vector<int> costs;
    std::vector<const Word*> prior;
    for (const Word& w : tuple) {
        costs.push_back(prior.empty() ? 0 : separation_cost(w, prior));
        prior.push_back(&w);
    }
    return costs;
}

SeparationIndex separation_index_tuple(const std::vector<Word>& tuple) {
    int value = 1;
    for (int c : separation_costs_tuple(tuple)) value = std::max(value, c);
    return SeparationIndex{value, std::nullopt, true};
}

SeparationIndex separation_index_set(const std::vector<Word>& G, int exact_cap) {
    check_tuple(G);
    int p = static_cast<int>(G.size());
    if (p > exact_cap) {
        // greedy ordering: always append the element cheapest to separate
        std::vector<int> order;
        std::vector<bool> used(p, false);
        std::vector<const Word*> prior;
        int value = 1;
        for (int step = 0; step < p; ++step) {
            int pick = -1, pick_cost = std::numeric_limits<int>::max();
            for (int j = 0; j < p; ++j) {
                if (used[j]) continue;
                int c = prior.empty() ? 0 : separation_cost(G[j], prior);
                if (c < pick_cost) { pick = j; pick_cost = c; }
            }
            used[pick] = true;
            order.push_back(pick);
            prior.push_back(&G[pick]);
            value = std::max(value, std::max(1, pick_cost));
        }
        return SeparationIndex{value, order, false};
    }
    // Subset DP: the cost of a prefix depends only on its element set, so
    // f(S) = min over last elements e of max(f(S \ {e}), cost(e, S \ {e})).
    int full = (1 << p) - 1;
    std::vector<int> f(full + 1, std::numeric_limits<int>::max());
    std::vector<int> parent(full + 1, -1);  // last element of an optimal ordering
    for (int j = 0; j < p; ++j) {
        f[1 << j] = 0;
        parent[1 << j] = j;
    }
    for (int S = 1; S <= full; ++S) {
        if (__builtin_popcount(S) < 2) continue;
        for (int e = 0; e < p; ++e) {
            if (!(S >> e & 1)) continue;
            int rest = S ^ (1 << e);
            if (f[rest] == std::numeric_limits<int>::max()) continue;
            std::vector<const Word*> prior;
            for (int q = 0; q < p; ++q)
                if (rest >> q & 1) prior.push_back(&G[q]);
            int cost = std::max(f[rest], separation_cost(G[e], prior));
            if (cost < f[S]) {
                f[S] = cost;
                parent[S] = e;
            }
        }
    }
    std::vector<int> order;
    for (int S = full; S; ) {
        int e = parent[S];
        order.push_back(e);
        S ^= 1 << e;
    }
    std::reverse(order.begin(), order.end());
    return SeparationIndex{std::max(1, f[full]), order, true};
}

namespace {

// The tuple criterion in its given order: each element must differ from all
// its predecessors at one shared coordinate.
bool tuple_one_separated(const std::vector<Word>& words) {
    int p = static_cast<int>(words.size());
    for (int j = 1; j < p; ++j) {
        bool ok = false;
        for (int i = 0; i < words[j].n() && !ok; ++i) {
            ok = true;
            for (int q = 0; q < j && ok; ++q) ok = words[j][i] != words[q][i];
        }
        if (!ok) return false;
    }
    return true;
}

}  // namespace

McSepResult mc_one_separated_rate(int k, int n, int p, long long samples,
                                  std::uint64_t seed) {
    if (p < 1) throw std::invalid_argument("p must be positive");
    double count = std::pow(static_cast<double>(k), n);
    if (static_cast<double>(p) > count)
        throw std::invalid_argument("p exceeds the cube size");
    if (samples < 1) throw std::invalid_argument("samples must be positive");
    McSepResult r;
    r.samples = samples;
    r.bound = 1.0 - p * std::exp(-n * std::pow((k - 1.0) / k, p));
    if (p == 1) {
        r.one_separated = samples;
        r.empirical_rate = 1.0;
        return r;
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> letter(0, k - 1);
    for (long long s = 0; s < samples; ++s) {
        std::vector<Word> tuple(p);
        for (Word& w : tuple) {
            w.letters.resize(n);
            for (Symbol& l : w.letters) l = letter(rng);
        }
        std::set<Word> distinct(tuple.begin(), tuple.end());
        if (distinct.size() != tuple.size()) {
            ++r.duplicates;
            continue;
        }
        if (tuple_one_separated(tuple)) ++r.one_separated;
    }
    r.empirical_rate = static_cast<double>(r.one_separated) / samples;
    return r;
}

}  // namespace cubestruct
