#include "cubestruct/dhjlab.hpp"

#include <algorithm>
#include <stdexcept>

namespace cubestruct {

namespace {

long long ipow_ll(int base, int exp) {
    long long r = 1;
    for (int i = 0; i < exp; ++i) {
        if (r > (1LL << 56)) throw std::invalid_argument("cube too large");
        r *= base;
    }
    return r;
}

void check_dense_set(const DenseSet& D) {
    if (!D.alphabet) throw std::invalid_argument("null alphabet");
    if (D.n < 0) throw std::invalid_argument("negative length");
    int k = D.alphabet->k();
    for (const Word& w : D.members) {
        if (w.n() != D.n) throw std::invalid_argument("member of wrong length");
        for (Symbol s : w.letters)
            if (s < 0 || s >= k) throw std::invalid_argument("symbol out of range");
    }
}

}  // namespace

Rational DenseSet::density() const {
    if (!alphabet) throw std::invalid_argument("null alphabet");
    return Rational(static_cast<long long>(members.size()),
                    ipow_ll(alphabet->k(), n));
}

DenseSet make_dense_set(AlphabetPtr alphabet, int n, std::set<Word> members) {
    DenseSet D{std::move(alphabet), n, std::move(members)};
    check_dense_set(D);
    return D;
}

std::optional<VariableWord> find_line_in_set(const DenseSet& D) {
    check_dense_set(D);
    if (D.n < 1) return std::nullopt;
    std::optional<VariableWord> hit;
    enumerate_variable_words(D.alphabet, D.n, 1, [&](const VariableWord& v) {
        for (const Word& w : line_of(v))
            if (!D.members.count(w)) return true;
        hit = v;
        return false;
    });
    return hit;
}

namespace {

// Depth-first over word ranks in order; a line can only be completed by its
// last included point, so the inclusion check keeps the set line-free.
struct LinefreeSearch {
    long long total;
    std::vector<std::vector<int>> lines_at;   // line indices through each rank
    std::vector<std::vector<long long>> line; // ranks of each line's points
    std::vector<char> in;
    std::vector<char> best_in;
    long long best = -1;
    long long nodes = 0;
    long long budget;
    bool exact = true;

    bool completes_line(long long r) const {
        for (int L : lines_at[r]) {
            bool full = true;
            for (long long q : line[L])
                if (q != r && !in[q]) { full = false; break; }
            if (full) return true;
        }
        return false;
    }

    void dfs(long long pos, long long count) {
        if (++nodes > budget) { exact = false; return; }
        if (count + (total - pos) <= best) return;
        if (pos == total) {
            best = count;
            best_in = in;
            return;
        }
        if (!completes_line(pos)) {
            in[pos] = 1;
            dfs(pos + 1, count + 1);
            in[pos] = 0;
        }
        dfs(pos + 1, count);
    }
};

}  // namespace

LinefreeResult max_linefree_density(int k, int n, long long node_budget) {
    if (k < 2) throw std::invalid_argument("alphabet must have at least 2 symbols");
    if (n < 1) throw std::invalid_argument("length must be positive");
    long long total = ipow_ll(k, n);
    AlphabetPtr A = Alphabet::integers(k);
    LinefreeSearch search;
    search.total = total;
    search.budget = node_budget;
    search.lines_at.resize(total);
    search.in.assign(total, 0);
    enumerate_variable_words(A, n, 1, [&](const VariableWord& v) {
        std::vector<long long> ranks;
        for (const Word& w : line_of(v)) ranks.push_back(word_rank(w, k));
        int L = static_cast<int>(search.line.size());
        for (long long r : ranks) search.lines_at[r].push_back(L);
        search.line.push_back(std::move(ranks));
        return true;
    });
    search.dfs(0, 0);
    if (search.best < 0) {  // budget spent before any leaf
        search.best = 0;
        search.best_in.assign(total, 0);
    }
    LinefreeResult out;
    out.density = Rational(search.best, total);
    out.exact = search.exact;
    for (long long r = 0; r < total; ++r)
        if (search.best_in[r]) out.witness.push_back(word_unrank(r, k, n));
    return out;
}

SectionsResult dense_sections_search(const DenseSet& D, int m, const Rational& eta) {
    check_dense_set(D);
    if (m < 1) throw std::invalid_argument("dimension must be positive");
    if (m > D.n - 1) throw std::invalid_argument("dimension must be below the length");
    if (eta < 0) throw std::invalid_argument("eta must be nonnegative");
    int k = D.alphabet->k();
    SectionsResult out;
    out.threshold = D.density() - eta;
    out.best_worst_section = -1;
    // n * eta >= k^m * m guarantees a hit
    out.threshold_guaranteed = Rational(D.n) * eta >= Rational(ipow_ll(k, m)) * m;
    for (int ell = m; ell < D.n && !out.found; ++ell) {
        long long tail = ipow_ll(k, D.n - ell);
        enumerate_subspaces(D.alphabet, ell, m, [&](const CombinatorialSpace& V) {
            std::vector<Rational> densities;
            Rational worst = 1;
            for (const Word& t : V.points()) {
                // members with prefix t form a contiguous range of the set
                Word lo = t, hi = t;
                for (int i = ell; i < D.n; ++i) {
                    lo.letters.push_back(0);
                    hi.letters.push_back(k - 1);
                }
                long long count = std::distance(D.members.lower_bound(lo),
                                                D.members.upper_bound(hi));
                Rational dens(count, tail);
                worst = std::min(worst, dens);
                densities.push_back(std::move(dens));
            }
            if (worst > out.best_worst_section) {
                out.best_worst_section = worst;
                out.ell = ell;
                out.V = V;
                out.section_densities = densities;
            }
            if (worst >= out.threshold) {
                out.found = true;
                out.ell = ell;
                out.V = V;
                out.section_densities = std::move(densities);
                return false;
            }
            return true;
        });
    }
    return out;
}

IncrementResult density_increment_step(const IncrementInput& in) {
    long long T = in.index_count;
    long long tail = in.tail_count;
    if (T < 1 || tail < 1) throw std::invalid_argument("empty product space");
    if (in.k < 1) throw std::invalid_argument("k must be positive");
    if (in.epsilon <= 0 || in.epsilon >= 1)
        throw std::invalid_argument("epsilon must lie in (0,1)");
    if (in.sigma <= 0) throw std::invalid_argument("sigma must be positive");
    if (static_cast<long long>(in.S.size()) != T ||
        static_cast<long long>(in.D.size()) != T)
        throw std::invalid_argument("section lists must match the index count");
    for (long long t = 0; t < T; ++t)
        for (const auto* sec : {&in.S[t], &in.D[t]})
            for (long long s : *sec)
                if (s < 0 || s >= tail)
                    throw std::invalid_argument("tail point out of range");

    unsigned k = static_cast<unsigned>(in.k);
    IncrementResult out;
    long long mass_S = 0, mass_DS = 0;
    std::vector<long long> col_S(tail, 0), col_DS(tail, 0);
    for (long long t = 0; t < T; ++t) {
        mass_S += static_cast<long long>(in.S[t].size());
        for (long long s : in.S[t]) {
            ++col_S[s];
            if (in.D[t].count(s)) {
                ++mass_DS;
                ++col_DS[s];
            }
        }
    }
    out.p3_S = Rational(mass_S, T) / tail;
    Rational s_floor = pow_rat(in.epsilon, k) / (4 * (in.k + 1));
    if (out.p3_S < s_floor)
        throw std::invalid_argument(
            "entry bound P(S) >= eps^k/(4(k+1)) fails: " + rat_str(out.p3_S) +
            " < " + rat_str(s_floor));
    out.p3_D_given_S = Rational(mass_DS, mass_S);
    Rational d_floor = in.epsilon + in.sigma / pow_rat(4, k);
    if (out.p3_D_given_S < d_floor)
        throw std::invalid_argument(
            "entry bound P(D|S) >= eps + sigma/4^k fails: " +
            rat_str(out.p3_D_given_S) + " < " + rat_str(d_floor));

    out.b_threshold = pow_rat(in.epsilon, k) * in.sigma / (2 * (in.k + 1) * pow_rat(4, k + 1));
    out.lower = in.epsilon + in.sigma / (2 * pow_rat(4, k));
    long long good_S = 0, good_DS = 0;
    std::vector<char> in_B(tail, 0);
    for (long long s = 0; s < tail; ++s) {
        if (Rational(col_S[s], T) <= out.b_threshold) {
            in_B[s] = 1;
            ++out.b_size;
        } else {
            good_S += col_S[s];
            good_DS += col_DS[s];
        }
    }
    // first moment: the column-mass-weighted average over s outside B is
    // exactly P(D | S minus the thin columns), which clears the bound
    if (good_S == 0 || Rational(good_DS, good_S) < out.lower)
        throw std::logic_error("first-moment average fell below the bound");
    for (long long s = 0; s < tail; ++s) {
        if (in_B[s] || col_S[s] == 0) continue;
        Rational cond(col_DS[s], col_S[s]);
        if (cond >= out.lower) {
            out.s = s;
            out.conditional = std::move(cond);
            return out;
        }
    }
    throw std::logic_error("no qualifying column despite the first moment");
}

TilingResult greedy_tiling(const DenseSet& S, int m) {
    check_dense_set(S);
    if (m < 1 || m > S.n) throw std::invalid_argument("bad piece dimension");
    TilingResult out;
    std::set<Word> used;
    enumerate_subspaces(S.alphabet, S.n, m, [&](const CombinatorialSpace& V) {
        std::vector<Word> pts = V.points();
        for (const Word& w : pts)
            if (!S.members.count(w) || used.count(w)) return true;
        used.insert(pts.begin(), pts.end());
        out.covered += static_cast<long long>(pts.size());
        out.pieces.push_back(V);
        return true;
    });
    out.leftover = static_cast<long long>(S.members.size()) - out.covered;
    return out;
}

}  // namespace cubestruct
