#include "cubestruct/hypercube.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace cubestruct {

Alphabet::Alphabet(std::vector<std::string> syms) : symbols(std::move(syms)) {
    if (symbols.size() < 2) throw std::invalid_argument("alphabet needs at least 2 symbols");
    std::unordered_set<std::string> seen;
    for (const auto& s : symbols)
        if (!seen.insert(s).second)
            throw std::invalid_argument("duplicate alphabet symbol: '" + s + "'");
}

Symbol Alphabet::index_of(const std::string& token) const {
    for (int i = 0; i < k(); ++i)
        if (symbols[i] == token) return i;
    throw std::invalid_argument("symbol '" + token + "' not in alphabet");
}

std::shared_ptr<const Alphabet> Alphabet::integers(int k) {
    std::vector<std::string> syms;
    for (int i = 1; i <= k; ++i) syms.push_back(std::to_string(i));
    return std::make_shared<const Alphabet>(std::move(syms));
}

bool Word::contains(Symbol s) const {
    return std::find(letters.begin(), letters.end(), s) != letters.end();
}

Word Word::concat(const Word& tail) const {
    Word r = *this;
    r.letters.insert(r.letters.end(), tail.letters.begin(), tail.letters.end());
    return r;
}

long long word_rank(const Word& w, int k) {
    long long r = 0;
    for (Symbol s : w.letters) r = r * k + s;
    return r;
}

Word word_unrank(long long rank, int k, int n) {
    Word w;
    w.letters.assign(n, 0);
    for (int i = n - 1; i >= 0; --i) {
        w.letters[i] = static_cast<Symbol>(rank % k);
        rank /= k;
    }
    return w;
}

namespace {

bool valid_variable_word(const std::vector<int>& entries, int k, int m) {
    // The subsequence of variable occurrences must be nondecreasing and
    // cover x_1..x_m (this encodes both conditions of the definition).
    int last = -1;
    std::vector<bool> seen(m, false);
    for (int e : entries) {
        if (e < k) continue;
        int v = e - k;
        if (v >= m) return false;
        if (v < last) return false;
        // block ordering forces first occurrences in the order x_1, x_2, ...
        if (v > last + 1) return false;
        seen[v] = true;
        last = std::max(last, v);
    }
    for (int i = 0; i < m; ++i)
        if (!seen[i]) return false;
    return true;
}

}  // namespace

VariableWord::VariableWord(AlphabetPtr a, std::vector<int> es)
    : alphabet(std::move(a)), entries(std::move(es)) {
    int kk = alphabet->k();
    int maxvar = -1;
    for (int e : entries) {
        if (e < 0) throw std::invalid_argument("negative variable-word entry");
        if (e >= kk) maxvar = std::max(maxvar, e - kk);
    }
    m = maxvar + 1;
    if (m < 1) throw std::invalid_argument("variable word must contain a variable");
    if (!valid_variable_word(entries, kk, m))
        throw std::invalid_argument("variable occurrences violate block ordering");
}

std::vector<Word> CombinatorialSpace::points() const {
    std::vector<Word> pts;
    int k = generator.k(), m = generator.m;
    long long count = 1;
    for (int i = 0; i < m; ++i) count *= k;
    pts.reserve(count);
    for (long long r = 0; r < count; ++r)
        pts.push_back(substitute(generator, word_unrank(r, k, m)));
    return pts;
}

Word substitute(const VariableWord& v, const std::vector<Symbol>& letters) {
    if (static_cast<int>(letters.size()) != v.m)
        throw std::invalid_argument("substitute: expected " + std::to_string(v.m) +
                                    " letters, got " + std::to_string(letters.size()));
    int k = v.k();
    for (Symbol s : letters)
        if (s < 0 || s >= k)
            throw std::invalid_argument("substitute: symbol index out of alphabet range");
    Word w;
    w.letters.reserve(v.n());
    for (int i = 0; i < v.n(); ++i)
        w.letters.push_back(v.is_variable(i) ? letters[v.variable_at(i)] : v.entries[i]);
    return w;
}

Word substitute(const VariableWord& v, const Word& letters) {
    return substitute(v, letters.letters);
}

std::vector<Word> line_of(const VariableWord& v) {
    if (v.m != 1) throw std::invalid_argument("line_of: variable word must have m = 1");
    std::vector<Word> line;
    for (Symbol a = 0; a < v.k(); ++a) line.push_back(substitute(v, {a}));
    return line;
}

Word canonical_iso(const CombinatorialSpace& V, const Word& s) {
    if (s.n() != V.dim())
        throw std::invalid_argument("canonical_iso: word length must equal dim(V)");
    return substitute(V.generator, s);
}

std::optional<Word> try_canonical_iso_inverse(const CombinatorialSpace& V, const Word& t) {
    const VariableWord& v = V.generator;
    if (t.n() != v.n()) return std::nullopt;
    std::vector<Symbol> letters(v.m, -1);
    for (int i = 0; i < v.n(); ++i) {
        if (v.is_variable(i)) {
            int x = v.variable_at(i);
            if (letters[x] == -1) letters[x] = t[i];
            else if (letters[x] != t[i]) return std::nullopt;
        } else if (v.entries[i] != t[i]) {
            return std::nullopt;
        }
    }
    return Word(std::move(letters));
}

Word canonical_iso_inverse(const CombinatorialSpace& V, const Word& t) {
    auto r = try_canonical_iso_inverse(V, t);
    if (!r) throw std::invalid_argument("canonical_iso_inverse: word is not a point of V");
    return *r;
}

Word project(const Word& t, Symbol beta, Symbol alpha) {
    if (alpha == beta) throw std::invalid_argument("project: alpha and beta must differ");
    Word r = t;
    for (Symbol& s : r.letters)
        if (s == beta) s = alpha;
    return r;
}

bool equivalent(const Word& s, const Word& t, Symbol alpha, Symbol beta,
                const std::optional<std::set<int>>& I) {
    if (s.n() != t.n()) throw std::invalid_argument("equivalent: length mismatch");
    if (alpha == beta) throw std::invalid_argument("equivalent: alpha and beta must differ");
    for (int i = 0; i < s.n(); ++i) {
        bool s_in = (s[i] == alpha || s[i] == beta);
        bool t_in = (t[i] == alpha || t[i] == beta);
        if (s_in != t_in) return false;
        if (!s_in && s[i] != t[i]) return false;
        if (I && !I->count(i) && s[i] != t[i]) return false;
    }
    return true;
}

std::vector<Word> shelah_line(const AlphabetPtr& alphabet, int n, Symbol alpha, Symbol beta) {
    if (alpha == beta) throw std::invalid_argument("shelah_line: alpha and beta must differ");
    if (n < 1) throw std::invalid_argument("shelah_line: n must be positive");
    (void)alphabet->token(alpha);
    (void)alphabet->token(beta);
    std::vector<Word> words;
    for (int m = 0; m <= n; ++m) {
        Word w;
        w.letters.assign(n - m, alpha);
        w.letters.insert(w.letters.end(), m, beta);
        words.push_back(std::move(w));
    }
    return words;
}

void enumerate_variable_words(const AlphabetPtr& alphabet, int n, int m,
                              const std::function<bool(const VariableWord&)>& yield) {
    int k = alphabet->k();
    if (m > n) throw std::invalid_argument("enumerate: m > n");
    std::vector<int> entries(n, 0);
    int radix = k + m;
    while (true) {
        if (valid_variable_word(entries, k, m) &&
            !yield(VariableWord(alphabet, entries)))
            return;
        int i = n - 1;
        while (i >= 0 && entries[i] == radix - 1) entries[i--] = 0;
        if (i < 0) break;
        ++entries[i];
    }
}

void enumerate_subspaces(const AlphabetPtr& alphabet, int n, int m,
                         const std::function<bool(const CombinatorialSpace&)>& yield) {
    enumerate_variable_words(alphabet, n, m, [&](const VariableWord& v) {
        return yield(CombinatorialSpace(v));
    });
}

std::vector<CombinatorialSpace> all_subspaces(const AlphabetPtr& alphabet, int n, int m) {
    std::vector<CombinatorialSpace> out;
    enumerate_subspaces(alphabet, n, m, [&](const CombinatorialSpace& V) {
        out.push_back(V);
        return true;
    });
    return out;
}

std::vector<VariableWord> all_variable_words(const AlphabetPtr& alphabet, int n, int m) {
    std::vector<VariableWord> out;
    enumerate_variable_words(alphabet, n, m, [&](const VariableWord& v) {
        out.push_back(v);
        return true;
    });
    return out;
}

std::vector<Word> all_words(int k, int n) {
    long long count = 1;
    for (int i = 0; i < n; ++i) count *= k;
    std::vector<Word> out;
    out.reserve(count);
    for (long long r = 0; r < count; ++r) out.push_back(word_unrank(r, k, n));
    return out;
}

std::string word_str(const Alphabet& a, const Word& w) {
    std::string s = "(";
    for (int i = 0; i < w.n(); ++i) {
        if (i) s += ",";
        s += a.token(w[i]);
    }
    return s + ")";
}

std::string variable_word_str(const VariableWord& v) {
    std::string s = "(";
    for (int i = 0; i < v.n(); ++i) {
        if (i) s += ",";
        if (v.is_variable(i)) s += "x" + std::to_string(v.variable_at(i) + 1);
        else s += v.alphabet->token(v.entries[i]);
    }
    return s + ")";
}

}  // namespace cubestruct
