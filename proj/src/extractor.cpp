#include "cubestruct/extractor.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <stdexcept>

namespace cubestruct {

namespace {

Event universe_event(const CubeProcess& proc) {
    if (proc.product) return formula_event(proc.product, proc.product->f_true());
    return mask_event(proc.events[0].space,
                      std::vector<bool>(proc.events[0].space->atom_count(), true));
}

std::string wstr(const CubeProcess& proc, const Word& w) {
    return word_str(*proc.alphabet, w);
}

void check_symbol(const CubeProcess& proc, Symbol a) {
    if (a < 0 || a >= proc.k())
        throw std::invalid_argument("symbol index outside the alphabet");
}

/// q-subsets of {0..n-1} as increasing index vectors, lexicographically.
void for_each_combination(int n, int q,
                          const std::function<bool(const std::vector<int>&)>& f) {
    if (q < 1 || q > n) return;
    std::vector<int> idx(q);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        if (!f(idx)) return;
        int i = q - 1;
        while (i >= 0 && idx[i] == n - q + i) --i;
        if (i < 0) return;
        ++idx[i];
        for (int j = i + 1; j < q; ++j) idx[j] = idx[j - 1] + 1;
    }
}

Rational report_deviation(const ClassificationReport& r) {
    Rational hi = r.max_corr - r.expected;
    if (hi < 0) hi = -hi;
    Rational lo = r.expected - r.min_corr;
    if (lo < 0) lo = -lo;
    return std::max(hi, lo);
}

void check_marginals(const CubeProcess& proc, const AnalysisParams& params) {
    for (const Word& t : all_words(proc.k(), proc.n)) {
        Rational d = prob(proc.at(t)) - params.epsilon;
        if (d < 0) d = -d;
        if (d > params.eta)
            throw std::invalid_argument("marginal at " + wstr(proc, t) +
                                        " deviates from epsilon by " + rat_str(d));
    }
}

/// Self check: the maps must reproduce the tuple's types on
/// every index subset, with and without the distinguished element.
void verify_type_equalities(const std::function<Word(int, const Word&)>& T,
                            const std::vector<Word>& tuple,
                            const CombinatorialSpace& V, int p) {
    std::vector<Word> pts;
    long long total = 1;
    bool exhaustive = true;
    for (int i = 0; i < V.dim() && exhaustive; ++i) {
        total *= V.generator.k();
        exhaustive = total <= 81;
    }
    if (exhaustive) {
        pts = V.points();
    } else {
        std::mt19937_64 rng(1789);
        std::uniform_int_distribution<int> letter(0, V.generator.k() - 1);
        for (int s = 0; s < 1000; ++s) {
            std::vector<Symbol> ls(V.dim());
            for (Symbol& l : ls) l = letter(rng);
            pts.push_back(substitute(V.generator, ls));
        }
    }
    auto check = [](const std::vector<Word>& a, const std::vector<Word>& b) {
        try {
            return type_of_tuple(a) == type_of_tuple(b);
        } catch (const std::invalid_argument&) {
            return false;
        }
    };
    for (const Word& t : pts) {
        for (int mask = 1; mask < (1 << p); ++mask) {
            std::vector<Word> mapped, original;
            for (int i = 0; i < p; ++i)
                if (mask >> i & 1) {
                    mapped.push_back(T(i, t));
                    original.push_back(tuple[i]);
                }
            if (!check(mapped, original))
                throw std::logic_error("map family fails the t-free type equality");
            mapped.push_back(t);
            original.push_back(tuple[p]);
            if (!check(mapped, original))
                throw std::logic_error("map family fails the type equality");
        }
    }
}

CubeProcess negate_process(const CubeProcess& proc) {
    std::vector<Event> events;
    events.reserve(proc.events.size());
    for (const Event& e : proc.events) events.push_back(event_not(e));
    return make_process(proc.alphabet, proc.n, proc.product, std::move(events));
}

}  // namespace

std::map<Symbol, CubeProcess> build_insensitive_family(const CubeProcess& proc,
                                                       const std::set<Symbol>& gamma,
                                                       Symbol beta) {
    check_symbol(proc, beta);
    if (gamma.count(beta))
        throw std::invalid_argument("beta must lie outside gamma");
    std::map<Symbol, CubeProcess> out;
    for (Symbol a : gamma) {
        check_symbol(proc, a);
        std::vector<Event> events;
        for (const Word& t : all_words(proc.k(), proc.n))
            events.push_back(proc.at(project(t, beta, a)));
        out.emplace(a, make_process(proc.alphabet, proc.n, proc.product,
                                    std::move(events)));
    }
    return out;
}

LineExtractResult extract_line_witness(const CubeProcess& proc,
                                       const AnalysisParams& params,
                                       const ExtractOptions& opts) {
    params.validate();
    int k = proc.k();
    if (params.kappa != k)
        throw std::invalid_argument("line extraction requires kappa = |A|");
    if (!opts.relax_dimension && proc.n < k)
        throw std::invalid_argument("line extraction requires n >= |A|");
    LineExtractResult res;
    res.schedule = make_theta_schedule(params);
    if (!opts.relax_hypotheses) {
        check_marginals(proc, params);
        LineModulusResult mod = stationarity_modulus_lines(proc);
        if (mod.eta_star > params.eta)
            throw std::invalid_argument("process is not eta-stationary: eta_star = " +
                                        rat_str(mod.eta_star));
    }
    std::vector<GammaReport> reports;
    std::optional<std::set<Symbol>> gamma0;
    for (int q = 1; q <= k && !gamma0; ++q) {
        for_each_combination(k, q, [&](const std::vector<int>& idx) {
            std::set<Symbol> g(idx.begin(), idx.end());
            reports.push_back(
                {g, classify_gamma(proc, g, res.schedule.at(q), params.epsilon)});
            if (reports.back().report.label != Label::Pseudorandom) {
                gamma0 = g;
                return false;
            }
            return true;
        });
    }
    if (!gamma0) {
        PseudorandomCertificate c;
        c.worst_deviation = 0;
        for (const GammaReport& r : reports)
            c.worst_deviation = std::max(c.worst_deviation, report_deviation(r.report));
        c.gamma_reports = std::move(reports);
        res.certificate = std::move(c);
        return res;
    }

    LineWitness w;
    w.gamma0 = *gamma0;
    w.beta = *w.gamma0.rbegin();
    w.gamma = w.gamma0;
    w.gamma.erase(w.beta);
    int p = static_cast<int>(w.gamma.size());
    w.theta = res.schedule.at(p);
    w.Theta = res.schedule.at(p + 1);
    w.branch = classify_gamma(proc, w.gamma0, w.Theta, params.epsilon).label;
    if (w.branch == Label::Mixed)
        throw std::runtime_error(
            "mixed correlation at the branch point; the stationarity hypothesis fails");
    if (w.branch == Label::Subcorrelated && p == 0)
        throw std::runtime_error(
            "subcorrelated singleton; the marginal hypothesis fails");

    std::set<Symbol> family_gamma = w.gamma;
    if (opts.pad_gamma)
        for (Symbol a = 0; a < k; ++a)
            if (a != w.beta) family_gamma.insert(a);
    w.factors = build_insensitive_family(proc, family_gamma, w.beta);
    if (w.branch == Label::Subcorrelated) {
        Symbol gc = *w.gamma.rbegin();
        w.complemented = gc;
        auto it = w.factors.find(gc);
        it->second = negate_process(it->second);
    }
    w.gamma = std::move(family_gamma);

    std::vector<Event> sev;
    for (const Word& t : all_words(k, proc.n)) {
        Event e = universe_event(proc);
        for (const auto& [a, f] : w.factors) e = event_and(e, f.at(t));
        sev.push_back(std::move(e));
    }
    w.S = make_process(proc.alphabet, proc.n, proc.product, std::move(sev));

    w.p_S_lower = pow_rat(params.epsilon, k - 1) / (4 * k);
    w.conditional_lower =
        params.epsilon + params.sigma / pow_rat(Rational(4), k - 1);
    for (const Word& t : all_words(k, proc.n)) {
        IndexStat st;
        st.t = t;
        st.relevant = t.contains(w.beta);
        st.p_S = prob(w.S.at(t));
        if (st.p_S > 0) st.p_D_given_S = conditional(proc.at(t), w.S.at(t));
        if (st.relevant) {
            bool ok = st.p_S >= w.p_S_lower && st.p_D_given_S &&
                      *st.p_D_given_S >= w.conditional_lower;
            if (!ok) {
                if (!opts.relax_hypotheses)
                    throw std::logic_error("extraction bound violated at " +
                                           wstr(proc, t));
                w.bounds_hold = false;
            }
        }
        w.stats.push_back(std::move(st));
    }
    res.witness = std::move(w);
    return res;
}

Word OneSepConstruction::map_point(int j, const Word& t) const {
    if (j < 0 || j >= p) throw std::invalid_argument("map index out of range");
    if (!try_canonical_iso_inverse(V, t))
        throw std::invalid_argument("point lies outside V");
    Word z{std::vector<Symbol>(t.letters.begin() + iota + 1,
                               t.letters.begin() + iota + 1 + (n - d))};
    return x[j].concat(project(z, beta, betas[j])).concat(y[j]);
}

OneSepConstruction one_sep_construction(const AlphabetPtr& alphabet,
                                        const std::vector<Word>& tuple) {
    if (tuple.size() < 2)
        throw std::invalid_argument("need at least two tuple elements");
    std::vector<int> costs = separation_costs_tuple(tuple);
    for (size_t j = 1; j < costs.size(); ++j)
        if (costs[j] > 1)
            throw std::invalid_argument("tuple is not 1-separated at position " +
                                        std::to_string(j + 1));
    int k = alphabet->k();
    for (const Word& w : tuple)
        for (Symbol s : w.letters)
            if (s < 0 || s >= k)
                throw std::invalid_argument("tuple letter outside the alphabet");
    OneSepConstruction c;
    c.alphabet = alphabet;
    c.n = tuple[0].n();
    c.p = static_cast<int>(tuple.size()) - 1;
    c.tau = type_of_tuple(tuple);
    c.d = c.tau.dim;
    if (c.d >= c.n)
        throw std::invalid_argument("type spans the whole cube; no room for V");
    const Word& slast = c.tau.columns[c.p];
    for (int i = 0; i < c.d && c.iota < 0; ++i) {
        bool sep = true;
        for (int j = 0; j < c.p && sep; ++j) sep = c.tau.columns[j][i] != slast[i];
        if (sep) c.iota = i;
    }
    if (c.iota < 0)
        throw std::logic_error("1-separated type lacks a separating coordinate");
    c.beta = slast[c.iota];
    for (int j = 0; j < c.p; ++j) {
        c.betas.push_back(c.tau.columns[j][c.iota]);
        c.gamma.insert(c.betas.back());
    }
    for (int j = 0; j <= c.p; ++j) {
        const Word& s = c.tau.columns[j];
        c.x.push_back(Word{std::vector<Symbol>(s.letters.begin(),
                                               s.letters.begin() + c.iota + 1)});
        c.y.push_back(Word{std::vector<Symbol>(s.letters.begin() + c.iota + 1,
                                               s.letters.end())});
    }
    std::vector<int> entries;
    for (Symbol s : c.x[c.p].letters) entries.push_back(s);
    for (int i = 0; i < c.n - c.d; ++i) entries.push_back(k + i);
    for (Symbol s : c.y[c.p].letters) entries.push_back(s);
    c.V = CombinatorialSpace{VariableWord(alphabet, std::move(entries))};
    verify_type_equalities(
        [&](int j, const Word& t) { return c.map_point(j, t); }, tuple, c.V, c.p);
    return c;
}

Word SimplicialConstruction::map_point(int j, const Word& t) const {
    if (j < 0 || j >= p) throw std::invalid_argument("map index out of range");
    if (!try_canonical_iso_inverse(V, t))
        throw std::invalid_argument("point lies outside V");
    Word out;
    int pos = 0;
    for (int l = 0; l < ell; ++l) {
        out = out.concat(y[j][l]);
        pos += y[j][l].n();
        Word z{std::vector<Symbol>(t.letters.begin() + pos,
                                   t.letters.begin() + pos + r[l])};
        Symbol target = tau.columns[j][J[l]];
        out = out.concat(target == betas[l] ? z : project(z, betas[l], target));
        pos += r[l];
    }
    return out.concat(y[j][ell]).concat(pad);
}

SimplicialConstruction simplicial_construction(const AlphabetPtr& alphabet,
                                               const std::vector<Word>& tuple,
                                               const std::vector<int>& r) {
    if (tuple.size() < 2)
        throw std::invalid_argument("need at least two tuple elements");
    int ell = static_cast<int>(r.size());
    if (ell < 1) throw std::invalid_argument("r must be nonempty");
    for (int rl : r)
        if (rl < 1) throw std::invalid_argument("r entries must be positive");
    if (separation_index_tuple(tuple).value != ell)
        throw std::invalid_argument("tuple separation differs from |r|");
    int k = alphabet->k();
    for (const Word& w : tuple)
        for (Symbol s : w.letters)
            if (s < 0 || s >= k)
                throw std::invalid_argument("tuple letter outside the alphabet");
    SimplicialConstruction c;
    c.alphabet = alphabet;
    c.n = tuple[0].n();
    c.p = static_cast<int>(tuple.size()) - 1;
    c.tau = type_of_tuple(tuple);
    c.d = c.tau.dim;
    c.ell = ell;
    int rtotal = std::accumulate(r.begin(), r.end(), 0);
    if (rtotal > c.n - c.d)
        throw std::invalid_argument("r exceeds the free dimensions");
    const Word& slast = c.tau.columns[c.p];
    for_each_combination(c.d, ell, [&](const std::vector<int>& idx) {
        for (int j = 0; j < c.p; ++j) {
            bool hit = false;
            for (int i : idx) hit = hit || c.tau.columns[j][i] != slast[i];
            if (!hit) return true;
        }
        c.J = idx;
        return false;
    });
    if (c.J.empty())
        throw std::logic_error("separation index admits no coordinate set");
    for (int l = 0; l < ell; ++l) c.betas.push_back(slast[c.J[l]]);
    for (int j = 0; j <= c.p; ++j) {
        const Word& s = c.tau.columns[j];
        std::vector<Word> parts;
        int prev = -1;
        for (int l = 0; l < ell; ++l) {
            parts.push_back(Word{std::vector<Symbol>(s.letters.begin() + prev + 1,
                                                     s.letters.begin() + c.J[l] + 1)});
            prev = c.J[l];
        }
        parts.push_back(Word{std::vector<Symbol>(s.letters.begin() + prev + 1,
                                                 s.letters.end())});
        c.y.push_back(std::move(parts));
    }
    c.r = r;
    c.pad = Word{std::vector<Symbol>(c.n - c.d - rtotal, 0)};
    std::vector<int> entries;
    int var = 0;
    for (int l = 0; l < ell; ++l) {
        for (Symbol s : c.y[c.p][l].letters) entries.push_back(s);
        for (int i = 0; i < r[l]; ++i) entries.push_back(k + var++);
    }
    for (Symbol s : c.y[c.p][ell].letters) entries.push_back(s);
    for (Symbol s : c.pad.letters) entries.push_back(s);
    c.V = CombinatorialSpace{VariableWord(alphabet, std::move(entries))};
    verify_type_equalities(
        [&](int j, const Word& t) { return c.map_point(j, t); }, tuple, c.V, c.p);
    return c;
}

namespace {

struct TypeSearch {
    std::vector<TypeReport> reports;
    std::optional<TypeSet> failing_tau;
    std::vector<Word> G;
};

/// All normal-form types of the given size whose dimension is at most m.
std::vector<TypeSet> normal_form_types(int k, int q, int m, int n_cap) {
    std::vector<TypeSet> out;
    if (q == 1) {
        out.push_back(TypeSet{{Word{}}, 0});
        return out;
    }
    for (int d = 1; d <= std::min(m, n_cap); ++d) {
        std::vector<Word> words = all_words(k, d);
        if (static_cast<int>(words.size()) < q) continue;
        for_each_combination(static_cast<int>(words.size()), q,
                             [&](const std::vector<int>& idx) {
            std::vector<Word> elements;
            for (int i : idx) elements.push_back(words[i]);
            TypeSet ts = type_of_set(elements);
            if (ts.dim == d && ts.elements == elements)
                out.push_back(std::move(ts));
            return true;
        });
    }
    return out;
}

TypeSearch search_types(const CubeProcess& proc, const AnalysisParams& params,
                        const ThetaSchedule& schedule,
                        std::optional<int> required_sep) {
    TypeSearch res;
    for (int q = 1; q <= params.kappa && !res.failing_tau; ++q) {
        std::vector<TypeSet> failing;
        for (TypeSet& tau : normal_form_types(proc.k(), q, params.m, proc.n)) {
            int sep = q == 1 ? 1 : separation_index_set(tau.elements).value;
            if (required_sep && sep != *required_sep) continue;
            res.reports.push_back(
                {tau, classify_type(proc, tau, schedule.at(q), params.epsilon)});
            if (res.reports.back().report.label != Label::Pseudorandom)
                failing.push_back(std::move(tau));
        }
        for (const TypeSet& tau : failing) {
            auto reals = realizations_of_type(proc.alphabet, proc.n, tau);
            auto least = *std::min_element(reals.begin(), reals.end());
            if (!res.failing_tau || least < res.G) {
                res.failing_tau = tau;
                res.G = std::move(least);
            }
        }
    }
    return res;
}

void check_type_hypotheses(const CubeProcess& proc, const AnalysisParams& params) {
    check_marginals(proc, params);
    TypeModulusResult mod =
        stationarity_modulus_types(proc, params.kappa, params.m);
    if (!mod.complete)
        throw std::runtime_error("stationarity sweep exhausted its budget");
    if (mod.eta_star > params.eta)
        throw std::invalid_argument("process is not eta-stationary: eta_star = " +
                                    rat_str(mod.eta_star));
}

PseudorandomCertificate type_certificate(std::vector<TypeReport> reports) {
    PseudorandomCertificate c;
    c.worst_deviation = 0;
    for (const TypeReport& r : reports)
        c.worst_deviation = std::max(c.worst_deviation, report_deviation(r.report));
    c.type_reports = std::move(reports);
    return c;
}

long long ipow(int base, int exp) {
    long long r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

}  // namespace

OneSepExtractResult extract_one_sep_witness(const CubeProcess& proc,
                                            const AnalysisParams& params,
                                            const ExtractOptions& opts) {
    params.validate();
    if (proc.n <= params.m)
        throw std::invalid_argument("extraction requires n > m");
    if (params.kappa > ipow(proc.k(), params.m))
        throw std::invalid_argument("extraction requires kappa <= k^m");
    OneSepExtractResult res;
    res.schedule = make_theta_schedule(params);
    if (!opts.relax_hypotheses) check_type_hypotheses(proc, params);
    TypeSearch search = search_types(proc, params, res.schedule, 1);
    if (!search.failing_tau) {
        res.certificate = type_certificate(std::move(search.reports));
        return res;
    }

    OneSepWitness w;
    w.G = std::move(search.G);
    w.tau = *search.failing_tau;
    SeparationIndex sep = separation_index_set(w.G);
    for (int i : *sep.witness_enumeration) w.enumeration.push_back(w.G[i]);
    int p = static_cast<int>(w.G.size()) - 1;
    if (p == 0)
        throw std::runtime_error(
            "a singleton failed pseudorandomness; the marginal hypothesis fails");
    w.theta = res.schedule.at(p);
    w.Theta = res.schedule.at(p + 1);
    w.branch = classify_type(proc, w.tau, w.Theta, params.epsilon).label;
    if (w.branch == Label::Mixed)
        throw std::runtime_error(
            "mixed correlation at the branch point; the stationarity hypothesis fails");
    w.construction = one_sep_construction(proc.alphabet, w.enumeration);
    w.last_complemented = w.branch == Label::Subcorrelated;

    int dimV = w.construction.n - w.construction.d;
    std::vector<Word> preimages = all_words(proc.k(), dimV);
    for (int j = 0; j < p; ++j) {
        std::vector<Event> ev;
        for (const Word& s : preimages) {
            Word t = canonical_iso(w.construction.V, s);
            Event e = proc.at(w.construction.map_point(j, t));
            if (w.last_complemented && j == p - 1) e = event_not(e);
            ev.push_back(std::move(e));
        }
        w.factors.push_back(
            make_process(proc.alphabet, dimV, proc.product, std::move(ev)));
    }
    std::vector<Event> sev;
    for (size_t i = 0; i < preimages.size(); ++i) {
        Event e = universe_event(proc);
        for (const CubeProcess& f : w.factors) e = event_and(e, f.events[i]);
        sev.push_back(std::move(e));
    }
    w.S = make_process(proc.alphabet, dimV, proc.product, std::move(sev));

    for (int j = 0; j < p; ++j) {
        InsensitivityReport rep = verify_insensitive(
            w.factors[j], w.construction.betas[j], w.construction.beta);
        if (!rep.insensitive)
            throw std::logic_error("constructed factor is not insensitive");
    }

    w.p_S_lower = pow_rat(params.epsilon, params.kappa - 1) / (4 * params.kappa);
    w.conditional_lower =
        params.epsilon + params.sigma / pow_rat(Rational(4), params.kappa - 1);
    for (size_t i = 0; i < preimages.size(); ++i) {
        IndexStat st;
        st.t = canonical_iso(w.construction.V, preimages[i]);
        st.relevant = true;
        st.p_S = prob(w.S.events[i]);
        if (st.p_S > 0)
            st.p_D_given_S = conditional(proc.at(st.t), w.S.events[i]);
        bool ok = st.p_S >= w.p_S_lower && st.p_D_given_S &&
                  *st.p_D_given_S >= w.conditional_lower;
        if (!ok) {
            if (!opts.relax_hypotheses)
                throw std::logic_error("extraction bound violated at " +
                                       wstr(proc, st.t));
            w.bounds_hold = false;
        }
        w.stats.push_back(std::move(st));
    }
    res.witness = std::move(w);
    return res;
}

SimplicialExtractResult extract_simplicial_witness(const CubeProcess& proc,
                                                   const AnalysisParams& params,
                                                   const std::vector<int>& r,
                                                   const ExtractOptions& opts) {
    params.validate();
    int ell = static_cast<int>(r.size());
    if (ell < 1 || ell > params.m)
        throw std::invalid_argument("need 1 <= |r| <= m");
    for (int rl : r)
        if (rl < 1) throw std::invalid_argument("r entries must be positive");
    int rtotal = std::accumulate(r.begin(), r.end(), 0);
    if (rtotal > proc.n - params.m)
        throw std::invalid_argument("sum of r must be at most n - m");
    if (proc.n <= params.m)
        throw std::invalid_argument("extraction requires n > m");
    if (params.kappa > ipow(proc.k(), params.m))
        throw std::invalid_argument("extraction requires kappa <= k^m");
    SimplicialExtractResult res;
    res.schedule = make_theta_schedule(params);
    if (!opts.relax_hypotheses) check_type_hypotheses(proc, params);
    TypeSearch search = search_types(proc, params, res.schedule, ell);
    if (!search.failing_tau) {
        res.certificate = type_certificate(std::move(search.reports));
        return res;
    }

    SimplicialWitness w;
    w.G = std::move(search.G);
    w.tau = *search.failing_tau;
    SeparationIndex sep = separation_index_set(w.G);
    for (int i : *sep.witness_enumeration) w.enumeration.push_back(w.G[i]);
    int p = static_cast<int>(w.G.size()) - 1;
    if (p == 0)
        throw std::runtime_error(
            "a singleton failed pseudorandomness; the marginal hypothesis fails");
    w.theta = res.schedule.at(p);
    w.Theta = res.schedule.at(p + 1);
    w.branch = classify_type(proc, w.tau, w.Theta, params.epsilon).label;
    if (w.branch == Label::Mixed)
        throw std::runtime_error(
            "mixed correlation at the branch point; the stationarity hypothesis fails");
    w.construction = simplicial_construction(proc.alphabet, w.enumeration, r);
    w.last_complemented = w.branch == Label::Subcorrelated;

    std::vector<Word> preimages = all_words(proc.k(), rtotal);
    for (int j = 0; j < p; ++j) {
        std::vector<Event> ev;
        for (const Word& s : preimages) {
            Word t = canonical_iso(w.construction.V, s);
            Event e = proc.at(w.construction.map_point(j, t));
            if (w.last_complemented && j == p - 1) e = event_not(e);
            ev.push_back(std::move(e));
        }
        w.factors.push_back(
            make_process(proc.alphabet, rtotal, proc.product, std::move(ev)));
    }
    std::vector<Event> sev;
    for (size_t i = 0; i < preimages.size(); ++i) {
        Event e = universe_event(proc);
        for (const CubeProcess& f : w.factors) e = event_and(e, f.events[i]);
        sev.push_back(std::move(e));
    }
    w.S = make_process(proc.alphabet, rtotal, proc.product, std::move(sev));

    // the simplicial shape: intervals of the preimage cube and per-block factors
    w.shape.ell = ell;
    w.shape.r = r;
    w.shape.betas = w.construction.betas;
    w.shape.gammas.assign(ell, {});
    int begin = 0;
    for (int l = 0; l < ell; ++l) {
        w.shape.intervals.emplace_back(begin, begin + r[l]);
        begin += r[l];
    }
    for (int j = 0; j < p; ++j) {
        int block = -1;
        Symbol alpha = -1;
        for (int l = 0; l < ell && block < 0; ++l) {
            Symbol s = w.construction.tau.columns[j][w.construction.J[l]];
            if (s != w.construction.betas[l]) {
                block = l;
                alpha = s;
            }
        }
        if (block < 0)
            throw std::logic_error("map coincides with the identity on every block");
        w.factor_blocks.emplace_back(block, alpha);
        w.shape.gammas[block].insert(alpha);
        std::set<int> I;
        for (int i = w.shape.intervals[block].first;
             i < w.shape.intervals[block].second; ++i)
            I.insert(i);
        InsensitivityReport rep = verify_insensitive(
            w.factors[j], alpha, w.construction.betas[block], std::nullopt, I);
        if (!rep.insensitive)
            throw std::logic_error("constructed factor is not locally insensitive");
    }
    // untouched blocks carry the trivial full-space factor
    for (int l = 0; l < ell; ++l)
        if (w.shape.gammas[l].empty())
            w.shape.gammas[l].insert(w.shape.betas[l] == 0 ? 1 : 0);

    w.p_S_lower = pow_rat(params.epsilon, params.kappa - 1) / (4 * params.kappa);
    w.conditional_lower =
        params.epsilon + params.sigma / pow_rat(Rational(4), params.kappa - 1);
    for (size_t i = 0; i < preimages.size(); ++i) {
        IndexStat st;
        st.t = canonical_iso(w.construction.V, preimages[i]);
        st.relevant = true;
        st.p_S = prob(w.S.events[i]);
        if (st.p_S > 0)
            st.p_D_given_S = conditional(proc.at(st.t), w.S.events[i]);
        bool ok = st.p_S >= w.p_S_lower && st.p_D_given_S &&
                  *st.p_D_given_S >= w.conditional_lower;
        if (!ok) {
            if (!opts.relax_hypotheses)
                throw std::logic_error("extraction bound violated at " +
                                       wstr(proc, st.t));
            w.bounds_hold = false;
        }
        w.stats.push_back(std::move(st));
    }
    res.witness = std::move(w);
    return res;
}

InsensitivityReport verify_insensitive(
    const CubeProcess& proc, Symbol alpha, Symbol beta,
    const std::optional<CombinatorialSpace>& V,
    const std::optional<std::set<int>>& I) {
    check_symbol(proc, alpha);
    check_symbol(proc, beta);
    if (alpha == beta) throw std::invalid_argument("alpha must differ from beta");
    int M = V ? V->dim() : proc.n;
    if (V && V->ambient_n() != proc.n)
        throw std::invalid_argument("subspace lives in a different cube");
    if (I) {
        if (I->empty()) throw std::invalid_argument("I must be nonempty");
        for (int i : *I)
            if (i < 0 || i >= M)
                throw std::invalid_argument("I coordinate out of range");
    }
    auto event_at = [&](const Word& s) -> const Event& {
        return V ? proc.at(canonical_iso(*V, s)) : proc.at(s);
    };
    std::map<std::vector<int>, Word> representative;
    for (const Word& s : all_words(proc.k(), M)) {
        std::vector<int> key(M);
        for (int i = 0; i < M; ++i) {
            bool windowed = !I || I->count(i);
            key[i] = windowed && (s[i] == alpha || s[i] == beta) ? -1 : s[i];
        }
        auto [it, fresh] = representative.try_emplace(std::move(key), s);
        if (fresh) continue;
        if (!events_equal(event_at(it->second), event_at(s)))
            return InsensitivityReport{false, std::make_pair(it->second, s)};
    }
    return InsensitivityReport{};
}

}  // namespace cubestruct
