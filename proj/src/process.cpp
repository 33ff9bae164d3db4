#include "cubestruct/process.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace cubestruct {

CubeProcess make_process(AlphabetPtr alphabet, int n, ProductPtr product,
                         std::vector<Event> events) {
    if (n < 1) throw std::invalid_argument("process index length must be positive");
    long long count = 1;
    for (int i = 0; i < n; ++i) count *= alphabet->k();
    if (static_cast<long long>(events.size()) != count)
        throw std::invalid_argument("process must define an event for every index");
    for (const Event& e : events) {
        if (product) {
            if (e.is_mask() || e.product.get() != product.get())
                throw std::invalid_argument("event outside the process's product");
        } else if (!e.is_mask() || e.space.get() != events[0].space.get()) {
            throw std::invalid_argument("mask events must share one atom space");
        }
    }
    return CubeProcess{std::move(alphabet), n, std::move(product), std::move(events)};
}

void AnalysisParams::validate() const {
    if (kappa < 2) throw std::invalid_argument("params: kappa must be at least 2");
    if (m < 1) throw std::invalid_argument("params: m must be positive");
    if (epsilon <= 0 || epsilon > 1)
        throw std::invalid_argument("params: epsilon must lie in (0,1]");
    if (sigma <= 0) throw std::invalid_argument("params: sigma must be positive");
    if (eta < 0) throw std::invalid_argument("params: eta must be nonnegative");
    if (epsilon > 1 - Rational(1, 2 * kappa))
        throw std::invalid_argument("params: epsilon <= 1 - 1/(2 kappa) violated");
    if (sigma > pow_rat(epsilon, kappa - 1) / (2 * kappa))
        throw std::invalid_argument("params: sigma <= epsilon^(kappa-1)/(2 kappa) violated");
    if (eta > sigma / pow_rat(Rational(4), kappa - 1))
        throw std::invalid_argument("params: eta <= sigma/4^(kappa-1) violated");
}

ThetaSchedule make_theta_schedule(const AnalysisParams& params) {
    ThetaSchedule s;
    s.theta.resize(params.kappa + 1);
    s.theta[0] = 0;
    if (params.kappa >= 1) s.theta[1] = params.eta;
    for (int p = 2; p <= params.kappa; ++p)
        s.theta[p] = params.sigma / pow_rat(Rational(4), params.kappa - p);
    return s;
}

std::string label_str(Label l) {
    switch (l) {
        case Label::Pseudorandom: return "pseudorandom";
        case Label::Supercorrelated: return "supercorrelated";
        case Label::Subcorrelated: return "subcorrelated";
        case Label::Mixed: return "mixed";
    }
    return "?";
}

namespace {

Event universe_event(const CubeProcess& proc) {
    if (proc.product) return formula_event(proc.product, proc.product->f_true());
    return mask_event(proc.events[0].space,
                      std::vector<bool>(proc.events[0].space->atom_count(), true));
}

Event joint_event(const CubeProcess& proc, const std::vector<Word>& G) {
    Event e = universe_event(proc);
    for (const Word& t : G) e = event_and(e, proc.at(t));
    return e;
}

void apply_label(ClassificationReport& r) {
    if (r.max_corr - r.expected <= r.theta && r.expected - r.min_corr <= r.theta) {
        r.label = Label::Pseudorandom;
        r.margin = r.theta;
    } else if (r.min_corr >= r.expected) {
        r.label = Label::Supercorrelated;
        r.margin = r.min_corr - r.expected;
    } else if (r.max_corr <= r.expected) {
        r.label = Label::Subcorrelated;
        r.margin = r.expected - r.max_corr;
    } else {
        r.label = Label::Mixed;
        r.margin = 0;
    }
}

}  // namespace

LineModulusResult stationarity_modulus_lines(const CubeProcess& proc,
                                             std::optional<Symbol> filter_constant) {
    int k = proc.k();
    struct Extrema {
        bool seen = false;
        Rational lo, hi;
        VariableWord arglo, arghi;
    };
    std::vector<Extrema> per_gamma(1 << k);
    enumerate_variable_words(proc.alphabet, proc.n, 1, [&](const VariableWord& v) {
        if (filter_constant) {
            bool has = false;
            for (int i = 0; i < v.n(); ++i)
                has = has || (!v.is_variable(i) && v.entries[i] == *filter_constant);
            if (!has) return true;
        }
        for (int gm = 1; gm < (1 << k); ++gm) {
            std::vector<Word> pts;
            for (Symbol a = 0; a < k; ++a)
                if (gm >> a & 1) pts.push_back(substitute(v, {a}));
            Rational p = prob(joint_event(proc, pts));
            Extrema& e = per_gamma[gm];
            if (!e.seen || p < e.lo) { e.lo = p; e.arglo = v; }
            if (!e.seen || p > e.hi) { e.hi = p; e.arghi = v; }
            e.seen = true;
        }
        return true;
    });
    LineModulusResult r;
    r.eta_star = 0;
    for (int gm = 1; gm < (1 << k); ++gm) {
        const Extrema& e = per_gamma[gm];
        if (!e.seen) continue;
        if (e.hi - e.lo > r.eta_star) {
            r.eta_star = e.hi - e.lo;
            r.witness_gamma.clear();
            for (Symbol a = 0; a < k; ++a)
                if (gm >> a & 1) r.witness_gamma.insert(a);
            r.witness_v1 = e.arghi;
            r.witness_v2 = e.arglo;
        }
    }
    return r;
}

TypeModulusResult stationarity_modulus_types(const CubeProcess& proc, int kappa,
                                             int m, long long budget) {
    long long total = 1;
    for (int i = 0; i < proc.n; ++i) total *= proc.k();
    std::vector<Word> words = all_words(proc.k(), proc.n);
    struct Extrema {
        bool seen = false;
        Rational lo, hi;
        std::vector<Word> arglo, arghi;
    };
    std::map<TypeSet, Extrema> groups;
    TypeModulusResult r;
    r.eta_star = 0;
    long long used = 0;
    std::vector<int> pick;
    auto consider = [&](const std::vector<int>& idx) {
        std::vector<Word> G;
        for (int i : idx) G.push_back(words[i]);
        TypeSet tau = type_of_set(G);
        if (tau.dim > m) return;
        Extrema& e = groups[tau];
        Rational p = prob(joint_event(proc, G));
        if (!e.seen || p < e.lo) { e.lo = p; e.arglo = G; }
        if (!e.seen || p > e.hi) { e.hi = p; e.arghi = G; }
        e.seen = true;
    };
    // subsets of size 1..kappa in lexicographic index order
    auto rec = [&](auto&& self, int start, int remaining) -> bool {
        if (!pick.empty()) {
            if (++used > budget) return false;
            consider(pick);
        }
        if (remaining == 0) return true;
        for (int i = start; i < static_cast<int>(words.size()); ++i) {
            pick.push_back(i);
            bool ok = self(self, i + 1, remaining - 1);
            pick.pop_back();
            if (!ok) return false;
        }
        return true;
    };
    r.complete = rec(rec, 0, std::min<long long>(kappa, total));
    for (auto& [tau, e] : groups) {
        if (e.hi - e.lo > r.eta_star) {
            r.eta_star = e.hi - e.lo;
            r.witness_g1 = e.arghi;
            r.witness_g2 = e.arglo;
        }
    }
    return r;
}

ClassificationReport classify_gamma(const CubeProcess& proc,
                                    const std::set<Symbol>& gamma,
                                    const Rational& theta, const Rational& epsilon) {
    if (gamma.empty()) throw std::invalid_argument("gamma must be nonempty");
    for (Symbol a : gamma)
        if (a < 0 || a >= proc.k())
            throw std::invalid_argument("gamma contains a foreign symbol");
    ClassificationReport r;
    r.theta = theta;
    r.expected = pow_rat(epsilon, static_cast<unsigned>(gamma.size()));
    bool seen = false;
    enumerate_variable_words(proc.alphabet, proc.n, 1, [&](const VariableWord& v) {
        std::vector<Word> pts;
        for (Symbol a : gamma) pts.push_back(substitute(v, {a}));
        Rational p = prob(joint_event(proc, pts));
        if (!seen || p < r.min_corr) { r.min_corr = p; r.min_witness = pts; }
        if (!seen || p > r.max_corr) { r.max_corr = p; r.max_witness = pts; }
        seen = true;
        return true;
    });
    if (!seen) throw std::invalid_argument("no variable words at this length");
    apply_label(r);
    return r;
}

std::vector<std::vector<Word>> realizations_of_type(const AlphabetPtr& alphabet,
                                                    int n, const TypeSet& tau) {
    if (type_of_set(tau.elements) != type_set_key(tau))
        throw std::invalid_argument("type is not in normal form");
    std::vector<std::vector<Word>> out;
    if (tau.dim == 0) {
        for (const Word& t : all_words(alphabet->k(), n)) out.push_back({t});
        return out;
    }
    if (tau.dim > n)
        throw std::invalid_argument("type dimension exceeds the cube; no realization");
    std::set<std::vector<Word>> seen;
    enumerate_subspaces(alphabet, n, tau.dim, [&](const CombinatorialSpace& V) {
        std::vector<Word> G;
        for (const Word& s : tau.elements) G.push_back(canonical_iso(V, s));
        std::sort(G.begin(), G.end());
        if (seen.insert(G).second) out.push_back(G);
        return true;
    });
    return out;
}

ClassificationReport classify_type(const CubeProcess& proc, const TypeSet& tau,
                                   const Rational& theta, const Rational& epsilon) {
    auto realizations = realizations_of_type(proc.alphabet, proc.n, tau);
    ClassificationReport r;
    r.theta = theta;
    r.expected = pow_rat(epsilon, static_cast<unsigned>(tau.elements.size()));
    bool seen = false;
    for (const auto& G : realizations) {
        Rational p = prob(joint_event(proc, G));
        if (!seen || p < r.min_corr) { r.min_corr = p; r.min_witness = G; }
        if (!seen || p > r.max_corr) { r.max_corr = p; r.max_witness = G; }
        seen = true;
    }
    if (!seen) throw std::invalid_argument("type has no realizations");
    apply_label(r);
    return r;
}

Rational boolean_stability_check(const CubeProcess& proc,
                                 const std::set<Symbol>& gamma1,
                                 const std::set<Symbol>& gamma2,
                                 const VariableWord& v1, const VariableWord& v2) {
    for (Symbol a : gamma1)
        if (gamma2.count(a))
            throw std::invalid_argument("gamma sets must be disjoint");
    auto value = [&](const VariableWord& v) {
        Event e = universe_event(proc);
        for (Symbol a : gamma1) e = event_and(e, proc.at(substitute(v, {a})));
        for (Symbol a : gamma2) e = event_and(e, event_not(proc.at(substitute(v, {a}))));
        return prob(e);
    };
    Rational d = value(v1) - value(v2);
    return d < 0 ? -d : d;
}

Rational boolean_stability_check_types(const CubeProcess& proc,
                                       const std::vector<Word>& G,
                                       const std::vector<Word>& Q,
                                       const CombinatorialSpace& V1,
                                       const CombinatorialSpace& V2) {
    std::set<Word> qset(Q.begin(), Q.end());
    for (const Word& q : Q)
        if (std::find(G.begin(), G.end(), q) == G.end())
            throw std::invalid_argument("Q must be a subset of G");
    auto value = [&](const CombinatorialSpace& V) {
        Event e = universe_event(proc);
        for (const Word& t : G) {
            Event d = proc.at(canonical_iso(V, t));
            e = event_and(e, qset.count(t) ? event_not(d) : d);
        }
        return prob(e);
    };
    Rational d = value(V1) - value(V2);
    return d < 0 ? -d : d;
}

BaseRate base_rate(const CubeProcess& proc,
                   const std::optional<Rational>& eta_floor) {
    BaseRate r;
    r.epsilon = 0;
    std::vector<Rational> marginals;
    for (const Event& e : proc.events) {
        marginals.push_back(prob(e));
        r.epsilon = std::max(r.epsilon, marginals.back());
    }
    if (eta_floor) r.epsilon = std::max(r.epsilon, *eta_floor);
    r.max_dev = 0;
    for (const Rational& p : marginals) {
        Rational d = r.epsilon - p;
        if (d < 0) d = -d;
        r.max_dev = std::max(r.max_dev, d);
    }
    return r;
}

CubeProcess restrict_process(const CubeProcess& proc, const CombinatorialSpace& V) {
    if (V.generator.alphabet->symbols != proc.alphabet->symbols)
        throw std::invalid_argument("subspace alphabet differs from the process's");
    if (V.ambient_n() != proc.n)
        throw std::invalid_argument("subspace lives in a different cube");
    std::vector<Event> events;
    for (const Word& s : all_words(proc.k(), V.dim()))
        events.push_back(proc.at(canonical_iso(V, s)));
    return make_process(proc.alphabet, V.dim(), proc.product, std::move(events));
}

SubspaceSearchResult find_stationary_subspace(const CubeProcess& proc, int m,
                                              const Rational& eta,
                                              StationarityCriterion criterion,
                                              int type_kappa) {
    if (m > proc.n) throw std::invalid_argument("m exceeds the cube length");
    SubspaceSearchResult r;
    bool seen = false;
    enumerate_subspaces(proc.alphabet, proc.n, m, [&](const CombinatorialSpace& V) {
        CubeProcess sub = restrict_process(proc, V);
        Rational mod = criterion == StationarityCriterion::Lines
                           ? stationarity_modulus_lines(sub).eta_star
                           : stationarity_modulus_types(sub, type_kappa, m).eta_star;
        if (!seen || mod < r.best_modulus) {
            r.best_modulus = mod;
            r.V = V;
            seen = true;
        }
        if (mod <= eta) {
            r.found = true;
            r.V = V;
            r.best_modulus = mod;
            return false;
        }
        return true;
    });
    return r;
}

}  // namespace cubestruct
