#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cubestruct/hypercube.hpp"
#include "cubestruct/invariants.hpp"
#include "cubestruct/probspace.hpp"
#include "cubestruct/rational.hpp"

namespace cubestruct {

/// A family of events indexed by the points of A^n, all in one backend.
struct CubeProcess {
    AlphabetPtr alphabet;
    int n = 0;
    ProductPtr product;          // null for mask-backend processes
    std::vector<Event> events;   // indexed by word_rank

    const Event& at(const Word& t) const {
        return events.at(word_rank(t, alphabet->k()));
    }
    int k() const { return alphabet->k(); }
};

CubeProcess make_process(AlphabetPtr alphabet, int n, ProductPtr product,
                         std::vector<Event> events);

struct AnalysisParams {
    Rational epsilon;
    Rational sigma;
    Rational eta;
    int kappa = 0;
    int m = 1;

    /// The dichotomy preconditions; throws with the violated inequality named.
    void validate() const;
};

struct ThetaSchedule {
    std::vector<Rational> theta;  // theta[p] for p = 0..kappa

    const Rational& at(int p) const { return theta.at(p); }
};

ThetaSchedule make_theta_schedule(const AnalysisParams& params);

enum class Label { Pseudorandom, Supercorrelated, Subcorrelated, Mixed };

std::string label_str(Label l);

struct ClassificationReport {
    Rational min_corr;
    Rational max_corr;
    Rational expected;
    Rational theta;
    Label label = Label::Pseudorandom;
    Rational margin;  // deviation slack for Super/Sub, theta for Pseudorandom
    // argmin / argmax instances, as point sets of the index cube
    std::vector<Word> min_witness;
    std::vector<Word> max_witness;
};

struct LineModulusResult {
    Rational eta_star;
    std::set<Symbol> witness_gamma;
    VariableWord witness_v1;  // attains the max correlation for witness_gamma
    VariableWord witness_v2;  // attains the min
};

/// Exact worst deviation over all nonempty Gamma and all pairs of variable
/// words. With filter_constant set, only variable words having that symbol in
/// a constant position participate.
LineModulusResult stationarity_modulus_lines(
    const CubeProcess& proc, std::optional<Symbol> filter_constant = std::nullopt);

struct TypeModulusResult {
    Rational eta_star;
    std::vector<Word> witness_g1;
    std::vector<Word> witness_g2;
    bool complete = true;  // false when the subset budget was exhausted
};

/// Worst deviation over pairs of equal-type sets of size <= kappa whose type
/// has dimension <= m.
TypeModulusResult stationarity_modulus_types(const CubeProcess& proc, int kappa,
                                             int m, long long budget = 2000000);

ClassificationReport classify_gamma(const CubeProcess& proc,
                                    const std::set<Symbol>& gamma,
                                    const Rational& theta, const Rational& epsilon);

/// All G subseteq A^n with type tau, enumerated as subspace images of tau's
/// element set and deduplicated. Requires tau in normal form.
std::vector<std::vector<Word>> realizations_of_type(const AlphabetPtr& alphabet,
                                                    int n, const TypeSet& tau);

ClassificationReport classify_type(const CubeProcess& proc, const TypeSet& tau,
                                   const Rational& theta, const Rational& epsilon);

/// |P(cap_{G1} D at v1, cap_{G2} D^c at v1) - (same at v2)|, exact.
Rational boolean_stability_check(const CubeProcess& proc,
                                 const std::set<Symbol>& gamma1,
                                 const std::set<Symbol>& gamma2,
                                 const VariableWord& v1, const VariableWord& v2);

/// The subspace variant: G and Q index A^m, Q subseteq G complemented.
Rational boolean_stability_check_types(const CubeProcess& proc,
                                       const std::vector<Word>& G,
                                       const std::vector<Word>& Q,
                                       const CombinatorialSpace& V1,
                                       const CombinatorialSpace& V2);

struct BaseRate {
    Rational epsilon;   // max marginal, floored by eta_floor when supplied
    Rational max_dev;   // worst |P(D_t) - epsilon|
};

BaseRate base_rate(const CubeProcess& proc,
                   const std::optional<Rational>& eta_floor = std::nullopt);

CubeProcess restrict_process(const CubeProcess& proc, const CombinatorialSpace& V);

enum class StationarityCriterion { Lines, Types };

struct SubspaceSearchResult {
    bool found = false;
    CombinatorialSpace V;        // the hit, or the best seen on NotFound
    Rational best_modulus;
};

SubspaceSearchResult find_stationary_subspace(
    const CubeProcess& proc, int m, const Rational& eta,
    StationarityCriterion criterion = StationarityCriterion::Lines,
    int type_kappa = 2);

}  // namespace cubestruct
