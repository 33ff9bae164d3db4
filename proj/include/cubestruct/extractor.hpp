#pragma once

#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "cubestruct/process.hpp"

namespace cubestruct {

struct ExtractOptions {
    /// Skip the stationarity and marginal hypothesis checks; bounds are then
    /// reported in the witness but violations no longer throw.
    bool relax_hypotheses = false;
    /// Allow n < k in lines mode.
    bool relax_dimension = false;
    /// Pad Gamma to A minus beta with full-space factors.
    bool pad_gamma = false;
};

struct GammaReport {
    std::set<Symbol> gamma;
    ClassificationReport report;
};

struct TypeReport {
    TypeSet tau;
    ClassificationReport report;
};

/// Everything was pseudorandom at its schedule level; carries all extrema.
struct PseudorandomCertificate {
    Rational worst_deviation;
    std::vector<GammaReport> gamma_reports;  // lines mode
    std::vector<TypeReport> type_reports;    // type modes
};

struct IndexStat {
    Word t;
    bool relevant = false;  // contains beta (lines) / always true on V
    Rational p_S;
    std::optional<Rational> p_D_given_S;  // absent when P(S_t) = 0
};

/// E^alpha_t = D at t with beta replaced by alpha; one process per alpha.
std::map<Symbol, CubeProcess> build_insensitive_family(const CubeProcess& proc,
                                                       const std::set<Symbol>& gamma,
                                                       Symbol beta);

struct LineWitness {
    std::set<Symbol> gamma0;
    Symbol beta = -1;
    std::set<Symbol> gamma;  // gamma0 minus beta
    std::optional<Symbol> complemented;  // the negated factor, subcorrelated only
    Label branch = Label::Mixed;
    Rational theta;
    Rational Theta;
    std::map<Symbol, CubeProcess> factors;  // complemented factor already negated
    CubeProcess S;
    std::vector<IndexStat> stats;
    Rational p_S_lower;          // epsilon^{k-1} / (4k)
    Rational conditional_lower;  // epsilon + sigma / 4^{k-1}
    bool bounds_hold = true;
};

struct LineExtractResult {
    ThetaSchedule schedule;
    std::optional<PseudorandomCertificate> certificate;
    std::optional<LineWitness> witness;
};

LineExtractResult extract_line_witness(const CubeProcess& proc,
                                       const AnalysisParams& params,
                                       const ExtractOptions& opts = {});

/// The prefix/suffix splitting of a 1-separated tuple's type, the subspace V
/// and the maps T_j it induces. Indices j are 0-based; iota is 0-based too.
struct OneSepConstruction {
    AlphabetPtr alphabet;
    int n = 0;
    int p = 0;
    TypeTuple tau;
    int d = 0;
    int iota = -1;
    Symbol beta = -1;
    std::vector<Symbol> betas;  // beta_j = s_j(iota)
    std::set<Symbol> gamma;
    std::vector<Word> x;  // x_j = s_j up to iota inclusive, j in [p+1]
    std::vector<Word> y;  // y_j = s_j after iota
    CombinatorialSpace V;

    Word map_point(int j, const Word& t) const;  // T_j(t) for t in V
};

OneSepConstruction one_sep_construction(const AlphabetPtr& alphabet,
                                        const std::vector<Word>& tuple);

struct OneSepWitness {
    std::vector<Word> G;            // sorted
    std::vector<Word> enumeration;  // 1-separated, distinguished element last
    TypeSet tau;
    Label branch = Label::Mixed;
    Rational theta;
    Rational Theta;
    OneSepConstruction construction;
    std::vector<CubeProcess> factors;  // D after T_j, last one negated on sub
    bool last_complemented = false;
    CubeProcess S;  // indexed by the I_V-preimage cube
    std::vector<IndexStat> stats;
    Rational p_S_lower;
    Rational conditional_lower;
    bool bounds_hold = true;
};

struct OneSepExtractResult {
    ThetaSchedule schedule;
    std::optional<PseudorandomCertificate> certificate;
    std::optional<OneSepWitness> witness;
};

OneSepExtractResult extract_one_sep_witness(const CubeProcess& proc,
                                            const AnalysisParams& params,
                                            const ExtractOptions& opts = {});

struct SimplicialShape {
    int ell = 0;
    std::vector<int> r;
    std::vector<std::pair<int, int>> intervals;  // 0-based [begin, end) in [r]
    std::vector<Symbol> betas;
    std::vector<std::set<Symbol>> gammas;
};

struct SimplicialConstruction {
    AlphabetPtr alphabet;
    int n = 0;
    int p = 0;
    TypeTuple tau;
    int d = 0;
    int ell = 0;
    std::vector<int> J;  // 0-based separating coordinates, increasing
    std::vector<Symbol> betas;
    std::vector<std::vector<Word>> y;  // y[j][l], j in [p+1], l in [ell+1]
    std::vector<int> r;
    Word pad;  // shared constant suffix filling the ambient length
    CombinatorialSpace V;

    Word map_point(int j, const Word& t) const;
};

SimplicialConstruction simplicial_construction(const AlphabetPtr& alphabet,
                                               const std::vector<Word>& tuple,
                                               const std::vector<int>& r);

struct SimplicialWitness {
    std::vector<Word> G;
    std::vector<Word> enumeration;  // achieves separation ell, distinguished last
    TypeSet tau;
    Label branch = Label::Mixed;
    Rational theta;
    Rational Theta;
    SimplicialConstruction construction;
    SimplicialShape shape;  // the simplicial certificate for S
    std::vector<CubeProcess> factors;
    bool last_complemented = false;
    // factor j's certified block and the symbol it is insensitive toward
    std::vector<std::pair<int, Symbol>> factor_blocks;
    CubeProcess S;
    std::vector<IndexStat> stats;
    Rational p_S_lower;
    Rational conditional_lower;
    bool bounds_hold = true;
};

struct SimplicialExtractResult {
    ThetaSchedule schedule;
    std::optional<PseudorandomCertificate> certificate;
    std::optional<SimplicialWitness> witness;
};

SimplicialExtractResult extract_simplicial_witness(const CubeProcess& proc,
                                                   const AnalysisParams& params,
                                                   const std::vector<int>& r,
                                                   const ExtractOptions& opts = {});

struct InsensitivityReport {
    bool insensitive = true;
    // an equivalent pair with distinct events, in I_V-preimage coordinates
    std::optional<std::pair<Word, Word>> counterexample;
};

/// Exhaustive check over all (alpha,beta[,I])-equivalent pairs; with V given
/// the process is read through the canonical isomorphism. I holds 0-based
/// coordinates of the (possibly pulled back) index cube.
InsensitivityReport verify_insensitive(
    const CubeProcess& proc, Symbol alpha, Symbol beta,
    const std::optional<CombinatorialSpace>& V = std::nullopt,
    const std::optional<std::set<int>>& I = std::nullopt);

}  // namespace cubestruct
