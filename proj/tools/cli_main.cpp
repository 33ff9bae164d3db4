#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cubestruct/examples.hpp"
#include "cubestruct/extractor.hpp"
#include "cubestruct/json_io.hpp"

namespace cs = cubestruct;
using cs::Json;
using cs::Rational;

namespace {

Json read_json_input(const std::string& path) {
    if (path.empty() || path == "-") return Json::parse(std::cin);
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open input file '" + path + "'");
    return Json::parse(f);
}

/// Every asserted inequality, re-evaluated at emission time.
struct Transcript {
    Json entries = Json::array();
    bool ok = true;

    void check(const std::string& claim, const Rational& lhs, const std::string& rel,
               const Rational& rhs) {
        bool holds = rel == ">=" ? lhs >= rhs : rel == "<=" ? lhs <= rhs : lhs == rhs;
        entries.push_back(Json{{"claim", claim},
                               {"lhs", cs::rat_str(lhs)},
                               {"rel", rel},
                               {"rhs", cs::rat_str(rhs)},
                               {"ok", holds}});
        ok = ok && holds;
    }
};

bool is_scalar_array(const Json& j) {
    for (const Json& e : j)
        if (e.is_object() || e.is_array()) return false;
    return true;
}

void render_text(std::ostream& os, const Json& j, int indent) {
    std::string pad(indent, ' ');
    if (j.is_object()) {
        for (const auto& [key, value] : j.items()) {
            if (value.is_object() || (value.is_array() && !is_scalar_array(value))) {
                os << pad << key << ":\n";
                render_text(os, value, indent + 2);
            } else {
                os << pad << key << ": " << value.dump() << "\n";
            }
        }
    } else if (j.is_array()) {
        for (const Json& e : j) {
            if (e.is_object() || e.is_array()) {
                os << pad << "-\n";
                render_text(os, e, indent + 2);
            } else {
                os << pad << "- " << e.dump() << "\n";
            }
        }
    } else {
        os << pad << j.dump() << "\n";
    }
}

void emit(const Json& report, const std::string& format) {
    if (format == "json")
        std::cout << report.dump(2) << "\n";
    else
        render_text(std::cout, report, 0);
}

Json words_json(const cs::Alphabet& a, const std::vector<cs::Word>& ws) {
    Json arr = Json::array();
    for (const cs::Word& w : ws) arr.push_back(cs::word_to_json(a, w));
    return arr;
}

Json gamma_json(const cs::Alphabet& a, const std::set<cs::Symbol>& gamma) {
    Json arr = Json::array();
    for (cs::Symbol s : gamma) arr.push_back(a.token(s));
    return arr;
}

Json classification_json(const cs::Alphabet& a, const cs::ClassificationReport& r) {
    return Json{{"min_corr", cs::rat_str(r.min_corr)},
                {"max_corr", cs::rat_str(r.max_corr)},
                {"expected", cs::rat_str(r.expected)},
                {"theta", cs::rat_str(r.theta)},
                {"label", cs::label_str(r.label)},
                {"margin", cs::rat_str(r.margin)},
                {"min_witness", words_json(a, r.min_witness)},
                {"max_witness", words_json(a, r.max_witness)}};
}

void classification_transcript(Transcript& tr, const std::string& target,
                               const cs::ClassificationReport& r) {
    using cs::Label;
    switch (r.label) {
        case Label::Pseudorandom:
            tr.check(target + " pseudorandom: max deviation <= theta",
                     std::max(r.max_corr - r.expected, r.expected - r.min_corr), "<=",
                     r.theta);
            break;
        case Label::Supercorrelated:
            tr.check(target + " supercorrelated: min_corr >= expected + margin",
                     r.min_corr, ">=", r.expected + r.margin);
            break;
        case Label::Subcorrelated:
            tr.check(target + " subcorrelated: max_corr <= expected - margin",
                     r.max_corr, "<=", r.expected - r.margin);
            break;
        case Label::Mixed:
            break;
    }
}

Json stats_json(const cs::Alphabet& a, const std::vector<cs::IndexStat>& stats) {
    Json arr = Json::array();
    for (const cs::IndexStat& s : stats) {
        Json e{{"t", cs::word_to_json(a, s.t)},
               {"relevant", s.relevant},
               {"p_S", cs::rat_str(s.p_S)}};
        if (s.p_D_given_S) e["p_D_given_S"] = cs::rat_str(*s.p_D_given_S);
        arr.push_back(std::move(e));
    }
    return arr;
}

void bounds_transcript(Transcript& tr, const std::vector<cs::IndexStat>& stats,
                       const Rational& p_S_lower, const Rational& cond_lower) {
    for (const cs::IndexStat& s : stats) {
        if (!s.relevant) continue;
        tr.check("P(S_t) lower bound", s.p_S, ">=", p_S_lower);
        if (s.p_D_given_S)
            tr.check("P(D_t | S_t) lower bound", *s.p_D_given_S, ">=", cond_lower);
    }
}

Json schedule_json(const cs::ThetaSchedule& sched) {
    Json arr = Json::array();
    for (const Rational& t : sched.theta) arr.push_back(cs::rat_str(t));
    return arr;
}

Json certificate_json(const cs::Alphabet& a, const cs::PseudorandomCertificate& c) {
    Json gammas = Json::array();
    for (const cs::GammaReport& g : c.gamma_reports)
        gammas.push_back(Json{{"gamma", gamma_json(a, g.gamma)},
                              {"report", classification_json(a, g.report)}});
    Json types = Json::array();
    for (const cs::TypeReport& t : c.type_reports)
        types.push_back(Json{{"tau", words_json(a, t.tau.elements)},
                             {"dim", t.tau.dim},
                             {"report", classification_json(a, t.report)}});
    return Json{{"worst_deviation", cs::rat_str(c.worst_deviation)},
                {"gamma_reports", std::move(gammas)},
                {"type_reports", std::move(types)}};
}

std::string branch_str(cs::Label branch) { return cs::label_str(branch); }

struct CommonOpts {
    std::string input = "-";
    std::string format = "text";
    int workers = 1;  // accepted for interface stability; sweeps are ordered
};

void add_common(CLI::App* sub, CommonOpts& c, bool with_input = true) {
    if (with_input) sub->add_option("--in", c.input, "process/input JSON file, - for stdin");
    sub->add_option("--format", c.format, "output format")
        ->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--workers", c.workers, "sweep parallelism (results independent of N)")
        ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact analysis of stochastic processes indexed by the hypercube"};
    app.require_subcommand(1);

    // analyze
    CommonOpts an_c;
    std::string an_theta, an_kappa_eps;
    int an_kappa = 0, an_m = 1;
    std::string an_filter;
    auto* analyze = app.add_subcommand("analyze", "stationarity moduli, base rate, trichotomy");
    add_common(analyze, an_c);
    analyze->add_option("--kappa", an_kappa, "type-modulus set-size cap (default k)");
    analyze->add_option("--m", an_m, "type-modulus dimension cap");
    analyze->add_option("--theta", an_theta, "threshold for classifications (default eta_star)");
    analyze->add_option("--epsilon", an_kappa_eps, "expected base rate (default max marginal)");
    analyze->add_option("--filter-constant", an_filter,
                        "restrict the line modulus to words containing this constant");

    // extract
    CommonOpts ex_c;
    std::string ex_mode = "lines", ex_eps, ex_sigma, ex_eta, ex_r = "1";
    int ex_kappa = 0, ex_m = 1;
    bool ex_relax_h = false, ex_relax_d = false, ex_pad = false;
    auto* extract = app.add_subcommand("extract", "structured-event witness extraction");
    add_common(extract, ex_c);
    extract->add_option("--mode", ex_mode)->check(CLI::IsMember({"lines", "onesep", "simplicial"}));
    extract->add_option("--epsilon", ex_eps)->required();
    extract->add_option("--sigma", ex_sigma)->required();
    extract->add_option("--eta", ex_eta)->required();
    extract->add_option("--kappa", ex_kappa, "default k");
    extract->add_option("--m", ex_m, "type dimension cap (type modes)");
    extract->add_option("--r", ex_r, "comma-separated block lengths (simplicial)");
    extract->add_flag("--relax-hypotheses", ex_relax_h);
    extract->add_flag("--relax-dimension", ex_relax_d);
    extract->add_flag("--pad-gamma", ex_pad);

    // examples
    CommonOpts ee_c;
    std::string ee_name, ee_eps = "1/2";
    int ee_n = 2, ee_k = 3;
    bool ee_relaxed = false;
    std::uint64_t ee_seed = 0;
    auto* examples = app.add_subcommand("examples", "emit a built-in process spec");
    add_common(examples, ee_c, false);
    examples->add_option("--name", ee_name)->required()->check(CLI::IsMember(
        {"intro", "intro-restricted", "onesep", "simplicial", "independent", "random"}));
    examples->add_option("--n", ee_n)->required();
    examples->add_option("--epsilon", ee_eps);
    examples->add_option("--k", ee_k, "alphabet size (independent/random)");
    examples->add_flag("--relaxed", ee_relaxed, "admit n = 4 for onesep");
    auto* ee_seed_opt = examples->add_option("--seed", ee_seed, "required for random");

    // type
    CommonOpts ty_c;
    auto* type_cmd = app.add_subcommand("type", "type of a word tuple");
    add_common(type_cmd, ty_c);

    // sep
    CommonOpts se_c;
    int se_cap = 8;
    auto* sep = app.add_subcommand("sep", "separation indices of a tuple and its set");
    add_common(sep, se_c);
    sep->add_option("--exact-cap", se_cap, "set-size cap for the exact ordering search");

    // mc-sep
    CommonOpts mc_c;
    int mc_k = 3, mc_n = 30, mc_p = 3;
    long long mc_samples = 10000;
    std::uint64_t mc_seed = 0;
    auto* mcsep = app.add_subcommand("mc-sep", "Monte Carlo 1-separation rate");
    add_common(mcsep, mc_c, false);
    mcsep->add_option("--k", mc_k);
    mcsep->add_option("--n", mc_n);
    mcsep->add_option("--p", mc_p);
    mcsep->add_option("--samples", mc_samples);
    mcsep->add_option("--seed", mc_seed)->required();

    // dhj
    auto* dhj = app.add_subcommand("dhj", "density Hales-Jewett laboratory");
    dhj->require_subcommand(1);
    CommonOpts dl_c;
    auto* dhj_lines = dhj->add_subcommand("lines", "find a combinatorial line inside a dense set");
    add_common(dhj_lines, dl_c);
    CommonOpts dm_c;
    int dm_k = 2, dm_n = 2;
    long long dm_budget = 5000000;
    auto* dhj_maxfree = dhj->add_subcommand("maxfree", "maximum line-free density");
    add_common(dhj_maxfree, dm_c, false);
    dhj_maxfree->add_option("--k", dm_k);
    dhj_maxfree->add_option("--n", dm_n);
    dhj_maxfree->add_option("--budget", dm_budget);
    CommonOpts ds_c;
    int ds_m = 1;
    std::string ds_eta = "1/4";
    auto* dhj_sections = dhj->add_subcommand("sections", "dense-sections subspace search");
    add_common(dhj_sections, ds_c);
    dhj_sections->add_option("--m", ds_m);
    dhj_sections->add_option("--eta", ds_eta);
    CommonOpts di_c;
    auto* dhj_increment = dhj->add_subcommand("increment", "first-moment density increment step");
    add_common(dhj_increment, di_c);

    // verify
    CommonOpts ve_c;
    std::string ve_alpha, ve_beta, ve_coords;
    auto* verify = app.add_subcommand("verify", "check (alpha,beta)-insensitivity of a process");
    add_common(verify, ve_c);
    verify->add_option("--alpha", ve_alpha)->required();
    verify->add_option("--beta", ve_beta)->required();
    verify->add_option("--coords", ve_coords, "comma-separated 1-based window coordinates");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    auto started = std::chrono::steady_clock::now();
    Transcript tr;
    Json report;
    std::string format = "text";
    int exit_code = 0;

    auto parse_int_list = [](const std::string& s) {
        std::vector<int> out;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) out.push_back(std::stoi(item));
        return out;
    };
    auto load_words = [](const Json& j) {
        cs::AlphabetPtr a = cs::alphabet_from_json(j.at("alphabet"));
        std::vector<cs::Word> ws;
        for (const Json& w : j.at("words")) ws.push_back(cs::word_from_json(a, w));
        return std::pair{a, ws};
    };

    try {
        if (analyze->parsed()) {
            format = an_c.format;
            cs::CubeProcess proc = cs::process_from_json(read_json_input(an_c.input));
            const cs::Alphabet& a = *proc.alphabet;
            int kappa = an_kappa > 0 ? an_kappa : proc.k();
            cs::LineModulusResult lines = cs::stationarity_modulus_lines(proc);
            cs::TypeModulusResult types = cs::stationarity_modulus_types(proc, kappa, an_m);
            cs::BaseRate base = cs::base_rate(proc);
            Rational eps = an_kappa_eps.empty() ? base.epsilon : cs::parse_rational(an_kappa_eps);
            Rational theta = an_theta.empty() ? lines.eta_star : cs::parse_rational(an_theta);
            Json classifications = Json::array();
            std::vector<cs::Symbol> syms(proc.k());
            for (int i = 0; i < proc.k(); ++i) syms[i] = i;
            for (int mask = 1; mask < (1 << proc.k()); ++mask) {
                std::set<cs::Symbol> gamma;
                for (int i = 0; i < proc.k(); ++i)
                    if (mask >> i & 1) gamma.insert(syms[i]);
                cs::ClassificationReport r = cs::classify_gamma(proc, gamma, theta, eps);
                std::string target = Json{gamma_json(a, gamma)}.front().dump();
                classification_transcript(tr, "Gamma=" + target, r);
                classifications.push_back(Json{{"gamma", gamma_json(a, gamma)},
                                               {"report", classification_json(a, r)}});
            }
            report["results"] = Json{
                {"eta_star_lines", cs::rat_str(lines.eta_star)},
                {"eta_star_types", cs::rat_str(types.eta_star)},
                {"eta_star_types_complete", types.complete},
                {"base_rate", Json{{"epsilon", cs::rat_str(base.epsilon)},
                                   {"max_dev", cs::rat_str(base.max_dev)}}},
                {"classifications", std::move(classifications)}};
            if (!an_filter.empty()) {
                cs::LineModulusResult filtered =
                    cs::stationarity_modulus_lines(proc, a.index_of(an_filter));
                report["results"]["eta_star_lines_filtered"] = cs::rat_str(filtered.eta_star);
            }
        } else if (extract->parsed()) {
            format = ex_c.format;
            cs::CubeProcess proc = cs::process_from_json(read_json_input(ex_c.input));
            const cs::Alphabet& a = *proc.alphabet;
            cs::AnalysisParams params{cs::parse_rational(ex_eps), cs::parse_rational(ex_sigma),
                                      cs::parse_rational(ex_eta),
                                      ex_kappa > 0 ? ex_kappa : proc.k(), ex_m};
            cs::ExtractOptions opts{ex_relax_h, ex_relax_d, ex_pad};
            Json results;
            if (ex_mode == "lines") {
                cs::LineExtractResult r = cs::extract_line_witness(proc, params, opts);
                results["schedule"] = schedule_json(r.schedule);
                if (r.certificate) {
                    results["outcome"] = "pseudorandom-certificate";
                    results["certificate"] = certificate_json(a, *r.certificate);
                    exit_code = 2;
                } else {
                    const cs::LineWitness& w = *r.witness;
                    results["outcome"] = "witness";
                    Json factors;
                    for (const auto& [alpha, f] : w.factors)
                        factors[a.token(alpha)] = cs::process_to_json(f);
                    results["witness"] = Json{
                        {"gamma0", gamma_json(a, w.gamma0)},
                        {"beta", a.token(w.beta)},
                        {"gamma", gamma_json(a, w.gamma)},
                        {"branch", branch_str(w.branch)},
                        {"theta", cs::rat_str(w.theta)},
                        {"Theta", cs::rat_str(w.Theta)},
                        {"factors", std::move(factors)},
                        {"S", cs::process_to_json(w.S)},
                        {"stats", stats_json(a, w.stats)},
                        {"p_S_lower", cs::rat_str(w.p_S_lower)},
                        {"conditional_lower", cs::rat_str(w.conditional_lower)},
                        {"bounds_hold", w.bounds_hold}};
                    if (w.complemented)
                        results["witness"]["complemented"] = a.token(*w.complemented);
                    bounds_transcript(tr, w.stats, w.p_S_lower, w.conditional_lower);
                }
            } else if (ex_mode == "onesep") {
                cs::OneSepExtractResult r = cs::extract_one_sep_witness(proc, params, opts);
                results["schedule"] = schedule_json(r.schedule);
                if (r.certificate) {
                    results["outcome"] = "pseudorandom-certificate";
                    results["certificate"] = certificate_json(a, *r.certificate);
                    exit_code = 2;
                } else {
                    const cs::OneSepWitness& w = *r.witness;
                    results["outcome"] = "witness";
                    Json factors = Json::array();
                    for (const cs::CubeProcess& f : w.factors)
                        factors.push_back(cs::process_to_json(f));
                    results["witness"] = Json{
                        {"G", words_json(a, w.G)},
                        {"enumeration", words_json(a, w.enumeration)},
                        {"tau", words_json(a, w.tau.elements)},
                        {"dim", w.tau.dim},
                        {"branch", branch_str(w.branch)},
                        {"theta", cs::rat_str(w.theta)},
                        {"Theta", cs::rat_str(w.Theta)},
                        {"V", cs::variable_word_to_json(w.construction.V.generator)},
                        {"factors", std::move(factors)},
                        {"last_complemented", w.last_complemented},
                        {"S", cs::process_to_json(w.S)},
                        {"stats", stats_json(a, w.stats)},
                        {"p_S_lower", cs::rat_str(w.p_S_lower)},
                        {"conditional_lower", cs::rat_str(w.conditional_lower)},
                        {"bounds_hold", w.bounds_hold}};
                    bounds_transcript(tr, w.stats, w.p_S_lower, w.conditional_lower);
                }
            } else {
                cs::SimplicialExtractResult r =
                    cs::extract_simplicial_witness(proc, params, parse_int_list(ex_r), opts);
                results["schedule"] = schedule_json(r.schedule);
                if (r.certificate) {
                    results["outcome"] = "pseudorandom-certificate";
                    results["certificate"] = certificate_json(a, *r.certificate);
                    exit_code = 2;
                } else {
                    const cs::SimplicialWitness& w = *r.witness;
                    results["outcome"] = "witness";
                    Json factors = Json::array();
                    for (const cs::CubeProcess& f : w.factors)
                        factors.push_back(cs::process_to_json(f));
                    Json blocks = Json::array();
                    for (const auto& [block, alpha] : w.factor_blocks)
                        blocks.push_back(Json{{"block", block}, {"alpha", a.token(alpha)}});
                    Json intervals = Json::array();
                    for (const auto& [b, e] : w.shape.intervals)
                        intervals.push_back(Json{{"begin", b}, {"end", e}});
                    results["witness"] = Json{
                        {"G", words_json(a, w.G)},
                        {"enumeration", words_json(a, w.enumeration)},
                        {"tau", words_json(a, w.tau.elements)},
                        {"dim", w.tau.dim},
                        {"branch", branch_str(w.branch)},
                        {"theta", cs::rat_str(w.theta)},
                        {"Theta", cs::rat_str(w.Theta)},
                        {"V", cs::variable_word_to_json(w.construction.V.generator)},
                        {"ell", w.shape.ell},
                        {"intervals", std::move(intervals)},
                        {"factor_blocks", std::move(blocks)},
                        {"factors", std::move(factors)},
                        {"last_complemented", w.last_complemented},
                        {"S", cs::process_to_json(w.S)},
                        {"stats", stats_json(a, w.stats)},
                        {"p_S_lower", cs::rat_str(w.p_S_lower)},
                        {"conditional_lower", cs::rat_str(w.conditional_lower)},
                        {"bounds_hold", w.bounds_hold}};
                    bounds_transcript(tr, w.stats, w.p_S_lower, w.conditional_lower);
                }
            }
            report["results"] = std::move(results);
        } else if (examples->parsed()) {
            format = ee_c.format;
            Rational eps = cs::parse_rational(ee_eps);
            cs::CubeProcess proc;
            if (ee_name == "intro") proc = cs::example_intro(ee_n, eps);
            else if (ee_name == "intro-restricted") proc = cs::example_intro_restricted(ee_n, eps);
            else if (ee_name == "onesep") proc = cs::example_one_sep(ee_n, eps, ee_relaxed);
            else if (ee_name == "simplicial") proc = cs::example_simplicial(ee_n, eps);
            else if (ee_name == "independent")
                proc = cs::independent_process(cs::Alphabet::integers(ee_k), ee_n, eps);
            else {
                if (ee_seed_opt->count() == 0)
                    throw std::invalid_argument("--seed is required for the random example");
                proc = cs::random_process(cs::Alphabet::integers(ee_k), ee_n, eps, ee_seed);
            }
            emit(cs::process_to_json(proc), format);
            return 0;
        } else if (type_cmd->parsed()) {
            format = ty_c.format;
            auto [a, words] = load_words(read_json_input(ty_c.input));
            auto t0 = std::chrono::steady_clock::now();
            cs::TypeTuple tau = cs::type_of_tuple(words);
            auto t1 = std::chrono::steady_clock::now();
            cs::TypeSet set = cs::type_of_set(words);
            report["results"] = Json{
                {"columns", words_json(*a, tau.columns)},
                {"dim", tau.dim},
                {"set_elements", words_json(*a, set.elements)},
                {"set_dim", set.dim},
                {"type_micros",
                 std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count()}};
        } else if (sep->parsed()) {
            format = se_c.format;
            auto [a, words] = load_words(read_json_input(se_c.input));
            std::vector<int> costs = cs::separation_costs_tuple(words);
            cs::SeparationIndex tuple_idx = cs::separation_index_tuple(words);
            cs::SeparationIndex set_idx = cs::separation_index_set(words, se_cap);
            Json j{{"costs", costs},
                   {"s_tuple", tuple_idx.value},
                   {"s_set", set_idx.value},
                   {"s_set_exact", set_idx.exact}};
            if (set_idx.witness_enumeration) {
                std::vector<cs::Word> ordered;
                for (int i : *set_idx.witness_enumeration) ordered.push_back(words[i]);
                j["witness_enumeration"] = words_json(*a, ordered);
            }
            report["results"] = std::move(j);
        } else if (mcsep->parsed()) {
            format = mc_c.format;
            cs::McSepResult r = cs::mc_one_separated_rate(mc_k, mc_n, mc_p, mc_samples, mc_seed);
            report["seed"] = mc_seed;
            report["results"] = Json{{"one_separated", r.one_separated},
                                     {"duplicates", r.duplicates},
                                     {"samples", r.samples},
                                     {"empirical_rate", r.empirical_rate},
                                     {"bound", r.bound}};
        } else if (dhj_lines->parsed()) {
            format = dl_c.format;
            cs::DenseSet D = cs::dense_set_from_json(read_json_input(dl_c.input));
            std::optional<cs::VariableWord> v = cs::find_line_in_set(D);
            Json j{{"density", cs::rat_str(D.density())}, {"found", v.has_value()}};
            if (v) {
                j["line_word"] = cs::variable_word_to_json(*v);
                j["line"] = words_json(*D.alphabet, cs::line_of(*v));
            }
            report["results"] = std::move(j);
        } else if (dhj_maxfree->parsed()) {
            format = dm_c.format;
            cs::LinefreeResult r = cs::max_linefree_density(dm_k, dm_n, dm_budget);
            cs::AlphabetPtr a = cs::Alphabet::integers(dm_k);
            report["results"] = Json{{"density", cs::rat_str(r.density)},
                                     {"witness", words_json(*a, r.witness)},
                                     {"exact", r.exact}};
        } else if (dhj_sections->parsed()) {
            format = ds_c.format;
            cs::DenseSet D = cs::dense_set_from_json(read_json_input(ds_c.input));
            cs::SectionsResult r = cs::dense_sections_search(D, ds_m, cs::parse_rational(ds_eta));
            Json densities = Json::array();
            for (const Rational& q : r.section_densities) densities.push_back(cs::rat_str(q));
            report["results"] = Json{
                {"found", r.found},
                {"ell", r.ell},
                {"V", cs::variable_word_to_json(r.V.generator)},
                {"section_densities", std::move(densities)},
                {"threshold", cs::rat_str(r.threshold)},
                {"best_worst_section", cs::rat_str(r.best_worst_section)},
                {"threshold_guaranteed", r.threshold_guaranteed}};
            if (r.found)
                for (const Rational& q : r.section_densities)
                    tr.check("section density above threshold", q, ">=", r.threshold);
        } else if (dhj_increment->parsed()) {
            format = di_c.format;
            Json j = read_json_input(di_c.input);
            cs::IncrementInput in;
            in.index_count = j.at("index_count").get<long long>();
            in.tail_count = j.at("tail_count").get<long long>();
            in.epsilon = cs::parse_rational(j.at("epsilon").get<std::string>());
            in.sigma = cs::parse_rational(j.at("sigma").get<std::string>());
            in.k = j.at("k").get<int>();
            for (const char* key : {"S", "D"}) {
                auto& dest = std::string(key) == "S" ? in.S : in.D;
                for (const Json& sec : j.at(key)) {
                    std::set<long long> s;
                    for (const Json& e : sec) s.insert(e.get<long long>());
                    dest.push_back(std::move(s));
                }
            }
            cs::IncrementResult r = cs::density_increment_step(in);
            tr.check("returned conditional above the increment bound", r.conditional, ">=",
                     r.lower);
            report["results"] = Json{{"s", r.s},
                                     {"conditional", cs::rat_str(r.conditional)},
                                     {"p3_S", cs::rat_str(r.p3_S)},
                                     {"p3_D_given_S", cs::rat_str(r.p3_D_given_S)},
                                     {"b_threshold", cs::rat_str(r.b_threshold)},
                                     {"lower", cs::rat_str(r.lower)},
                                     {"b_size", r.b_size}};
        } else if (verify->parsed()) {
            format = ve_c.format;
            cs::CubeProcess proc = cs::process_from_json(read_json_input(ve_c.input));
            const cs::Alphabet& a = *proc.alphabet;
            std::optional<std::set<int>> coords;
            if (!ve_coords.empty()) {
                coords.emplace();
                for (int c : parse_int_list(ve_coords)) coords->insert(c - 1);
            }
            cs::InsensitivityReport r = cs::verify_insensitive(
                proc, a.index_of(ve_alpha), a.index_of(ve_beta), std::nullopt, coords);
            Json j{{"insensitive", r.insensitive}};
            if (r.counterexample)
                j["counterexample"] = Json{
                    {"s", cs::word_to_json(a, r.counterexample->first)},
                    {"t", cs::word_to_json(a, r.counterexample->second)}};
            report["results"] = std::move(j);
            if (!r.insensitive) exit_code = 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    report["command"] = app.get_subcommands().front()->get_name();
    report["transcript"] = tr.entries;
    auto finished = std::chrono::steady_clock::now();
    report["elapsed_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(finished - started).count();
    emit(report, format);
    if (!tr.ok) return 1;
    return exit_code;
}
