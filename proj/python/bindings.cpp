#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cubestruct/examples.hpp"
#include "cubestruct/extractor.hpp"
#include "cubestruct/json_io.hpp"

namespace py = pybind11;
namespace cs = cubestruct;

namespace {

// The binding layer speaks JSON strings; rationals stay exact as "a/b".
std::string dumps(const cs::Json& j) { return j.dump(); }

cs::Rational rat(const std::string& s) { return cs::parse_rational(s); }

std::vector<cs::Word> to_words(const cs::AlphabetPtr& a,
                               const std::vector<std::vector<std::string>>& tokens) {
    std::vector<cs::Word> out;
    for (const auto& w : tokens) {
        cs::Word word;
        for (const std::string& t : w) word.letters.push_back(a->index_of(t));
        out.push_back(std::move(word));
    }
    return out;
}

cs::AnalysisParams params_of(const std::string& eps, const std::string& sigma,
                             const std::string& eta, int kappa, int m) {
    return cs::AnalysisParams{rat(eps), rat(sigma), rat(eta), kappa, m};
}

cs::Json stats_json(const cs::Alphabet& a, const std::vector<cs::IndexStat>& stats) {
    cs::Json arr = cs::Json::array();
    for (const cs::IndexStat& s : stats) {
        cs::Json e{{"t", cs::word_to_json(a, s.t)},
                   {"relevant", s.relevant},
                   {"p_S", cs::rat_str(s.p_S)}};
        if (s.p_D_given_S) e["p_D_given_S"] = cs::rat_str(*s.p_D_given_S);
        arr.push_back(std::move(e));
    }
    return arr;
}

}  // namespace

PYBIND11_MODULE(_cubestruct, mod) {
    mod.doc() = "exact analysis of stochastic processes indexed by the hypercube";

    py::class_<cs::CubeProcess>(mod, "CubeProcess")
        .def_property_readonly("n", [](const cs::CubeProcess& p) { return p.n; })
        .def_property_readonly("k", &cs::CubeProcess::k)
        .def("to_json", [](const cs::CubeProcess& p) { return dumps(cs::process_to_json(p)); })
        .def("marginal", [](const cs::CubeProcess& p, const std::vector<std::string>& t) {
            return cs::rat_str(cs::prob(p.at(to_words(p.alphabet, {t}).front())));
        });

    mod.def("process_from_json", [](const std::string& s) {
        return cs::process_from_json(cs::Json::parse(s));
    });

    mod.def("example_intro", [](int n, const std::string& eps) {
        return cs::example_intro(n, rat(eps));
    });
    mod.def("example_intro_restricted", [](int n, const std::string& eps) {
        return cs::example_intro_restricted(n, rat(eps));
    });
    mod.def("example_one_sep", [](int n, const std::string& eps, bool relaxed) {
        return cs::example_one_sep(n, rat(eps), relaxed);
    }, py::arg("n"), py::arg("epsilon"), py::arg("relaxed") = false);
    mod.def("example_simplicial", [](int n, const std::string& eps) {
        return cs::example_simplicial(n, rat(eps));
    });
    mod.def("independent_process", [](int k, int n, const std::string& eps) {
        return cs::independent_process(cs::Alphabet::integers(k), n, rat(eps));
    });
    mod.def("random_process", [](int k, int n, const std::string& eps, std::uint64_t seed) {
        return cs::random_process(cs::Alphabet::integers(k), n, rat(eps), seed);
    });

    mod.def("type_of_tuple", [](const std::vector<std::string>& alphabet,
                                const std::vector<std::vector<std::string>>& words) {
        auto a = std::make_shared<const cs::Alphabet>(alphabet);
        cs::TypeTuple t = cs::type_of_tuple(to_words(a, words));
        cs::Json cols = cs::Json::array();
        for (const cs::Word& c : t.columns) cols.push_back(cs::word_to_json(*a, c));
        return dumps(cs::Json{{"columns", cols}, {"dim", t.dim}});
    });
    mod.def("separation", [](const std::vector<std::string>& alphabet,
                             const std::vector<std::vector<std::string>>& words) {
        auto a = std::make_shared<const cs::Alphabet>(alphabet);
        std::vector<cs::Word> ws = to_words(a, words);
        cs::SeparationIndex tuple_idx = cs::separation_index_tuple(ws);
        cs::SeparationIndex set_idx = cs::separation_index_set(ws);
        cs::Json j{{"s_tuple", tuple_idx.value},
                   {"s_set", set_idx.value},
                   {"s_set_exact", set_idx.exact}};
        if (set_idx.witness_enumeration) j["enumeration"] = *set_idx.witness_enumeration;
        return dumps(j);
    });
    mod.def("mc_one_separated_rate",
            [](int k, int n, int p, long long samples, std::uint64_t seed) {
        cs::McSepResult r = cs::mc_one_separated_rate(k, n, p, samples, seed);
        return dumps(cs::Json{{"one_separated", r.one_separated},
                              {"duplicates", r.duplicates},
                              {"samples", r.samples},
                              {"empirical_rate", r.empirical_rate},
                              {"bound", r.bound}});
    });

    mod.def("analyze", [](const cs::CubeProcess& proc, int kappa, int m) {
        cs::LineModulusResult lines = cs::stationarity_modulus_lines(proc);
        cs::TypeModulusResult types = cs::stationarity_modulus_types(
            proc, kappa > 0 ? kappa : proc.k(), m);
        cs::BaseRate base = cs::base_rate(proc);
        return dumps(cs::Json{
            {"eta_star_lines", cs::rat_str(lines.eta_star)},
            {"eta_star_types", cs::rat_str(types.eta_star)},
            {"base_rate", cs::Json{{"epsilon", cs::rat_str(base.epsilon)},
                                   {"max_dev", cs::rat_str(base.max_dev)}}}});
    }, py::arg("proc"), py::arg("kappa") = 0, py::arg("m") = 1);

    mod.def("extract_line_witness",
            [](const cs::CubeProcess& proc, const std::string& eps, const std::string& sigma,
               const std::string& eta, int kappa, int m, bool relax_dimension) {
        cs::ExtractOptions opts;
        opts.relax_dimension = relax_dimension;
        cs::LineExtractResult r = cs::extract_line_witness(
            proc, params_of(eps, sigma, eta, kappa > 0 ? kappa : proc.k(), m), opts);
        cs::Json j;
        if (r.certificate) {
            j["outcome"] = "pseudorandom-certificate";
            j["worst_deviation"] = cs::rat_str(r.certificate->worst_deviation);
        } else {
            const cs::LineWitness& w = *r.witness;
            const cs::Alphabet& a = *proc.alphabet;
            cs::Json gamma0 = cs::Json::array();
            for (cs::Symbol s : w.gamma0) gamma0.push_back(a.token(s));
            j["outcome"] = "witness";
            j["gamma0"] = std::move(gamma0);
            j["beta"] = a.token(w.beta);
            j["branch"] = cs::label_str(w.branch);
            j["stats"] = stats_json(a, w.stats);
            j["p_S_lower"] = cs::rat_str(w.p_S_lower);
            j["conditional_lower"] = cs::rat_str(w.conditional_lower);
            j["bounds_hold"] = w.bounds_hold;
        }
        return dumps(j);
    }, py::arg("proc"), py::arg("epsilon"), py::arg("sigma"), py::arg("eta"),
       py::arg("kappa") = 0, py::arg("m") = 1, py::arg("relax_dimension") = false);

    mod.def("find_line_in_set", [](const std::string& dense_json) {
        cs::DenseSet D = cs::dense_set_from_json(cs::Json::parse(dense_json));
        std::optional<cs::VariableWord> v = cs::find_line_in_set(D);
        cs::Json j{{"found", v.has_value()}};
        if (v) j["line_word"] = cs::variable_word_to_json(*v);
        return dumps(j);
    });
    mod.def("max_linefree_density", [](int k, int n) {
        cs::LinefreeResult r = cs::max_linefree_density(k, n);
        return dumps(cs::Json{{"density", cs::rat_str(r.density)}, {"exact", r.exact}});
    });
}
