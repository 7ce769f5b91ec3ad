#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nami/bench.hpp"
#include "nami/dot.hpp"
#include "nami/generators.hpp"
#include "nami/json_io.hpp"
#include "nami/masks.hpp"
#include "nami/verification.hpp"

namespace py = pybind11;
using namespace nami;

namespace {

BayesNet bn_from_json_str(const std::string& text) {
    return bn_from_json(nlohmann::json::parse(text));
}

py::array_t<std::uint8_t> mask_to_array(const MaskMatrix& m) {
    py::array_t<std::uint8_t> arr({m.rows, m.cols});
    std::memcpy(arr.mutable_data(), m.data.data(), m.data.size());
    return arr;
}

py::list stack_to_list(const MaskStack& stack) {
    py::list out;
    for (const auto& m : stack.masks) out.append(mask_to_array(m));
    return out;
}

py::dict report_to_dict(const VerificationReport& rep, const BayesNet& names) {
    py::module_ json = py::module_::import("json");
    return json.attr("loads")(report_to_json(rep, names).dump());
}

InverseStructure invert_by_mode(const BayesNet& bn, const std::string& mode) {
    InverseMode m = inverse_mode_from_string(mode);
    switch (m) {
        case InverseMode::Forward:
        case InverseMode::Reverse:
            return nami_invert(bn, m);
        case InverseMode::Heuristic:
            return stuhlmuller_invert(bn);
        case InverseMode::FullyConnected:
            return fully_connected_inverse(bn);
        case InverseMode::MeanField:
            return mean_field_inverse(bn);
        default:
            throw Error("grouped inversion needs explicit groups; use nami_invert");
    }
}

}  // namespace

PYBIND11_MODULE(_nami, m) {
    m.doc() = "Faithful inversion of Bayesian-network structures, structure "
              "certification, and autoregressive mask generation";

    py::register_exception<SizeCapError>(m, "SizeCapError");
    static py::exception<Error> error_type(m, "GraphError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const SizeCapError&) {
            throw;  // handled by its own registered type
        } catch (const Error& e) {
            py::set_error(error_type, e.what());
        }
    });

    py::class_<BayesNet>(m, "BayesNet")
        .def(py::init([](const std::vector<std::string>& names,
                         const std::vector<std::pair<std::string, std::string>>& edges,
                         const std::vector<std::string>& observed) {
                 return BayesNet::from_names(names, edges, observed);
             }),
             py::arg("names"), py::arg("edges"), py::arg("observed"))
        .def_static("from_json", &bn_from_json_str)
        .def("to_json", [](const BayesNet& bn) { return bn_to_json(bn).dump(); })
        .def("to_dot", [](const BayesNet& bn) { return to_dot(bn); })
        .def("__len__", &BayesNet::size)
        .def("name", &BayesNet::name)
        .def("index_of", &BayesNet::index_of)
        .def("is_observed", &BayesNet::is_observed)
        .def("parents", [](const BayesNet& bn, VarId v) { return bn.parents(v); })
        .def("children", [](const BayesNet& bn, VarId v) { return bn.children(v); })
        .def("edges", [](const BayesNet& bn) { return bn.edges(); })
        .def("observed_vars", &BayesNet::observed_vars)
        .def("latent_vars", &BayesNet::latent_vars)
        .def("topological_order", [](const BayesNet& bn) { return topological_order(bn); })
        .def("markov_blanket", [](const BayesNet& bn, VarId v) { return markov_blanket(bn, v); })
        .def("moral_edges", [](const BayesNet& bn) { return moralize(bn).edges(); })
        .def("immoralities", [](const BayesNet& bn) { return immoralities(bn); });

    py::class_<InverseStructure>(m, "InverseStructure")
        .def_property_readonly("graph", [](const InverseStructure& s) { return s.graph; })
        .def_property_readonly("mode",
                               [](const InverseStructure& s) { return to_string(s.mode); })
        .def_property_readonly("elim_order",
                               [](const InverseStructure& s) { return s.elim_order; })
        .def("to_json", [](const InverseStructure& s) { return inverse_to_json(s).dump(); })
        .def("to_dot", [](const InverseStructure& s) { return to_dot(s); })
        .def("edge_count", [](const InverseStructure& s) { return edge_count(s); })
        .def_static("from_json", [](const std::string& text) {
            return inverse_from_json(nlohmann::json::parse(text));
        });

    m.def("invert", &invert_by_mode, py::arg("bn"), py::arg("mode") = "forward",
          "Build an inverse structure: forward, reverse, heuristic, "
          "fully-connected or mean-field");
    m.def(
        "nami_invert",
        [](const BayesNet& bn, const std::string& mode,
           const std::vector<std::vector<VarId>>& groups, bool include_observed) {
            InvertOptions opts;
            opts.groups = groups;
            opts.include_observed = include_observed;
            return nami_invert(bn, inverse_mode_from_string(mode), opts);
        },
        py::arg("bn"), py::arg("mode") = "forward",
        py::arg("groups") = std::vector<std::vector<VarId>>{},
        py::arg("include_observed") = false);

    m.def("d_separated",
          [](const BayesNet& bn, const std::vector<VarId>& x, const std::vector<VarId>& y,
             const std::vector<VarId>& z) { return d_separated(bn, x, y, z); });
    m.def("enumerate_independencies", [](const BayesNet& bn, int cap) {
        py::list out;
        for (const IndepAssertion& a : enumerate_independencies(bn, cap).assertions()) {
            std::vector<VarId> z;
            for (std::uint64_t bits = a.z_mask; bits; bits &= bits - 1)
                z.push_back(__builtin_ctzll(bits));
            out.append(py::make_tuple(a.x, a.y, z));
        }
        return out;
    }, py::arg("bn"), py::arg("cap") = kDefaultEnumCap);

    m.def("is_imap", [](const BayesNet& h, const BayesNet& g, int cap) {
        return is_imap(h, g, cap).ok;
    }, py::arg("h"), py::arg("g"), py::arg("cap") = kDefaultEnumCap);
    m.def("is_minimal_imap", [](const BayesNet& h, const BayesNet& g, int cap) {
        return is_minimal_imap(h, g, cap).ok;
    }, py::arg("h"), py::arg("g"), py::arg("cap") = kDefaultEnumCap);
    m.def("is_natural", [](const BayesNet& h, const BayesNet& g) {
        return is_natural(h, g).ok;
    });
    m.def("verify", [](const InverseStructure& h, const BayesNet& g, int cap, bool sampled) {
        VerificationOptions opts;
        opts.cap = cap;
        opts.allow_sampled = sampled;
        return report_to_dict(verify(h, g, opts), g);
    }, py::arg("h"), py::arg("g"), py::arg("cap") = kDefaultEnumCap,
       py::arg("allow_sampled") = true);

    m.def("expected_posterior_kl", [](const std::string& model_json,
                                      const InverseStructure& inv) {
        DiscreteBN p = discrete_bn_from_json(nlohmann::json::parse(model_json));
        return expected_posterior_kl(p, fit_inverse_exact(p, inv).q);
    }, py::arg("model_json"), py::arg("inverse"),
       "Exact expected posterior KL of the exactly fitted inverse, from a "
       "discrete model given as JSON (with cpds)");

    m.def("made_masks", [](int n_latent, int n_obs, const std::vector<int>& hidden,
                           std::uint64_t seed, bool ensure_coverage, bool include_skip) {
        MadeOptions opts;
        opts.ensure_coverage = ensure_coverage;
        opts.include_skip = include_skip;
        auto [stack, spec] = made_masks(n_latent, n_obs, hidden, seed, opts);
        py::dict out;
        out["masks"] = stack_to_list(stack);
        if (stack.skip) out["skip"] = mask_to_array(*stack.skip);
        out["layer_sizes"] = spec.layer_sizes;
        return out;
    }, py::arg("n_latent"), py::arg("n_obs"), py::arg("hidden"), py::arg("seed") = 0,
       py::arg("ensure_coverage") = true, py::arg("include_skip") = true);

    m.def("tree_masks", [](int depth, const std::vector<int>& hidden, std::uint64_t seed) {
        MaskSpec spec = tree_made_spec(depth, hidden, seed);
        MaskStack stack = subset_masks(spec);
        py::dict out;
        out["masks"] = stack_to_list(stack);
        if (stack.skip) out["skip"] = mask_to_array(*stack.skip);
        out["layer_sizes"] = spec.layer_sizes;
        return out;
    }, py::arg("depth"), py::arg("hidden"), py::arg("seed") = 0);

    m.def("chain_bn", &chain_bn, py::arg("n"), py::arg("observed_tail") = 1);
    m.def("binary_tree_bn", &binary_tree_bn, py::arg("depth"));
    m.def("gmm_bn", &gmm_bn, py::arg("n_points"));
    m.def("random_dag", [](int n, double edge_prob, double observed_prob, std::uint64_t seed) {
        RandomDagOptions opts;
        opts.n = n;
        opts.edge_prob = edge_prob;
        opts.observed_prob = observed_prob;
        return random_dag(opts, seed);
    }, py::arg("n"), py::arg("edge_prob") = 0.35, py::arg("observed_prob") = 0.3,
       py::arg("seed") = 0);
}
