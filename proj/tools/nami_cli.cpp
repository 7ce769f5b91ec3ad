#include <cstdlib>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "nami/bench.hpp"
#include "nami/dot.hpp"
#include "nami/json_io.hpp"
#include "nami/verification.hpp"

using nlohmann::json;

namespace {

constexpr int kExitPropertyFailure = 1;
constexpr int kExitParseError = 2;
constexpr int kExitSemanticError = 3;

int enum_cap_from_env() {
    const char* s = std::getenv("NAMI_ENUM_CAP");
    if (!s || !*s) return nami::kDefaultEnumCap;
    try {
        int cap = std::stoi(s);
        if (cap < 1) throw nami::Error("NAMI_ENUM_CAP must be positive");
        return cap;
    } catch (const std::exception&) {
        throw nami::Error("NAMI_ENUM_CAP is not an integer");
    }
}

void write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty() || out_path == "-")
        std::cout << content;
    else
        nami::save_text_file(out_path, content);
}

std::string format_vars(const nami::BayesNet& bn, const std::vector<nami::VarId>& vs) {
    if (vs.empty()) return "∅";
    std::string s = "{";
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (i) s += ",";
        s += bn.name(vs[i]);
    }
    return s + "}";
}

std::string format_edges(const nami::BayesNet& bn, const std::vector<nami::Edge>& es) {
    if (es.empty()) return "∅";
    std::string s = "{";
    for (std::size_t i = 0; i < es.size(); ++i) {
        if (i) s += ",";
        s += bn.name(es[i].first) + "-" + bn.name(es[i].second);
    }
    return s + "}";
}

nami::BayesNet load_bn(const std::string& path) {
    return nami::bn_from_json(nami::load_json_file(path));
}

/// Remaps an inverse loaded from disk onto the model's variable indexing
/// and enforces the inverse shape contract.
nami::InverseStructure align_inverse(const nami::InverseStructure& inv,
                                     const nami::BayesNet& model) {
    std::vector<nami::Edge> edges;
    for (const nami::Edge& e : inv.graph.edges())
        edges.emplace_back(model.index_of(inv.graph.name(e.first)),
                           model.index_of(inv.graph.name(e.second)));
    if (inv.graph.size() != model.size())
        throw nami::Error("inverse and model universes differ in size");
    nami::BayesNet graph(model.variables(), edges);
    for (nami::VarId v = 0; v < inv.graph.size(); ++v)
        if (inv.graph.is_observed(v) != model.is_observed(model.index_of(inv.graph.name(v))))
            throw nami::Error("invalid inverse: observed partition differs from the model");
    std::vector<nami::VarId> order;
    for (nami::VarId v : inv.elim_order) order.push_back(model.index_of(inv.graph.name(v)));
    nami::validate_inverse_shape(graph, model);
    return {std::move(graph), inv.mode, std::move(order), {}, {}};
}

nami::InverseStructure run_inversion(const nami::BayesNet& bn, const std::string& mode,
                                     const std::string& groups_json) {
    nami::InvertOptions opts;
    if (!groups_json.empty()) {
        json groups;
        try {
            groups = json::parse(groups_json);
        } catch (const json::parse_error& e) {
            throw nami::Error(std::string("bad --groups value: ") + e.what());
        }
        for (const auto& g : groups) {
            std::vector<nami::VarId> ids;
            for (const auto& nm : g) ids.push_back(bn.index_of(nm.get<std::string>()));
            opts.groups.push_back(std::move(ids));
        }
        if (mode != "forward" && mode != "reverse")
            throw nami::Error("--groups requires mode forward or reverse");
    }
    if (mode == "forward") return nami::nami_invert(bn, nami::InverseMode::Forward, opts);
    if (mode == "reverse") return nami::nami_invert(bn, nami::InverseMode::Reverse, opts);
    if (!groups_json.empty()) throw nami::Error("--groups requires mode forward or reverse");
    if (mode == "heuristic") return nami::stuhlmuller_invert(bn);
    if (mode == "full" || mode == "fully-connected") return nami::fully_connected_inverse(bn);
    if (mode == "mean-field") return nami::mean_field_inverse(bn);
    throw nami::Error("unknown mode: " + mode);
}

int cmd_invert(const std::string& input, const std::string& mode, const std::string& groups,
               const std::string& out, const std::string& format) {
    nami::BayesNet bn = load_bn(input);
    nami::InverseStructure inv = run_inversion(bn, mode, groups);
    if (format == "json")
        write_output(out, nami::inverse_to_json(inv).dump(2) + "\n");
    else if (format == "dot")
        write_output(out, nami::to_dot(inv));
    else
        throw nami::Error("unknown format: " + format);
    return 0;
}

int cmd_trace(const std::string& input, const std::string& mode, const std::string& groups) {
    if (mode != "forward" && mode != "reverse")
        throw nami::Error("trace requires mode forward or reverse");
    nami::BayesNet bn = load_bn(input);
    nami::InverseStructure inv = run_inversion(bn, mode, groups);
    std::ostringstream os;
    os << "0: moralize fill=" << format_edges(bn, inv.moral_fills) << "\n";
    for (std::size_t i = 0; i < inv.steps.size(); ++i) {
        const auto& st = inv.steps[i];
        os << (i + 1) << ": S=" << format_vars(bn, st.frontier) << " v=" << bn.name(st.v)
           << " fill=" << format_edges(bn, st.fills) << " Pa=" << format_vars(bn, st.parents)
           << "\n";
    }
    std::cout << os.str();
    return 0;
}

int cmd_verify(const std::string& model_path, const std::string& inverse_path, bool as_json,
               bool emit_indep, int cap, std::uint64_t seed) {
    nami::BayesNet model = load_bn(model_path);
    nami::InverseStructure inv =
        align_inverse(nami::inverse_from_json(nami::load_json_file(inverse_path)), model);

    nami::VerificationOptions opts;
    opts.cap = cap;
    opts.allow_sampled = true;
    opts.seed = seed;
    nami::VerificationReport rep = nami::verify(inv, model, opts);

    if (as_json) {
        json j = nami::report_to_json(rep, model);
        if (emit_indep && model.size() <= cap)
            j["independencies"] =
                nami::indep_set_to_json(nami::enumerate_independencies(inv.graph, cap), model);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "nodes: " << rep.nodes << "  model edges: " << rep.model_edges
                  << "  inverse edges: " << rep.inverse_edges << "\n";
        if (rep.sampled) std::cout << "mode: sampled, not exhaustive\n";
        std::cout << "is_imap: " << (rep.imap.ok ? "true" : "false");
        if (rep.imap.witness)
            std::cout << "  witness: " << nami::assertion_to_string(*rep.imap.witness, model);
        std::cout << "\n";
        if (rep.minimality) {
            std::cout << "is_minimal_imap: " << (rep.minimality->ok ? "true" : "false");
            if (rep.minimality->removable_edge)
                std::cout << "  removable edge: "
                          << model.name(rep.minimality->removable_edge->first) << " -> "
                          << model.name(rep.minimality->removable_edge->second);
            std::cout << "\n";
        } else {
            std::cout << "is_minimal_imap: skipped (not an I-map)\n";
        }
        std::cout << "is_natural: " << (rep.naturalness.ok ? "true" : "false");
        if (!rep.naturalness.ok) {
            const auto& d = *rep.naturalness.into_descendant;
            const auto& a = *rep.naturalness.into_ancestor;
            std::cout << "  into-descendant: " << model.name(d.first) << " -> "
                      << model.name(d.second) << "  into-ancestor: " << model.name(a.first)
                      << " -> " << model.name(a.second);
        }
        std::cout << "\n";
        if (emit_indep && model.size() <= cap)
            std::cout << nami::indep_set_to_json(nami::enumerate_independencies(inv.graph, cap),
                                                 model)
                             .dump()
                      << "\n";
    }
    return rep.all_passed() ? 0 : kExitPropertyFailure;
}

int cmd_kl(const std::string& model_path, const std::string& inverse_path) {
    nami::DiscreteBN model = nami::discrete_bn_from_json(nami::load_json_file(model_path));
    nami::InverseStructure inv = align_inverse(
        nami::inverse_from_json(nami::load_json_file(inverse_path)), model.structure());
    nami::ExactFit fit = nami::fit_inverse_exact(model, inv);
    try {
        double kl = nami::expected_posterior_kl(model, fit.q);
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.12g", kl);
        std::cout << buf << "\n";
        return 0;
    } catch (const nami::SupportError& e) {
        std::cerr << "support error: " << e.what() << "\nassignment:";
        for (std::size_t v = 0; v < e.assignment.size(); ++v)
            std::cerr << " " << model.structure().name(static_cast<nami::VarId>(v)) << "="
                      << e.assignment[v];
        std::cerr << "\n";
        return kExitPropertyFailure;
    }
}

std::vector<int> parse_sizes(const std::string& csv) {
    std::vector<int> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stoi(tok));
    }
    if (out.empty()) throw nami::Error("--sizes is empty");
    return out;
}

int cmd_bench(const std::string& family, const std::string& sizes, const std::string& mode,
              std::uint64_t seed, const std::string& out) {
    nami::InverseMode m = nami::inverse_mode_from_string(mode);
    if (m != nami::InverseMode::Forward && m != nami::InverseMode::Reverse)
        throw nami::Error("bench supports modes forward and reverse");
    auto rows = nami::run_bench(nami::bench_family_from_string(family), parse_sizes(sizes), m,
                                seed);
    write_output(out, nami::bench_csv(rows));
    return 0;
}

struct MaskArgs {
    std::string kind = "made";
    int latents = 2;
    int observed = 0;
    int depth = 3;
    std::string hidden = "64,64";
    std::uint64_t seed = 0;
    int outputs_per_factor = 1;
    bool no_coverage = false;
    bool no_skip = false;
    std::string spec_path;
    std::string out;
    std::string npy_prefix;
};

int cmd_masks(const MaskArgs& a) {
    nami::MaskStack stack;
    nami::MaskSpec spec;
    std::vector<int> hidden = parse_sizes(a.hidden);
    if (a.kind == "made") {
        nami::MadeOptions opts;
        opts.ensure_coverage = !a.no_coverage;
        opts.include_skip = !a.no_skip;
        opts.outputs_per_factor = a.outputs_per_factor;
        std::tie(stack, spec) = nami::made_masks(a.latents, a.observed, hidden, a.seed, opts);
    } else if (a.kind == "tree") {
        spec = nami::tree_made_spec(a.depth, hidden, a.seed, !a.no_coverage);
        stack = nami::subset_masks(spec);
    } else if (a.kind == "subset") {
        if (a.spec_path.empty()) throw nami::Error("--kind subset requires --spec");
        spec = nami::mask_spec_from_json(nami::load_json_file(a.spec_path));
        stack = nami::subset_masks(spec);
    } else {
        throw nami::Error("unknown mask kind: " + a.kind);
    }
    write_output(a.out, nami::mask_bundle_to_json(stack, spec).dump(2) + "\n");
    if (!a.npy_prefix.empty()) {
        for (std::size_t i = 0; i < stack.masks.size(); ++i)
            nami::write_npy_u8(a.npy_prefix + ".w" + std::to_string(i) + ".npy",
                               stack.masks[i]);
        if (stack.skip) nami::write_npy_u8(a.npy_prefix + ".skip.npy", *stack.skip);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian-network inversion: builds faithful inverse structures, "
                 "certifies them, and emits masks for autoregressive parametrizations"};
    app.require_subcommand(1);

    int rc = 0;

    // invert
    auto* invert = app.add_subcommand("invert", "Invert a BN structure");
    std::string in_path, mode = "forward", groups, out_path, format = "json";
    invert->add_option("input", in_path, "model BN JSON")->required();
    invert->add_option("--mode", mode, "forward|reverse|heuristic|full|mean-field");
    invert->add_option("--groups", groups, "latent partition as JSON, e.g. [[\"z1\"],[\"y\"]]");
    invert->add_option("--out", out_path, "output path (default stdout)");
    invert->add_option("--format", format, "json|dot");
    invert->callback([&] { rc = cmd_invert(in_path, mode, groups, out_path, format); });

    // trace
    auto* trace = app.add_subcommand("trace", "Print the per-step inversion table");
    std::string t_in, t_mode = "forward", t_groups;
    trace->add_option("input", t_in, "model BN JSON")->required();
    trace->add_option("--mode", t_mode, "forward|reverse");
    trace->add_option("--groups", t_groups, "latent partition as JSON");
    trace->callback([&] { rc = cmd_trace(t_in, t_mode, t_groups); });

    // verify
    auto* verify = app.add_subcommand("verify", "Certify an inverse against a model");
    std::string v_model, v_inverse;
    bool v_json = false, v_emit = false;
    int v_cap = enum_cap_from_env();
    verify->add_option("model", v_model, "model BN JSON")->required();
    verify->add_option("inverse", v_inverse, "inverse JSON")->required();
    verify->add_flag("--json", v_json, "emit the report as JSON");
    verify->add_flag("--emit-independencies", v_emit, "also emit the inverse's independencies");
    verify->add_option("--cap", v_cap, "exhaustive-enumeration cap (default 14)");
    std::uint64_t v_seed = 0;
    verify->add_option("--seed", v_seed, "seed for sampled mode above the cap");
    verify->callback([&] { rc = cmd_verify(v_model, v_inverse, v_json, v_emit, v_cap, v_seed); });

    // kl
    auto* kl = app.add_subcommand("kl", "Exact expected posterior KL of an exactly fitted inverse");
    std::string k_model, k_inverse;
    kl->add_option("model", k_model, "discrete model JSON (with cpds)")->required();
    kl->add_option("inverse", k_inverse, "inverse JSON")->required();
    kl->callback([&] { rc = cmd_kl(k_model, k_inverse); });

    // masks
    auto* masks = app.add_subcommand("masks", "Generate masking matrices");
    MaskArgs ma;
    masks->add_option("--kind", ma.kind, "made|tree|subset");
    masks->add_option("--latents", ma.latents, "latent count (made)");
    masks->add_option("--observed", ma.observed, "observation count (made)");
    masks->add_option("--depth", ma.depth, "tree depth (tree)");
    masks->add_option("--hidden", ma.hidden, "hidden layer sizes, e.g. 64,64");
    masks->add_option("--seed", ma.seed, "label seed");
    masks->add_option("--outputs-per-factor", ma.outputs_per_factor, "output units per factor");
    masks->add_flag("--no-ensure-coverage", ma.no_coverage, "pure-uniform label assignment");
    masks->add_flag("--no-skip", ma.no_skip, "omit the input->output skip mask (made)");
    masks->add_option("--spec", ma.spec_path, "mask spec JSON (subset)");
    masks->add_option("--out", ma.out, "output path (default stdout)");
    masks->add_option("--npy-prefix", ma.npy_prefix, "also write <prefix>.w<i>.npy files");
    masks->callback([&] { rc = cmd_masks(ma); });

    // bench
    auto* bench = app.add_subcommand("bench", "Inversion scaling benchmark (CSV)");
    std::string b_family = "chain", b_sizes = "100,1000,10000", b_mode = "forward", b_out;
    std::uint64_t b_seed = 0;
    bench->add_option("--family", b_family, "chain|tree|random");
    bench->add_option("--sizes", b_sizes, "instance sizes (depths for tree)");
    bench->add_option("--mode", b_mode, "forward|reverse");
    bench->add_option("--seed", b_seed, "seed for the random family");
    bench->add_option("--out", b_out, "output path (default stdout)");
    bench->callback([&] { rc = cmd_bench(b_family, b_sizes, b_mode, b_seed, b_out); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const json::parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParseError;
    } catch (const nami::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSemanticError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSemanticError;
    }
    return rc;
}
