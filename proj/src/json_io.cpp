#include "nami/json_io.hpp"

#include <fstream>

namespace nami {

using nlohmann::json;

namespace {

/// Rethrows json type errors as library errors so the CLI can separate
/// malformed syntax (json parse errors) from structural problems.
template <typename F>
auto structural(const char* what, F&& f) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw Error(std::string(what) + ": " + e.what());
    }
}

}  // namespace

json bn_to_json(const BayesNet& bn) {
    json vars = json::array();
    for (VarId v = 0; v < bn.size(); ++v)
        vars.push_back({{"name", bn.name(v)}, {"observed", bn.is_observed(v)}});
    json edges = json::array();
    for (const Edge& e : bn.edges())
        edges.push_back(json::array({bn.name(e.first), bn.name(e.second)}));
    return {{"variables", vars}, {"edges", edges}};
}

BayesNet bn_from_json(const json& j) {
    return structural("bn_from_json", [&] {
        std::vector<std::string> names;
        std::vector<std::string> observed;
        for (const auto& v : j.at("variables")) {
            names.push_back(v.at("name").get<std::string>());
            if (v.value("observed", false)) observed.push_back(names.back());
        }
        std::vector<std::pair<std::string, std::string>> edges;
        for (const auto& e : j.at("edges"))
            edges.emplace_back(e.at(0).get<std::string>(), e.at(1).get<std::string>());
        return BayesNet::from_names(names, edges, observed);
    });
}

json inverse_to_json(const InverseStructure& inv) {
    json j = bn_to_json(inv.graph);
    j["mode"] = to_string(inv.mode);
    if (!inv.elim_order.empty()) {
        json order = json::array();
        for (VarId v : inv.elim_order) order.push_back(inv.graph.name(v));
        j["elim_order"] = order;
    }
    return j;
}

InverseStructure inverse_from_json(const json& j) {
    return structural("inverse_from_json", [&] {
        BayesNet graph = bn_from_json(j);
        InverseMode mode = inverse_mode_from_string(j.at("mode").get<std::string>());
        std::vector<VarId> order;
        if (j.contains("elim_order"))
            for (const auto& nm : j.at("elim_order"))
                order.push_back(graph.index_of(nm.get<std::string>()));
        bool needs_order = mode == InverseMode::Forward || mode == InverseMode::Reverse ||
                           mode == InverseMode::Grouped;
        if (needs_order && order.empty())
            throw Error("inverse_from_json: elimination-based mode without elim_order");
        if (!needs_order && !order.empty())
            throw Error("inverse_from_json: elim_order given for a non-elimination mode");
        return InverseStructure{std::move(graph), mode, std::move(order), {}, {}};
    });
}

json discrete_bn_to_json(const DiscreteBN& bn) {
    json j = bn_to_json(bn.structure());
    json cpds = json::object();
    for (VarId v = 0; v < bn.structure().size(); ++v) {
        const Factor& f = bn.cpd(v);
        json parents = json::array();
        for (std::size_t k = 0; k + 1 < f.scope().size(); ++k)
            parents.push_back(bn.structure().name(f.scope()[k]));
        cpds[bn.structure().name(v)] = {
            {"parents", parents}, {"card", bn.card(v)}, {"table", f.values()}};
    }
    j["cpds"] = cpds;
    return j;
}

namespace {

/// Reorders a CPD table given with parent dimensions in `given` order into
/// the canonical (ascending-id parents..., child) order.
Factor reorder_cpd(const std::vector<VarId>& given_scope, const std::vector<int>& given_cards,
                   const std::vector<double>& table, const std::vector<VarId>& want_scope) {
    const std::size_t k = given_scope.size();
    std::vector<std::size_t> given_stride(k);
    std::size_t s = 1;
    for (int i = static_cast<int>(k) - 1; i >= 0; --i) {
        given_stride[i] = s;
        s *= static_cast<std::size_t>(given_cards[i]);
    }
    std::vector<int> want_cards(k);
    std::vector<std::size_t> stride_in_given(k);
    for (std::size_t i = 0; i < k; ++i) {
        auto it = std::find(given_scope.begin(), given_scope.end(), want_scope[i]);
        if (it == given_scope.end()) throw Error("cpd: parents do not match the structure");
        std::size_t pos = static_cast<std::size_t>(it - given_scope.begin());
        want_cards[i] = given_cards[pos];
        stride_in_given[i] = given_stride[pos];
    }
    std::size_t total = table.size();
    std::vector<double> out(total);
    std::vector<int> digits(k, 0);
    std::size_t src = 0;
    for (std::size_t idx = 0; idx < total; ++idx) {
        out[idx] = table[src];
        for (int r = static_cast<int>(k) - 1; r >= 0; --r) {
            ++digits[r];
            src += stride_in_given[r];
            if (digits[r] < want_cards[r]) break;
            src -= stride_in_given[r] * static_cast<std::size_t>(want_cards[r]);
            digits[r] = 0;
        }
    }
    return Factor(want_scope, want_cards, std::move(out));
}

}  // namespace

DiscreteBN discrete_bn_from_json(const json& j) {
    return structural("discrete_bn_from_json", [&] {
        BayesNet structure = bn_from_json(j);
        const auto& cpds_j = j.at("cpds");
        const int n = structure.size();
        std::vector<int> cards(n, 0);
        for (VarId v = 0; v < n; ++v) {
            const auto& e = cpds_j.at(structure.name(v));
            cards[v] = e.at("card").get<int>();
            if (cards[v] < 1) throw Error("cpd: cardinality must be positive");
        }
        std::vector<Factor> cpds;
        cpds.reserve(n);
        for (VarId v = 0; v < n; ++v) {
            const auto& e = cpds_j.at(structure.name(v));
            std::vector<VarId> given_scope;
            for (const auto& nm : e.at("parents"))
                given_scope.push_back(structure.index_of(nm.get<std::string>()));
            {
                auto sorted_given = given_scope;
                std::sort(sorted_given.begin(), sorted_given.end());
                if (sorted_given != structure.parents(v))
                    throw Error("cpd of " + structure.name(v) +
                                ": parents do not match the structure");
            }
            given_scope.push_back(v);
            std::vector<int> given_cards;
            for (VarId s : given_scope) given_cards.push_back(cards[s]);
            std::vector<double> table = e.at("table").get<std::vector<double>>();
            std::size_t expect = 1;
            for (int c : given_cards) expect *= static_cast<std::size_t>(c);
            if (table.size() != expect)
                throw Error("cpd of " + structure.name(v) + ": table has wrong length");
            std::vector<VarId> want_scope = structure.parents(v);
            want_scope.push_back(v);
            cpds.push_back(reorder_cpd(given_scope, given_cards, table, want_scope));
        }
        return DiscreteBN(std::move(structure), std::move(cards), std::move(cpds));
    });
}

json indep_set_to_json(const IndepSet& set, const BayesNet& names) {
    json out = json::array();
    for (const IndepAssertion& a : set.assertions()) {
        json z = json::array();
        for (std::uint64_t bits = a.z_mask; bits; bits &= bits - 1)
            z.push_back(names.name(__builtin_ctzll(bits)));
        out.push_back(json::array({names.name(a.x), z, json::array({names.name(a.y)})}));
    }
    return out;
}

std::string assertion_to_string(const IndepAssertion& a, const BayesNet& names) {
    std::string z;
    for (std::uint64_t bits = a.z_mask; bits; bits &= bits - 1) {
        if (!z.empty()) z += ",";
        z += names.name(__builtin_ctzll(bits));
    }
    return "(" + names.name(a.x) + " ⊥ " + names.name(a.y) + " | " + (z.empty() ? "∅" : z) +
           ")";
}

json report_to_json(const VerificationReport& rep, const BayesNet& names) {
    json j;
    j["nodes"] = rep.nodes;
    j["model_edges"] = rep.model_edges;
    j["inverse_edges"] = rep.inverse_edges;
    j["sampled"] = rep.sampled;
    j["is_imap"] = rep.imap.ok;
    if (rep.imap.witness) {
        const auto& w = *rep.imap.witness;
        json z = json::array();
        for (std::uint64_t bits = w.z_mask; bits; bits &= bits - 1)
            z.push_back(names.name(__builtin_ctzll(bits)));
        j["imap_witness"] = {{"x", names.name(w.x)}, {"y", names.name(w.y)}, {"z", z}};
    }
    if (rep.minimality) {
        j["is_minimal_imap"] = rep.minimality->ok;
        if (rep.minimality->removable_edge) {
            const Edge& e = *rep.minimality->removable_edge;
            j["removable_edge"] = json::array({names.name(e.first), names.name(e.second)});
        }
    } else {
        j["is_minimal_imap"] = nullptr;
    }
    j["is_natural"] = rep.naturalness.ok;
    if (rep.naturalness.into_descendant) {
        const Edge& e = *rep.naturalness.into_descendant;
        j["edge_into_descendant"] = json::array({names.name(e.first), names.name(e.second)});
    }
    if (rep.naturalness.into_ancestor) {
        const Edge& e = *rep.naturalness.into_ancestor;
        j["edge_into_ancestor"] = json::array({names.name(e.first), names.name(e.second)});
    }
    return j;
}

json mask_bundle_to_json(const MaskStack& stack, const MaskSpec& spec) {
    json labels = json::array();
    for (const auto& l : spec.labels)
        labels.push_back({{"id", l.id}, {"members", l.members}});
    auto mat = [](const MaskMatrix& m) {
        return json{{"rows", m.rows}, {"cols", m.cols}, {"data", m.data}};
    };
    json masks = json::array();
    for (const auto& m : stack.masks) masks.push_back(mat(m));
    json j{{"kind", spec.kind},
           {"layer_sizes", spec.layer_sizes},
           {"seed", spec.seed},
           {"labels", labels},
           {"input_labels", spec.input_labels},
           {"hidden_labels", spec.hidden_labels},
           {"output_labels", spec.output_labels},
           {"masks", masks}};
    if (stack.skip) j["skip"] = mat(*stack.skip);
    return j;
}

MaskSpec mask_spec_from_json(const json& j) {
    return structural("mask_spec_from_json", [&] {
        MaskSpec spec;
        spec.kind = j.value("kind", "subset");
        spec.seed = j.value("seed", std::uint64_t{0});
        spec.layer_sizes = j.at("layer_sizes").get<std::vector<int>>();
        for (const auto& l : j.at("labels")) {
            SubsetLabel lab;
            lab.id = l.at("id").get<int>();
            lab.members = l.at("members").get<std::vector<VarId>>();
            std::sort(lab.members.begin(), lab.members.end());
            spec.labels.push_back(std::move(lab));
        }
        std::sort(spec.labels.begin(), spec.labels.end(),
                  [](const auto& a, const auto& b) { return a.id < b.id; });
        for (std::size_t i = 0; i < spec.labels.size(); ++i)
            if (spec.labels[i].id != static_cast<int>(i))
                throw Error("mask spec: label ids must be 0..k-1");
        spec.input_labels = j.at("input_labels").get<std::vector<int>>();
        spec.hidden_labels = j.at("hidden_labels").get<std::vector<std::vector<int>>>();
        spec.output_labels = j.at("output_labels").get<std::vector<int>>();
        return spec;
    });
}

void write_npy_u8(const std::string& path, const MaskMatrix& m) {
    std::string header = "{'descr': '|u1', 'fortran_order': False, 'shape': (" +
                         std::to_string(m.rows) + ", " + std::to_string(m.cols) + "), }";
    std::size_t unpadded = 10 + header.size() + 1;
    std::size_t padded = (unpadded + 63) / 64 * 64;
    header.append(padded - unpadded, ' ');
    header.push_back('\n');

    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    const char magic[] = "\x93NUMPY\x01\x00";
    out.write(magic, 8);
    std::uint16_t hlen = static_cast<std::uint16_t>(header.size());
    out.put(static_cast<char>(hlen & 0xff));
    out.put(static_cast<char>(hlen >> 8));
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    out.write(reinterpret_cast<const char*>(m.data.data()),
              static_cast<std::streamsize>(m.data.size()));
    if (!out) throw Error("failed while writing " + path);
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    return json::parse(in);  // parse errors propagate as json::parse_error
}

void save_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << content;
    if (!out) throw Error("failed while writing " + path);
}

}  // namespace nami
