#include "nami/dot.hpp"

#include <algorithm>
#include <sstream>

namespace nami {

namespace {

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

void emit_nodes(std::ostringstream& os, const BayesNet& bn) {
    for (VarId v = 0; v < bn.size(); ++v) {
        os << "  " << quoted(bn.name(v));
        if (bn.is_observed(v)) os << " [style=filled, fillcolor=gray80]";
        os << ";\n";
    }
}

}  // namespace

std::string to_dot(const BayesNet& bn) {
    std::ostringstream os;
    os << "digraph bn {\n";
    emit_nodes(os, bn);
    for (const Edge& e : bn.edges())
        os << "  " << quoted(bn.name(e.first)) << " -> " << quoted(bn.name(e.second)) << ";\n";
    os << "}\n";
    return os.str();
}

std::string to_dot(const InverseStructure& inv) { return to_dot(inv.graph); }

std::string induced_to_dot(const BayesNet& names, const MarkedGraph& j) {
    std::ostringstream os;
    os << "graph induced {\n";
    for (VarId v = 0; v < names.size(); ++v) {
        os << "  " << quoted(names.name(v));
        if (j.marked(v))
            os << " [style=filled, fillcolor=black, fontcolor=white]";
        else if (names.is_observed(v))
            os << " [style=filled, fillcolor=gray80]";
        os << ";\n";
    }
    // fill edges are drawn dotted
    std::vector<Edge> fills = j.fill_log();
    std::sort(fills.begin(), fills.end());
    for (const Edge& e : j.graph().edges()) {
        os << "  " << quoted(names.name(e.first)) << " -- " << quoted(names.name(e.second));
        if (std::binary_search(fills.begin(), fills.end(), e)) os << " [style=dotted]";
        os << ";\n";
    }
    os << "}\n";
    return os.str();
}

std::string clique_tree_to_dot(const BayesNet& names, const CliqueTree& tree) {
    auto set_label = [&](const std::vector<VarId>& vars) {
        std::string s;
        for (VarId v : vars) {
            if (!s.empty()) s += ",";
            s += names.name(v);
        }
        return s;
    };
    std::ostringstream os;
    os << "graph cliques {\n  node [shape=box];\n";
    for (std::size_t i = 0; i < tree.cliques.size(); ++i)
        os << "  c" << i << " [label=" << quoted(set_label(tree.cliques[i])) << "];\n";
    for (std::size_t i = 0; i < tree.cliques.size(); ++i)
        if (tree.parent[i] != -1)
            os << "  c" << i << " -- c" << tree.parent[i]
               << " [label=" << quoted(set_label(tree.sepsets[i])) << "];\n";
    os << "}\n";
    return os.str();
}

}  // namespace nami
