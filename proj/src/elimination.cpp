#include "nami/elimination.hpp"

#include <algorithm>

namespace nami {

std::vector<VarId> MarkedGraph::unmarked_neighbors(VarId v) const {
    std::vector<VarId> out;
    for (VarId u : g_.neighbors(v))
        if (!marked_.test(u)) out.push_back(u);
    return out;
}

int min_fill_cost(const MarkedGraph& j, VarId v) {
    if (j.marked_.test(v)) throw Error("min_fill_cost: variable already marked");
    auto nbrs = j.unmarked_neighbors(v);
    int missing = 0;
    for (std::size_t a = 0; a < nbrs.size(); ++a)
        for (std::size_t b = a + 1; b < nbrs.size(); ++b)
            if (!j.g_.has_edge(nbrs[a], nbrs[b])) ++missing;
    return missing;
}

std::vector<Edge> eliminate(MarkedGraph& j, VarId v) {
    if (j.marked_.test(v)) throw Error("eliminate: variable already marked");
    auto nbrs = j.unmarked_neighbors(v);
    std::vector<Edge> added;
    for (std::size_t a = 0; a < nbrs.size(); ++a)
        for (std::size_t b = a + 1; b < nbrs.size(); ++b)
            if (j.g_.add_edge(nbrs[a], nbrs[b])) added.push_back(undirected(nbrs[a], nbrs[b]));
    std::sort(added.begin(), added.end());
    j.fills_.insert(j.fills_.end(), added.begin(), added.end());
    j.marked_.set(v);
    return added;
}

MarkedGraph induced_graph(const BayesNet& bn, const std::vector<VarId>& order,
                          EliminationTrace* trace) {
    VarSet seen(bn.size());
    for (VarId v : order) {
        if (v < 0 || v >= bn.size()) throw Error("induced_graph: variable out of range");
        if (seen.test(v)) throw Error("induced_graph: duplicate variable in order");
        seen.set(v);
    }
    MarkedGraph j(moralize(bn));
    if (trace) {
        trace->order = order;
        trace->steps.clear();
    }
    for (VarId v : order) {
        auto nbrs = j.unmarked_neighbors(v);
        auto fills = eliminate(j, v);
        if (trace) trace->steps.push_back({v, std::move(nbrs), std::move(fills)});
    }
    return j;
}

CliqueTree clique_tree(const BayesNet& bn, const std::vector<VarId>& order) {
    EliminationTrace trace;
    induced_graph(bn, order, &trace);

    CliqueTree tree;
    const int steps = static_cast<int>(trace.steps.size());
    tree.cliques.resize(steps);
    tree.eliminated.resize(steps);
    tree.parent.assign(steps, -1);
    tree.sepsets.resize(steps);

    std::vector<int> step_of(bn.size(), -1);
    for (int i = 0; i < steps; ++i) step_of[trace.steps[i].v] = i;

    for (int i = 0; i < steps; ++i) {
        const auto& st = trace.steps[i];
        tree.eliminated[i] = st.v;
        std::vector<VarId> clique = st.neighbors;
        clique.push_back(st.v);
        std::sort(clique.begin(), clique.end());
        tree.cliques[i] = std::move(clique);

        // The intermediate factor produced here has scope = the unmarked
        // neighbours; it is consumed at the step that next eliminates one
        // of those variables, which becomes the downstream clique.
        int next = -1;
        for (VarId u : st.neighbors) {
            int s = step_of[u];
            if (s > i && (next == -1 || s < next)) next = s;
        }
        if (next != -1) {
            tree.parent[i] = next;
            tree.sepsets[i] = st.neighbors;  // clique minus eliminated variable
        }
    }

    // Family-preserving assignment: each model factor (variable + its
    // parents) goes to the first clique containing its scope.
    tree.factor_assignment.assign(bn.size(), -1);
    for (VarId v = 0; v < bn.size(); ++v) {
        std::vector<VarId> scope = bn.parents(v);
        scope.push_back(v);
        std::sort(scope.begin(), scope.end());
        for (int i = 0; i < steps; ++i) {
            if (std::includes(tree.cliques[i].begin(), tree.cliques[i].end(), scope.begin(),
                              scope.end())) {
                tree.factor_assignment[v] = i;
                break;
            }
        }
    }
    return tree;
}

bool CliqueTree::running_intersection_holds() const {
    const int m = static_cast<int>(cliques.size());
    // For every variable, the cliques containing it must form a connected
    // subtree. Walk each clique's parent chain and check connectivity by
    // union of membership.
    for (int a = 0; a < m; ++a) {
        for (VarId x : cliques[a]) {
            for (int b = a + 1; b < m; ++b) {
                if (!std::binary_search(cliques[b].begin(), cliques[b].end(), x)) continue;
                // path from a and b to their common ancestor
                std::vector<int> chain_a, chain_b;
                for (int c = a; c != -1; c = parent[c]) chain_a.push_back(c);
                for (int c = b; c != -1; c = parent[c]) chain_b.push_back(c);
                // find deepest common node
                int join = -1;
                for (int c : chain_a)
                    if (std::find(chain_b.begin(), chain_b.end(), c) != chain_b.end()) {
                        join = c;
                        break;
                    }
                // cliques in different trees of the forest have no
                // connecting path, so nothing is required of them (this
                // arises only for variables the order never eliminates)
                if (join == -1) continue;
                auto on_path_ok = [&](const std::vector<int>& chain) {
                    for (int c : chain) {
                        if (c == join) break;
                        if (!std::binary_search(cliques[c].begin(), cliques[c].end(), x))
                            return false;
                    }
                    return true;
                };
                if (!on_path_ok(chain_a) || !on_path_ok(chain_b)) return false;
                if (!std::binary_search(cliques[join].begin(), cliques[join].end(), x))
                    return false;
            }
        }
    }
    return true;
}

std::pair<std::vector<VarId>, std::vector<VarId>> sepset_split(const CliqueTree& tree,
                                                               int clique_index, int universe) {
    const int m = static_cast<int>(tree.cliques.size());
    if (clique_index < 0 || clique_index >= m || tree.parent[clique_index] == -1)
        throw Error("sepset_split: clique has no tree edge");
    // Mark the component containing clique_index when its parent edge is cut.
    std::vector<std::vector<int>> kids(m);
    for (int i = 0; i < m; ++i)
        if (tree.parent[i] != -1) kids[tree.parent[i]].push_back(i);
    std::vector<char> in_sub(m, 0);
    std::vector<int> stack{clique_index};
    while (!stack.empty()) {
        int c = stack.back();
        stack.pop_back();
        in_sub[c] = 1;
        for (int k : kids[c]) stack.push_back(k);
    }
    VarSet sep = VarSet::from(universe, tree.sepsets[clique_index]);
    VarSet up(universe), down(universe);
    for (int i = 0; i < m; ++i)
        for (VarId x : tree.cliques[i]) (in_sub[i] ? up : down).set(x);
    up -= sep;
    down -= sep;
    if (up.intersects(down))
        throw Error("sepset_split: variable on both sides of the cut (running "
                    "intersection violated)");
    return {up.to_vector(), down.to_vector()};
}

}  // namespace nami
