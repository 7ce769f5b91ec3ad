#include "nami/inversion.hpp"

#include <algorithm>
#include <set>

#include "nami/independence.hpp"

namespace nami {

std::string to_string(InverseMode mode) {
    switch (mode) {
        case InverseMode::Forward: return "forward";
        case InverseMode::Reverse: return "reverse";
        case InverseMode::Grouped: return "grouped";
        case InverseMode::Heuristic: return "heuristic";
        case InverseMode::FullyConnected: return "fully-connected";
        case InverseMode::MeanField: return "mean-field";
    }
    throw Error("unknown inverse mode");
}

InverseMode inverse_mode_from_string(const std::string& s) {
    if (s == "forward") return InverseMode::Forward;
    if (s == "reverse") return InverseMode::Reverse;
    if (s == "grouped") return InverseMode::Grouped;
    if (s == "heuristic") return InverseMode::Heuristic;
    if (s == "fully-connected" || s == "full") return InverseMode::FullyConnected;
    if (s == "mean-field") return InverseMode::MeanField;
    throw Error("unknown inverse mode: " + s);
}

int InverseStructure::largest_clique() const {
    int best = 1;
    for (const auto& st : steps)
        best = std::max(best, static_cast<int>(st.parents.size()) + 1);
    return best;
}

namespace {

BayesNet graph_with_parents(const BayesNet& bn, const std::vector<std::vector<VarId>>& parents) {
    std::vector<Edge> edges;
    for (VarId v = 0; v < bn.size(); ++v)
        for (VarId p : parents[v]) edges.emplace_back(p, v);
    return BayesNet(bn.variables(), edges);
}

std::vector<Edge> moral_fill_edges(const BayesNet& bn) {
    UndirectedGraph skel = skeleton(bn);
    std::vector<Edge> out;
    for (const Edge& e : moralize(bn).edges())
        if (!skel.has_edge(e.first, e.second)) out.push_back(e);
    return out;
}

/// Latents with no observed descendant. The likelihood never reaches them,
/// so the intermediate factors produced when they are summed out lose
/// dependencies that the induced-graph simulation cannot see (their CPDs
/// integrate to one), and the simulated parent sets can pick up couplings
/// the posterior does not have.
VarSet barren_latents(const BayesNet& bn) {
    VarSet relevant = ancestors_of(bn, bn.observed());
    VarSet barren = bn.observed().complement();
    barren -= relevant;
    return barren;
}

/// Conditioning-set pruning on the simulated parent sets: drop any parent
/// that the model d-separates from the variable given the remaining ones,
/// until a fixed point. By the contraction property each drop preserves
/// faithfulness of the factorization, and the fixed point is minimal.
void prune_parent_sets(const BayesNet& bn, std::vector<std::vector<VarId>>& parents,
                       const std::vector<VarId>& elim_order) {
    ReachContext ctx(bn);
    for (VarId v : elim_order) {
        VarSet keep = VarSet::from(bn.size(), parents[v]);
        bool changed = true;
        while (changed) {
            changed = false;
            for (VarId y : keep.to_vector()) {
                VarSet rest = keep;
                rest.reset(y);
                if (!ctx.reachable(VarSet::of(bn.size(), {v}), rest).test(y)) {
                    keep.reset(y);
                    changed = true;
                }
            }
        }
        parents[v] = keep.to_vector();
    }
}

/// Within-group upstream relation, evaluated through intermediates outside
/// the group: u gates v when a directed path u -> ... -> v (forward mode;
/// v -> ... -> u in reverse mode) exists whose interior nodes all lie
/// outside the group. Eliminating in this order keeps the elimination
/// topological on the group's ancestry even when it passes through
/// observed variables.
std::vector<std::vector<VarId>> gate_children(const BayesNet& bn, const std::vector<VarId>& group,
                                              bool forward) {
    VarSet in_group = VarSet::from(bn.size(), group);
    std::vector<std::vector<VarId>> out(bn.size());
    for (VarId v : group) {
        // walk towards upstream: parents in forward mode, children in reverse
        VarSet seen(bn.size());
        std::vector<VarId> stack{v};
        seen.set(v);
        while (!stack.empty()) {
            VarId w = stack.back();
            stack.pop_back();
            const auto& next = forward ? bn.parents(w) : bn.children(w);
            for (VarId u : next) {
                if (seen.test(u)) continue;
                seen.set(u);
                if (in_group.test(u))
                    out[u].push_back(v);  // u upstream of v: marking u unblocks v
                else
                    stack.push_back(u);
            }
        }
    }
    return out;
}

}  // namespace

InverseStructure nami_invert(const BayesNet& bn, InverseMode mode, InvertOptions opts) {
    if (mode != InverseMode::Forward && mode != InverseMode::Reverse)
        throw Error("nami_invert: mode must be forward or reverse");
    const bool forward = mode == InverseMode::Forward;

    std::vector<VarId> latents = bn.latent_vars();
    if (latents.empty()) throw Error("nami_invert: model has no latent variables");

    std::vector<std::vector<VarId>> groups = std::move(opts.groups);
    const bool grouped = !groups.empty();
    if (!grouped) {
        groups.push_back(latents);
    } else {
        VarSet seen(bn.size());
        std::size_t total = 0;
        for (const auto& g : groups) {
            if (g.empty()) throw Error("nami_invert: empty group in latent partition");
            for (VarId v : g) {
                if (v < 0 || v >= bn.size())
                    throw Error("nami_invert: group variable out of range");
                if (bn.is_observed(v))
                    throw Error("nami_invert: observed variable " + bn.name(v) +
                                " in latent partition");
                if (seen.test(v))
                    throw Error("nami_invert: variable " + bn.name(v) +
                                " appears twice in the partition");
                seen.set(v);
            }
            total += g.size();
        }
        if (total != latents.size())
            throw Error("nami_invert: groups do not cover the latent set");
    }
    if (opts.include_observed) {
        std::vector<VarId> obs = bn.observed_vars();
        if (!obs.empty()) groups.push_back(std::move(obs));
    }

    MarkedGraph j(moralize(bn));
    std::vector<std::vector<VarId>> parents(bn.size());
    InverseStructure inv{bn, grouped ? InverseMode::Grouped : mode, {}, {}, moral_fill_edges(bn)};

    for (const auto& group : groups) {
        auto unblocks = gate_children(bn, group, forward);
        std::vector<int> remaining(bn.size(), 0);
        for (VarId u : group)
            for (VarId v : unblocks[u]) ++remaining[v];

        std::set<VarId> frontier;
        for (VarId v : group)
            if (remaining[v] == 0) frontier.insert(v);

        while (!frontier.empty()) {
            VarId best = -1;
            int best_cost = 0;
            for (VarId v : frontier) {
                int c = min_fill_cost(j, v);
                if (best == -1 || c < best_cost) {
                    best = v;
                    best_cost = c;
                }
            }
            std::vector<VarId> snapshot(frontier.begin(), frontier.end());
            frontier.erase(best);
            std::vector<VarId> pa = j.unmarked_neighbors(best);
            std::vector<Edge> fills = eliminate(j, best);
            parents[best] = pa;
            inv.elim_order.push_back(best);
            inv.steps.push_back({std::move(snapshot), best, std::move(fills), std::move(pa)});
            for (VarId u : unblocks[best])
                if (--remaining[u] == 0 && !j.marked(u)) frontier.insert(u);
        }
    }

    if (!barren_latents(bn).empty()) {
        prune_parent_sets(bn, parents, inv.elim_order);
        for (auto& st : inv.steps) st.parents = parents[st.v];
    }
    inv.graph = graph_with_parents(bn, parents);
    return inv;
}

InverseStructure stuhlmuller_invert(const BayesNet& bn) {
    if (bn.latent_count() == 0) throw Error("stuhlmuller_invert: model has no latent variables");
    std::vector<VarId> order = topological_order(bn);
    std::reverse(order.begin(), order.end());

    VarSet visited(bn.size());
    std::vector<std::vector<VarId>> parents(bn.size());
    for (VarId v : order) {
        for (VarId m : markov_blanket(bn, v)) {
            if (!visited.test(m)) continue;
            if (bn.is_observed(v) && !bn.is_observed(m)) continue;
            parents[v].push_back(m);
        }
        std::sort(parents[v].begin(), parents[v].end());
        visited.set(v);
    }
    return {graph_with_parents(bn, parents), InverseMode::Heuristic, {}, {}, {}};
}

InverseStructure fully_connected_inverse(const BayesNet& bn,
                                         std::optional<std::vector<VarId>> order) {
    std::vector<VarId> latents;
    for (VarId v : topological_order(bn))
        if (!bn.is_observed(v)) latents.push_back(v);
    if (order) {
        auto sorted_given = *order;
        std::sort(sorted_given.begin(), sorted_given.end());
        auto sorted_lat = latents;
        std::sort(sorted_lat.begin(), sorted_lat.end());
        if (sorted_given != sorted_lat)
            throw Error("fully_connected_inverse: order is not a permutation of the latents");
        latents = *order;
    }
    std::vector<std::vector<VarId>> parents(bn.size());
    std::vector<VarId> obs = bn.observed_vars();
    std::vector<VarId> earlier;
    for (VarId z : latents) {
        parents[z] = obs;
        parents[z].insert(parents[z].end(), earlier.begin(), earlier.end());
        std::sort(parents[z].begin(), parents[z].end());
        earlier.push_back(z);
    }
    return {graph_with_parents(bn, parents), InverseMode::FullyConnected, {}, {}, {}};
}

InverseStructure mean_field_inverse(const BayesNet& bn) {
    std::vector<std::vector<VarId>> parents(bn.size());
    std::vector<VarId> obs = bn.observed_vars();
    for (VarId v = 0; v < bn.size(); ++v)
        if (!bn.is_observed(v)) parents[v] = obs;
    return {graph_with_parents(bn, parents), InverseMode::MeanField, {}, {}, {}};
}

int edge_count(const InverseStructure& h) { return h.graph.edge_count(); }

}  // namespace nami
