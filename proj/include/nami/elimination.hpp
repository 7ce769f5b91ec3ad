#pragma once

#include <vector>

#include "nami/graph.hpp"

namespace nami {

/// Undirected graph with per-node elimination marks and a replayable log
/// of the fill edges added while simulating variable elimination.
class MarkedGraph {
public:
    explicit MarkedGraph(UndirectedGraph base)
        : g_(std::move(base)), marked_(g_.size()) {}

    const UndirectedGraph& graph() const { return g_; }
    int size() const { return g_.size(); }

    bool marked(VarId v) const { return marked_.test(v); }
    const VarSet& marked_set() const { return marked_; }
    const std::vector<Edge>& fill_log() const { return fills_; }

    std::vector<VarId> unmarked_neighbors(VarId v) const;

    /// Number of missing edges among the unmarked neighbours of v.
    /// Throws Error if v is already marked.
    friend int min_fill_cost(const MarkedGraph& j, VarId v);

    /// Connects all pairs of unmarked neighbours of v and marks v;
    /// returns the fill edges added. Throws Error if v is already marked.
    friend std::vector<Edge> eliminate(MarkedGraph& j, VarId v);

private:
    UndirectedGraph g_;
    VarSet marked_;
    std::vector<Edge> fills_;
};

int min_fill_cost(const MarkedGraph& j, VarId v);
std::vector<Edge> eliminate(MarkedGraph& j, VarId v);

struct EliminationStep {
    VarId v;
    std::vector<VarId> neighbors;  // unmarked neighbours at elimination time
    std::vector<Edge> fills;
};

struct EliminationTrace {
    std::vector<VarId> order;
    std::vector<EliminationStep> steps;
};

/// Moral graph of bn after eliminating `order` in sequence.
/// `order` must be a duplicate-free subset of the variables.
MarkedGraph induced_graph(const BayesNet& bn, const std::vector<VarId>& order,
                          EliminationTrace* trace = nullptr);

/// Tree of per-step elimination cliques. Cliques are recorded per step,
/// never absorbed into supersets.
struct CliqueTree {
    std::vector<std::vector<VarId>> cliques;  // step i: {v_i} + unmarked neighbours
    std::vector<VarId> eliminated;            // variable eliminated at step i
    std::vector<int> parent;                  // downstream clique, -1 for roots
    std::vector<std::vector<VarId>> sepsets;  // clique minus eliminated var (empty at roots)
    std::vector<int> factor_assignment;       // per model variable: first clique
                                              // containing its family scope, or -1

    /// Checks that any variable present in two cliques appears in every
    /// clique on the tree path between them.
    bool running_intersection_holds() const;
};

CliqueTree clique_tree(const BayesNet& bn, const std::vector<VarId>& order);

/// Variables on the eliminated side of clique i's sepset edge (union of the
/// subtree's cliques minus the sepset) and everything downstream. Helper
/// for sepset d-separation checks.
std::pair<std::vector<VarId>, std::vector<VarId>> sepset_split(const CliqueTree& tree,
                                                               int clique_index, int universe);

}  // namespace nami
