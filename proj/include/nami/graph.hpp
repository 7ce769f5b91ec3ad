#pragma once

#include <cstdint>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "nami/error.hpp"

namespace nami {

/// Dense variable index, contiguous 0..n-1 within one graph. Human-readable
/// names live in the owning BayesNet.
using VarId = std::int32_t;

/// Directed edge (from, to); also used for undirected edges normalized so
/// that first < second.
using Edge = std::pair<VarId, VarId>;

inline Edge undirected(VarId u, VarId v) {
    return u < v ? Edge{u, v} : Edge{v, u};
}

/// Set of variables over a fixed universe, stored as a chunked bitset.
class VarSet {
public:
    VarSet() = default;
    explicit VarSet(int universe) : n_(universe), words_((universe + 63) / 64, 0) {}

    int universe() const { return n_; }

    bool test(VarId v) const { return (words_[v >> 6] >> (v & 63)) & 1u; }
    void set(VarId v) { words_[v >> 6] |= std::uint64_t{1} << (v & 63); }
    void reset(VarId v) { words_[v >> 6] &= ~(std::uint64_t{1} << (v & 63)); }
    void clear() { std::fill(words_.begin(), words_.end(), 0); }

    int count() const;
    bool empty() const;
    bool intersects(const VarSet& other) const;
    bool is_subset_of(const VarSet& other) const;

    VarSet& operator|=(const VarSet& other);
    VarSet& operator&=(const VarSet& other);
    VarSet& operator-=(const VarSet& other);

    VarSet complement() const;

    std::vector<VarId> to_vector() const;  // ascending

    template <typename F>
    void for_each(F&& f) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t bits = words_[w];
            while (bits) {
                int b = __builtin_ctzll(bits);
                f(static_cast<VarId>(w * 64 + b));
                bits &= bits - 1;
            }
        }
    }

    friend bool operator==(const VarSet& a, const VarSet& b) {
        return a.n_ == b.n_ && a.words_ == b.words_;
    }

    static VarSet of(int universe, std::initializer_list<VarId> vs) {
        VarSet s(universe);
        for (VarId v : vs) s.set(v);
        return s;
    }
    static VarSet from(int universe, const std::vector<VarId>& vs) {
        VarSet s(universe);
        for (VarId v : vs) s.set(v);
        return s;
    }

private:
    int n_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Undirected graph over a fixed universe. Adjacency kept as sorted
/// per-node neighbour lists so sparse graphs stay O(V+E).
class UndirectedGraph {
public:
    UndirectedGraph() = default;
    explicit UndirectedGraph(int n) : adj_(n) {}

    int size() const { return static_cast<int>(adj_.size()); }
    int edge_count() const { return edge_count_; }

    bool has_edge(VarId u, VarId v) const;

    /// Inserts {u,v}; returns false if the edge was already present.
    bool add_edge(VarId u, VarId v);

    const std::vector<VarId>& neighbors(VarId v) const { return adj_[v]; }

    std::vector<Edge> edges() const;  // normalized u < v, sorted

    friend bool operator==(const UndirectedGraph& a, const UndirectedGraph& b) {
        return a.adj_ == b.adj_;
    }

private:
    std::vector<std::vector<VarId>> adj_;
    int edge_count_ = 0;
};

struct Variable {
    std::string name;
    bool observed = false;
};

/// Directed acyclic graph over named variables with an observed/latent
/// partition. Immutable after construction; the constructor rejects
/// cyclic input, duplicate edges, and duplicate names.
class BayesNet {
public:
    BayesNet(std::vector<Variable> variables, const std::vector<Edge>& edges);

    /// Name-based convenience constructor used by tests and IO.
    static BayesNet from_names(const std::vector<std::string>& names,
                               const std::vector<std::pair<std::string, std::string>>& edges,
                               const std::vector<std::string>& observed);

    int size() const { return static_cast<int>(vars_.size()); }
    int edge_count() const { return edge_count_; }

    const std::string& name(VarId v) const { return vars_[v].name; }
    const std::vector<Variable>& variables() const { return vars_; }

    /// Throws Error for unknown names.
    VarId index_of(const std::string& name) const;

    bool is_observed(VarId v) const { return vars_[v].observed; }
    const VarSet& observed() const { return observed_; }
    std::vector<VarId> observed_vars() const { return observed_.to_vector(); }
    std::vector<VarId> latent_vars() const;
    int latent_count() const { return size() - observed_.count(); }

    const std::vector<VarId>& parents(VarId v) const { return parents_[v]; }
    const std::vector<VarId>& children(VarId v) const { return children_[v]; }

    bool has_edge(VarId from, VarId to) const;
    std::vector<Edge> edges() const;  // sorted (from, to)

    bool same_universe(const BayesNet& other) const;

private:
    std::vector<Variable> vars_;
    std::vector<std::vector<VarId>> parents_;
    std::vector<std::vector<VarId>> children_;
    VarSet observed_;
    std::unordered_map<std::string, VarId> by_name_;
    int edge_count_ = 0;
};

/// Unique topological order: each variable after all its parents, ties
/// broken by ascending VarId.
std::vector<VarId> topological_order(const BayesNet& bn);

/// Undirected edge {X,Y} for every directed edge (X,Y).
UndirectedGraph skeleton(const BayesNet& bn);

/// All triples X -> Z <- Y with no edge between X and Y, normalized X < Y,
/// sorted ascending.
std::vector<std::tuple<VarId, VarId, VarId>> immoralities(const BayesNet& bn);

/// Skeleton plus an edge between every pair of co-parents.
UndirectedGraph moralize(const BayesNet& bn);

/// Parents, children and co-parents of v (ascending, v excluded).
std::vector<VarId> markov_blanket(const BayesNet& bn, VarId v);

/// Closure of `seeds` under the parent relation; includes the seeds.
VarSet ancestors_of(const BayesNet& bn, const VarSet& seeds);

/// Closure of `seeds` under the child relation; includes the seeds.
VarSet descendants_of(const BayesNet& bn, const VarSet& seeds);

/// Per-variable strict descendant sets (v itself excluded).
std::vector<VarSet> all_descendants(const BayesNet& bn);

}  // namespace nami
