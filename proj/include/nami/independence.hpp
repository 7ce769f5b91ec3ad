#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nami/graph.hpp"

namespace nami {

/// Default cap on the variable count for exhaustive independence
/// enumeration; override per call or via NAMI_ENUM_CAP in the CLI.
inline constexpr int kDefaultEnumCap = 14;

/// Hard limit imposed by the 64-bit conditioning-set masks.
inline constexpr int kEnumHardCap = 25;

/// Pairwise conditional-independence assertion (x ⊥ y | Z) with x < y and
/// Z stored as a bitmask over the universe (x, y never in Z).
struct IndepAssertion {
    VarId x;
    VarId y;
    std::uint64_t z_mask;

    friend bool operator==(const IndepAssertion&, const IndepAssertion&) = default;
    friend auto operator<=>(const IndepAssertion&, const IndepAssertion&) = default;
};

/// All pairwise assertions of a graph, sorted (x, y, z_mask).
class IndepSet {
public:
    IndepSet() = default;
    IndepSet(int universe, std::vector<IndepAssertion> assertions);

    int universe() const { return n_; }
    const std::vector<IndepAssertion>& assertions() const { return assertions_; }
    bool contains(const IndepAssertion& a) const;
    std::size_t size() const { return assertions_.size(); }

    friend bool operator==(const IndepSet&, const IndepSet&) = default;

private:
    int n_ = 0;
    std::vector<IndepAssertion> assertions_;
};

/// True iff the trail is active given Z: every v-structure node has itself
/// or a descendant in Z, and no other node on the trail is in Z.
/// Throws Error if consecutive trail nodes are not adjacent in the skeleton
/// or if the trail repeats a node.
bool is_active_trail(const BayesNet& bn, const std::vector<VarId>& trail, const VarSet& z);

/// Reusable scratch for repeated reachability queries on one graph.
/// d-separation is decided by the linear-time reachable-nodes algorithm:
/// collect Z and its ancestors, then walk the trail automaton where each
/// node can be entered from a parent (down) or from a child (up).
class ReachContext {
public:
    explicit ReachContext(const BayesNet& bn);

    /// Nodes connected to `sources` by some active trail given `z`
    /// (the sources themselves included).
    const VarSet& reachable(const VarSet& sources, const VarSet& z);

    /// Single-source variant with Z given as a mask (universe <= 64).
    const VarSet& reachable_masked(VarId source, std::uint64_t z_mask);

private:
    const BayesNet& bn_;
    VarSet anc_;        // Z and its ancestors
    VarSet z_;
    VarSet up_, down_;  // visitation marks per direction
    VarSet result_;
    std::vector<std::pair<VarId, bool>> stack_;  // (node, entered-from-child?)

    void run(const std::vector<VarId>& sources);
};

/// True iff no active trail connects X and Y given Z. X, Y, Z must be
/// pairwise disjoint (throws Error otherwise). Empty X or Y is vacuously
/// separated.
bool d_separated(const BayesNet& bn, const VarSet& x, const VarSet& y, const VarSet& z);
bool d_separated(const BayesNet& bn, const std::vector<VarId>& x, const std::vector<VarId>& y,
                 const std::vector<VarId>& z);
inline bool d_separated(const BayesNet& bn, std::initializer_list<VarId> x,
                        std::initializer_list<VarId> y, std::initializer_list<VarId> z) {
    return d_separated(bn, std::vector<VarId>(x), std::vector<VarId>(y), std::vector<VarId>(z));
}

/// Every assertion (Xi ⊥ Xj | Z) over singleton pairs and all Z subsets of
/// the remaining variables. Throws SizeCapError above the cap.
IndepSet enumerate_independencies(const BayesNet& bn, int cap = kDefaultEnumCap);

/// Same skeleton and same immoralities; by the Markov-equivalence theorem
/// this holds iff the two graphs encode identical independencies.
/// Throws Error if the universes differ.
bool same_markov_equivalence(const BayesNet& g, const BayesNet& h);

}  // namespace nami
