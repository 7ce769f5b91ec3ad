#include "nami/independence.hpp"

#include <algorithm>

namespace nami {

IndepSet::IndepSet(int universe, std::vector<IndepAssertion> assertions)
    : n_(universe), assertions_(std::move(assertions)) {
    std::sort(assertions_.begin(), assertions_.end());
    assertions_.erase(std::unique(assertions_.begin(), assertions_.end()), assertions_.end());
}

bool IndepSet::contains(const IndepAssertion& a) const {
    return std::binary_search(assertions_.begin(), assertions_.end(), a);
}

bool is_active_trail(const BayesNet& bn, const std::vector<VarId>& trail, const VarSet& z) {
    if (trail.empty()) throw Error("is_active_trail: empty trail");
    VarSet seen(bn.size());
    for (VarId v : trail) {
        if (v < 0 || v >= bn.size()) throw Error("is_active_trail: node out of range");
        if (seen.test(v)) throw Error("is_active_trail: trail repeats a node");
        seen.set(v);
    }
    for (std::size_t i = 0; i + 1 < trail.size(); ++i)
        if (!bn.has_edge(trail[i], trail[i + 1]) && !bn.has_edge(trail[i + 1], trail[i]))
            throw Error("is_active_trail: consecutive trail nodes not adjacent");

    // A v-structure node activates when it or a descendant is in Z, i.e.
    // when the node is an ancestor of (or in) Z.
    VarSet anc_z = ancestors_of(bn, z);

    for (std::size_t i = 0; i < trail.size(); ++i) {
        bool collider = i > 0 && i + 1 < trail.size() && bn.has_edge(trail[i - 1], trail[i]) &&
                        bn.has_edge(trail[i + 1], trail[i]);
        if (collider) {
            if (!anc_z.test(trail[i])) return false;
        } else {
            if (z.test(trail[i])) return false;
        }
    }
    return true;
}

ReachContext::ReachContext(const BayesNet& bn)
    : bn_(bn), anc_(bn.size()), z_(bn.size()), up_(bn.size()), down_(bn.size()),
      result_(bn.size()) {}

void ReachContext::run(const std::vector<VarId>& sources) {
    anc_ = ancestors_of(bn_, z_);
    up_.clear();
    down_.clear();
    result_.clear();
    stack_.clear();
    // Entering "from child" (up) means the trail continues upward through
    // parents or bounces down through children; entering "from parent"
    // (down) continues downward unless blocked, and bounces upward only at
    // an activated v-structure (node in Z or with a descendant in Z).
    for (VarId s : sources) stack_.emplace_back(s, true);
    while (!stack_.empty()) {
        auto [v, from_child] = stack_.back();
        stack_.pop_back();
        if (from_child) {
            if (up_.test(v)) continue;
            up_.set(v);
        } else {
            if (down_.test(v)) continue;
            down_.set(v);
        }
        if (!z_.test(v)) result_.set(v);
        if (from_child) {
            if (!z_.test(v)) {
                for (VarId p : bn_.parents(v)) stack_.emplace_back(p, true);
                for (VarId c : bn_.children(v)) stack_.emplace_back(c, false);
            }
        } else {
            if (!z_.test(v))
                for (VarId c : bn_.children(v)) stack_.emplace_back(c, false);
            if (anc_.test(v))
                for (VarId p : bn_.parents(v)) stack_.emplace_back(p, true);
        }
    }
}

const VarSet& ReachContext::reachable(const VarSet& sources, const VarSet& z) {
    z_ = z;
    run(sources.to_vector());
    return result_;
}

const VarSet& ReachContext::reachable_masked(VarId source, std::uint64_t z_mask) {
    z_.clear();
    for (std::uint64_t bits = z_mask; bits; bits &= bits - 1)
        z_.set(__builtin_ctzll(bits));
    std::vector<VarId> src{source};
    run(src);
    return result_;
}

bool d_separated(const BayesNet& bn, const VarSet& x, const VarSet& y, const VarSet& z) {
    if (x.intersects(y) || x.intersects(z) || y.intersects(z))
        throw Error("d_separated: X, Y, Z must be pairwise disjoint");
    if (x.empty() || y.empty()) return true;
    ReachContext ctx(bn);
    const VarSet& r = ctx.reachable(x, z);
    return !r.intersects(y);
}

bool d_separated(const BayesNet& bn, const std::vector<VarId>& x, const std::vector<VarId>& y,
                 const std::vector<VarId>& z) {
    return d_separated(bn, VarSet::from(bn.size(), x), VarSet::from(bn.size(), y),
                       VarSet::from(bn.size(), z));
}

IndepSet enumerate_independencies(const BayesNet& bn, int cap) {
    const int n = bn.size();
    if (cap > kEnumHardCap) cap = kEnumHardCap;
    if (n > cap)
        throw SizeCapError("enumerate_independencies: " + std::to_string(n) +
                           " variables exceeds cap " + std::to_string(cap));
    std::vector<IndepAssertion> out;
    ReachContext ctx(bn);
    const std::uint64_t full = n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    for (VarId i = 0; i < n; ++i) {
        const std::uint64_t others = full & ~(std::uint64_t{1} << i);
        // iterate all submasks of `others`, including the empty one
        std::uint64_t z = 0;
        while (true) {
            const VarSet& r = ctx.reachable_masked(i, z);
            for (VarId j = i + 1; j < n; ++j)
                if (!((z >> j) & 1) && !r.test(j)) out.push_back({i, j, z});
            if (z == others) break;
            z = (z - others) & others;  // next submask
        }
    }
    return IndepSet(n, std::move(out));
}

bool same_markov_equivalence(const BayesNet& g, const BayesNet& h) {
    if (!g.same_universe(h)) throw Error("same_markov_equivalence: universe mismatch");
    return skeleton(g) == skeleton(h) && immoralities(g) == immoralities(h);
}

}  // namespace nami
