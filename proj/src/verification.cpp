#include "nami/verification.hpp"

#include <algorithm>
#include <random>

namespace nami {

namespace {

void require_same_universe(const BayesNet& h, const BayesNet& g, const char* who) {
    if (!h.same_universe(g)) throw Error(std::string(who) + ": universe mismatch");
}

/// Exhaustive d-separation table of g: per (i, j) pair with i < j, one bit
/// per conditioning mask. Lets the I-map scan query g in O(1).
class DsepTable {
public:
    explicit DsepTable(const BayesNet& g) : n_(g.size()) {
        const std::uint64_t full = (std::uint64_t{1} << n_) - 1;
        bits_.resize(static_cast<std::size_t>(n_) * n_);
        ReachContext ctx(g);
        for (VarId i = 0; i < n_; ++i) {
            const std::uint64_t others = full & ~(std::uint64_t{1} << i);
            std::uint64_t z = 0;
            while (true) {
                const VarSet& r = ctx.reachable_masked(i, z);
                for (VarId j = i + 1; j < n_; ++j) {
                    if ((z >> j) & 1) continue;
                    if (!r.test(j)) slot(i, j).push_back(z);
                }
                if (z == others) break;
                z = (z - others) & others;
            }
        }
        for (auto& s : bits_) std::sort(s.begin(), s.end());
    }

    bool d_separated(VarId i, VarId j, std::uint64_t z) const {
        const auto& s = slot(i, j);
        return std::binary_search(s.begin(), s.end(), z);
    }

private:
    int n_;
    // sorted mask lists per pair; sparse, as most pairs separate rarely
    mutable std::vector<std::vector<std::uint64_t>> bits_;
    std::vector<std::uint64_t>& slot(VarId i, VarId j) const {
        return bits_[static_cast<std::size_t>(i) * n_ + j];
    }
};

/// Scans I(h) in (x, Z, y) order and reports the first assertion g does not
/// share. `priority` orders one pair to the front, which lets the
/// minimality loop hit the expected witness of an edge deletion first.
std::optional<IndepAssertion> first_unshared(const BayesNet& h, const DsepTable& g_table,
                                             std::optional<Edge> priority = {}) {
    const int n = h.size();
    const std::uint64_t full = (std::uint64_t{1} << n) - 1;
    ReachContext ctx(h);

    auto scan_pair_block = [&](VarId i, std::optional<VarId> only_j)
        -> std::optional<IndepAssertion> {
        const std::uint64_t others = full & ~(std::uint64_t{1} << i);
        std::uint64_t z = 0;
        while (true) {
            if (!only_j || !((z >> *only_j) & 1)) {
                const VarSet& r = ctx.reachable_masked(i, z);
                for (VarId j = i + 1; j < n; ++j) {
                    if (only_j && j != *only_j) continue;
                    if ((z >> j) & 1) continue;
                    if (!r.test(j) && !g_table.d_separated(i, j, z))
                        return IndepAssertion{i, j, z};
                }
            }
            if (z == others) break;
            z = (z - others) & others;
        }
        return std::nullopt;
    };

    if (priority) {
        VarId a = std::min(priority->first, priority->second);
        VarId b = std::max(priority->first, priority->second);
        if (auto w = scan_pair_block(a, b)) return w;
    }
    for (VarId i = 0; i < n; ++i)
        if (auto w = scan_pair_block(i, std::nullopt)) return w;
    return std::nullopt;
}

BayesNet remove_edge(const BayesNet& h, Edge e) {
    std::vector<Edge> edges;
    for (const Edge& d : h.edges())
        if (d != e) edges.push_back(d);
    return BayesNet(h.variables(), edges);
}

/// Inverse structures carry an unspecified factorization over the observed
/// variables, so reading the raw graph as a joint BN invents independence
/// claims about the observations. For the I-map decision the observed
/// block is completed into a clique (which claims nothing); the raw graph
/// is kept for witness reporting.
BayesNet complete_observed(const BayesNet& h) {
    std::vector<Edge> edges = h.edges();
    std::vector<VarId> obs = h.observed_vars();
    for (std::size_t i = 0; i < obs.size(); ++i)
        for (std::size_t j = i + 1; j < obs.size(); ++j)
            if (!h.has_edge(obs[i], obs[j]) && !h.has_edge(obs[j], obs[i]))
                edges.emplace_back(obs[i], obs[j]);
    return BayesNet(h.variables(), edges);
}

}  // namespace

ImapResult is_imap(const BayesNet& h, const BayesNet& g, int cap) {
    require_same_universe(h, g, "is_imap");
    if (cap > kEnumHardCap) cap = kEnumHardCap;
    if (h.size() > cap)
        throw SizeCapError("is_imap: " + std::to_string(h.size()) +
                           " variables exceeds cap " + std::to_string(cap));
    DsepTable table(g);
    auto w = first_unshared(complete_observed(h), table);
    if (!w) return {true, std::nullopt, false};
    // The completed graph asserts a subset of what the raw graph asserts,
    // so a raw scan always finds a witness too; prefer it, since it reads
    // directly off the inverse as written.
    auto raw = first_unshared(h, table);
    return {false, raw ? raw : w, false};
}

MinimalityResult is_minimal_imap(const BayesNet& h, const BayesNet& g, int cap) {
    require_same_universe(h, g, "is_minimal_imap");
    if (cap > kEnumHardCap) cap = kEnumHardCap;
    if (h.size() > cap)
        throw SizeCapError("is_minimal_imap: " + std::to_string(h.size()) +
                           " variables exceeds cap " + std::to_string(cap));
    DsepTable table(g);
    if (first_unshared(complete_observed(h), table))
        throw Error("is_minimal_imap: h is not an I-map of g");
    for (const Edge& e : h.edges()) {
        // edges inside the observed block are part of the unconstrained
        // observation factorization, not of q(z|x)
        if (h.is_observed(e.second)) continue;
        BayesNet pruned = complete_observed(remove_edge(h, e));
        if (!first_unshared(pruned, table, e))
            return {false, e, false};  // deletion kept the I-map: not minimal
    }
    return {true, std::nullopt, false};
}

NaturalnessResult is_natural(const BayesNet& h, const BayesNet& g) {
    require_same_universe(h, g, "is_natural");
    auto desc = all_descendants(g);
    std::optional<Edge> into_desc, into_anc;
    for (const Edge& e : h.edges()) {
        // Only edges between latent variables constrain the sampling order
        // of the random choices.
        if (g.is_observed(e.first) || g.is_observed(e.second)) continue;
        if (!into_desc && desc[e.first].test(e.second)) into_desc = e;
        if (!into_anc && desc[e.second].test(e.first)) into_anc = e;
        if (into_desc && into_anc) break;
    }
    if (into_desc && into_anc) return {false, into_desc, into_anc};
    return {true, std::nullopt, std::nullopt};
}

NaturalnessResult is_natural(const InverseStructure& h, const BayesNet& g) {
    return is_natural(h.graph, g);
}

BayesNet prune_minimal_inverse(const BayesNet& g, const std::vector<VarId>& order, int cap) {
    if (cap > kEnumHardCap) cap = kEnumHardCap;
    if (g.size() > cap)
        throw SizeCapError("prune_minimal_inverse: " + std::to_string(g.size()) +
                           " variables exceeds cap " + std::to_string(cap));
    if (static_cast<int>(order.size()) != g.size())
        throw Error("prune_minimal_inverse: order must list every variable once");
    VarSet seen(g.size());
    bool latent_started = false;
    for (VarId v : order) {
        if (v < 0 || v >= g.size() || seen.test(v))
            throw Error("prune_minimal_inverse: order is not a permutation");
        seen.set(v);
        if (!g.is_observed(v)) latent_started = true;
        else if (latent_started)
            throw Error("prune_minimal_inverse: observed variables must precede latents");
    }

    ReachContext ctx(g);
    std::vector<std::vector<VarId>> parents(g.size());
    VarSet earlier(g.size());
    for (VarId v : order) {
        if (g.is_observed(v)) {
            earlier.set(v);
            continue;
        }
        VarSet cond = earlier;
        bool changed = true;
        while (changed) {
            changed = false;
            for (VarId y : cond.to_vector()) {
                VarSet rest = cond;
                rest.reset(y);
                const VarSet& r = ctx.reachable(VarSet::of(g.size(), {v}), rest);
                if (!r.test(y)) {
                    cond.reset(y);
                    changed = true;
                }
            }
        }
        parents[v] = cond.to_vector();
        earlier.set(v);
    }
    std::vector<Edge> edges;
    for (VarId v = 0; v < g.size(); ++v)
        for (VarId p : parents[v]) edges.emplace_back(p, v);
    return BayesNet(g.variables(), edges);
}

namespace {

ImapResult sampled_imap(const BayesNet& h, const BayesNet& g, const VerificationOptions& opts) {
    // Evidence mode for graphs above the enumeration cap: random Z subsets
    // per pair. A found witness is exact; absence of one is not a proof.
    const int n = h.size();
    if (n > 64) throw SizeCapError("sampled verification limited to 64 variables");
    std::mt19937_64 rng(opts.seed);
    ReachContext hctx(h), gctx(g);
    for (VarId i = 0; i < n; ++i) {
        for (VarId j = i + 1; j < n; ++j) {
            for (int s = 0; s < opts.samples_per_pair; ++s) {
                VarSet z(n);
                for (VarId k = 0; k < n; ++k)
                    if (k != i && k != j && (rng() & 1)) z.set(k);
                const VarSet& rh = hctx.reachable(VarSet::of(n, {i}), z);
                if (rh.test(j)) continue;
                const VarSet& rg = gctx.reachable(VarSet::of(n, {i}), z);
                if (rg.test(j)) {
                    std::uint64_t zm = 0;
                    z.for_each([&](VarId k) { zm |= std::uint64_t{1} << k; });
                    return {false, IndepAssertion{i, j, zm}, true};
                }
            }
        }
    }
    return {true, std::nullopt, true};
}

}  // namespace

void validate_inverse_shape(const BayesNet& h, const BayesNet& g) {
    require_same_universe(h, g, "validate_inverse_shape");
    for (VarId v = 0; v < g.size(); ++v)
        if (h.is_observed(v) != g.is_observed(v))
            throw Error("invalid inverse: observed partition differs from the model at " +
                        g.name(v));
    for (const Edge& e : h.edges())
        if (!g.is_observed(e.first) && g.is_observed(e.second))
            throw Error("invalid inverse: latent -> observed edge " + g.name(e.first) +
                        " -> " + g.name(e.second));
}

VerificationReport verify(const InverseStructure& h, const BayesNet& g,
                          VerificationOptions opts) {
    require_same_universe(h.graph, g, "verify");
    VerificationReport rep;
    rep.nodes = g.size();
    rep.model_edges = g.edge_count();
    rep.inverse_edges = h.graph.edge_count();
    rep.naturalness = is_natural(h, g);

    int cap = std::min(opts.cap, kEnumHardCap);
    if (g.size() <= cap) {
        rep.imap = is_imap(h.graph, g, cap);
        if (rep.imap.ok) rep.minimality = is_minimal_imap(h.graph, g, cap);
    } else if (opts.allow_sampled) {
        rep.sampled = true;
        rep.imap = sampled_imap(complete_observed(h.graph), g, opts);
        if (rep.imap.ok) {
            // Sampled minimality: for each edge, finding a witness after the
            // deletion proves the edge is needed; not finding one is
            // inconclusive and leaves ok=false with the edge reported.
            MinimalityResult min{true, std::nullopt, true};
            for (const Edge& e : h.graph.edges()) {
                if (h.graph.is_observed(e.second)) continue;
                BayesNet pruned = complete_observed(remove_edge(h.graph, e));
                ImapResult probe = sampled_imap(pruned, g, opts);
                if (probe.ok) {  // no witness found: cannot certify this edge
                    min.ok = false;
                    min.removable_edge = e;
                    break;
                }
            }
            rep.minimality = min;
        }
    } else {
        throw SizeCapError("verify: " + std::to_string(g.size()) +
                           " variables exceeds cap " + std::to_string(cap) +
                           " (enable sampled mode to proceed)");
    }
    return rep;
}

}  // namespace nami
