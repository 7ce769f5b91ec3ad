#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nami/generators.hpp"
#include "nami/graph.hpp"
#include "nami/json_io.hpp"

namespace nami::test {

inline std::string fixture_path(const std::string& name) {
    return std::string(NAMI_FIXTURES_DIR) + "/" + name;
}

inline BayesNet load_fixture(const std::string& name) {
    return bn_from_json(load_json_file(fixture_path(name)));
}

// ---------------------------------------------------------------------
// Trail-enumeration d-separation oracle. Self-contained: enumerates all
// simple trails in the skeleton and evaluates activity directly, without
// going through the library's reachability or is_active_trail paths.
// ---------------------------------------------------------------------

inline bool oracle_node_activates(const BayesNet& bn, VarId node, std::uint64_t z_mask) {
    // true when `node` or one of its descendants is in Z
    std::vector<VarId> stack{node};
    std::vector<char> seen(bn.size(), 0);
    seen[node] = 1;
    while (!stack.empty()) {
        VarId v = stack.back();
        stack.pop_back();
        if ((z_mask >> v) & 1) return true;
        for (VarId c : bn.children(v))
            if (!seen[c]) {
                seen[c] = 1;
                stack.push_back(c);
            }
    }
    return false;
}

inline bool oracle_trail_active(const BayesNet& bn, const std::vector<VarId>& trail,
                                std::uint64_t z_mask) {
    for (std::size_t i = 0; i < trail.size(); ++i) {
        bool collider = i > 0 && i + 1 < trail.size() && bn.has_edge(trail[i - 1], trail[i]) &&
                        bn.has_edge(trail[i + 1], trail[i]);
        if (collider) {
            if (!oracle_node_activates(bn, trail[i], z_mask)) return false;
        } else if ((z_mask >> trail[i]) & 1) {
            return false;
        }
    }
    return true;
}

inline bool oracle_d_separated(const BayesNet& bn, VarId x, VarId y, std::uint64_t z_mask) {
    const int n = bn.size();
    std::vector<std::vector<VarId>> adj(n);
    for (VarId v = 0; v < n; ++v)
        for (VarId p : bn.parents(v)) {
            adj[v].push_back(p);
            adj[p].push_back(v);
        }
    std::vector<VarId> path{x};
    std::vector<char> used(n, 0);
    used[x] = 1;
    bool found = false;
    std::function<void(VarId)> dfs = [&](VarId v) {
        if (found) return;
        if (v == y) {
            if (oracle_trail_active(bn, path, z_mask)) found = true;
            return;
        }
        for (VarId u : adj[v]) {
            if (used[u]) continue;
            used[u] = 1;
            path.push_back(u);
            dfs(u);
            path.pop_back();
            used[u] = 0;
        }
    };
    dfs(x);
    return !found;
}

// ---------------------------------------------------------------------
// Symbolic variable-elimination scope oracle: tracks factor scopes only,
// independent of the moralize/fill machinery. Returns the scope of each
// intermediate factor psi_i (eliminated variable included).
// ---------------------------------------------------------------------

inline std::vector<std::vector<VarId>> oracle_ve_scopes(const BayesNet& bn,
                                                        const std::vector<VarId>& order) {
    std::vector<std::vector<VarId>> factors;
    for (VarId v = 0; v < bn.size(); ++v) {
        std::vector<VarId> scope = bn.parents(v);
        scope.push_back(v);
        std::sort(scope.begin(), scope.end());
        factors.push_back(std::move(scope));
    }
    std::vector<std::vector<VarId>> psis;
    for (VarId v : order) {
        std::vector<VarId> merged;
        std::vector<std::vector<VarId>> keep;
        for (auto& f : factors) {
            if (std::binary_search(f.begin(), f.end(), v)) {
                for (VarId s : f)
                    if (!std::binary_search(merged.begin(), merged.end(), s)) {
                        merged.insert(std::lower_bound(merged.begin(), merged.end(), s), s);
                    }
            } else {
                keep.push_back(std::move(f));
            }
        }
        psis.push_back(merged);
        merged.erase(std::remove(merged.begin(), merged.end(), v), merged.end());
        keep.push_back(std::move(merged));
        factors = std::move(keep);
    }
    return psis;
}

// small helpers

inline std::vector<VarId> ids(const BayesNet& bn, const std::vector<std::string>& names) {
    std::vector<VarId> out;
    for (const auto& nm : names) out.push_back(bn.index_of(nm));
    return out;
}

inline std::vector<VarId> sorted_parents(const BayesNet& bn, const std::string& name) {
    return bn.parents(bn.index_of(name));
}

}  // namespace nami::test
