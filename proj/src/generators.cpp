#include "nami/generators.hpp"

#include <algorithm>
#include <cmath>

#include "nami/rng.hpp"

namespace nami {

namespace {

std::vector<Variable> numbered_vars(int n, const char* prefix) {
    std::vector<Variable> vars(n);
    for (int i = 0; i < n; ++i) vars[i].name = prefix + std::to_string(i);
    return vars;
}

}  // namespace

BayesNet chain_bn(int n, int observed_tail) {
    if (n < 1) throw Error("chain_bn: need at least one node");
    if (observed_tail < 0 || observed_tail > n) throw Error("chain_bn: bad observed tail");
    auto vars = numbered_vars(n, "X");
    for (int i = n - observed_tail; i < n; ++i) vars[i].observed = true;
    std::vector<Edge> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return BayesNet(std::move(vars), edges);
}

BayesNet binary_tree_bn(int depth) {
    if (depth < 1) throw Error("binary_tree_bn: depth must be positive");
    const int n = (1 << depth) - 1;
    const int first_leaf = (1 << (depth - 1)) - 1;
    auto vars = numbered_vars(n, "X");
    for (int i = first_leaf; i < n; ++i) vars[i].observed = true;
    std::vector<Edge> edges;
    for (int i = 0; i < first_leaf; ++i) {
        edges.emplace_back(i, 2 * i + 1);
        edges.emplace_back(i, 2 * i + 2);
    }
    return BayesNet(std::move(vars), edges);
}

BayesNet gmm_bn(int n_points) {
    if (n_points < 1) throw Error("gmm_bn: need at least one data point");
    std::vector<Variable> vars;
    vars.push_back({"theta", false});
    vars.push_back({"phi", false});
    for (int i = 1; i <= n_points; ++i) vars.push_back({"z" + std::to_string(i), false});
    for (int i = 1; i <= n_points; ++i) vars.push_back({"x" + std::to_string(i), true});
    std::vector<Edge> edges;
    const VarId theta = 0, phi = 1;
    for (int i = 0; i < n_points; ++i) {
        VarId z = 2 + i;
        VarId x = 2 + n_points + i;
        edges.emplace_back(phi, z);
        edges.emplace_back(z, x);
        edges.emplace_back(theta, x);
    }
    return BayesNet(std::move(vars), edges);
}

BayesNet random_dag(const RandomDagOptions& opts, std::uint64_t seed) {
    if (opts.n < 1) throw Error("random_dag: need at least one node");
    SplitMix rng(seed);
    std::vector<VarId> relabel(opts.n);
    for (int i = 0; i < opts.n; ++i) relabel[i] = i;
    if (opts.shuffle)
        for (int i = opts.n - 1; i > 0; --i) std::swap(relabel[i], relabel[rng.below(i + 1)]);

    std::vector<Edge> edges;
    for (int i = 0; i < opts.n; ++i)
        for (int j = i + 1; j < opts.n; ++j)
            if (rng.coin(opts.edge_prob)) edges.emplace_back(relabel[i], relabel[j]);

    auto vars = numbered_vars(opts.n, "X");
    for (int i = 0; i < opts.n; ++i)
        if (rng.coin(opts.observed_prob)) vars[i].observed = true;
    bool any_latent = false;
    for (const auto& v : vars) any_latent |= !v.observed;
    if (!any_latent) vars[relabel[0]].observed = false;
    return BayesNet(std::move(vars), edges);
}

DiscreteBN random_discrete_bn(const BayesNet& structure, int max_card, std::uint64_t seed) {
    if (max_card < 2) throw Error("random_discrete_bn: max_card must be at least 2");
    SplitMix rng(seed);
    const int n = structure.size();
    std::vector<int> cards(n);
    for (VarId v = 0; v < n; ++v) cards[v] = 2 + rng.below(max_card - 1);

    std::vector<Factor> cpds;
    cpds.reserve(n);
    for (VarId v = 0; v < n; ++v) {
        std::vector<VarId> scope = structure.parents(v);
        scope.push_back(v);
        std::vector<int> fc;
        for (VarId s : scope) fc.push_back(cards[s]);
        std::size_t total = 1;
        for (int c : fc) total *= static_cast<std::size_t>(c);
        std::vector<double> table(total);
        const std::size_t cv = static_cast<std::size_t>(cards[v]);
        for (std::size_t r = 0; r < total / cv; ++r) {
            // flat Dirichlet row via normalized exponentials
            double sum = 0;
            for (std::size_t k = 0; k < cv; ++k) {
                double e = -std::log(rng.uniform01());
                table[r * cv + k] = e;
                sum += e;
            }
            for (std::size_t k = 0; k < cv; ++k) table[r * cv + k] /= sum;
            // guard the row against accumulated rounding
            double check = 0;
            for (std::size_t k = 0; k < cv; ++k) check += table[r * cv + k];
            table[r * cv + cv - 1] += 1.0 - check;
        }
        cpds.emplace_back(std::move(scope), std::move(fc), std::move(table));
    }
    return DiscreteBN(structure, std::move(cards), std::move(cpds));
}

}  // namespace nami
