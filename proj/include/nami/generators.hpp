#pragma once

#include <cstdint>

#include "nami/factor.hpp"
#include "nami/graph.hpp"

namespace nami {

/// X0 -> X1 -> ... -> X(n-1) with the last `observed_tail` nodes observed.
BayesNet chain_bn(int n, int observed_tail = 1);

/// Complete binary tree of the given depth (nodes 0..2^d-2, node i points
/// to 2i+1 and 2i+2) with the leaves observed.
BayesNet binary_tree_bn(int depth);

/// Collapsed mixture-model graph: global latents theta and phi, one latent
/// assignment z_i and one observed point x_i per datum, with edges
/// phi -> z_i, z_i -> x_i, theta -> x_i.
BayesNet gmm_bn(int n_points);

struct RandomDagOptions {
    int n = 6;
    double edge_prob = 0.35;
    double observed_prob = 0.3;
    bool shuffle = true;  // relabel away from the generation order
};

/// Random DAG with at least one latent variable.
BayesNet random_dag(const RandomDagOptions& opts, std::uint64_t seed);

/// Random CPDs: per-variable cardinality uniform in {2..max_card}, rows
/// drawn from a flat Dirichlet.
DiscreteBN random_discrete_bn(const BayesNet& structure, int max_card, std::uint64_t seed);

}  // namespace nami
