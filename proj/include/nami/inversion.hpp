#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nami/elimination.hpp"
#include "nami/graph.hpp"

namespace nami {

enum class InverseMode {
    Forward,   // simulate elimination in a topological order of the latents
    Reverse,   // simulate elimination in a reverse topological order
    Grouped,   // forward/reverse run once per latent group in sequence
    Heuristic, // Markov-blanket edge reversal
    FullyConnected,
    MeanField,
};

std::string to_string(InverseMode mode);
InverseMode inverse_mode_from_string(const std::string& s);

/// Per-step record of the graph-inversion loop, enough to reprint the
/// elimination table: frontier, chosen variable, fill edges, parents.
struct InversionStep {
    std::vector<VarId> frontier;
    VarId v;
    std::vector<Edge> fills;
    std::vector<VarId> parents;
};

/// Inverse structure: a DAG over the same universe (observed flags copied),
/// the elimination order that produced it for the elimination-based modes,
/// and the mode tag. No latent is ever a parent of an observed variable.
struct InverseStructure {
    BayesNet graph;
    InverseMode mode;
    std::vector<VarId> elim_order;     // populated for Forward/Reverse/Grouped
    std::vector<InversionStep> steps;  // ditto
    std::vector<Edge> moral_fills;     // co-parent edges added at step 0

    /// Size of the largest elimination clique ({v} + parents), 1 if empty.
    int largest_clique() const;
};

struct InvertOptions {
    /// Ordered partition of the latent variables; elimination runs once per
    /// group in sequence. Empty means one group holding all latents.
    std::vector<std::vector<VarId>> groups;
    /// Continue eliminating the observed variables after the latents, so the
    /// result also carries a factorization over the observations.
    bool include_observed = false;
};

/// Graph inversion by simulated variable elimination with the min-fill
/// choice rule (ties broken by ascending VarId). In Forward mode the
/// frontier admits a latent once all upstream latents are eliminated;
/// Reverse swaps upstream/downstream. Upstream is evaluated through
/// observed intermediates, so elimination always follows the latent
/// ancestry order. When the model contains latents with no observed
/// descendant, the induced-graph simulation overstates their couplings
/// (their factors integrate out of the posterior); the computed parent
/// sets are then pruned to a minimal fixed point. Models whose latents all
/// touch the data never take that path. Throws Error when bn has no
/// latents or the groups do not partition the latent set.
InverseStructure nami_invert(const BayesNet& bn, InverseMode mode, InvertOptions opts = {});

/// Markov-blanket heuristic inverse: visit variables in the reverse of the
/// topological order, set parents to the already-visited part of the Markov
/// blanket, keeping only observed candidates for observed variables.
InverseStructure stuhlmuller_invert(const BayesNet& bn);

/// Every latent depends on all observed variables and all latents earlier
/// in `order` (defaults to the topological order of the latents).
InverseStructure fully_connected_inverse(const BayesNet& bn,
                                         std::optional<std::vector<VarId>> order = {});

/// Every latent depends on all observed variables; no latent-latent edges.
InverseStructure mean_field_inverse(const BayesNet& bn);

int edge_count(const InverseStructure& h);

}  // namespace nami
