#pragma once

#include <optional>
#include <vector>

#include "nami/independence.hpp"
#include "nami/inversion.hpp"

namespace nami {

struct ImapResult {
    bool ok = false;
    /// First assertion of I(h) missing from I(g), in (x, Z, y) scan order.
    std::optional<IndepAssertion> witness;
    bool sampled = false;  // true when decided from sampled Z subsets only
};

struct MinimalityResult {
    bool ok = false;
    std::optional<Edge> removable_edge;  // first edge whose removal keeps the I-map
    bool sampled = false;
};

struct NaturalnessResult {
    bool ok = false;
    /// Present only when unnatural: one latent-latent edge into a model
    /// descendant and one into a model ancestor.
    std::optional<Edge> into_descendant;
    std::optional<Edge> into_ancestor;
};

/// I(h) ⊆ I(g) over singleton-pair assertions. An inverse carries an
/// unspecified factorization over its observed block, so the decision is
/// made with that block completed into a clique (it then claims nothing
/// about the observations); when the check fails, the witness is the first
/// assertion of the raw graph absent from I(g), which is the assertion the
/// inverse visibly makes as drawn. Both graphs must share the universe;
/// throws SizeCapError above the cap.
ImapResult is_imap(const BayesNet& h, const BayesNet& g, int cap = kDefaultEnumCap);

/// True iff h is an I-map for g and removing any single edge into a latent
/// variable breaks the I-map property (observed-block edges belong to the
/// unconstrained observation factorization and are not candidates).
/// Throws Error when h is not an I-map of g.
MinimalityResult is_minimal_imap(const BayesNet& h, const BayesNet& g,
                                 int cap = kDefaultEnumCap);

/// Natural inverse check: either no latent-latent edge of h points into a
/// g-descendant of its source, or none points into a g-ancestor. Edges
/// touching observed variables do not constrain the order of the random
/// choices and are ignored.
NaturalnessResult is_natural(const BayesNet& h, const BayesNet& g);
NaturalnessResult is_natural(const InverseStructure& h, const BayesNet& g);

/// Minimal-I-map construction by conditioning-set pruning: visit variables
/// in `order` (all observed first, then latents); start each latent from
/// all earlier variables and repeatedly drop any member separated from the
/// child by the rest, until a fixed point. Independent of the elimination
/// machinery; used as a cross-check oracle.
BayesNet prune_minimal_inverse(const BayesNet& g, const std::vector<VarId>& order,
                               int cap = kDefaultEnumCap);

struct VerificationOptions {
    int cap = kDefaultEnumCap;
    /// Above the cap, fall back to sampled Z subsets instead of failing.
    bool allow_sampled = false;
    int samples_per_pair = 128;
    std::uint64_t seed = 0;
};

struct VerificationReport {
    ImapResult imap;
    std::optional<MinimalityResult> minimality;  // absent when not an I-map
    NaturalnessResult naturalness;
    int nodes = 0;
    int model_edges = 0;
    int inverse_edges = 0;
    bool sampled = false;

    bool all_passed() const {
        return imap.ok && minimality && minimality->ok && naturalness.ok;
    }
};

VerificationReport verify(const InverseStructure& h, const BayesNet& g,
                          VerificationOptions opts = {});

/// Rejects inverse candidates that break the basic shape contract: same
/// universe as the model, same observed partition, and no edge from a
/// latent into an observed variable.
void validate_inverse_shape(const BayesNet& h, const BayesNet& g);

}  // namespace nami
