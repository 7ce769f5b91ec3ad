#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nami/error.hpp"
#include "nami/graph.hpp"

namespace nami {

/// Binary mask matrix, rows = source units, cols = target units.
struct MaskMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<std::uint8_t> data;  // row-major 0/1

    std::uint8_t at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
    std::uint8_t& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    static MaskMatrix zeros(int rows, int cols) {
        return {rows, cols, std::vector<std::uint8_t>(static_cast<std::size_t>(rows) * cols, 0)};
    }
};

/// Label denoting a subset of the model variables. For the integer scheme
/// the id is the assigned integer and members record the prefix set it
/// stands for; for the subset scheme the id indexes the declared pool.
struct SubsetLabel {
    int id = 0;
    std::vector<VarId> members;  // sorted ascending
};

struct MaskSpec {
    std::string kind;  // "made", "tree" or "subset"
    std::vector<int> layer_sizes;  // inputs, hidden..., outputs
    std::uint64_t seed = 0;
    std::vector<SubsetLabel> labels;            // pool, indexed by id
    std::vector<int> input_labels;              // label id per input unit
    std::vector<std::vector<int>> hidden_labels;
    std::vector<int> output_labels;
};

struct MaskStack {
    std::vector<MaskMatrix> masks;      // layer-to-layer, input side first
    std::optional<MaskMatrix> skip;     // input -> output
};

struct MadeOptions {
    /// Assign each usable label at least once per hidden layer before
    /// filling uniformly; avoids starving dependencies at small widths.
    bool ensure_coverage = true;
    bool include_skip = true;
    int outputs_per_factor = 1;
};

/// Conditional-MADE masks for m latents given n_obs observations.
/// Inputs are (z_1..z_m, x_1..x_n_obs): observations carry integer 0,
/// latent z_i carries i. Hidden units draw integers from {1..m-1}.
/// Connection rules: input->hidden strict <, hidden->hidden <=,
/// hidden->output strict <, skip strict <. Outputs for factor q_i carry
/// integer i, so a q_i parameter can reach exactly {z_1..z_{i-1}} plus the
/// observations. With m = 1 the hidden integer range is empty: hidden
/// units are assigned 0, latent inputs are fully masked off, and the
/// observations still flow through the skip connections.
std::pair<MaskStack, MaskSpec> made_masks(int n_latent, int n_obs,
                                          const std::vector<int>& hidden_sizes,
                                          std::uint64_t seed, MadeOptions opts = {});

/// Subset labels for a binary tree of depth d with observed leaves: the
/// conditioning set of factor q_i over the internal node x_i splits into
/// the singleton {x_{i+1}} and every suffix {x_s..x_{2(i+1)}} for
/// s in [i+2, 2i+1]. Inputs carry their own singleton, outputs carry the
/// full conditioning set, hidden units draw uniformly from the pool.
MaskSpec tree_made_spec(int depth, const std::vector<int>& hidden_sizes, std::uint64_t seed,
                        bool ensure_coverage = true);

/// Masks from subset labels: a connection is enabled iff the source label's
/// member set is contained in the target label's member set. Applied
/// uniformly to every layer pair and to the input->output skip.
MaskStack subset_masks(const MaskSpec& spec);

struct ConnectivityWitness {
    int output = -1;
    int input = -1;
    bool missing = false;  // expected but unreachable; otherwise illegal extra
};

struct ConnectivityResult {
    bool ok = false;
    std::optional<ConnectivityWitness> witness;
    std::vector<std::vector<int>> reachable;  // per output: reachable input units
};

/// Boolean-product reachability through the stack (plus skip) compared
/// against the expected input set of every output unit.
ConnectivityResult verify_connectivity(const MaskStack& stack,
                                       const std::vector<std::vector<int>>& expected);

}  // namespace nami
