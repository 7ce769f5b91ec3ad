#include "nami/masks.hpp"

#include <algorithm>

#include "nami/rng.hpp"

namespace nami {

namespace {

/// Labels for one hidden layer: values drawn from pool indices
/// [0, pool_size); with coverage, a shuffled copy of the pool goes first.
std::vector<int> draw_layer(int width, int pool_size, bool ensure_coverage, SplitMix& rng) {
    std::vector<int> out(width);
    int k = 0;
    if (ensure_coverage && pool_size > 0) {
        std::vector<int> pool(pool_size);
        for (int i = 0; i < pool_size; ++i) pool[i] = i;
        for (int i = pool_size - 1; i > 0; --i) std::swap(pool[i], pool[rng.below(i + 1)]);
        for (; k < width && k < pool_size; ++k) out[k] = pool[k];
    }
    for (; k < width; ++k) out[k] = pool_size > 0 ? rng.below(pool_size) : 0;
    return out;
}

}  // namespace

std::pair<MaskStack, MaskSpec> made_masks(int n_latent, int n_obs,
                                          const std::vector<int>& hidden_sizes,
                                          std::uint64_t seed, MadeOptions opts) {
    if (n_latent < 1) throw Error("made_masks: need at least one latent");
    if (n_obs < 0) throw Error("made_masks: negative observation count");
    for (int h : hidden_sizes)
        if (h < 1) throw Error("made_masks: hidden sizes must be positive");
    if (opts.outputs_per_factor < 1) throw Error("made_masks: outputs_per_factor must be >= 1");

    const int m = n_latent;
    const int n_in = m + n_obs;
    const int n_out = m * opts.outputs_per_factor;

    // integer labels: observations 0, latent z_i gets i (1-indexed)
    std::vector<int> in_label(n_in, 0);
    for (int i = 0; i < m; ++i) in_label[i] = i + 1;

    SplitMix rng(seed);
    const int pool = m - 1;  // usable hidden integers 1..m-1
    std::vector<std::vector<int>> hid_label;
    for (int w : hidden_sizes) {
        auto drawn = draw_layer(w, pool, opts.ensure_coverage, rng);
        for (int& v : drawn) v = pool > 0 ? v + 1 : 0;  // shift to 1..m-1, or 0 when m == 1
        hid_label.push_back(std::move(drawn));
    }

    std::vector<int> out_label(n_out);
    for (int i = 0; i < n_out; ++i) out_label[i] = i / opts.outputs_per_factor + 1;

    MaskStack stack;
    const std::vector<int>* prev = &in_label;
    bool first = true;
    for (const auto& cur : hid_label) {
        MaskMatrix mmat = MaskMatrix::zeros(static_cast<int>(prev->size()),
                                            static_cast<int>(cur.size()));
        for (int r = 0; r < mmat.rows; ++r)
            for (int c = 0; c < mmat.cols; ++c)
                mmat.at(r, c) = first ? ((*prev)[r] < cur[c]) : ((*prev)[r] <= cur[c]);
        stack.masks.push_back(std::move(mmat));
        prev = &cur;
        first = false;
    }
    {
        // strict < into the outputs; with no hidden layers this single
        // matrix is the direct input->output mask, same rule as the skip
        MaskMatrix mmat = MaskMatrix::zeros(static_cast<int>(prev->size()), n_out);
        for (int r = 0; r < mmat.rows; ++r)
            for (int c = 0; c < mmat.cols; ++c) mmat.at(r, c) = (*prev)[r] < out_label[c];
        stack.masks.push_back(std::move(mmat));
    }
    if (opts.include_skip && !hidden_sizes.empty()) {
        MaskMatrix sk = MaskMatrix::zeros(n_in, n_out);
        for (int r = 0; r < n_in; ++r)
            for (int c = 0; c < n_out; ++c) sk.at(r, c) = in_label[r] < out_label[c];
        stack.skip = std::move(sk);
    }

    // spec: record the subset reading of each integer label
    MaskSpec spec;
    spec.kind = "made";
    spec.seed = seed;
    spec.layer_sizes.push_back(n_in);
    for (int w : hidden_sizes) spec.layer_sizes.push_back(w);
    spec.layer_sizes.push_back(n_out);
    int max_label = m;
    spec.labels.resize(max_label + 1);
    for (int k = 0; k <= max_label; ++k) {
        spec.labels[k].id = k;
        // integer k stands for {z_1..z_{k-1}} plus all observations
        for (int z = 0; z + 1 < k; ++z) spec.labels[k].members.push_back(z);
        for (int o = 0; o < n_obs; ++o) spec.labels[k].members.push_back(m + o);
        std::sort(spec.labels[k].members.begin(), spec.labels[k].members.end());
    }
    spec.input_labels = in_label;
    spec.hidden_labels = hid_label;
    spec.output_labels = out_label;
    return {std::move(stack), std::move(spec)};
}

MaskSpec tree_made_spec(int depth, const std::vector<int>& hidden_sizes, std::uint64_t seed,
                        bool ensure_coverage) {
    if (depth < 2) throw Error("tree_made_spec: depth must be at least 2");
    for (int h : hidden_sizes)
        if (h < 1) throw Error("tree_made_spec: hidden sizes must be positive");
    const int n_nodes = (1 << depth) - 1;
    const int n_latent = (1 << (depth - 1)) - 1;  // internal nodes 0..n_latent-1

    MaskSpec spec;
    spec.kind = "tree";
    spec.seed = seed;

    auto add_label = [&](std::vector<VarId> members) {
        for (const auto& l : spec.labels)
            if (l.members == members) return l.id;
        int id = static_cast<int>(spec.labels.size());
        spec.labels.push_back({id, std::move(members)});
        return id;
    };
    auto suffix = [&](int s, int e) {
        std::vector<VarId> v;
        for (int k = s; k <= e; ++k) v.push_back(k);
        return v;
    };

    // input singletons
    spec.input_labels.resize(n_nodes);
    for (int i = 0; i < n_nodes; ++i) spec.input_labels[i] = add_label({i});

    // hidden pool: for each factor i, the singleton {x_{i+1}} and the
    // suffixes {x_s..x_{2(i+1)}} for s in [i+2, 2i+1]
    std::vector<int> pool_ids;
    for (int i = 0; i < n_latent; ++i) {
        pool_ids.push_back(add_label({i + 1}));
        for (int s = i + 2; s <= 2 * i + 1; ++s)
            pool_ids.push_back(add_label(suffix(s, 2 * (i + 1))));
    }
    std::sort(pool_ids.begin(), pool_ids.end());
    pool_ids.erase(std::unique(pool_ids.begin(), pool_ids.end()), pool_ids.end());

    SplitMix rng(seed);
    for (int w : hidden_sizes) {
        auto picks = draw_layer(w, static_cast<int>(pool_ids.size()), ensure_coverage, rng);
        std::vector<int> layer(w);
        for (int k = 0; k < w; ++k) layer[k] = pool_ids[picks[k]];
        spec.hidden_labels.push_back(std::move(layer));
    }

    // outputs: factor q_i conditions on {x_{i+1}..x_{2(i+1)}}
    spec.output_labels.resize(n_latent);
    for (int i = 0; i < n_latent; ++i)
        spec.output_labels[i] = add_label(suffix(i + 1, 2 * (i + 1)));

    spec.layer_sizes.push_back(n_nodes);
    for (int w : hidden_sizes) spec.layer_sizes.push_back(w);
    spec.layer_sizes.push_back(n_latent);
    return spec;
}

MaskStack subset_masks(const MaskSpec& spec) {
    const int n_layers = static_cast<int>(spec.layer_sizes.size());
    if (n_layers < 2) throw Error("subset_masks: need at least input and output layers");
    if (static_cast<int>(spec.input_labels.size()) != spec.layer_sizes.front() ||
        static_cast<int>(spec.output_labels.size()) != spec.layer_sizes.back() ||
        static_cast<int>(spec.hidden_labels.size()) != n_layers - 2)
        throw Error("subset_masks: label lists do not match layer sizes");
    for (int l = 0; l < n_layers - 2; ++l)
        if (static_cast<int>(spec.hidden_labels[l].size()) != spec.layer_sizes[l + 1])
            throw Error("subset_masks: hidden label list does not match layer size");
    auto members = [&](int id) -> const std::vector<VarId>& {
        if (id < 0 || id >= static_cast<int>(spec.labels.size()))
            throw Error("subset_masks: label id out of range");
        if (spec.labels[id].id != id)
            throw Error("subset_masks: label table must be indexed by id");
        return spec.labels[id].members;
    };
    auto contained = [&](int a, int b) {
        const auto& ma = members(a);
        const auto& mb = members(b);
        return std::includes(mb.begin(), mb.end(), ma.begin(), ma.end());
    };

    std::vector<const std::vector<int>*> layers;
    layers.push_back(&spec.input_labels);
    for (const auto& h : spec.hidden_labels) layers.push_back(&h);
    layers.push_back(&spec.output_labels);

    MaskStack stack;
    for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
        const auto& src = *layers[l];
        const auto& dst = *layers[l + 1];
        MaskMatrix mmat = MaskMatrix::zeros(static_cast<int>(src.size()),
                                            static_cast<int>(dst.size()));
        for (int r = 0; r < mmat.rows; ++r)
            for (int c = 0; c < mmat.cols; ++c) mmat.at(r, c) = contained(src[r], dst[c]);
        stack.masks.push_back(std::move(mmat));
    }
    if (layers.size() > 2) {
        const auto& src = spec.input_labels;
        const auto& dst = spec.output_labels;
        MaskMatrix sk = MaskMatrix::zeros(static_cast<int>(src.size()),
                                          static_cast<int>(dst.size()));
        for (int r = 0; r < sk.rows; ++r)
            for (int c = 0; c < sk.cols; ++c) sk.at(r, c) = contained(src[r], dst[c]);
        stack.skip = std::move(sk);
    }
    return stack;
}

ConnectivityResult verify_connectivity(const MaskStack& stack,
                                       const std::vector<std::vector<int>>& expected) {
    if (stack.masks.empty()) throw Error("verify_connectivity: empty stack");
    const int n_in = stack.masks.front().rows;
    const int n_out = stack.masks.back().cols;
    for (std::size_t l = 0; l + 1 < stack.masks.size(); ++l)
        if (stack.masks[l].cols != stack.masks[l + 1].rows)
            throw Error("verify_connectivity: layer shapes do not chain");
    if (stack.skip && (stack.skip->rows != n_in || stack.skip->cols != n_out))
        throw Error("verify_connectivity: skip mask shape mismatch");
    if (static_cast<int>(expected.size()) != n_out)
        throw Error("verify_connectivity: expected sets do not match output count");

    // reach[u] = set of inputs that can reach unit u of the current layer
    std::vector<std::vector<char>> reach(n_in, std::vector<char>(n_in, 0));
    for (int i = 0; i < n_in; ++i) reach[i][i] = 1;
    for (const auto& mmat : stack.masks) {
        std::vector<std::vector<char>> next(mmat.cols, std::vector<char>(n_in, 0));
        for (int r = 0; r < mmat.rows; ++r)
            for (int c = 0; c < mmat.cols; ++c)
                if (mmat.at(r, c))
                    for (int i = 0; i < n_in; ++i)
                        if (reach[r][i]) next[c][i] = 1;
        reach = std::move(next);
    }
    if (stack.skip)
        for (int r = 0; r < n_in; ++r)
            for (int c = 0; c < n_out; ++c)
                if (stack.skip->at(r, c)) reach[c][r] = 1;

    ConnectivityResult res;
    res.reachable.resize(n_out);
    for (int c = 0; c < n_out; ++c)
        for (int i = 0; i < n_in; ++i)
            if (reach[c][i]) res.reachable[c].push_back(i);

    for (int c = 0; c < n_out; ++c) {
        std::vector<char> want(n_in, 0);
        for (int i : expected[c]) {
            if (i < 0 || i >= n_in) throw Error("verify_connectivity: expected input out of range");
            want[i] = 1;
        }
        for (int i = 0; i < n_in; ++i) {
            if (want[i] && !reach[c][i]) {
                res.ok = false;
                res.witness = ConnectivityWitness{c, i, true};
                return res;
            }
            if (!want[i] && reach[c][i]) {
                res.ok = false;
                res.witness = ConnectivityWitness{c, i, false};
                return res;
            }
        }
    }
    res.ok = true;
    return res;
}

}  // namespace nami
