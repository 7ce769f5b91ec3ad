#include "nami/graph.hpp"

#include <algorithm>
#include <queue>

namespace nami {

int VarSet::count() const {
    int c = 0;
    for (std::uint64_t w : words_) c += __builtin_popcountll(w);
    return c;
}

bool VarSet::empty() const {
    for (std::uint64_t w : words_)
        if (w) return false;
    return true;
}

bool VarSet::intersects(const VarSet& other) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
        if (words_[i] & other.words_[i]) return true;
    return false;
}

bool VarSet::is_subset_of(const VarSet& other) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
        if (words_[i] & ~other.words_[i]) return false;
    return true;
}

VarSet& VarSet::operator|=(const VarSet& other) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
    return *this;
}

VarSet& VarSet::operator&=(const VarSet& other) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
    return *this;
}

VarSet& VarSet::operator-=(const VarSet& other) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~other.words_[i];
    return *this;
}

VarSet VarSet::complement() const {
    VarSet out(n_);
    for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] = ~words_[i];
    // mask tail bits beyond the universe
    int tail = n_ & 63;
    if (tail && !out.words_.empty())
        out.words_.back() &= (std::uint64_t{1} << tail) - 1;
    return out;
}

std::vector<VarId> VarSet::to_vector() const {
    std::vector<VarId> out;
    out.reserve(count());
    for_each([&](VarId v) { out.push_back(v); });
    return out;
}

bool UndirectedGraph::has_edge(VarId u, VarId v) const {
    const auto& a = adj_[u].size() <= adj_[v].size() ? adj_[u] : adj_[v];
    VarId target = adj_[u].size() <= adj_[v].size() ? v : u;
    return std::binary_search(a.begin(), a.end(), target);
}

bool UndirectedGraph::add_edge(VarId u, VarId v) {
    if (u == v) throw Error("undirected graph: self-loop on " + std::to_string(u));
    auto ins = [](std::vector<VarId>& a, VarId x) {
        auto it = std::lower_bound(a.begin(), a.end(), x);
        if (it != a.end() && *it == x) return false;
        a.insert(it, x);
        return true;
    };
    bool added = ins(adj_[u], v);
    ins(adj_[v], u);
    if (added) ++edge_count_;
    return added;
}

std::vector<Edge> UndirectedGraph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (VarId u = 0; u < size(); ++u)
        for (VarId v : adj_[u])
            if (u < v) out.emplace_back(u, v);
    return out;
}

BayesNet::BayesNet(std::vector<Variable> variables, const std::vector<Edge>& edges)
    : vars_(std::move(variables)),
      parents_(vars_.size()),
      children_(vars_.size()),
      observed_(static_cast<int>(vars_.size())) {
    const int n = size();
    for (VarId v = 0; v < n; ++v) {
        const auto& nm = vars_[v].name;
        if (nm.empty()) throw Error("variable " + std::to_string(v) + " has an empty name");
        if (!by_name_.emplace(nm, v).second) throw Error("duplicate variable name: " + nm);
        if (vars_[v].observed) observed_.set(v);
    }
    for (const auto& [from, to] : edges) {
        if (from < 0 || from >= n || to < 0 || to >= n)
            throw Error("edge endpoint out of range");
        if (from == to) throw Error("self-loop on " + vars_[from].name);
        auto& p = parents_[to];
        auto it = std::lower_bound(p.begin(), p.end(), from);
        if (it != p.end() && *it == from)
            throw Error("duplicate edge " + vars_[from].name + " -> " + vars_[to].name);
        p.insert(it, from);
        auto& c = children_[from];
        c.insert(std::lower_bound(c.begin(), c.end(), to), to);
        ++edge_count_;
    }
    // Kahn scan; rejects cycles so every constructed net is a DAG.
    std::vector<int> indeg(n);
    for (VarId v = 0; v < n; ++v) indeg[v] = static_cast<int>(parents_[v].size());
    std::vector<VarId> stack;
    for (VarId v = 0; v < n; ++v)
        if (indeg[v] == 0) stack.push_back(v);
    int seen = 0;
    while (!stack.empty()) {
        VarId v = stack.back();
        stack.pop_back();
        ++seen;
        for (VarId c : children_[v])
            if (--indeg[c] == 0) stack.push_back(c);
    }
    if (seen != n) throw Error("edge relation is cyclic");
}

BayesNet BayesNet::from_names(const std::vector<std::string>& names,
                              const std::vector<std::pair<std::string, std::string>>& edges,
                              const std::vector<std::string>& observed) {
    std::vector<Variable> vars;
    vars.reserve(names.size());
    std::unordered_map<std::string, VarId> idx;
    for (const auto& nm : names) {
        idx.emplace(nm, static_cast<VarId>(vars.size()));
        vars.push_back({nm, false});
    }
    auto lookup = [&](const std::string& nm) {
        auto it = idx.find(nm);
        if (it == idx.end()) throw Error("unknown variable name: " + nm);
        return it->second;
    };
    for (const auto& nm : observed) vars[lookup(nm)].observed = true;
    std::vector<Edge> e;
    e.reserve(edges.size());
    for (const auto& [a, b] : edges) e.emplace_back(lookup(a), lookup(b));
    return BayesNet(std::move(vars), e);
}

VarId BayesNet::index_of(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) throw Error("unknown variable name: " + name);
    return it->second;
}

std::vector<VarId> BayesNet::latent_vars() const {
    std::vector<VarId> out;
    for (VarId v = 0; v < size(); ++v)
        if (!is_observed(v)) out.push_back(v);
    return out;
}

bool BayesNet::has_edge(VarId from, VarId to) const {
    const auto& p = parents_[to];
    return std::binary_search(p.begin(), p.end(), from);
}

std::vector<Edge> BayesNet::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (VarId v = 0; v < size(); ++v)
        for (VarId p : parents_[v]) out.emplace_back(p, v);
    std::sort(out.begin(), out.end());
    return out;
}

bool BayesNet::same_universe(const BayesNet& other) const {
    if (size() != other.size()) return false;
    for (VarId v = 0; v < size(); ++v)
        if (vars_[v].name != other.vars_[v].name) return false;
    return true;
}

std::vector<VarId> topological_order(const BayesNet& bn) {
    const int n = bn.size();
    std::vector<int> indeg(n);
    for (VarId v = 0; v < n; ++v) indeg[v] = static_cast<int>(bn.parents(v).size());
    std::priority_queue<VarId, std::vector<VarId>, std::greater<>> ready;
    for (VarId v = 0; v < n; ++v)
        if (indeg[v] == 0) ready.push(v);
    std::vector<VarId> order;
    order.reserve(n);
    while (!ready.empty()) {
        VarId v = ready.top();
        ready.pop();
        order.push_back(v);
        for (VarId c : bn.children(v))
            if (--indeg[c] == 0) ready.push(c);
    }
    return order;
}

UndirectedGraph skeleton(const BayesNet& bn) {
    UndirectedGraph g(bn.size());
    for (VarId v = 0; v < bn.size(); ++v)
        for (VarId p : bn.parents(v)) g.add_edge(p, v);
    return g;
}

std::vector<std::tuple<VarId, VarId, VarId>> immoralities(const BayesNet& bn) {
    std::vector<std::tuple<VarId, VarId, VarId>> out;
    for (VarId z = 0; z < bn.size(); ++z) {
        const auto& ps = bn.parents(z);
        for (std::size_t i = 0; i < ps.size(); ++i)
            for (std::size_t j = i + 1; j < ps.size(); ++j) {
                VarId x = ps[i], y = ps[j];  // ascending already
                if (!bn.has_edge(x, y) && !bn.has_edge(y, x))
                    out.emplace_back(x, z, y);
            }
    }
    std::sort(out.begin(), out.end());
    return out;
}

UndirectedGraph moralize(const BayesNet& bn) {
    UndirectedGraph g = skeleton(bn);
    for (VarId v = 0; v < bn.size(); ++v) {
        const auto& ps = bn.parents(v);
        for (std::size_t i = 0; i < ps.size(); ++i)
            for (std::size_t j = i + 1; j < ps.size(); ++j) g.add_edge(ps[i], ps[j]);
    }
    return g;
}

std::vector<VarId> markov_blanket(const BayesNet& bn, VarId v) {
    if (v < 0 || v >= bn.size()) throw Error("markov_blanket: variable out of range");
    VarSet mb(bn.size());
    for (VarId p : bn.parents(v)) mb.set(p);
    for (VarId c : bn.children(v)) {
        mb.set(c);
        for (VarId q : bn.parents(c)) mb.set(q);
    }
    mb.reset(v);
    return mb.to_vector();
}

VarSet ancestors_of(const BayesNet& bn, const VarSet& seeds) {
    VarSet out = seeds;
    std::vector<VarId> stack = seeds.to_vector();
    while (!stack.empty()) {
        VarId v = stack.back();
        stack.pop_back();
        for (VarId p : bn.parents(v))
            if (!out.test(p)) {
                out.set(p);
                stack.push_back(p);
            }
    }
    return out;
}

VarSet descendants_of(const BayesNet& bn, const VarSet& seeds) {
    VarSet out = seeds;
    std::vector<VarId> stack = seeds.to_vector();
    while (!stack.empty()) {
        VarId v = stack.back();
        stack.pop_back();
        for (VarId c : bn.children(v))
            if (!out.test(c)) {
                out.set(c);
                stack.push_back(c);
            }
    }
    return out;
}

std::vector<VarSet> all_descendants(const BayesNet& bn) {
    const int n = bn.size();
    std::vector<VarSet> desc(n, VarSet(n));
    auto order = topological_order(bn);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        VarId v = *it;
        for (VarId c : bn.children(v)) {
            desc[v].set(c);
            desc[v] |= desc[c];
        }
    }
    return desc;
}

}  // namespace nami
