#include "nami/factor.hpp"

#include <algorithm>
#include <cmath>

namespace nami {

namespace {

std::size_t checked_table_size(const std::vector<int>& cards) {
    std::size_t total = 1;
    for (int c : cards) {
        if (c < 1) throw Error("factor: cardinality must be positive");
        if (total > kJointCap / static_cast<std::size_t>(c))
            throw SizeCapError("factor: table exceeds the size cap");
        total *= static_cast<std::size_t>(c);
    }
    return total;
}

}  // namespace

Factor::Factor(std::vector<VarId> scope, std::vector<int> cards, std::vector<double> values)
    : scope_(std::move(scope)), cards_(std::move(cards)), values_(std::move(values)) {
    if (scope_.size() != cards_.size()) throw Error("factor: scope/cardinality size mismatch");
    for (std::size_t i = 0; i < scope_.size(); ++i)
        for (std::size_t j = i + 1; j < scope_.size(); ++j)
            if (scope_[i] == scope_[j]) throw Error("factor: duplicate variable in scope");
    std::size_t expect = checked_table_size(cards_);
    if (values_.size() != expect) throw Error("factor: value table has wrong length");
    for (double v : values_)
        if (std::isnan(v) || v < 0.0) throw Error("factor: values must be nonnegative");
}

Factor Factor::ones(std::vector<VarId> scope, std::vector<int> cards) {
    std::size_t total = checked_table_size(cards);
    return Factor(std::move(scope), std::move(cards), std::vector<double>(total, 1.0));
}

Factor Factor::scalar(double value) { return Factor({}, {}, {value}); }

bool Factor::in_scope(VarId v) const {
    return std::find(scope_.begin(), scope_.end(), v) != scope_.end();
}

int Factor::position_of(VarId v) const {
    auto it = std::find(scope_.begin(), scope_.end(), v);
    return it == scope_.end() ? -1 : static_cast<int>(it - scope_.begin());
}

double Factor::at_assignment(const std::vector<int>& state_by_var) const {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < scope_.size(); ++k)
        idx = idx * static_cast<std::size_t>(cards_[k]) +
              static_cast<std::size_t>(state_by_var[scope_[k]]);
    return values_[idx];
}

double Factor::sum() const {
    double s = 0;
    for (double v : values_) s += v;
    return s;
}

Factor factor_product(const Factor& a, const Factor& b) {
    std::vector<VarId> scope = a.scope();
    std::vector<int> cards = a.cards();
    for (std::size_t k = 0; k < b.scope().size(); ++k) {
        int pos = a.position_of(b.scope()[k]);
        if (pos >= 0) {
            if (a.cards()[pos] != b.cards()[k])
                throw Error("factor_product: cardinality mismatch on shared variable");
        } else {
            scope.push_back(b.scope()[k]);
            cards.push_back(b.cards()[k]);
        }
    }
    std::size_t total = 1;
    for (int c : cards) {
        if (total > kJointCap / static_cast<std::size_t>(c))
            throw SizeCapError("factor_product: result exceeds the size cap");
        total *= static_cast<std::size_t>(c);
    }

    // strides of each result variable inside a and b
    const std::size_t m = scope.size();
    std::vector<std::size_t> stride_a(m, 0), stride_b(m, 0);
    auto fill_strides = [&](const Factor& f, std::vector<std::size_t>& out) {
        std::size_t s = 1;
        for (int k = static_cast<int>(f.scope().size()) - 1; k >= 0; --k) {
            for (std::size_t r = 0; r < m; ++r)
                if (scope[r] == f.scope()[k]) out[r] = s;
            s *= static_cast<std::size_t>(f.cards()[k]);
        }
    };
    fill_strides(a, stride_a);
    fill_strides(b, stride_b);

    std::vector<double> values(total);
    std::vector<int> state(m, 0);
    std::size_t ia = 0, ib = 0;
    for (std::size_t idx = 0; idx < total; ++idx) {
        values[idx] = a.values()[ia] * b.values()[ib];
        // odometer increment, last variable fastest
        for (int r = static_cast<int>(m) - 1; r >= 0; --r) {
            ++state[r];
            ia += stride_a[r];
            ib += stride_b[r];
            if (state[r] < cards[r]) break;
            ia -= stride_a[r] * static_cast<std::size_t>(cards[r]);
            ib -= stride_b[r] * static_cast<std::size_t>(cards[r]);
            state[r] = 0;
        }
    }
    return Factor(std::move(scope), std::move(cards), std::move(values));
}

Factor factor_marginalize(const Factor& a, VarId v) {
    int pos = a.position_of(v);
    if (pos < 0) throw Error("factor_marginalize: variable not in scope");
    std::vector<VarId> scope;
    std::vector<int> cards;
    for (std::size_t k = 0; k < a.scope().size(); ++k) {
        if (static_cast<int>(k) == pos) continue;
        scope.push_back(a.scope()[k]);
        cards.push_back(a.cards()[k]);
    }
    std::size_t outer = 1, inner = 1;
    for (int k = 0; k < pos; ++k) outer *= static_cast<std::size_t>(a.cards()[k]);
    for (std::size_t k = pos + 1; k < a.cards().size(); ++k)
        inner *= static_cast<std::size_t>(a.cards()[k]);
    const std::size_t cv = static_cast<std::size_t>(a.cards()[pos]);

    std::vector<double> values(outer * inner, 0.0);
    for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t s = 0; s < cv; ++s) {
            const double* src = a.values().data() + (o * cv + s) * inner;
            double* dst = values.data() + o * inner;
            for (std::size_t i = 0; i < inner; ++i) dst[i] += src[i];
        }
    return Factor(std::move(scope), std::move(cards), std::move(values));
}

Factor eliminate_variables(std::vector<Factor> factors, const std::vector<VarId>& order) {
    for (VarId v : order) {
        std::vector<Factor> keep;
        Factor prod = Factor::scalar(1.0);
        bool found = false;
        for (auto& f : factors) {
            if (f.in_scope(v)) {
                prod = found ? factor_product(prod, f) : std::move(f);
                found = true;
            } else {
                keep.push_back(std::move(f));
            }
        }
        if (!found)
            throw Error("eliminate_variables: variable " + std::to_string(v) +
                        " is in no factor scope");
        keep.push_back(factor_marginalize(prod, v));
        factors = std::move(keep);
    }
    Factor result = Factor::scalar(1.0);
    for (auto& f : factors) result = factor_product(result, f);
    return result;
}

DiscreteBN::DiscreteBN(BayesNet structure, std::vector<int> cards, std::vector<Factor> cpds)
    : structure_(std::move(structure)), cards_(std::move(cards)), cpds_(std::move(cpds)) {
    const int n = structure_.size();
    if (static_cast<int>(cards_.size()) != n || static_cast<int>(cpds_.size()) != n)
        throw Error("discrete bn: need one cardinality and one CPD per variable");
    for (VarId v = 0; v < n; ++v) {
        const Factor& f = cpds_[v];
        std::vector<VarId> expect = structure_.parents(v);
        expect.push_back(v);
        if (f.scope() != expect)
            throw Error("discrete bn: CPD scope of " + structure_.name(v) +
                        " must be (parents..., variable)");
        for (std::size_t k = 0; k < f.scope().size(); ++k)
            if (f.cards()[k] != cards_[f.scope()[k]])
                throw Error("discrete bn: CPD cardinality mismatch for " + structure_.name(v));
        // each parent-configuration row must normalize over the child
        const std::size_t cv = static_cast<std::size_t>(cards_[v]);
        const std::size_t rows = f.table_size() / cv;
        for (std::size_t r = 0; r < rows; ++r) {
            double s = 0;
            for (std::size_t k = 0; k < cv; ++k) s += f.values()[r * cv + k];
            if (std::abs(s - 1.0) > 1e-12)
                throw Error("discrete bn: CPD row of " + structure_.name(v) +
                            " does not sum to one");
        }
    }
}

Factor joint(const DiscreteBN& bn) {
    std::size_t total = 1;
    for (VarId v = 0; v < bn.structure().size(); ++v) {
        if (total > kJointCap / static_cast<std::size_t>(bn.card(v)))
            throw SizeCapError("joint: state space exceeds the size cap");
        total *= static_cast<std::size_t>(bn.card(v));
    }
    Factor result = Factor::scalar(1.0);
    for (VarId v : topological_order(bn.structure()))
        result = factor_product(result, bn.cpd(v));
    double s = result.sum();
    if (std::abs(s - 1.0) > 1e-10) throw Error("joint: table does not normalize");
    for (double& x : result.values()) x /= s;
    return result;
}

namespace {

/// Sums out everything outside `keep`. The surviving scope keeps the
/// original dimension order; callers index it through at_assignment.
Factor marginal_onto(const Factor& full, const std::vector<VarId>& keep) {
    Factor f = full;
    for (VarId v : full.scope()) {
        if (std::find(keep.begin(), keep.end(), v) == keep.end()) f = factor_marginalize(f, v);
    }
    return f;
}

}  // namespace

ExactFit fit_inverse_exact(const DiscreteBN& bn, const InverseStructure& h) {
    if (!bn.structure().same_universe(h.graph))
        throw Error("fit_inverse_exact: universe mismatch");
    Factor full = joint(bn);
    const int n = bn.structure().size();

    std::vector<Factor> cpds;
    std::vector<std::pair<VarId, std::size_t>> flagged;
    cpds.reserve(n);
    for (VarId v = 0; v < n; ++v) {
        std::vector<VarId> scope = h.graph.parents(v);
        scope.push_back(v);
        Factor m = marginal_onto(full, scope);

        // rebuild the table in (parents..., v) order
        std::vector<int> cards;
        cards.reserve(scope.size());
        for (VarId s : scope) cards.push_back(bn.card(s));
        std::size_t total = 1;
        for (int c : cards) total *= static_cast<std::size_t>(c);
        std::vector<double> values(total);
        std::vector<int> state_by_var(n, 0);
        std::vector<int> digits(scope.size(), 0);
        for (std::size_t idx = 0; idx < total; ++idx) {
            for (std::size_t k = 0; k < scope.size(); ++k) state_by_var[scope[k]] = digits[k];
            values[idx] = m.at_assignment(state_by_var);
            for (int r = static_cast<int>(scope.size()) - 1; r >= 0; --r) {
                if (++digits[r] < cards[r]) break;
                digits[r] = 0;
            }
        }
        // normalize each parent row into a conditional
        const std::size_t cv = static_cast<std::size_t>(cards.back());
        const std::size_t rows = total / cv;
        for (std::size_t r = 0; r < rows; ++r) {
            double s = 0;
            for (std::size_t k = 0; k < cv; ++k) s += values[r * cv + k];
            if (s <= 0.0) {
                // zero-mass parent configuration: uniform row, flagged;
                // such rows carry no weight in any expected KL
                for (std::size_t k = 0; k < cv; ++k)
                    values[r * cv + k] = 1.0 / static_cast<double>(cv);
                flagged.emplace_back(v, r);
            } else {
                for (std::size_t k = 0; k < cv; ++k) values[r * cv + k] /= s;
            }
        }
        cpds.emplace_back(std::move(scope), std::move(cards), std::move(values));
    }
    return {DiscreteBN(h.graph, bn.cards(), std::move(cpds)), std::move(flagged)};
}

double expected_posterior_kl(const DiscreteBN& p, const DiscreteBN& q) {
    if (!p.structure().same_universe(q.structure()))
        throw Error("expected_posterior_kl: universe mismatch");
    if (p.cards() != q.cards())
        throw Error("expected_posterior_kl: cardinality mismatch");
    const BayesNet& model = p.structure();
    for (const Edge& e : q.structure().edges())
        if (!model.is_observed(e.first) && model.is_observed(e.second))
            throw Error("expected_posterior_kl: inverse has a latent -> observed edge");

    Factor full = joint(p);
    Factor obs_marginal = full;
    for (VarId v = 0; v < model.size(); ++v)
        if (!model.is_observed(v)) obs_marginal = factor_marginalize(obs_marginal, v);

    const int n = model.size();
    std::vector<int> state(n, 0);
    double kl = 0.0;
    while (true) {
        double pj = full.at_assignment(state);
        if (pj > 0.0) {
            double qz = 1.0;
            for (VarId v = 0; v < n; ++v)
                if (!model.is_observed(v)) qz *= q.cpd(v).at_assignment(state);
            if (qz <= 0.0)
                throw SupportError("expected_posterior_kl: inverse assigns zero probability "
                                   "where the posterior is positive",
                                   state);
            double px = obs_marginal.at_assignment(state);
            kl += pj * (std::log(pj / px) - std::log(qz));
        }
        int r = n - 1;
        for (; r >= 0; --r) {
            if (++state[r] < p.card(r)) break;
            state[r] = 0;
        }
        if (r < 0) break;
    }
    return kl;
}

}  // namespace nami
