#pragma once

#include <cstdint>
#include <vector>

#include "nami/graph.hpp"
#include "nami/inversion.hpp"

namespace nami {

/// Largest joint table handled by exact enumeration.
inline constexpr std::size_t kJointCap = std::size_t{1} << 20;

/// Dense nonnegative table over an ordered variable scope, row-major with
/// the last scope variable fastest.
class Factor {
public:
    Factor(std::vector<VarId> scope, std::vector<int> cards, std::vector<double> values);

    static Factor ones(std::vector<VarId> scope, std::vector<int> cards);
    static Factor scalar(double value);

    const std::vector<VarId>& scope() const { return scope_; }
    const std::vector<int>& cards() const { return cards_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }
    std::size_t table_size() const { return values_.size(); }

    bool in_scope(VarId v) const;
    int position_of(VarId v) const;  // -1 when absent

    /// Value at a full assignment indexed by variable id.
    double at_assignment(const std::vector<int>& state_by_var) const;

    double sum() const;

private:
    std::vector<VarId> scope_;
    std::vector<int> cards_;
    std::vector<double> values_;
};

/// Pointwise product; scope is a's order followed by b's new variables.
/// Shared variables must agree on cardinality.
Factor factor_product(const Factor& a, const Factor& b);

/// Sums v out of the table. Throws Error when v is not in scope.
Factor factor_marginalize(const Factor& a, VarId v);

/// Sum-product elimination: for each variable in order, multiply the
/// factors containing it, sum it out, and return the product of whatever
/// remains.
Factor eliminate_variables(std::vector<Factor> factors, const std::vector<VarId>& order);

/// Discrete Bayesian network: structure plus one CPD per variable with
/// scope (parents..., variable). Every row must sum to one within 1e-12.
class DiscreteBN {
public:
    DiscreteBN(BayesNet structure, std::vector<int> cards, std::vector<Factor> cpds);

    const BayesNet& structure() const { return structure_; }
    int card(VarId v) const { return cards_[v]; }
    const std::vector<int>& cards() const { return cards_; }
    const Factor& cpd(VarId v) const { return cpds_[v]; }

private:
    BayesNet structure_;
    std::vector<int> cards_;
    std::vector<Factor> cpds_;
};

/// Full normalized joint by multiplying every CPD. Throws SizeCapError when
/// the state space exceeds kJointCap entries.
Factor joint(const DiscreteBN& bn);

struct ExactFit {
    DiscreteBN q;
    /// (variable, flattened parent configuration) rows that had zero
    /// probability mass and were set uniform.
    std::vector<std::pair<VarId, std::size_t>> zero_mass_rows;
};

/// Conditional tables of the model distribution along the inverse
/// structure: each variable's CPD becomes the exact p(v | Pa_h(v)).
ExactFit fit_inverse_exact(const DiscreteBN& bn, const InverseStructure& h);

/// Exact E_{p(x)}[ KL(p(z|x) || q(z|x)) ] by enumeration over every
/// assignment. Zero terms follow the 0·log 0 = 0 convention; q = 0 where
/// p > 0 raises SupportError with the offending assignment.
double expected_posterior_kl(const DiscreteBN& p, const DiscreteBN& q);

}  // namespace nami
