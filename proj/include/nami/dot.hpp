#pragma once

#include <string>

#include "nami/elimination.hpp"
#include "nami/graph.hpp"
#include "nami/inversion.hpp"

namespace nami {

/// Directed graph with observed nodes shaded.
std::string to_dot(const BayesNet& bn);
std::string to_dot(const InverseStructure& inv);

/// Induced graph: fill edges dotted, eliminated nodes filled black.
std::string induced_to_dot(const BayesNet& names, const MarkedGraph& j);

/// Clique tree with sepsets as edge labels.
std::string clique_tree_to_dot(const BayesNet& names, const CliqueTree& tree);

}  // namespace nami
