#pragma once

#include <string>

#include <json.hpp>

#include "nami/factor.hpp"
#include "nami/graph.hpp"
#include "nami/independence.hpp"
#include "nami/inversion.hpp"
#include "nami/masks.hpp"
#include "nami/verification.hpp"

namespace nami {

// BN format:
//   {"variables":[{"name":"D","observed":false},...],
//    "edges":[["D","G"],...]}
// Edge order is irrelevant; duplicate edges and cycles are rejected.
nlohmann::json bn_to_json(const BayesNet& bn);
BayesNet bn_from_json(const nlohmann::json& j);

// Inverse structures reuse the BN format plus "mode" and, for the
// elimination-based modes, "elim_order".
nlohmann::json inverse_to_json(const InverseStructure& inv);
InverseStructure inverse_from_json(const nlohmann::json& j);

// Discrete BN: the BN format plus
//   "cpds": {"G": {"parents":["D","I"], "card":3, "table":[...]}}
// with tables row-major over (parents..., child).
nlohmann::json discrete_bn_to_json(const DiscreteBN& bn);
DiscreteBN discrete_bn_from_json(const nlohmann::json& j);

// Sorted list of [x, [z...], [y]] triples meaning (x ⊥ y | z...).
nlohmann::json indep_set_to_json(const IndepSet& set, const BayesNet& names);

std::string assertion_to_string(const IndepAssertion& a, const BayesNet& names);

nlohmann::json report_to_json(const VerificationReport& rep, const BayesNet& names);

// Mask bundle: spec header (labels, layer sizes, seed) plus the row-major
// 0/1 matrices.
nlohmann::json mask_bundle_to_json(const MaskStack& stack, const MaskSpec& spec);
MaskSpec mask_spec_from_json(const nlohmann::json& j);

/// Writes one mask as a uint8 .npy (format version 1.0).
void write_npy_u8(const std::string& path, const MaskMatrix& m);

nlohmann::json load_json_file(const std::string& path);
void save_text_file(const std::string& path, const std::string& content);

}  // namespace nami
