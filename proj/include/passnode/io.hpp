#pragma once

#include <string>

#include <json.hpp>

#include "passnode/cayley.hpp"
#include "passnode/feedback.hpp"
#include "passnode/node.hpp"
#include "passnode/passivity.hpp"
#include "passnode/second_order.hpp"
#include "passnode/sim.hpp"
#include "passnode/stability.hpp"

// JSON schema for every domain type. Matrices are row-major lists of rows;
// an entry is a number or a [re, im] pair. Real matrices are written with
// plain numbers.
namespace passnode::io {

using Json = nlohmann::json;

Json to_json(cplx z);
Json to_json(const Mat& m);
Json vector_to_json(const Vec& v);
Json to_json(const StateSpaceNode& node);
Json to_json(const DiscreteSystem& disc);
Json to_json(const PassivityCertificate& cert);
Json to_json(const FeedbackSynthesis& fs);
Json to_json(const StabilityReport& report);
Json to_json(const SecondOrderPlant& plant);
Json to_json(const AuditReport& audit);
Json to_json(const BeamParameters& params);

cplx complex_from_json(const Json& j);
Mat matrix_from_json(const Json& j);
Vec vector_from_json(const Json& j);
StateSpaceNode node_from_json(const Json& j);
DiscreteSystem discrete_from_json(const Json& j);
SecondOrderPlant plant_from_json(const Json& j);
BeamParameters beam_from_json(const Json& j);

/// Sorted keys, two-space indent, doubles printed with 17 significant digits.
std::string canonical_dump(const Json& j);

/// ParseError on unreadable files or malformed JSON.
Json load_json_file(const std::string& path);
Json parse_json(const std::string& text);
void save_json_file(const std::string& path, const Json& j);

}  // namespace passnode::io
