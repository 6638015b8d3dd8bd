#pragma once

#include <json.hpp>

#include "pdoe/design.hpp"
#include "pdoe/model.hpp"
#include "pdoe/oracle.hpp"
#include "pdoe/verify.hpp"

// JSON wire formats:
//   ModelSpec: {"k": 2, "structure": "two_dim_with_interaction",
//               "beta": [0, -1, -1, -1]}
//   Design:    {"points": [[0,0], [2,0], [0,2], [1,1]],
//               "weights": [0.25, 0.25, 0.25, 0.25]}
// Reports carry logdet values in natural log; non-finite numbers are encoded
// as the strings "inf" / "-inf".

namespace pdoe {

nlohmann::json to_json(const ModelSpec& model);
ModelSpec model_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Design& design);
Design design_from_json(const nlohmann::json& j);

nlohmann::json to_json(const RegionSpec& region);
RegionSpec region_from_json(const nlohmann::json& j);

nlohmann::json to_json(const VerificationReport& report);
nlohmann::json to_json(const OracleResult& result);

}  // namespace pdoe
