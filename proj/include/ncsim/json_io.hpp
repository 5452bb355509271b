#pragma once

#include <json.hpp>

#include "ncsim/evolution.hpp"
#include "ncsim/graph_state.hpp"
#include "ncsim/params.hpp"

namespace ncsim {

using json = nlohmann::json;

json to_json(const ModelParams& params);
json to_json(const Coefficients& coeffs);

// Accepts an object with keys {"N", "p", "q", "r"}; throws InvalidParams on
// missing or ill-typed keys (the value bounds are checked by validate()).
ModelParams params_from_json(const json& j);

// Full state snapshot:
// {step, params, vertices:[{label,weight,degree,birth_step}...],
//  edges:[[a,b]...], cliques_N:[{key,weight}...], cliques_N1:[...]}.
// Entries are canonically ordered, so export(import(x)) == x byte for byte.
json snapshot_to_json(const GraphState& state);
GraphState snapshot_from_json(const json& j);

json checkpoint_to_json(const TrajectoryRecord& trajectory, const CheckpointRow& row);

}  // namespace ncsim
