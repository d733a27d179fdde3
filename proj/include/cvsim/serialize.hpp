#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "cvsim/classifier.hpp"
#include "cvsim/executor.hpp"
#include "cvsim/gaussian_state.hpp"

namespace cvsim {

// {"num_modes": N, "mean": [...2N], "cov": [...row-major 2N x 2N]}
nlohmann::json state_to_json(const GaussianState& state);
GaussianState state_from_json(const nlohmann::json& j);

// {"seed", "shots", "registers": [{"name", "values": [...]}], "final_state"?}
// Registers are listed in first-measurement order; final_state, when
// requested, holds one serialized state per shot.
nlohmann::json traces_to_json(const std::vector<ExecutionTrace>& traces,
                              std::uint64_t seed, bool emit_final_state);

// {"status", "citations", "profile", "narrative"}
nlohmann::json verdict_to_json(const Verdict& verdict, const IngredientProfile& profile);

}  // namespace cvsim
