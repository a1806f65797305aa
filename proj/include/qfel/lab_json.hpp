#pragma once

// JSON schema (version 1) for design inputs and feasibility reports.
//
// Input object keys: the LabParams field names (snake_case), an optional
// "schema_version": 1 and an optional "assumptions" object with keys
// r_sp_l, k_p_l, quantum_pass_threshold, quantum_fail_threshold.

#include "qfel/lab_frame.hpp"

#include <json.hpp>

#include <string_view>

namespace qfel {

inline constexpr int kSchemaVersion = 1;

struct DesignInput {
    LabParams params;
    Assumptions assumptions;
};

/// Throws ConfigError naming every unknown, missing or mistyped key.
DesignInput design_input_from_json(const nlohmann::json& j);
DesignInput design_input_from_json(std::string_view text);

nlohmann::json to_json(const LabParams& p);
nlohmann::json to_json(const DerivedParams& d);
nlohmann::json to_json(const FeasibilityReport& r);

} // namespace qfel
