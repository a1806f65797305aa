#include "qfel/lab_json.hpp"

#include "qfel/errors.hpp"

#include <set>
#include <string>
#include <vector>

namespace qfel {

namespace {

using nlohmann::json;

const std::set<std::string> kRequired = {"wiggler_wavelength", "wiggler_parameter", "electron_density", "gamma0",
                                         "relative_energy_spread"};
const std::set<std::string> kOptional = {"interaction_length", "electron_count", "seed_ratio", "schema_version",
                                         "assumptions"};
const std::set<std::string> kAssumptionKeys = {"r_sp_l", "k_p_l", "quantum_pass_threshold",
                                               "quantum_fail_threshold"};

std::string join(const std::vector<std::string>& v)
{
    std::string out;
    for (const auto& s : v)
        out += (out.empty() ? "" : ", ") + s;
    return out;
}

json check(const ConstraintCheck& c)
{
    return {{"satisfied", c.satisfied}, {"value", c.value}, {"bound", c.bound}, {"margin", c.margin}};
}

template <class T>
json optional_value(const std::optional<T>& v)
{
    return v ? json(*v) : json(nullptr);
}

} // namespace

DesignInput design_input_from_json(const json& j)
{
    if (!j.is_object())
        throw ConfigError("design input must be a JSON object");

    std::vector<std::string> unknown;
    std::vector<std::string> mistyped;
    std::vector<std::string> missing;
    for (const auto& [key, value] : j.items()) {
        if (!kRequired.contains(key) && !kOptional.contains(key))
            unknown.push_back(key);
    }
    for (const auto& key : kRequired)
        if (!j.contains(key))
            missing.push_back(key);

    auto number = [&](const json& obj, const std::string& key, double& out) {
        if (!obj.contains(key))
            return;
        if (!obj.at(key).is_number())
            mistyped.push_back(key);
        else
            out = obj.at(key).get<double>();
    };

    DesignInput in;
    auto& p = in.params;
    number(j, "wiggler_wavelength", p.wiggler_wavelength);
    number(j, "wiggler_parameter", p.wiggler_parameter);
    number(j, "electron_density", p.electron_density);
    number(j, "gamma0", p.gamma0);
    number(j, "relative_energy_spread", p.relative_energy_spread);
    if (j.contains("interaction_length") && !j.at("interaction_length").is_null()) {
        double v = 0.0;
        number(j, "interaction_length", v);
        p.interaction_length = v;
    }
    if (j.contains("seed_ratio") && !j.at("seed_ratio").is_null()) {
        double v = 0.0;
        number(j, "seed_ratio", v);
        p.seed_ratio = v;
    }
    if (j.contains("electron_count") && !j.at("electron_count").is_null()) {
        const auto& v = j.at("electron_count");
        if (v.is_number_unsigned())
            p.electron_count = v.get<std::uint64_t>();
        else if (v.is_number_float() && v.get<double>() >= 1.0 && v.get<double>() == std::floor(v.get<double>())
                 && v.get<double>() < 1.8e19)
            p.electron_count = static_cast<std::uint64_t>(v.get<double>());
        else
            mistyped.push_back("electron_count");
    }
    if (j.contains("schema_version")) {
        const auto& v = j.at("schema_version");
        if (!v.is_number_integer() || v.get<int>() != kSchemaVersion)
            mistyped.push_back("schema_version");
    }
    if (j.contains("assumptions")) {
        const auto& a = j.at("assumptions");
        if (!a.is_object()) {
            mistyped.push_back("assumptions");
        } else {
            for (const auto& [key, value] : a.items())
                if (!kAssumptionKeys.contains(key))
                    unknown.push_back("assumptions." + key);
            number(a, "r_sp_l", in.assumptions.r_sp_l);
            number(a, "k_p_l", in.assumptions.k_p_l);
            number(a, "quantum_pass_threshold", in.assumptions.quantum_pass_threshold);
            number(a, "quantum_fail_threshold", in.assumptions.quantum_fail_threshold);
        }
    }

    std::string message;
    if (!unknown.empty())
        message += "unknown keys: " + join(unknown);
    if (!missing.empty())
        message += std::string(message.empty() ? "" : "; ") + "missing keys: " + join(missing);
    if (!mistyped.empty())
        message += std::string(message.empty() ? "" : "; ") + "invalid values for keys: " + join(mistyped);
    if (!message.empty())
        throw ConfigError("design input schema violation: " + message);

    p.validate();
    return in;
}

DesignInput design_input_from_json(std::string_view text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("design input is not valid JSON: ") + e.what());
    }
    return design_input_from_json(j);
}

json to_json(const LabParams& p)
{
    return {{"wiggler_wavelength", p.wiggler_wavelength},
            {"wiggler_parameter", p.wiggler_parameter},
            {"electron_density", p.electron_density},
            {"gamma0", p.gamma0},
            {"relative_energy_spread", p.relative_energy_spread},
            {"interaction_length", optional_value(p.interaction_length)},
            {"electron_count", optional_value(p.electron_count)},
            {"seed_ratio", optional_value(p.seed_ratio)}};
}

json to_json(const DerivedParams& d)
{
    return {{"quantum_parameter", d.quantum_parameter},
            {"longitudinal_gamma", d.longitudinal_gamma},
            {"quantum_gain_length", d.quantum_gain_length},
            {"classical_gain_length", d.classical_gain_length},
            {"plasma_wavenumber", d.plasma_wavenumber},
            {"spontaneous_rate", d.spontaneous_rate},
            {"rho_bar", d.rho_bar},
            {"spread_bound_loose", d.spread_bound_loose},
            {"spread_bound_strict", d.spread_bound_strict}};
}

json to_json(const FeasibilityReport& r)
{
    json constraints = {{"quantum_regime", check(r.quantum_regime)},
                        {"spread_loose", check(r.spread_loose)},
                        {"spread_strict", check(r.spread_strict)},
                        {"space_charge", check(r.space_charge)},
                        {"spontaneous", check(r.spontaneous)}};
    constraints["quantum_regime"]["status"] = quantum_regime_name(r.quantum_status);
    constraints["quantum_regime"]["pass_threshold"] = r.assumptions.quantum_pass_threshold;

    return {{"schema_version", kSchemaVersion},
            {"derived", to_json(r.derived)},
            {"assumptions",
             {{"r_sp_l", r.assumptions.r_sp_l},
              {"k_p_l", r.assumptions.k_p_l},
              {"quantum_pass_threshold", r.assumptions.quantum_pass_threshold},
              {"quantum_fail_threshold", r.assumptions.quantum_fail_threshold}}},
            {"budget_length_over_gain", r.budget_length_over_gain},
            {"budget_length_m", r.budget_length_m},
            {"sase_saturation_length_over_gain", optional_value(r.sase_saturation_over_gain)},
            {"seeded_saturation_length_over_gain", optional_value(r.seeded_saturation_over_gain)},
            {"evaluated_length_m", r.evaluated_length_m},
            {"constraints", constraints},
            {"sase_feasible", r.sase_feasible},
            {"seeded_feasible", r.seeded_feasible},
            {"verdict", verdict_name(r.verdict)},
            {"warnings", r.warnings}};
}

} // namespace qfel
