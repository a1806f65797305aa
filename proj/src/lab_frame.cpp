#include "qfel/lab_frame.hpp"

#include "qfel/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace qfel {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(double v, const char* name, std::string& bad)
{
    if (!std::isfinite(v) || v <= 0.0)
        bad += (bad.empty() ? "" : ", ") + std::string(name);
}

ConstraintCheck below(double value, double bound, bool inclusive)
{
    ConstraintCheck c;
    c.value = value;
    c.bound = bound;
    c.satisfied = inclusive ? value <= bound : value < bound;
    c.margin = 1.0 - value / bound;
    return c;
}

double resonant_saturation(double electrons_over_seed_plus_one)
{
    return 2.0 * std::log(4.0 * std::sqrt(electrons_over_seed_plus_one));
}

} // namespace

double PhysicalConstants::fine_structure() const noexcept
{
    return 2.0 * kPi * classical_electron_radius / compton_wavelength;
}

void LabParams::validate() const
{
    std::string bad;
    require_positive(wiggler_wavelength, "wiggler_wavelength", bad);
    require_positive(electron_density, "electron_density", bad);
    if (!std::isfinite(wiggler_parameter) || wiggler_parameter < 0.0)
        bad += (bad.empty() ? "" : ", ") + std::string("wiggler_parameter");
    if (!std::isfinite(gamma0) || gamma0 <= 1.0)
        bad += (bad.empty() ? "" : ", ") + std::string("gamma0");
    if (!std::isfinite(relative_energy_spread) || relative_energy_spread < 0.0)
        bad += (bad.empty() ? "" : ", ") + std::string("relative_energy_spread");
    if (interaction_length)
        require_positive(*interaction_length, "interaction_length", bad);
    if (electron_count && *electron_count == 0)
        bad += (bad.empty() ? "" : ", ") + std::string("electron_count");
    if (seed_ratio && (!std::isfinite(*seed_ratio) || *seed_ratio < 0.0))
        bad += (bad.empty() ? "" : ", ") + std::string("seed_ratio");
    if (!bad.empty())
        throw ConfigError("invalid laboratory parameters: " + bad);
}

void Assumptions::validate() const
{
    if (!(r_sp_l > 0.0 && r_sp_l <= 0.5))
        throw DomainError("R_sp L must lie in (0, 0.5], got " + std::to_string(r_sp_l));
    if (!(k_p_l > 0.0 && k_p_l <= 1.0))
        throw DomainError("k_p L must lie in (0, 1], got " + std::to_string(k_p_l));
    if (!(quantum_pass_threshold > 0.0 && quantum_pass_threshold <= quantum_fail_threshold))
        throw ConfigError("quantum thresholds must satisfy 0 < pass <= fail");
}

DerivedParams derive(const LabParams& p, const PhysicalConstants& k)
{
    p.validate();
    const double re = k.classical_electron_radius;
    const double lc = k.compton_wavelength;
    const double a0 = p.wiggler_parameter;
    const double g0 = p.gamma0;
    const double lw = p.wiggler_wavelength;
    const double ne = p.electron_density;
    const double one_a2 = 1.0 + a0 * a0;

    DerivedParams d;
    d.quantum_parameter = std::sqrt(re * ne) / (32.0 * g0 * g0 * g0 * std::sqrt(kPi)) * std::pow(lw, 2.5)
                          / std::pow(lc, 1.5) * a0 * std::pow(one_a2, 1.5);
    d.longitudinal_gamma = g0 / std::sqrt(one_a2);
    d.quantum_gain_length = g0 * g0 / (std::sqrt(kPi) * a0 * std::sqrt(one_a2)) * std::sqrt((lc / lw) / (re * ne));
    d.classical_gain_length
        = g0 * std::cbrt(lw) / (std::sqrt(3.0) * 2.0 * std::cbrt(kPi * kPi) * std::cbrt(a0 * a0 * re * ne));
    d.plasma_wavenumber = std::sqrt(4.0 * kPi * re * ne / (g0 * g0 * g0));
    d.spontaneous_rate = 4.0 * kPi * kPi / 3.0 * a0 * a0 * re / (lw * lc);
    d.rho_bar = std::cbrt(d.quantum_parameter * d.quantum_parameter);
    d.spread_bound_loose = 4.0 * g0 / one_a2 * lc / lw;
    d.spread_bound_strict = 2.0 * d.quantum_parameter * d.spread_bound_loose;
    return d;
}

double budget_length(double quantum_parameter, double r_sp_l, double k_p_l, const PhysicalConstants& k)
{
    if (!(r_sp_l > 0.0 && r_sp_l <= 0.5))
        throw DomainError("R_sp L must lie in (0, 0.5], got " + std::to_string(r_sp_l));
    if (!(k_p_l > 0.0 && k_p_l <= 1.0))
        throw DomainError("k_p L must lie in (0, 1], got " + std::to_string(k_p_l));
    if (!(quantum_parameter > 0.0) || !std::isfinite(quantum_parameter))
        throw DomainError("quantum parameter must be positive");
    return std::cbrt(12.0 * quantum_parameter / k.fine_structure() * r_sp_l * k_p_l * k_p_l);
}

double budget_length(const DerivedParams& derived, double r_sp_l, double k_p_l, const PhysicalConstants& k)
{
    return budget_length(derived.quantum_parameter, r_sp_l, k_p_l, k);
}

double coupling_strength(const LabParams& p, double comoving_wavenumber, const PhysicalConstants& k)
{
    if (!(comoving_wavenumber > 0.0))
        throw DomainError("co-moving wavenumber must be positive");
    return p.wiggler_parameter * kPi * k.speed_of_light
           * std::sqrt(2.0 * k.classical_electron_radius * p.electron_density
                       / (k.compton_wavelength * comoving_wavenumber));
}

double gain_length_from_coupling(double coupling, const PhysicalConstants& k)
{
    if (!(coupling > 0.0))
        throw DomainError("coupling must be positive");
    return k.speed_of_light / (2.0 * coupling);
}

const char* verdict_name(Verdict v) noexcept
{
    switch (v) {
    case Verdict::SeededFeasible:
        return "SeededFeasible";
    case Verdict::SaseInfeasible:
        return "SaseInfeasible";
    case Verdict::BothFeasible:
        return "BothFeasible";
    case Verdict::NeitherFeasible:
        return "NeitherFeasible";
    }
    return "unknown";
}

const char* quantum_regime_name(QuantumRegime r) noexcept
{
    switch (r) {
    case QuantumRegime::Pass:
        return "pass";
    case QuantumRegime::Warn:
        return "warn";
    case QuantumRegime::Fail:
        return "fail";
    }
    return "unknown";
}

FeasibilityReport assess(const LabParams& params, const Assumptions& assumptions, const PhysicalConstants& k)
{
    params.validate();
    assumptions.validate();
    const bool seeded = params.seed_ratio && *params.seed_ratio > 0.0;
    if (!params.electron_count && !seeded)
        throw ConfigError("missing inputs for saturation estimates: electron_count, seed_ratio");

    FeasibilityReport r;
    r.assumptions = assumptions;
    r.derived = derive(params, k);
    const auto& d = r.derived;
    if (!(d.quantum_parameter > 0.0))
        throw ConfigError("wiggler_parameter must be positive for a finite gain length");

    r.budget_length_over_gain = budget_length(d, assumptions.r_sp_l, assumptions.k_p_l, k);
    r.budget_length_m = r.budget_length_over_gain * d.quantum_gain_length;

    if (params.electron_count) {
        const double n = static_cast<double>(*params.electron_count);
        r.sase_saturation_over_gain = resonant_saturation(n);
        r.sase_feasible = *r.sase_saturation_over_gain <= r.budget_length_over_gain;
        if (n < 100.0)
            r.warnings.push_back("electron_count below 100: the logarithmic saturation length is a rough estimate");
    }
    if (seeded) {
        const double ratio = *params.seed_ratio;
        // Without N, the large-N limit N / (n0 + 1) -> 1 / ratio.
        const double x = params.electron_count
                             ? static_cast<double>(*params.electron_count)
                                   / (ratio * static_cast<double>(*params.electron_count) + 1.0)
                             : 1.0 / ratio;
        r.seeded_saturation_over_gain = resonant_saturation(x);
        r.seeded_feasible = *r.seeded_saturation_over_gain <= r.budget_length_over_gain;
    }

    if (r.sase_feasible)
        r.verdict = Verdict::BothFeasible;
    else if (seeded)
        r.verdict = r.seeded_feasible ? Verdict::SeededFeasible : Verdict::NeitherFeasible;
    else
        r.verdict = Verdict::SaseInfeasible;

    const double alpha = d.quantum_parameter;
    r.quantum_regime = below(alpha, assumptions.quantum_fail_threshold, false);
    if (alpha >= assumptions.quantum_fail_threshold)
        r.quantum_status = QuantumRegime::Fail;
    else if (alpha >= assumptions.quantum_pass_threshold)
        r.quantum_status = QuantumRegime::Warn;
    if (r.quantum_status == QuantumRegime::Warn)
        r.warnings.push_back("quantum parameter " + std::to_string(alpha) + " is not well below 1");

    r.spread_loose = below(params.relative_energy_spread, d.spread_bound_loose, false);
    r.spread_strict = below(params.relative_energy_spread, d.spread_bound_strict, false);

    r.evaluated_length_m = params.interaction_length.value_or(r.budget_length_m);
    r.space_charge = below(d.plasma_wavenumber * r.evaluated_length_m, 1.0, true);
    r.spontaneous = below(d.spontaneous_rate * r.evaluated_length_m, 0.5, true);
    return r;
}

} // namespace qfel
