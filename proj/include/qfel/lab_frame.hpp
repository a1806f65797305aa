#pragma once

// Laboratory-frame design quantities of a quantum FEL and the feasibility
// comparison between the coherent interaction-length budget (bounded by
// space charge and spontaneous emission) and the saturation length.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qfel {

/// CODATA 2018.
struct PhysicalConstants {
    double classical_electron_radius = 2.8179403262e-15; ///< r_e [m]
    double compton_wavelength = 2.42631023867e-12;       ///< lambda_C [m]
    double speed_of_light = 299792458.0;                 ///< c [m/s]

    /// alpha_f = 2 pi r_e / lambda_C
    double fine_structure() const noexcept;
};

struct LabParams {
    double wiggler_wavelength = 0.0;     ///< lambda_W [m]
    double wiggler_parameter = 0.0;      ///< a0
    double electron_density = 0.0;       ///< n_e [1/m^3]
    double gamma0 = 0.0;                 ///< free electron energy in units of m c^2
    double relative_energy_spread = 0.0; ///< Delta gamma0 / gamma0
    std::optional<double> interaction_length; ///< L [m]
    std::optional<std::uint64_t> electron_count;
    std::optional<double> seed_ratio; ///< n0 / N; 0 encodes SASE

    void validate() const;
};

struct DerivedParams {
    double quantum_parameter = 0.0;     ///< alpha_N
    double longitudinal_gamma = 0.0;    ///< gamma0 / sqrt(1 + a0^2)
    double quantum_gain_length = 0.0;   ///< L_g [m]
    double classical_gain_length = 0.0; ///< L_g^cl [m]
    double plasma_wavenumber = 0.0;     ///< k_p [1/m]
    double spontaneous_rate = 0.0;      ///< R_sp [1/m]
    double rho_bar = 0.0;               ///< alpha_N^(2/3)
    double spread_bound_loose = 0.0;    ///< momentum spread below the recoil
    double spread_bound_strict = 0.0;   ///< momentum spread below the gain bandwidth
};

DerivedParams derive(const LabParams& params, const PhysicalConstants& constants = {});

/// L / L_g = [12 (alpha_N / alpha_f) (R_sp L) (k_p L)^2]^(1/3).
/// Requires 0 < r_sp_l <= 0.5 and 0 < k_p_l <= 1.
double budget_length(double quantum_parameter, double r_sp_l, double k_p_l, const PhysicalConstants& constants = {});
double budget_length(const DerivedParams& derived, double r_sp_l, double k_p_l,
                     const PhysicalConstants& constants = {});

/// g sqrt(N) in the co-moving frame for a given co-moving wavenumber k.
double coupling_strength(const LabParams& params, double comoving_wavenumber, const PhysicalConstants& constants = {});
/// L_g = c / (2 g sqrt(N))
double gain_length_from_coupling(double coupling, const PhysicalConstants& constants = {});

struct Assumptions {
    double r_sp_l = 0.5;
    double k_p_l = 1.0;
    double quantum_pass_threshold = 0.3; ///< alpha_N below this passes cleanly
    double quantum_fail_threshold = 1.0; ///< alpha_N at or above this fails

    void validate() const;
};

/// value < bound, with margin = 1 - value / bound (positive when satisfied).
struct ConstraintCheck {
    bool satisfied = false;
    double value = 0.0;
    double bound = 0.0;
    double margin = 0.0;
};

enum class QuantumRegime { Pass, Warn, Fail };

enum class Verdict { SeededFeasible, SaseInfeasible, BothFeasible, NeitherFeasible };

const char* verdict_name(Verdict v) noexcept;
const char* quantum_regime_name(QuantumRegime r) noexcept;

struct FeasibilityReport {
    DerivedParams derived;
    Assumptions assumptions;
    double budget_length_over_gain = 0.0;
    double budget_length_m = 0.0;
    std::optional<double> sase_saturation_over_gain;
    std::optional<double> seeded_saturation_over_gain;
    double evaluated_length_m = 0.0; ///< length used for the decoherence checks
    QuantumRegime quantum_status = QuantumRegime::Pass;
    ConstraintCheck quantum_regime;
    ConstraintCheck spread_loose;
    ConstraintCheck spread_strict;
    ConstraintCheck space_charge;
    ConstraintCheck spontaneous;
    bool sase_feasible = false;
    bool seeded_feasible = false;
    Verdict verdict = Verdict::NeitherFeasible;
    std::vector<std::string> warnings;
};

/// Saturation lengths use the large-N resonant logarithm. Throws ConfigError
/// when neither electron_count nor seed_ratio is given.
FeasibilityReport assess(const LabParams& params, const Assumptions& assumptions = {},
                         const PhysicalConstants& constants = {});

} // namespace qfel
