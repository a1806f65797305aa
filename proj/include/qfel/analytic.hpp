#pragma once

// Closed-form c-number approximation of the mean photon number.
//
// Replacing the constants of motion by their initial values turns the
// Heisenberg equation for n into
//   (dn/dtau)^2 = 4 eps^2 (n+ - n)(n - n0)(n + n-)
// whose solution oscillates between n0 and n+:
//   n(L) = n0 + (n+ - n0) cn^2( L/(2 L_g) sqrt((n+ + n-)/N) - K(k), k )
//   k^2  = (n+ - n0) / (n+ + n-)

#include "qfel/dynamics.hpp"
#include "qfel/special_functions.hpp"

#include <cstdint>

namespace qfel {

struct CubicRoots {
    double n_plus = 0.0;  ///< largest root, the maximum photon number
    double n_minus = 0.0; ///< magnitude of the negative root
    double n_zero = 0.0;  ///< initial photon number n0
    bool gain = false;    ///< |delta| < 2 alpha_N and n_plus > n_zero

    /// Sum n_plus + n_minus, evaluated without cancellation.
    double span() const noexcept { return n_plus + n_minus; }
};

/// The roots n+, n0, -n- of the cubic. Stable for N up to 1e12 and beyond:
/// the smaller of n+ / n- is recovered from their product.
CubicRoots roots(const SystemConfig& config);

struct AnalyticCurveParams {
    EllipticModulus modulus;
    double quarter_period; ///< K(k)
    double length_scale;   ///< sqrt((n+ + n-) / N)
};

/// Modulus, K and length scale. Throws NoGainError without gain.
AnalyticCurveParams curve_params(const CubicRoots& r, std::uint64_t n_electrons);
AnalyticCurveParams curve_params(const SystemConfig& config);

/// n(L) for L in gain lengths. Configurations without gain stay at n0.
double mean_photon_analytic(double length_over_gain, const SystemConfig& config);

enum class SaturationMode {
    Exact,      ///< 2 K(k) sqrt(N / (n+ + n-))
    Asymptotic, ///< logarithmic large-N forms
};

/// Length of the first maximum in units of L_g. The asymptotic mode covers
/// resonance with any Fock seed, and detuned start-up from vacuum.
double saturation_length(const SystemConfig& config, SaturationMode mode);

/// Asymptotic forms are meaningful for N >> 1; below this they are still
/// returned but flagged by asymptotic_reliable().
inline constexpr std::uint64_t kAsymptoticMinElectrons = 100;
bool asymptotic_reliable(const SystemConfig& config) noexcept;

struct DetunedMaximum {
    double exact;      ///< n+
    double asymptotic; ///< N (1 - delta^2 / (4 alpha_N^2)), clamped at 0
};

/// Maximum photon number for start-up from vacuum (n0 must be 0).
DetunedMaximum n_max_detuned(const SystemConfig& config);

/// delta^2 / (4 alpha_N^2)
double detuning_ratio_squared(const SystemConfig& config) noexcept;

} // namespace qfel
