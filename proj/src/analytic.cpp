#include "qfel/analytic.hpp"

#include "qfel/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace qfel {

double detuning_ratio_squared(const SystemConfig& config) noexcept
{
    const double r = config.detuning / (2.0 * config.quantum_parameter);
    return r * r;
}

CubicRoots roots(const SystemConfig& config)
{
    config.validate();
    const double n = static_cast<double>(config.n_electrons);
    const double n0 = static_cast<double>(config.initial_photons);
    const double x = detuning_ratio_squared(config);

    // n+- = +-h + s with s = sqrt(h^2 + q), so n+ n- = q >= 0.
    const double h = 0.5 * n * (1.0 - x) + 0.5 * (n0 - 0.5);
    const double q = n * (1.0 + n0 * x) + 0.5 * n0;
    const double s = std::sqrt(h * h + q);

    CubicRoots r;
    r.n_zero = n0;
    if (h >= 0.0) {
        r.n_plus = h + s;
        r.n_minus = q / r.n_plus;
    } else {
        r.n_minus = s - h;
        r.n_plus = q / r.n_minus;
    }
    // Outside |delta| < 2 alpha_N the c-number curve still has a small
    // excursion of order 1/x, which is not gain.
    r.gain = x < 1.0 && r.n_plus > r.n_zero;
    return r;
}

AnalyticCurveParams curve_params(const CubicRoots& r, std::uint64_t n_electrons)
{
    if (!r.gain)
        throw NoGainError("no gain: outside the bandwidth |delta| < 2 alpha_N (n+ = " + std::to_string(r.n_plus)
                          + ", n0 = " + std::to_string(r.n_zero) + ")");
    const double total = r.span();
    // 1 - k^2 = (n0 + n-) / (n+ + n-), free of cancellation as k -> 1.
    const double kc = std::sqrt((r.n_zero + r.n_minus) / total);
    const auto modulus = EllipticModulus::from_complementary(kc);
    return {modulus, complete_elliptic_k(modulus), std::sqrt(total / static_cast<double>(n_electrons))};
}

AnalyticCurveParams curve_params(const SystemConfig& config)
{
    return curve_params(roots(config), config.n_electrons);
}

double mean_photon_analytic(double length_over_gain, const SystemConfig& config)
{
    if (!std::isfinite(length_over_gain) || length_over_gain < 0.0)
        throw DomainError("length must be finite and non-negative");
    const auto r = roots(config);
    if (!r.gain || length_over_gain == 0.0)
        return r.n_zero;
    const auto p = curve_params(r, config.n_electrons);
    const double u = 0.5 * length_over_gain * p.length_scale - p.quarter_period;
    const double cn = jacobi_elliptic(u, p.modulus).cn;
    return r.n_zero + (r.n_plus - r.n_zero) * cn * cn;
}

bool asymptotic_reliable(const SystemConfig& config) noexcept
{
    return config.n_electrons >= kAsymptoticMinElectrons;
}

double saturation_length(const SystemConfig& config, SaturationMode mode)
{
    config.validate();
    const double n = static_cast<double>(config.n_electrons);
    if (mode == SaturationMode::Exact) {
        const auto p = curve_params(config);
        return 2.0 * p.quarter_period / p.length_scale;
    }

    if (config.detuning == 0.0) {
        const double n0 = static_cast<double>(config.initial_photons);
        return 2.0 * std::log(4.0 * std::sqrt(n / (n0 + 1.0)));
    }
    if (config.initial_photons != 0)
        throw DomainError("asymptotic saturation length is available at resonance or for start-up from vacuum");
    const double d = 1.0 - detuning_ratio_squared(config);
    if (d <= 0.0)
        throw NoGainError("no gain: |delta| >= 2 alpha_N");
    return (std::log(n) + 4.0 * std::numbers::ln2 + 2.0 * std::log(d)) / std::sqrt(d);
}

DetunedMaximum n_max_detuned(const SystemConfig& config)
{
    if (config.initial_photons != 0)
        throw DomainError("n_max_detuned describes start-up from vacuum (n0 = 0)");
    const auto r = roots(config);
    const double d = 1.0 - detuning_ratio_squared(config);
    return {r.n_plus, std::max(0.0, static_cast<double>(config.n_electrons) * d)};
}

} // namespace qfel
