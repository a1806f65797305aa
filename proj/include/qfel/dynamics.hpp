#pragma once

// Exact propagation of the collective FEL Hamiltonian on the ladder of states
// |nu, N/2, N/2 + n0 - nu>, nu = n0 ... n0 + N.
//
// The Hamiltonian in this basis is real symmetric tridiagonal:
//   H[nu][nu]   = -delta * nu
//   H[nu][nu+1] = alpha_N * a(nu + 1)
//   a(nu)       = sqrt(nu (nu - n0)) * sqrt(1 - (nu - n0 - 1) / N)
// and the dimensionless time relates to the wiggler length through
// alpha_N * tau = L / (2 L_g).

#include "qfel/tridiagonal.hpp"

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace qfel {

struct SystemConfig {
    std::uint64_t n_electrons = 1;     ///< N
    std::uint64_t initial_photons = 0; ///< n0, Fock seed of the ladder
    double detuning = 0.0;             ///< delta = (p - q/2) / (q/2)
    double quantum_parameter = 0.1;    ///< alpha_N

    /// Throws ConfigError on N < 1, |delta| >= 1 or non-positive alpha_N.
    void validate() const;
    /// Non-fatal remarks, e.g. alpha_N >= 1 lies outside the quantum regime.
    std::vector<std::string> warnings() const;

    std::size_t dimension() const noexcept { return static_cast<std::size_t>(n_electrons) + 1; }
};

/// a(nu) for n0 <= nu <= n0 + N + 1. Vanishes at both ends of that range.
double coupling_coefficient(std::uint64_t nu, const SystemConfig& config);

struct TridiagonalHamiltonian {
    std::uint64_t first_photon = 0; ///< photon number of ladder index 0 (= n0)
    SymmetricTridiagonal matrix;

    std::size_t dimension() const noexcept { return matrix.dimension(); }
};

TridiagonalHamiltonian build_hamiltonian(const SystemConfig& config);
Spectrum diagonalize(const TridiagonalHamiltonian& h);

/// tau = (L / L_g) / (2 alpha_N)
double time_from_length(double length_over_gain, const SystemConfig& config);

struct AmplitudeVector {
    std::uint64_t first_photon = 0;
    double length_over_gain = 0.0;
    double tau = 0.0;
    std::vector<std::complex<double>> amplitudes; ///< c_nu for nu = first_photon + index

    double norm_squared() const noexcept;
};

struct ConservedCharges {
    double total_angular_momentum; ///< <A> = r (r + 1)
    double total_excitations;      ///< <B> = <n> + <J_z>
    double energy;                 ///< <C> = <H>
};

ConservedCharges conserved_charges(const AmplitudeVector& state, const SystemConfig& config);

struct PhotonStatistics {
    double length_over_gain = 0.0;
    double mean = 0.0;
    double second_moment = 0.0;
    double variance = 0.0;
    double fano = 0.0;          ///< variance / mean; meaningful only if fano_defined
    bool fano_defined = false;  ///< false when the mean vanishes
    double captured_mass = 1.0; ///< probability mass represented (mixtures)
};

/// Moments of p_nu = |c_nu|^2.
PhotonStatistics observables(const AmplitudeVector& state);

/// Moments of an explicit distribution over nu = first_photon + index.
PhotonStatistics statistics_from_distribution(std::uint64_t first_photon, std::span<const double> probabilities,
                                              double length_over_gain = 0.0);

enum class Backend {
    Auto,      ///< spectral for small ladders, Chebyshev otherwise
    Spectral,  ///< diagonalize once, O(N^2) per sample
    Chebyshev, ///< Chebyshev expansion of exp(-iH dt), O(N ||H|| dt) per step
};

/// Ladder dimension up to which Backend::Auto selects the spectral method.
inline constexpr std::size_t kSpectralAutoLimit = 256;

Backend resolve_backend(Backend requested, std::size_t dimension) noexcept;
const char* backend_name(Backend backend) noexcept;

/// Propagates the Fock-seeded initial state c_nu(0) = delta_{nu, n0} to each
/// requested length. Lengths must be finite, non-negative and ascending.
class Evolver {
public:
    explicit Evolver(SystemConfig config, Backend backend = Backend::Auto);

    const SystemConfig& config() const noexcept { return config_; }
    Backend backend() const noexcept { return backend_; }

    using Sink = std::function<void(const AmplitudeVector&)>;

    /// Calls sink once per length, in order. Each sample is checked for
    /// unitarity and energy conservation; violations raise NumericError.
    void run(std::span<const double> lengths, const Sink& sink) const;

private:
    void run_spectral(std::span<const double> lengths, const Sink& sink) const;
    void run_chebyshev(std::span<const double> lengths, const Sink& sink) const;
    void check(const AmplitudeVector& state) const;

    SystemConfig config_;
    Backend backend_;
};

std::vector<AmplitudeVector> evolve(const SystemConfig& config, std::span<const double> lengths,
                                    Backend backend = Backend::Auto);
std::vector<PhotonStatistics> evolve_statistics(const SystemConfig& config, std::span<const double> lengths,
                                                Backend backend = Backend::Auto);

/// samples + 1 equally spaced points on [0, max_length].
std::vector<double> uniform_lengths(double max_length, std::size_t samples);

inline constexpr double kDefaultMaxLength = 15.0;
inline constexpr std::size_t kDefaultSamples = 600;

struct PeakEstimate {
    double position;
    double value;
    std::size_t sample_index;
};

/// First interior local maximum of a sampled curve, refined by a parabola
/// through the peak sample and its two neighbours. Throws AnalysisError when
/// the curve has no interior maximum.
PeakEstimate find_first_maximum(std::span<const double> x, std::span<const double> y);

/// First interior local minimum, refined the same way.
PeakEstimate find_first_minimum(std::span<const double> x, std::span<const double> y);

} // namespace qfel
