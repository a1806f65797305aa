#pragma once

// Photon-number observables for seed fields with arbitrary photon statistics.
//
// Only the diagonal p_n of the initial field density matrix reaches any
// function of the photon-number operator, so a seeded run is the p_n-weighted
// mixture of independent Fock-seeded ladders:
//   <f(n)> = sum_n' p_n' <f(n)>_n'

#include "qfel/dynamics.hpp"

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <tuple>
#include <vector>

namespace qfel {

enum class SeedKind { Fock, Coherent, Thermal };

const char* seed_kind_name(SeedKind kind) noexcept;

struct InitialFieldState {
    SeedKind kind = SeedKind::Fock;
    double mean_photons = 0.0; ///< n0; integral for Fock seeds

    void validate() const;
};

/// p_n of the seed field, evaluated in log space for large n.
double seed_probability(const InitialFieldState& state, std::uint64_t n);

/// Finite support of a photon distribution. photons is strictly increasing;
/// weights are not renormalised.
struct TruncatedDistribution {
    std::vector<std::uint64_t> photons;
    std::vector<double> weights;
    double captured_mass = 0.0;
    double truncation_epsilon = 0.0;

    std::size_t size() const noexcept { return photons.size(); }
};

/// Smallest contiguous window of photon numbers holding at least 1 - epsilon
/// of the probability, grown outward from the mode.
TruncatedDistribution truncate(const InitialFieldState& state, double epsilon);

/// Diagonal of a pure seed sum_n psi_n |n>, with photon numbers starting at
/// first_photon. Phases of psi_n drop out.
TruncatedDistribution distribution_from_amplitudes(std::uint64_t first_photon,
                                                   std::span<const std::complex<double>> amplitudes);

/// Explicit (photon number, weight) pairs. Photon numbers must be strictly
/// increasing and weights non-negative.
TruncatedDistribution distribution_from_weights(std::span<const std::uint64_t> photons,
                                                std::span<const double> weights);

inline constexpr double kFigureEpsilon = 1e-3;
inline constexpr double kAcceptanceEpsilon = 1e-6;

/// Thread cap: QFEL_THREADS when set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t default_thread_count();

/// Runs mixtures of Fock-seeded ladders on a fixed pool size and memoises
/// each component curve by (N, n', delta, alpha_N, backend, lengths).
class EnsembleEngine {
public:
    explicit EnsembleEngine(std::size_t threads = 0);

    std::size_t threads() const noexcept { return threads_; }

    /// Mixture moments over the given support. config_template fixes N,
    /// delta and alpha_N; its initial_photons is replaced per component.
    /// Every entry carries captured_mass of the distribution.
    std::vector<PhotonStatistics> mixed_moments(const TruncatedDistribution& distribution,
                                                const SystemConfig& config_template,
                                                std::span<const double> lengths,
                                                Backend backend = Backend::Auto);

    std::vector<PhotonStatistics> mixed_moments(const InitialFieldState& state,
                                                const SystemConfig& config_template,
                                                std::span<const double> lengths, double epsilon,
                                                Backend backend = Backend::Auto);

    std::size_t cache_entries() const;
    std::size_t cache_hits() const;
    void clear_cache();

private:
    using Curve = std::vector<PhotonStatistics>;
    using Key = std::tuple<std::uint64_t, std::uint64_t, double, double, int, std::vector<double>>;

    std::shared_ptr<const Curve> lookup(const Key& key) const;
    void store(const Key& key, std::shared_ptr<const Curve> curve);

    std::size_t threads_;
    mutable std::mutex mutex_;
    std::map<Key, std::shared_ptr<const Curve>> cache_;
    mutable std::size_t hits_ = 0;
};

/// Weighted reduction of per-component curves in index order.
std::vector<PhotonStatistics> reduce_mixture(std::span<const double> weights,
                                             std::span<const std::vector<PhotonStatistics>* const> curves,
                                             double captured_mass);

} // namespace qfel
