#include "qfel/ensemble.hpp"

#include "qfel/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <string>
#include <thread>

namespace qfel {

namespace {

double log_probability(const InitialFieldState& s, std::uint64_t n)
{
    const double n0 = s.mean_photons;
    const double x = static_cast<double>(n);
    switch (s.kind) {
    case SeedKind::Fock:
        return static_cast<double>(n) == n0 ? 0.0 : -std::numeric_limits<double>::infinity();
    case SeedKind::Coherent:
        if (n0 == 0.0)
            return n == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
        return x * std::log(n0) - n0 - std::lgamma(x + 1.0);
    case SeedKind::Thermal:
        if (n0 == 0.0)
            return n == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
        return -std::log1p(n0) + x * (std::log(n0) - std::log1p(n0));
    }
    return -std::numeric_limits<double>::infinity();
}

std::uint64_t mode_of(const InitialFieldState& s)
{
    switch (s.kind) {
    case SeedKind::Fock:
    case SeedKind::Coherent:
        return static_cast<std::uint64_t>(std::floor(s.mean_photons));
    case SeedKind::Thermal:
        return 0;
    }
    return 0;
}

// Rough cost of one component, used only to order the work queue.
double component_cost(const SystemConfig& c)
{
    const double n = static_cast<double>(c.n_electrons);
    return n * (n + static_cast<double>(c.initial_photons));
}

} // namespace

const char* seed_kind_name(SeedKind kind) noexcept
{
    switch (kind) {
    case SeedKind::Fock:
        return "fock";
    case SeedKind::Coherent:
        return "coherent";
    case SeedKind::Thermal:
        return "thermal";
    }
    return "unknown";
}

void InitialFieldState::validate() const
{
    if (!std::isfinite(mean_photons) || mean_photons < 0.0)
        throw ConfigError("mean photon number must be finite and non-negative");
    if (kind == SeedKind::Fock && std::floor(mean_photons) != mean_photons)
        throw ConfigError("a Fock seed needs an integral photon number, got " + std::to_string(mean_photons));
}

double seed_probability(const InitialFieldState& state, std::uint64_t n)
{
    state.validate();
    return std::exp(log_probability(state, n));
}

TruncatedDistribution truncate(const InitialFieldState& state, double epsilon)
{
    state.validate();
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw DomainError("truncation epsilon must lie in (0, 1)");

    const double target = 1.0 - epsilon;
    std::uint64_t lo = mode_of(state);
    std::uint64_t hi = lo;
    double mass = seed_probability(state, lo);
    double right = seed_probability(state, hi + 1);
    double left = lo > 0 ? seed_probability(state, lo - 1) : 0.0;
    while (mass < target) {
        if (right <= 0.0 && left <= 0.0)
            break; // tail underflowed; report the mass actually captured
        if (left > right) {
            mass += left;
            --lo;
            left = lo > 0 ? seed_probability(state, lo - 1) : 0.0;
        } else {
            mass += right;
            ++hi;
            right = seed_probability(state, hi + 1);
        }
    }

    TruncatedDistribution d;
    d.truncation_epsilon = epsilon;
    d.photons.reserve(hi - lo + 1);
    d.weights.reserve(hi - lo + 1);
    for (std::uint64_t n = lo; n <= hi; ++n) {
        d.photons.push_back(n);
        d.weights.push_back(seed_probability(state, n));
    }
    d.captured_mass = std::accumulate(d.weights.begin(), d.weights.end(), 0.0);
    return d;
}

TruncatedDistribution distribution_from_amplitudes(std::uint64_t first_photon,
                                                   std::span<const std::complex<double>> amplitudes)
{
    TruncatedDistribution d;
    for (std::size_t i = 0; i < amplitudes.size(); ++i) {
        const double p = std::norm(amplitudes[i]);
        if (p == 0.0)
            continue;
        d.photons.push_back(first_photon + i);
        d.weights.push_back(p);
    }
    d.captured_mass = std::accumulate(d.weights.begin(), d.weights.end(), 0.0);
    return d;
}

TruncatedDistribution distribution_from_weights(std::span<const std::uint64_t> photons,
                                                std::span<const double> weights)
{
    if (photons.size() != weights.size())
        throw DomainError("photon numbers and weights differ in length");
    for (std::size_t i = 0; i < photons.size(); ++i) {
        if (!(weights[i] >= 0.0) || !std::isfinite(weights[i]))
            throw DomainError("weights must be finite and non-negative");
        if (i > 0 && photons[i] <= photons[i - 1])
            throw DomainError("photon numbers must be strictly increasing");
    }
    TruncatedDistribution d;
    d.photons.assign(photons.begin(), photons.end());
    d.weights.assign(weights.begin(), weights.end());
    d.captured_mass = std::accumulate(d.weights.begin(), d.weights.end(), 0.0);
    return d;
}

std::size_t default_thread_count()
{
    if (const char* env = std::getenv("QFEL_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0)
            return static_cast<std::size_t>(v);
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

EnsembleEngine::EnsembleEngine(std::size_t threads) : threads_(threads == 0 ? default_thread_count() : threads) {}

std::shared_ptr<const EnsembleEngine::Curve> EnsembleEngine::lookup(const Key& key) const
{
    std::lock_guard lock(mutex_);
    auto it = cache_.find(key);
    if (it == cache_.end())
        return nullptr;
    ++hits_;
    return it->second;
}

void EnsembleEngine::store(const Key& key, std::shared_ptr<const Curve> curve)
{
    std::lock_guard lock(mutex_);
    cache_.emplace(key, std::move(curve));
}

std::size_t EnsembleEngine::cache_entries() const
{
    std::lock_guard lock(mutex_);
    return cache_.size();
}

std::size_t EnsembleEngine::cache_hits() const
{
    std::lock_guard lock(mutex_);
    return hits_;
}

void EnsembleEngine::clear_cache()
{
    std::lock_guard lock(mutex_);
    cache_.clear();
    hits_ = 0;
}

std::vector<PhotonStatistics> EnsembleEngine::mixed_moments(const TruncatedDistribution& distribution,
                                                            const SystemConfig& config_template,
                                                            std::span<const double> lengths, Backend backend)
{
    config_template.validate();
    const auto count = distribution.size();
    if (count == 0)
        throw DomainError("mixture needs at least one component");

    const auto resolved = resolve_backend(backend, config_template.dimension());
    const std::vector<double> grid(lengths.begin(), lengths.end());

    std::vector<std::shared_ptr<const Curve>> curves(count);
    std::vector<std::string> failures(count);
    std::vector<Key> keys(count);
    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < count; ++i) {
        keys[i] = Key{config_template.n_electrons, distribution.photons[i], config_template.detuning,
                      config_template.quantum_parameter, static_cast<int>(resolved), grid};
        curves[i] = lookup(keys[i]);
        if (!curves[i])
            pending.push_back(i);
    }

    auto config_for = [&](std::size_t i) {
        SystemConfig c = config_template;
        c.initial_photons = distribution.photons[i];
        return c;
    };
    // Largest components first so the tail of the queue is cheap.
    std::stable_sort(pending.begin(), pending.end(), [&](std::size_t a, std::size_t b) {
        return component_cost(config_for(a)) > component_cost(config_for(b));
    });

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const auto slot = next.fetch_add(1);
            if (slot >= pending.size())
                return;
            const auto i = pending[slot];
            try {
                curves[i] = std::make_shared<const Curve>(evolve_statistics(config_for(i), grid, resolved));
            } catch (const std::exception& e) {
                failures[i] = e.what();
            }
        }
    };
    const auto workers = std::min(threads_, pending.size());
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t t = 0; t < workers; ++t)
            pool.emplace_back(worker);
    }

    std::string failed;
    for (std::size_t i = 0; i < count; ++i) {
        if (!failures[i].empty())
            failed += (failed.empty() ? "" : "; ") + std::string("n'=") + std::to_string(distribution.photons[i])
                      + ": " + failures[i];
    }
    if (!failed.empty())
        throw NumericError("mixture component propagation failed: " + failed);

    for (auto i : pending)
        store(keys[i], curves[i]);

    std::vector<const Curve*> views(count);
    for (std::size_t i = 0; i < count; ++i)
        views[i] = curves[i].get();
    return reduce_mixture(distribution.weights, views, distribution.captured_mass);
}

std::vector<PhotonStatistics> EnsembleEngine::mixed_moments(const InitialFieldState& state,
                                                            const SystemConfig& config_template,
                                                            std::span<const double> lengths, double epsilon,
                                                            Backend backend)
{
    return mixed_moments(truncate(state, epsilon), config_template, lengths, backend);
}

std::vector<PhotonStatistics> reduce_mixture(std::span<const double> weights,
                                             std::span<const std::vector<PhotonStatistics>* const> curves,
                                             double captured_mass)
{
    if (weights.size() != curves.size() || curves.empty())
        throw DomainError("reduce_mixture: weights and curves differ in length");
    const auto samples = curves.front()->size();
    for (const auto* c : curves)
        if (c->size() != samples)
            throw DomainError("reduce_mixture: component curves differ in length");

    std::vector<PhotonStatistics> out(samples);
    for (std::size_t s = 0; s < samples; ++s) {
        double mean = 0.0;
        double second = 0.0;
        for (std::size_t i = 0; i < curves.size(); ++i) {
            mean += weights[i] * (*curves[i])[s].mean;
            second += weights[i] * (*curves[i])[s].second_moment;
        }
        // Within-component variance plus spread of component means about the
        // mixture mean; the last term accounts for the uncaptured mass.
        double variance = 0.0;
        for (std::size_t i = 0; i < curves.size(); ++i) {
            const auto& c = (*curves[i])[s];
            const double d = c.mean - mean;
            variance += weights[i] * (c.variance + d * d);
        }
        variance += mean * mean * (1.0 - captured_mass);

        auto& o = out[s];
        o.length_over_gain = (*curves.front())[s].length_over_gain;
        o.mean = mean;
        o.second_moment = second;
        o.variance = variance;
        o.captured_mass = captured_mass;
        o.fano_defined = mean > 0.0;
        o.fano = o.fano_defined ? variance / mean : std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

} // namespace qfel
