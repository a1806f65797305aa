#include "qfel/dynamics.hpp"

#include "chebyshev.hpp"
#include "qfel/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace qfel {

namespace {

constexpr double kSpectralNormTolerance = 1e-10;
constexpr double kIterativeNormTolerance = 1e-8;
constexpr double kEnergyTolerance = 1e-8;

// The ladder Hamiltonian with the diagonal shifted by +delta*n0, so that the
// diagonal reads -delta * (nu - n0). This removes the global phase
// exp(i delta n0 tau) and keeps the entries O(N) for large seeds.
SymmetricTridiagonal shifted_matrix(const TridiagonalHamiltonian& h, const SystemConfig& config)
{
    SymmetricTridiagonal m = h.matrix;
    for (std::size_t i = 0; i < m.diagonal.size(); ++i)
        m.diagonal[i] = -config.detuning * static_cast<double>(i);
    return m;
}

double expectation(const SymmetricTridiagonal& m, const std::vector<std::complex<double>>& c)
{
    const auto n = c.size();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += m.diagonal[i] * std::norm(c[i]);
        if (i + 1 < n)
            acc += 2.0 * m.off_diagonal[i] * std::real(std::conj(c[i]) * c[i + 1]);
    }
    return acc;
}

void check_lengths(std::span<const double> lengths)
{
    double previous = 0.0;
    for (double l : lengths) {
        if (!std::isfinite(l) || l < 0.0)
            throw DomainError("lengths must be finite and non-negative");
        if (l < previous)
            throw DomainError("lengths must be ascending");
        previous = l;
    }
}

double parabola_vertex(double x0, double y0, double x1, double y1, double x2, double y2, double& value)
{
    const double h0 = x0 - x1;
    const double h2 = x2 - x1;
    const double s0 = (y0 - y1) / h0;
    const double s2 = (y2 - y1) / h2;
    const double a = (s2 - s0) / (h2 - h0);
    const double b = s2 - a * h2;
    if (a == 0.0) {
        value = y1;
        return x1;
    }
    const double t = -b / (2.0 * a);
    // Keep the refined vertex inside the bracketing interval.
    if (t < h0 || t > h2) {
        value = y1;
        return x1;
    }
    value = y1 - b * b / (4.0 * a);
    return x1 + t;
}

} // namespace

void SystemConfig::validate() const
{
    if (n_electrons < 1)
        throw ConfigError("n_electrons must be at least 1");
    if (!std::isfinite(detuning) || std::abs(detuning) >= 1.0)
        throw ConfigError("detuning must satisfy |delta| < 1, got " + std::to_string(detuning));
    if (!std::isfinite(quantum_parameter) || quantum_parameter <= 0.0)
        throw ConfigError("quantum_parameter must be positive, got " + std::to_string(quantum_parameter));
}

std::vector<std::string> SystemConfig::warnings() const
{
    std::vector<std::string> out;
    if (quantum_parameter >= 1.0)
        out.push_back("quantum_parameter " + std::to_string(quantum_parameter)
                      + " >= 1: outside the quantum regime alpha_N << 1");
    return out;
}

double coupling_coefficient(std::uint64_t nu, const SystemConfig& config)
{
    const auto n0 = config.initial_photons;
    const auto n = config.n_electrons;
    if (nu < n0 || nu > n0 + n + 1)
        throw DomainError("coupling_coefficient: nu = " + std::to_string(nu) + " outside [" + std::to_string(n0)
                          + ", " + std::to_string(n0 + n + 1) + "]");
    const double k = static_cast<double>(nu - n0);
    const double occupied = 1.0 - (k - 1.0) / static_cast<double>(n);
    // nu = n0 + N + 1 gives occupied == 0; clamp rounding below zero.
    return std::sqrt(static_cast<double>(nu) * k) * std::sqrt(std::max(occupied, 0.0));
}

TridiagonalHamiltonian build_hamiltonian(const SystemConfig& config)
{
    config.validate();
    const auto dim = config.dimension();
    TridiagonalHamiltonian h;
    h.first_photon = config.initial_photons;
    h.matrix.diagonal.resize(dim);
    h.matrix.off_diagonal.resize(dim - 1);
    for (std::size_t i = 0; i < dim; ++i) {
        const auto nu = config.initial_photons + i;
        h.matrix.diagonal[i] = -config.detuning * static_cast<double>(nu);
        if (i + 1 < dim)
            h.matrix.off_diagonal[i] = config.quantum_parameter * coupling_coefficient(nu + 1, config);
    }
    return h;
}

Spectrum diagonalize(const TridiagonalHamiltonian& h)
{
    return diagonalize(h.matrix);
}

double time_from_length(double length_over_gain, const SystemConfig& config)
{
    return length_over_gain / (2.0 * config.quantum_parameter);
}

double AmplitudeVector::norm_squared() const noexcept
{
    double acc = 0.0;
    for (const auto& c : amplitudes)
        acc += std::norm(c);
    return acc;
}

ConservedCharges conserved_charges(const AmplitudeVector& state, const SystemConfig& config)
{
    const double r = 0.5 * static_cast<double>(config.n_electrons);
    const double top = static_cast<double>(config.initial_photons) + r;
    double a = 0.0;
    double b = 0.0;
    for (std::size_t i = 0; i < state.amplitudes.size(); ++i) {
        const double p = std::norm(state.amplitudes[i]);
        const double nu = static_cast<double>(state.first_photon + i);
        const double m = top - nu; // J_z eigenvalue paired with nu on the ladder
        a += p * r * (r + 1.0);
        b += p * (nu + m);
    }
    const auto h = build_hamiltonian(config);
    return {a, b, expectation(h.matrix, state.amplitudes)};
}

PhotonStatistics statistics_from_distribution(std::uint64_t first_photon, std::span<const double> probabilities,
                                              double length_over_gain)
{
    PhotonStatistics s;
    s.length_over_gain = length_over_gain;
    double mass = 0.0;
    double offset_mean = 0.0;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        mass += probabilities[i];
        offset_mean += probabilities[i] * static_cast<double>(i);
    }
    // Central moments about the ladder start keep the variance free of
    // cancellation for large n0.
    double central = 0.0;
    const double m = mass > 0.0 ? offset_mean / mass : 0.0;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        const double d = static_cast<double>(i) - m;
        central += probabilities[i] * d * d;
    }
    const double base = static_cast<double>(first_photon);
    s.mean = base * mass + offset_mean;
    s.variance = mass > 0.0 ? central / mass : 0.0;
    s.second_moment = s.variance + s.mean * s.mean;
    s.captured_mass = mass;
    s.fano_defined = s.mean > 0.0;
    s.fano = s.fano_defined ? s.variance / s.mean : std::numeric_limits<double>::quiet_NaN();
    return s;
}

PhotonStatistics observables(const AmplitudeVector& state)
{
    std::vector<double> p(state.amplitudes.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        p[i] = std::norm(state.amplitudes[i]);
    auto s = statistics_from_distribution(state.first_photon, p, state.length_over_gain);
    // A pure state is normalised up to propagation error; report unit mass.
    s.captured_mass = 1.0;
    return s;
}

Backend resolve_backend(Backend requested, std::size_t dimension) noexcept
{
    if (requested != Backend::Auto)
        return requested;
    return dimension <= kSpectralAutoLimit ? Backend::Spectral : Backend::Chebyshev;
}

const char* backend_name(Backend backend) noexcept
{
    switch (backend) {
    case Backend::Auto:
        return "auto";
    case Backend::Spectral:
        return "spectral";
    case Backend::Chebyshev:
        return "chebyshev";
    }
    return "unknown";
}

Evolver::Evolver(SystemConfig config, Backend backend)
    : config_(config), backend_(resolve_backend(backend, config.dimension()))
{
    config_.validate();
}

void Evolver::run(std::span<const double> lengths, const Sink& sink) const
{
    check_lengths(lengths);
    if (backend_ == Backend::Spectral)
        run_spectral(lengths, sink);
    else
        run_chebyshev(lengths, sink);
}

void Evolver::check(const AmplitudeVector& state) const
{
    const double tol = backend_ == Backend::Spectral ? kSpectralNormTolerance : kIterativeNormTolerance;
    const double drift = std::abs(state.norm_squared() - 1.0);
    if (drift > tol)
        throw NumericError("norm drift " + std::to_string(drift) + " exceeds " + std::to_string(tol) + " at L/Lg = "
                           + std::to_string(state.length_over_gain));
}

void Evolver::run_spectral(std::span<const double> lengths, const Sink& sink) const
{
    const auto h = build_hamiltonian(config_);
    const auto shifted = shifted_matrix(h, config_);
    const auto spectrum = diagonalize(shifted);
    const auto n = spectrum.dimension();
    const double energy0 = shifted.diagonal[0];
    const double energy_scale = 1.0 + std::abs(energy0);
    const double global = config_.detuning * static_cast<double>(config_.initial_photons);

    // Overlap of the initial unit vector with each eigenvector.
    std::vector<double> overlap(n);
    for (std::size_t j = 0; j < n; ++j)
        overlap[j] = spectrum.eigenvectors[j * n];

    std::vector<double> re(n);
    std::vector<double> im(n);
    AmplitudeVector state;
    state.first_photon = config_.initial_photons;
    state.amplitudes.resize(n);
    for (double length : lengths) {
        const double tau = time_from_length(length, config_);
        std::fill(re.begin(), re.end(), 0.0);
        std::fill(im.begin(), im.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            const double phase = -spectrum.eigenvalues[j] * tau;
            const double zr = overlap[j] * std::cos(phase);
            const double zi = overlap[j] * std::sin(phase);
            const double* v = spectrum.eigenvectors.data() + j * n;
            for (std::size_t k = 0; k < n; ++k) {
                re[k] += zr * v[k];
                im[k] += zi * v[k];
            }
        }
        const auto correction = std::polar(1.0, global * tau);
        for (std::size_t k = 0; k < n; ++k)
            state.amplitudes[k] = correction * std::complex<double>(re[k], im[k]);
        state.length_over_gain = length;
        state.tau = tau;

        check(state);
        const double energy = expectation(shifted, state.amplitudes);
        if (std::abs(energy - energy0) > kEnergyTolerance * energy_scale)
            throw NumericError("energy drift " + std::to_string(energy - energy0) + " at L/Lg = "
                               + std::to_string(length));
        sink(state);
    }
}

void Evolver::run_chebyshev(std::span<const double> lengths, const Sink& sink) const
{
    const auto h = build_hamiltonian(config_);
    const auto shifted = shifted_matrix(h, config_);
    const auto n = shifted.dimension();

    // Gershgorin interval of the shifted matrix.
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0)
            r += std::abs(shifted.off_diagonal[i - 1]);
        if (i + 1 < n)
            r += std::abs(shifted.off_diagonal[i]);
        lo = std::min(lo, shifted.diagonal[i] - r);
        hi = std::max(hi, shifted.diagonal[i] + r);
    }
    const double center = 0.5 * (hi + lo);
    const double radius = std::max(0.5 * (hi - lo), 1e-300) * (1.0 + 1e-12);
    detail::ChebyshevStepper stepper(shifted, center, radius);

    const double energy0 = shifted.diagonal[0];
    const double energy_scale = 1.0 + std::abs(energy0);
    const double global = config_.detuning * static_cast<double>(config_.initial_photons);

    std::vector<std::complex<double>> psi(n, {0.0, 0.0});
    psi[0] = 1.0;
    double tau_now = 0.0;

    AmplitudeVector state;
    state.first_photon = config_.initial_photons;
    for (double length : lengths) {
        const double tau = time_from_length(length, config_);
        double remaining = tau - tau_now;
        const double max_dt = detail::ChebyshevStepper::kMaxArgument / radius;
        while (remaining > 0.0) {
            const double dt = std::min(remaining, max_dt);
            stepper.step(psi, dt);
            remaining -= dt;
        }
        tau_now = tau;

        const double energy = expectation(shifted, psi);
        if (std::abs(energy - energy0) > kEnergyTolerance * energy_scale)
            throw NumericError("energy drift " + std::to_string(energy - energy0) + " at L/Lg = "
                               + std::to_string(length));

        const auto correction = std::polar(1.0, global * tau);
        state.amplitudes.resize(n);
        for (std::size_t k = 0; k < n; ++k)
            state.amplitudes[k] = correction * psi[k];
        state.length_over_gain = length;
        state.tau = tau;
        check(state);
        sink(state);
    }
}

std::vector<AmplitudeVector> evolve(const SystemConfig& config, std::span<const double> lengths, Backend backend)
{
    std::vector<AmplitudeVector> out;
    out.reserve(lengths.size());
    Evolver(config, backend).run(lengths, [&](const AmplitudeVector& s) { out.push_back(s); });
    return out;
}

std::vector<PhotonStatistics> evolve_statistics(const SystemConfig& config, std::span<const double> lengths,
                                                Backend backend)
{
    std::vector<PhotonStatistics> out;
    out.reserve(lengths.size());
    Evolver(config, backend).run(lengths, [&](const AmplitudeVector& s) { out.push_back(observables(s)); });
    return out;
}

std::vector<double> uniform_lengths(double max_length, std::size_t samples)
{
    if (!std::isfinite(max_length) || max_length < 0.0)
        throw DomainError("max_length must be finite and non-negative");
    if (samples == 0)
        return {0.0};
    std::vector<double> out(samples + 1);
    for (std::size_t i = 0; i <= samples; ++i)
        out[i] = max_length * static_cast<double>(i) / static_cast<double>(samples);
    return out;
}

PeakEstimate find_first_maximum(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size())
        throw DomainError("find_first_maximum: abscissa and ordinate differ in length");
    if (y.size() < 3)
        throw AnalysisError("find_first_maximum needs at least 3 samples");
    for (std::size_t i = 1; i + 1 < y.size(); ++i) {
        if (y[i] >= y[i - 1] && y[i] > y[i + 1]) {
            double value = 0.0;
            const double pos = parabola_vertex(x[i - 1], y[i - 1], x[i], y[i], x[i + 1], y[i + 1], value);
            return {pos, value, i};
        }
    }
    throw AnalysisError("no interior maximum found; extend the scan to longer lengths");
}

PeakEstimate find_first_minimum(std::span<const double> x, std::span<const double> y)
{
    std::vector<double> negated(y.size());
    std::transform(y.begin(), y.end(), negated.begin(), [](double v) { return -v; });
    try {
        auto p = find_first_maximum(x, negated);
        p.value = -p.value;
        return p;
    } catch (const AnalysisError&) {
        throw AnalysisError("no interior minimum found; extend the scan to longer lengths");
    }
}

} // namespace qfel
