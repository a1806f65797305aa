#include "qfel/qfel.h"

#include "qfel/analytic.hpp"
#include "qfel/dynamics.hpp"
#include "qfel/ensemble.hpp"
#include "qfel/errors.hpp"
#include "qfel/lab_frame.hpp"
#include "qfel/lab_json.hpp"
#include "qfel/special_functions.hpp"

#include <cstdlib>
#include <cstring>
#include <limits>
#include <new>
#include <span>
#include <string>

struct qfel_simulation {
    qfel::Evolver evolver;
};

struct qfel_ensemble {
    qfel::EnsembleEngine engine;
};

namespace {

thread_local std::string g_last_error;

qfel_status fail(qfel_status status, std::string message)
{
    g_last_error = std::move(message);
    return status;
}

// Runs f and translates library exceptions into status codes.
template <class F>
qfel_status guarded(F&& f) noexcept
{
    try {
        f();
        return QFEL_OK;
    } catch (const qfel::ConfigError& e) {
        return fail(QFEL_ERR_CONFIG, e.what());
    } catch (const qfel::NoGainError& e) {
        return fail(QFEL_ERR_NO_GAIN, e.what());
    } catch (const qfel::DomainError& e) {
        return fail(QFEL_ERR_DOMAIN, e.what());
    } catch (const qfel::NumericError& e) {
        return fail(QFEL_ERR_NUMERIC, e.what());
    } catch (const qfel::AnalysisError& e) {
        return fail(QFEL_ERR_ANALYSIS, e.what());
    } catch (const std::bad_alloc&) {
        return fail(QFEL_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(QFEL_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(QFEL_ERR_INTERNAL, "unknown error");
    }
}

qfel_status null_argument(const char* name)
{
    return fail(QFEL_ERR_INVALID_ARGUMENT, std::string("null pointer argument: ") + name);
}

qfel::SystemConfig to_cpp(const qfel_system_config& c)
{
    return {c.n_electrons, c.initial_photons, c.detuning, c.quantum_parameter};
}

qfel::Backend to_cpp(qfel_backend b)
{
    switch (b) {
    case QFEL_BACKEND_AUTO:
        return qfel::Backend::Auto;
    case QFEL_BACKEND_SPECTRAL:
        return qfel::Backend::Spectral;
    case QFEL_BACKEND_CHEBYSHEV:
        return qfel::Backend::Chebyshev;
    }
    throw qfel::ConfigError("unknown backend " + std::to_string(static_cast<int>(b)));
}

qfel::SeedKind to_cpp(qfel_seed_kind k)
{
    switch (k) {
    case QFEL_SEED_FOCK:
        return qfel::SeedKind::Fock;
    case QFEL_SEED_COHERENT:
        return qfel::SeedKind::Coherent;
    case QFEL_SEED_THERMAL:
        return qfel::SeedKind::Thermal;
    }
    throw qfel::ConfigError("unknown seed kind " + std::to_string(static_cast<int>(k)));
}

qfel_photon_statistics to_c(const qfel::PhotonStatistics& s)
{
    return {s.length_over_gain,
            s.mean,
            s.second_moment,
            s.variance,
            s.fano_defined ? s.fano : std::numeric_limits<double>::quiet_NaN(),
            s.fano_defined ? 1 : 0,
            s.captured_mass};
}

char* duplicate(const std::string& s)
{
    auto* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out)
        throw std::bad_alloc();
    std::memcpy(out, s.data(), s.size() + 1);
    return out;
}

qfel_status find_extremum(const double* x, const double* y, size_t count, qfel_peak* out, bool maximum)
{
    if (!x || !y)
        return null_argument("x, y");
    if (!out)
        return null_argument("out");
    return guarded([&] {
        const std::span<const double> xs(x, count);
        const std::span<const double> ys(y, count);
        const auto p = maximum ? qfel::find_first_maximum(xs, ys) : qfel::find_first_minimum(xs, ys);
        *out = {p.position, p.value, p.sample_index};
    });
}

} // namespace

extern "C" {

const char* qfel_version(void)
{
    return QFEL_VERSION_STRING;
}

const char* qfel_last_error(void)
{
    return g_last_error.c_str();
}

const char* qfel_status_string(qfel_status status)
{
    switch (status) {
    case QFEL_OK:
        return "ok";
    case QFEL_ERR_INVALID_ARGUMENT:
        return "invalid argument";
    case QFEL_ERR_DOMAIN:
        return "domain error";
    case QFEL_ERR_NUMERIC:
        return "numeric error";
    case QFEL_ERR_ANALYSIS:
        return "analysis error";
    case QFEL_ERR_NO_GAIN:
        return "no gain";
    case QFEL_ERR_CONFIG:
        return "configuration error";
    case QFEL_ERR_INTERNAL:
        return "internal error";
    }
    return "unknown status";
}

const char* qfel_backend_name(qfel_backend backend)
{
    switch (backend) {
    case QFEL_BACKEND_AUTO:
        return "auto";
    case QFEL_BACKEND_SPECTRAL:
        return "spectral";
    case QFEL_BACKEND_CHEBYSHEV:
        return "chebyshev";
    }
    return "unknown";
}

qfel_status qfel_elliptic_k(double k, double* out)
{
    if (!out)
        return null_argument("out");
    return guarded([&] { *out = qfel::complete_elliptic_k(k); });
}

qfel_status qfel_elliptic_k_complementary(double complementary, double* out)
{
    if (!out)
        return null_argument("out");
    return guarded(
        [&] { *out = qfel::complete_elliptic_k(qfel::EllipticModulus::from_complementary(complementary)); });
}

qfel_status qfel_jacobi(double u, double k, double* sn, double* cn, double* dn)
{
    if (!sn || !cn || !dn)
        return null_argument("sn, cn, dn");
    return guarded([&] {
        const auto v = qfel::jacobi_elliptic(u, qfel::EllipticModulus::from_modulus(k));
        *sn = v.sn;
        *cn = v.cn;
        *dn = v.dn;
    });
}

qfel_status qfel_config_validate(const qfel_system_config* config, char** warnings)
{
    if (!config)
        return null_argument("config");
    return guarded([&] {
        const auto c = to_cpp(*config);
        c.validate();
        if (warnings) {
            std::string joined;
            for (const auto& w : c.warnings())
                joined += (joined.empty() ? "" : "\n") + w;
            *warnings = duplicate(joined);
        }
    });
}

qfel_status qfel_coupling_coefficient(const qfel_system_config* config, uint64_t nu, double* out)
{
    if (!config || !out)
        return null_argument("config, out");
    return guarded([&] { *out = qfel::coupling_coefficient(nu, to_cpp(*config)); });
}

qfel_status qfel_uniform_lengths(double max_length, size_t samples, double* out, size_t capacity)
{
    if (!out)
        return null_argument("out");
    if (capacity < samples + 1)
        return fail(QFEL_ERR_INVALID_ARGUMENT, "output buffer holds fewer than samples + 1 values");
    return guarded([&] {
        const auto grid = qfel::uniform_lengths(max_length, samples);
        std::copy(grid.begin(), grid.end(), out);
    });
}

qfel_status qfel_simulation_create(const qfel_system_config* config, qfel_backend backend, qfel_simulation** out)
{
    if (!config || !out)
        return null_argument("config, out");
    return guarded([&] {
        const auto c = to_cpp(*config);
        c.validate();
        *out = new qfel_simulation{qfel::Evolver(c, to_cpp(backend))};
    });
}

void qfel_simulation_destroy(qfel_simulation* sim)
{
    delete sim;
}

size_t qfel_simulation_dimension(const qfel_simulation* sim)
{
    return sim ? sim->evolver.config().dimension() : 0;
}

qfel_backend qfel_simulation_backend(const qfel_simulation* sim)
{
    if (!sim)
        return QFEL_BACKEND_AUTO;
    return sim->evolver.backend() == qfel::Backend::Spectral ? QFEL_BACKEND_SPECTRAL : QFEL_BACKEND_CHEBYSHEV;
}

qfel_status qfel_simulation_statistics(const qfel_simulation* sim, const double* lengths, size_t count,
                                       qfel_photon_statistics* out)
{
    if (!sim || !out || (!lengths && count > 0))
        return null_argument("sim, lengths, out");
    return guarded([&] {
        std::vector<qfel_photon_statistics> result;
        result.reserve(count);
        sim->evolver.run(std::span<const double>(lengths, count),
                         [&](const qfel::AmplitudeVector& a) { result.push_back(to_c(qfel::observables(a))); });
        std::copy(result.begin(), result.end(), out);
    });
}

qfel_status qfel_simulation_distribution(const qfel_simulation* sim, double length_over_gain, double* probabilities,
                                         size_t capacity)
{
    if (!sim || !probabilities)
        return null_argument("sim, probabilities");
    if (capacity < sim->evolver.config().dimension())
        return fail(QFEL_ERR_INVALID_ARGUMENT, "probability buffer shorter than the ladder dimension");
    return guarded([&] {
        const double length[] = {length_over_gain};
        std::vector<double> p;
        sim->evolver.run(length, [&](const qfel::AmplitudeVector& a) {
            p.reserve(a.amplitudes.size());
            for (const auto& c : a.amplitudes)
                p.push_back(std::norm(c));
        });
        std::copy(p.begin(), p.end(), probabilities);
    });
}

qfel_status qfel_seed_probability(qfel_seed_kind kind, double mean_photons, uint64_t n, double* out)
{
    if (!out)
        return null_argument("out");
    return guarded([&] { *out = qfel::seed_probability({to_cpp(kind), mean_photons}, n); });
}

qfel_status qfel_ensemble_create(size_t threads, qfel_ensemble** out)
{
    if (!out)
        return null_argument("out");
    return guarded([&] { *out = new qfel_ensemble{qfel::EnsembleEngine(threads)}; });
}

void qfel_ensemble_destroy(qfel_ensemble* ensemble)
{
    delete ensemble;
}

size_t qfel_ensemble_threads(const qfel_ensemble* ensemble)
{
    return ensemble ? ensemble->engine.threads() : 0;
}

qfel_status qfel_ensemble_mixed_moments(qfel_ensemble* ensemble, qfel_seed_kind kind, double mean_photons,
                                        const qfel_system_config* config_template, const double* lengths,
                                        size_t count, double epsilon, qfel_backend backend,
                                        qfel_photon_statistics* out)
{
    if (!ensemble || !config_template || !out || (!lengths && count > 0))
        return null_argument("ensemble, config_template, lengths, out");
    return guarded([&] {
        const auto curve = ensemble->engine.mixed_moments(qfel::InitialFieldState{to_cpp(kind), mean_photons},
                                                          to_cpp(*config_template),
                                                          std::span<const double>(lengths, count), epsilon,
                                                          to_cpp(backend));
        for (size_t i = 0; i < curve.size(); ++i)
            out[i] = to_c(curve[i]);
    });
}

qfel_status qfel_roots(const qfel_system_config* config, qfel_cubic_roots* out)
{
    if (!config || !out)
        return null_argument("config, out");
    return guarded([&] {
        const auto r = qfel::roots(to_cpp(*config));
        *out = {r.n_plus, r.n_minus, r.n_zero, r.gain ? 1 : 0};
    });
}

qfel_status qfel_curve_params(const qfel_system_config* config, qfel_analytic_curve* out)
{
    if (!config || !out)
        return null_argument("config, out");
    return guarded([&] {
        const auto p = qfel::curve_params(to_cpp(*config));
        *out = {p.modulus.k(), p.modulus.complementary(), p.quarter_period, p.length_scale};
    });
}

qfel_status qfel_mean_photon_analytic(double length_over_gain, const qfel_system_config* config, double* out)
{
    if (!config || !out)
        return null_argument("config, out");
    return guarded([&] { *out = qfel::mean_photon_analytic(length_over_gain, to_cpp(*config)); });
}

qfel_status qfel_saturation_length(const qfel_system_config* config, qfel_saturation_mode mode, double* out)
{
    if (!config || !out)
        return null_argument("config, out");
    return guarded([&] {
        const auto m
            = mode == QFEL_SATURATION_EXACT ? qfel::SaturationMode::Exact : qfel::SaturationMode::Asymptotic;
        *out = qfel::saturation_length(to_cpp(*config), m);
    });
}

qfel_status qfel_n_max_detuned(const qfel_system_config* config, double* exact, double* asymptotic)
{
    if (!config || !exact || !asymptotic)
        return null_argument("config, exact, asymptotic");
    return guarded([&] {
        const auto m = qfel::n_max_detuned(to_cpp(*config));
        *exact = m.exact;
        *asymptotic = m.asymptotic;
    });
}

qfel_status qfel_find_first_maximum(const double* x, const double* y, size_t count, qfel_peak* out)
{
    return find_extremum(x, y, count, out, true);
}

qfel_status qfel_find_first_minimum(const double* x, const double* y, size_t count, qfel_peak* out)
{
    return find_extremum(x, y, count, out, false);
}

qfel_status qfel_budget_length(double quantum_parameter, double r_sp_l, double k_p_l, double* out)
{
    if (!out)
        return null_argument("out");
    return guarded([&] { *out = qfel::budget_length(quantum_parameter, r_sp_l, k_p_l); });
}

qfel_status qfel_design_json(const char* input_json, char** report_json)
{
    if (!input_json || !report_json)
        return null_argument("input_json, report_json");
    return guarded([&] {
        const auto in = qfel::design_input_from_json(std::string_view(input_json));
        const auto report = qfel::assess(in.params, in.assumptions);
        *report_json = duplicate(qfel::to_json(report).dump(2) + "\n");
    });
}

void qfel_string_free(char* s)
{
    std::free(s);
}

} // extern "C"
