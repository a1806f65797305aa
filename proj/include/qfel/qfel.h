#ifndef QFEL_QFEL_H
#define QFEL_QFEL_H

/*
 * C interface to the qfel library.
 *
 * Every fallible function returns a qfel_status. On failure the message of
 * the most recent error on the calling thread is available from
 * qfel_last_error() until the next failing call on that thread.
 * Output pointers are written only on success.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(QFEL_BUILDING_LIBRARY)
#    define QFEL_API __declspec(dllexport)
#  else
#    define QFEL_API __declspec(dllimport)
#  endif
#else
#  define QFEL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qfel_status {
    QFEL_OK = 0,
    QFEL_ERR_INVALID_ARGUMENT = 1, /* null pointer, short buffer */
    QFEL_ERR_DOMAIN = 2,
    QFEL_ERR_NUMERIC = 3,
    QFEL_ERR_ANALYSIS = 4,
    QFEL_ERR_NO_GAIN = 5,
    QFEL_ERR_CONFIG = 6,
    QFEL_ERR_INTERNAL = 7
} qfel_status;

typedef enum qfel_backend {
    QFEL_BACKEND_AUTO = 0,
    QFEL_BACKEND_SPECTRAL = 1,
    QFEL_BACKEND_CHEBYSHEV = 2
} qfel_backend;

typedef enum qfel_seed_kind {
    QFEL_SEED_FOCK = 0,
    QFEL_SEED_COHERENT = 1,
    QFEL_SEED_THERMAL = 2
} qfel_seed_kind;

typedef enum qfel_saturation_mode {
    QFEL_SATURATION_EXACT = 0,
    QFEL_SATURATION_ASYMPTOTIC = 1
} qfel_saturation_mode;

typedef struct qfel_system_config {
    uint64_t n_electrons;
    uint64_t initial_photons;
    double detuning;
    double quantum_parameter;
} qfel_system_config;

typedef struct qfel_photon_statistics {
    double length_over_gain;
    double mean;
    double second_moment;
    double variance;
    double fano; /* NaN when fano_defined is 0 */
    int fano_defined;
    double captured_mass;
} qfel_photon_statistics;

typedef struct qfel_cubic_roots {
    double n_plus;
    double n_minus;
    double n_zero;
    int gain;
} qfel_cubic_roots;

typedef struct qfel_analytic_curve {
    double modulus;
    double complementary_modulus;
    double quarter_period;
    double length_scale;
} qfel_analytic_curve;

typedef struct qfel_peak {
    double position;
    double value;
    size_t sample_index;
} qfel_peak;

QFEL_API const char* qfel_version(void);
QFEL_API const char* qfel_last_error(void);
QFEL_API const char* qfel_status_string(qfel_status status);
QFEL_API const char* qfel_backend_name(qfel_backend backend);

/* Elliptic functions, 0 <= k < 1. */
QFEL_API qfel_status qfel_elliptic_k(double k, double* out);
QFEL_API qfel_status qfel_elliptic_k_complementary(double complementary, double* out);
QFEL_API qfel_status qfel_jacobi(double u, double k, double* sn, double* cn, double* dn);

/* Newline-separated remarks about the configuration, "" when there are none.
 * Release with qfel_string_free. */
QFEL_API qfel_status qfel_config_validate(const qfel_system_config* config, char** warnings);
QFEL_API qfel_status qfel_coupling_coefficient(const qfel_system_config* config, uint64_t nu, double* out);

/* Writes samples + 1 equally spaced lengths on [0, max_length]. */
QFEL_API qfel_status qfel_uniform_lengths(double max_length, size_t samples, double* out, size_t capacity);

/* A Fock-seeded ladder ready for propagation. */
typedef struct qfel_simulation qfel_simulation;

QFEL_API qfel_status qfel_simulation_create(const qfel_system_config* config, qfel_backend backend,
                                            qfel_simulation** out);
QFEL_API void qfel_simulation_destroy(qfel_simulation* sim);
QFEL_API size_t qfel_simulation_dimension(const qfel_simulation* sim);
/* Backend actually used after resolving QFEL_BACKEND_AUTO. */
QFEL_API qfel_backend qfel_simulation_backend(const qfel_simulation* sim);
QFEL_API qfel_status qfel_simulation_statistics(const qfel_simulation* sim, const double* lengths, size_t count,
                                                qfel_photon_statistics* out);
/* p_nu for nu = n0 ... n0 + N at one length; capacity must be at least N + 1. */
QFEL_API qfel_status qfel_simulation_distribution(const qfel_simulation* sim, double length_over_gain,
                                                  double* probabilities, size_t capacity);

QFEL_API qfel_status qfel_seed_probability(qfel_seed_kind kind, double mean_photons, uint64_t n, double* out);

/* Memoising mixture engine for seeded runs. threads = 0 selects the default
 * (QFEL_THREADS, else hardware concurrency). */
typedef struct qfel_ensemble qfel_ensemble;

QFEL_API qfel_status qfel_ensemble_create(size_t threads, qfel_ensemble** out);
QFEL_API void qfel_ensemble_destroy(qfel_ensemble* ensemble);
QFEL_API size_t qfel_ensemble_threads(const qfel_ensemble* ensemble);
/* The template fixes N, delta and alpha_N; its initial_photons is ignored. */
QFEL_API qfel_status qfel_ensemble_mixed_moments(qfel_ensemble* ensemble, qfel_seed_kind kind, double mean_photons,
                                                 const qfel_system_config* config_template, const double* lengths,
                                                 size_t count, double epsilon, qfel_backend backend,
                                                 qfel_photon_statistics* out);

/* Closed-form approximation. */
QFEL_API qfel_status qfel_roots(const qfel_system_config* config, qfel_cubic_roots* out);
QFEL_API qfel_status qfel_curve_params(const qfel_system_config* config, qfel_analytic_curve* out);
QFEL_API qfel_status qfel_mean_photon_analytic(double length_over_gain, const qfel_system_config* config,
                                               double* out);
QFEL_API qfel_status qfel_saturation_length(const qfel_system_config* config, qfel_saturation_mode mode,
                                            double* out);
QFEL_API qfel_status qfel_n_max_detuned(const qfel_system_config* config, double* exact, double* asymptotic);

QFEL_API qfel_status qfel_find_first_maximum(const double* x, const double* y, size_t count, qfel_peak* out);
QFEL_API qfel_status qfel_find_first_minimum(const double* x, const double* y, size_t count, qfel_peak* out);

/* Laboratory frame. */
QFEL_API qfel_status qfel_budget_length(double quantum_parameter, double r_sp_l, double k_p_l, double* out);
/* Parses a design input document and returns the feasibility report as JSON.
 * Release the result with qfel_string_free. */
QFEL_API qfel_status qfel_design_json(const char* input_json, char** report_json);

QFEL_API void qfel_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
