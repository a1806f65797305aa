// Acceptance gate. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. `--long` adds the N = 1e4 run.

#include "qfel/analytic.hpp"
#include "qfel/dynamics.hpp"
#include "qfel/ensemble.hpp"
#include "qfel/lab_frame.hpp"
#include "qfel/special_functions.hpp"

#include "../support/oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace qfel;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void criterion(const char* id, const char* title, double budget_s, const std::function<Outcome()>& body)
{
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > budget_s) {
        o.pass = false;
        o.detail += "; runtime over budget";
    }
    if (!o.pass)
        ++failures;
    std::printf("%s [%s] %s: %s (%.2f s, budget %.0f s)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(),
                secs, budget_s);
    std::fflush(stdout);
}

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::vector<double> means(const std::vector<PhotonStatistics>& s)
{
    std::vector<double> m;
    m.reserve(s.size());
    for (const auto& x : s)
        m.push_back(x.mean);
    return m;
}

PeakEstimate mean_peak(const SystemConfig& c, const std::vector<double>& l)
{
    return find_first_maximum(l, means(evolve_statistics(c, l)));
}

Outcome rabi()
{
    const SystemConfig c{1, 0, 0.0, 0.1};
    const auto l = uniform_lengths(10.0, 1000);
    const auto s = evolve_statistics(c, l);
    double err = 0.0;
    for (const auto& x : s)
        err = std::max(err, std::abs(x.mean - std::pow(std::sin(c.quantum_parameter * time_from_length(x.length_over_gain, c)), 2)));
    const auto p = find_first_maximum(l, means(s));
    const double at[] = {p.position};
    const double peak = evolve_statistics(c, at)[0].mean;
    return {err <= 1e-8 && std::abs(peak - 1.0) <= 1e-10,
            fmt("max |n - sin^2(alpha tau)| = %.2e (tol 1e-8), |n_peak - 1| = %.2e at L/Lg = %.6f (tol 1e-10)", err,
                std::abs(peak - 1.0), p.position)};
}

Outcome vacuum_plateau()
{
    const auto l = uniform_lengths(kDefaultMaxLength, kDefaultSamples);
    bool ok = true;
    std::string d;
    for (std::uint64_t n : {200u, 500u, 1000u}) {
        const auto p = mean_peak({n, 0, 0.0, 0.1}, l);
        const double r = p.value / static_cast<double>(n);
        ok = ok && std::abs(r - 0.78) <= 0.02;
        d += fmt("N=%llu: n_max/N=%.4f at L/Lg=%.3f; ", static_cast<unsigned long long>(n), r, p.position);
    }
    return {ok, d + "target 0.78 +- 0.02"};
}

Outcome vacuum_plateau_long()
{
    const std::uint64_t n = 10000;
    const SystemConfig c{n, 0, 0.0, 0.1};
    const auto l = uniform_lengths(kDefaultMaxLength, kDefaultSamples);
    const auto s = evolve_statistics(c, l);
    const auto p = find_first_maximum(l, means(s));
    const double r = p.value / static_cast<double>(n);
    // Variance near the peak: smallest variance within 1 L_g of L_max.
    double var = 1e300;
    for (const auto& x : s)
        if (std::abs(x.length_over_gain - p.position) <= 1.0)
            var = std::min(var, x.variance);
    const double vr = var / (static_cast<double>(n) * n);
    return {std::abs(r - 0.78) <= 0.02 && std::abs(vr - 0.05) <= 0.3 * 0.05,
            fmt("N=1e4: n_max/N=%.4f at L/Lg=%.3f (0.78 +- 0.02); variance dip/N^2=%.4f (0.05 +- 30%%)", r,
                p.position, vr)};
}

Outcome saturation_formulas()
{
    const double a = saturation_length({1000000000, 0, 0.0, 0.1}, SaturationMode::Asymptotic);
    const double b = saturation_length({1000000000, 100000000, 0.0, 0.1}, SaturationMode::Asymptotic);
    const SystemConfig m{1000000, 0, 0.0, 0.1};
    const double e = saturation_length(m, SaturationMode::Exact);
    const double f = saturation_length(m, SaturationMode::Asymptotic);
    const double rel = std::abs(e - f) / f;
    return {std::abs(a - 23.5) <= 0.1 && std::abs(b - 5.08) <= 0.05 && rel <= 0.05,
            fmt("vacuum N=1e9: %.4f (23.5 +- 0.1); n0/N=0.1: %.4f (5.08 +- 0.05); N=1e6 exact %.4f vs asymptotic "
                "%.4f, rel diff %.2e (<= 5%%)",
                a, b, e, f, rel)};
}

Outcome seeded_agreement()
{
    const SystemConfig c{1000, 100, 0.0, 0.1};
    const auto l = uniform_lengths(kDefaultMaxLength, kDefaultSamples);
    const auto m = means(evolve_statistics(c, l));
    const auto p = find_first_maximum(l, m);
    const double lmax = saturation_length(c, SaturationMode::Exact);
    const double top = 1100.0;
    const double height = std::abs(p.value - top) / top;
    const double pos = std::abs(p.position - lmax) / lmax;
    // After the peak the curve returns towards n0.
    std::vector<double> tail_x(l.begin() + static_cast<long>(p.sample_index), l.end());
    std::vector<double> tail_y(m.begin() + static_cast<long>(p.sample_index), m.end());
    const auto low = find_first_minimum(tail_x, tail_y);
    const bool returns = low.value <= c.initial_photons + 0.1 * c.n_electrons;
    return {height <= 0.05 && pos <= 0.05 && returns,
            fmt("first peak %.2f (n0+N = 1100, rel %.2e); at L/Lg = %.4f vs exact elliptic %.4f (rel %.2e); next "
                "minimum %.1f at L/Lg = %.3f",
                p.value, height, p.position, lmax, pos, low.value, low.position)};
}

Outcome detuning_sweep()
{
    const double alpha = 0.1;
    const std::uint64_t n = 1000;
    const auto l = uniform_lengths(30.0, 1200);
    const SystemConfig c0{n, 0, 0.0, alpha};
    const auto p0 = mean_peak(c0, l);
    const double nplus0 = roots(c0).n_plus;
    const double asym0 = saturation_length(c0, SaturationMode::Asymptotic);
    double worst_n = 0.0;
    double worst_l = 0.0;
    for (int i = 0; i <= 20; ++i) {
        const double ratio = -1.8 + 0.18 * i;
        const SystemConfig c{n, 0, ratio * alpha, alpha};
        const auto p = mean_peak(c, l);
        const double num_n = p.value / p0.value;
        const double ana_n = roots(c).n_plus / nplus0;
        const double num_l = p.position / p0.position;
        const double ana_l = saturation_length(c, SaturationMode::Asymptotic) / asym0;
        worst_n = std::max(worst_n, std::abs(num_n / ana_n - 1.0));
        worst_l = std::max(worst_l, std::abs(num_l / ana_l - 1.0));
    }
    return {worst_n <= 0.05 && worst_l <= 0.07,
            fmt("21 points delta/alpha in [-1.8, 1.8]: worst n_max ratio deviation %.2e (<= 5%%), worst L_max "
                "ratio deviation %.2e (<= 7%%)",
                worst_n, worst_l)};
}

Outcome thermal_seed()
{
    const SystemConfig c{1000, 0, 0.0, 0.1};
    const auto l = uniform_lengths(kDefaultMaxLength, kDefaultSamples);
    EnsembleEngine engine;
    const auto s = engine.mixed_moments(InitialFieldState{SeedKind::Thermal, 100.0}, c, l, kFigureEpsilon);
    const auto p = find_first_maximum(l, means(s));
    double tail = 0.0;
    int count = 0;
    for (const auto& x : s)
        if (x.length_over_gain >= 12.0 && x.length_over_gain <= 15.0) {
            tail += x.mean;
            ++count;
        }
    tail /= count;
    const double peak = p.value / 1000.0;
    const double level = tail / 1000.0;
    return {peak >= 0.7 && peak <= 0.9 && level >= 0.4 && level <= 0.6,
            fmt("first max %.4f N at L/Lg=%.3f (in [0.7, 0.9]); mean over L/Lg in [12, 15] %.4f N (in [0.4, 0.6]); "
                "captured mass %.6f over %zu components, %zu threads",
                peak, p.position, level, s.front().captured_mass, engine.cache_entries(), engine.threads())};
}

Outcome fano_structure()
{
    const SystemConfig c{1000, 0, 0.0, 0.1};
    const auto l = uniform_lengths(kDefaultMaxLength, kDefaultSamples);
    EnsembleEngine engine;
    bool ok = true;
    std::string d;
    for (const auto kind : {SeedKind::Fock, SeedKind::Coherent}) {
        const auto s = engine.mixed_moments(InitialFieldState{kind, 100.0}, c, l, kAcceptanceEpsilon);
        std::vector<double> fano;
        for (const auto& x : s)
            fano.push_back(x.fano);
        const auto peak = find_first_maximum(l, means(s));
        const auto low = find_first_minimum(l, fano);
        const bool pass = low.value < 1.0 && std::abs(low.position - peak.position) <= 1.0;
        ok = ok && pass;
        d += fmt("%s: Fano minimum %.4f at L/Lg=%.3f, mean peak at %.3f; ", seed_kind_name(kind), low.value,
                 low.position, peak.position);
    }
    return {ok, d + "need minimum < 1 within 1 L_g of the peak"};
}

Outcome feasibility()
{
    LabParams p;
    p.wiggler_wavelength = 1e-6;
    p.wiggler_parameter = 0.1;
    p.electron_density = 7.038166188135572e22;
    p.gamma0 = 29.878888107982533;
    p.relative_energy_spread = 1e-4;
    p.electron_count = 1000000000;
    const double b = budget_length(0.25, 0.5, 1.0);
    const auto sase = assess(p);
    p.seed_ratio = 0.1;
    const auto seeded = assess(p);
    const bool ok = std::abs(b - 5.90) <= 0.05 && std::abs(sase.budget_length_over_gain - 5.90) <= 0.05
                    && sase.verdict == Verdict::SaseInfeasible && !sase.sase_feasible && seeded.seeded_feasible
                    && seeded.verdict == Verdict::SeededFeasible;
    return {ok, fmt("alpha_N=%.4f: budget %.4f (5.90 +- 0.05); SASE N=1e9 saturation %.3f -> %s; seeded n0/N=0.1 "
                    "saturation %.3f -> %s",
                    sase.derived.quantum_parameter, sase.budget_length_over_gain, *sase.sase_saturation_over_gain,
                    verdict_name(sase.verdict), *seeded.seeded_saturation_over_gain, verdict_name(seeded.verdict))};
}

Outcome property_suites()
{
    std::mt19937_64 rng(31415);
    std::string d;

    // Elliptic identities.
    double elliptic = 0.0;
    std::uniform_real_distribution<double> ud(-20.0, 20.0);
    std::uniform_real_distribution<double> kd(0.0, 0.999);
    for (int i = 0; i < 5000; ++i) {
        const double k = kd(rng);
        const auto v = jacobi_elliptic(ud(rng), EllipticModulus::from_modulus(k));
        elliptic = std::max({elliptic, std::abs(v.sn * v.sn + v.cn * v.cn - 1),
                             std::abs(v.dn * v.dn + k * k * v.sn * v.sn - 1)});
    }
    double kq = 0.0;
    for (double k : {0.1, 0.5, 0.9, 0.99})
        kq = std::max(kq, std::abs(complete_elliptic_k(k) - oracle::elliptic_k_quadrature(k)));
    d += fmt("elliptic identity err %.1e (1e-12), K vs quadrature %.1e (1e-10); ", elliptic, kq);

    // Unitarity and energy.
    double unitarity = 0.0;
    double energy = 0.0;
    std::uniform_int_distribution<int> nd(1, 200);
    std::uniform_int_distribution<int> n0d(0, 100);
    std::uniform_real_distribution<double> dd(-0.5, 0.5);
    std::uniform_real_distribution<double> ad(0.05, 0.5);
    const auto l = uniform_lengths(15.0, 60);
    for (int t = 0; t < 20; ++t) {
        const SystemConfig c{static_cast<std::uint64_t>(nd(rng)), static_cast<std::uint64_t>(n0d(rng)), dd(rng),
                             ad(rng)};
        for (auto b : {Backend::Spectral, Backend::Chebyshev}) {
            const auto st = evolve(c, l, b);
            const auto e0 = conserved_charges(st.front(), c).energy;
            for (const auto& s : st) {
                unitarity = std::max(unitarity, std::abs(s.norm_squared() - 1));
                energy = std::max(energy, std::abs(conserved_charges(s, c).energy - e0) / (1 + std::abs(e0)));
            }
        }
    }
    d += fmt("unitarity err %.1e (1e-8), energy drift %.1e (1e-8); ", unitarity, energy);

    // Dense exponential oracle.
    double dense = 0.0;
    for (int n = 1; n <= 3; ++n)
        for (int n0 : {0, 2, 7}) {
            const SystemConfig c{static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(n0), dd(rng), ad(rng)};
            const auto g = uniform_lengths(12.0, 30);
            for (auto b : {Backend::Spectral, Backend::Chebyshev})
                for (const auto& s : evolve_statistics(c, g, b))
                    dense = std::max(dense, std::abs(s.mean - oracle::dense_mean_photons(n, n0, c.detuning,
                                                                                         c.quantum_parameter,
                                                                                         s.length_over_gain)));
        }
    d += fmt("dense expm err %.1e (1e-9); ", dense);

    // Cubic root residuals.
    double residual = 0.0;
    std::uniform_real_distribution<double> rd(-1.9, 1.9);
    for (double n : {1.0, 10.0, 1e3, 1e6, 1e9, 1e12})
        for (double f : {0.0, 0.01, 0.1}) {
            const SystemConfig c{static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(f * n), rd(rng) * 0.1,
                                 0.1};
            const auto r = roots(c);
            const auto p = oracle::motion_cubic(n, static_cast<double>(c.initial_photons), c.detuning, 0.1);
            for (double x : {r.n_plus, r.n_zero, -r.n_minus})
                residual = std::max(residual, std::abs(p(x)) / p.scale(r.n_plus));
        }
    d += fmt("cubic residual %.1e (1e-8); ", residual);

    // Mixture diagonality and linearity.
    const SystemConfig c{30, 0, 0.01, 0.1};
    const auto g = uniform_lengths(10.0, 30);
    EnsembleEngine engine(1);
    std::vector<std::complex<double>> psi;
    std::vector<std::complex<double>> phased;
    for (int n = 0; n < 20; ++n) {
        const double amp = std::sqrt(std::exp(n * std::log(3.0) - 3.0 - oracle::log_factorial(n)));
        psi.emplace_back(amp, 0.0);
        phased.push_back(std::polar(amp, 1.3 * n * n));
    }
    const auto a = engine.mixed_moments(distribution_from_amplitudes(0, psi), c, g);
    const auto b = engine.mixed_moments(distribution_from_amplitudes(0, phased), c, g);
    double diag = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        diag = std::max(diag, std::abs(a[i].mean - b[i].mean));
    const std::uint64_t ph[] = {1, 6};
    const double w[] = {0.35, 0.65};
    const auto mix = engine.mixed_moments(distribution_from_weights(ph, w), c, g);
    SystemConfig c1 = c;
    c1.initial_photons = 1;
    SystemConfig c6 = c;
    c6.initial_photons = 6;
    const auto s1 = evolve_statistics(c1, g);
    const auto s6 = evolve_statistics(c6, g);
    double lin = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        lin = std::max(lin, std::abs(mix[i].mean - (w[0] * s1[i].mean + w[1] * s6[i].mean)));
    d += fmt("mixture phase dependence %.1e (1e-12), linearity err %.1e (0)", diag, lin);

    const bool ok = elliptic <= 1e-12 && kq <= 1e-10 && unitarity <= 1e-8 && energy <= 1e-8 && dense <= 1e-9
                    && residual <= 1e-8 && diag <= 1e-12 && lin == 0.0;
    return {ok, d};
}

} // namespace

int main(int argc, char** argv)
{
    bool long_run = false;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--long") == 0)
            long_run = true;

    criterion("1", "single-electron Rabi oscillation", 1, rabi);
    criterion("2", "vacuum saturation plateau n_max/N", 60, vacuum_plateau);
    if (long_run)
        criterion("2-long", "vacuum plateau and variance dip at N = 1e4", 1800, vacuum_plateau_long);
    criterion("3", "saturation-length formulas", 1, saturation_formulas);
    criterion("4", "seeded analytic/numeric agreement", 60, seeded_agreement);
    criterion("5", "detuning sweep", 600, detuning_sweep);
    criterion("6", "thermal seed", 1800, thermal_seed);
    criterion("7", "Fano-factor structure", 300, fano_structure);
    criterion("8", "feasibility triple", 1, feasibility);
    criterion("9", "property suites", 120, property_suites);

    std::printf("%s: %d criterion(s) failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
