#include "qfel/errors.hpp"
#include "qfel/lab_frame.hpp"
#include "qfel/lab_json.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace qfel;

namespace {

// alpha_N = 0.25 design whose budget length saturates both R_sp L = 1/2
// and k_p L = 1.
LabParams reference_design()
{
    LabParams p;
    p.wiggler_wavelength = 1e-6;
    p.wiggler_parameter = 0.1;
    p.electron_density = 7.038166188135572e22;
    p.gamma0 = 29.878888107982533;
    p.relative_energy_spread = 1e-4;
    p.electron_count = 1000000000;
    return p;
}

} // namespace

TEST_CASE("fine-structure constant")
{
    CHECK(std::abs(PhysicalConstants{}.fine_structure() - 7.2974e-3) < 1e-6);
}

TEST_CASE("derived quantities")
{
    auto p = reference_design();
    const auto d = derive(p);
    CHECK(d.quantum_parameter == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(d.rho_bar == doctest::Approx(std::pow(0.25, 2.0 / 3.0)));
    CHECK(d.spread_bound_strict / d.spread_bound_loose == doctest::Approx(2 * d.quantum_parameter));
    CHECK(d.longitudinal_gamma == doctest::Approx(p.gamma0 / std::sqrt(1.01)));
    p.wiggler_parameter = 0.0;
    CHECK(derive(p).longitudinal_gamma == p.gamma0);
}

TEST_CASE("gain length and quantum parameter scaling")
{
    const auto base = reference_design();
    const auto d0 = derive(base);
    auto scaled = [&](auto mutate) {
        auto p = base;
        mutate(p);
        return derive(p);
    };
    const auto g = scaled([](LabParams& p) { p.gamma0 *= 2; });
    CHECK(g.quantum_gain_length / d0.quantum_gain_length == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(g.quantum_parameter / d0.quantum_parameter == doctest::Approx(1.0 / 8).epsilon(1e-12));
    const auto w = scaled([](LabParams& p) { p.wiggler_wavelength *= 2; });
    CHECK(w.quantum_gain_length / d0.quantum_gain_length == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(w.quantum_parameter / d0.quantum_parameter == doctest::Approx(std::pow(2.0, 2.5)).epsilon(1e-12));
    const auto n = scaled([](LabParams& p) { p.electron_density *= 2; });
    CHECK(n.quantum_gain_length / d0.quantum_gain_length == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(n.quantum_parameter / d0.quantum_parameter == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(n.classical_gain_length / d0.classical_gain_length == doctest::Approx(std::cbrt(0.5)).epsilon(1e-12));
}

TEST_CASE("budget length")
{
    CHECK(std::abs(budget_length(0.25, 0.5, 1.0) - 5.90) <= 0.05);
    const double b = budget_length(0.1, 0.2, 0.6);
    CHECK(budget_length(0.1, 0.4, 0.6) / b == doctest::Approx(std::cbrt(2.0)).epsilon(1e-14));
    CHECK(budget_length(0.8, 0.2, 0.6) / b == doctest::Approx(2.0).epsilon(1e-14));
    CHECK_THROWS_AS(budget_length(0.25, 0.6, 1.0), DomainError);
    CHECK_THROWS_AS(budget_length(0.25, 0.5, 1.1), DomainError);
    CHECK_THROWS_AS(budget_length(0.25, 0.0, 1.0), DomainError);
}

TEST_CASE("budget length is consistent with the lab rates")
{
    // (L/L_g)^3 = 12 (alpha_N/alpha_f) (R_sp L) (k_p L)^2 holds for any L.
    const auto d = derive(reference_design());
    for (double l : {1e-4, 3e-3, 0.1}) {
        const double lhs = std::pow(l / d.quantum_gain_length, 3);
        const double rhs = 12 * d.quantum_parameter / PhysicalConstants{}.fine_structure() * d.spontaneous_rate * l
                           * std::pow(d.plasma_wavenumber * l, 2);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("footnote coupling reproduces the gain length")
{
    // With the co-moving wavenumber k fixed by L_g = c / (2 g sqrt N), the
    // coupling formula must return the same L_g for any k that satisfies it.
    const auto p = reference_design();
    for (double k : {1e5, 3.3e6, 7e7}) {
        const double g = coupling_strength(p, k);
        const double lg = gain_length_from_coupling(g);
        const double expected = PhysicalConstants{}.speed_of_light
                                / (2 * p.wiggler_parameter * std::numbers::pi * PhysicalConstants{}.speed_of_light)
                                * std::sqrt(PhysicalConstants{}.compton_wavelength * k
                                            / (2 * PhysicalConstants{}.classical_electron_radius * p.electron_density));
        CHECK(lg == doctest::Approx(expected).epsilon(1e-12));
        CHECK(coupling_strength(p, 4 * k) == doctest::Approx(g / 2).epsilon(1e-12));
    }
    CHECK_THROWS_AS(coupling_strength(p, 0.0), DomainError);
}

TEST_CASE("feasibility verdicts")
{
    auto p = reference_design();
    const auto sase = assess(p);
    CHECK(std::abs(sase.budget_length_over_gain - 5.90) <= 0.05);
    CHECK(std::abs(*sase.sase_saturation_over_gain - 23.5) <= 0.1);
    CHECK_FALSE(sase.sase_feasible);
    CHECK(sase.verdict == Verdict::SaseInfeasible);
    CHECK(sase.space_charge.satisfied);
    CHECK(sase.spontaneous.satisfied);
    CHECK(sase.quantum_status == QuantumRegime::Pass);

    p.seed_ratio = 0.1;
    const auto seeded = assess(p);
    CHECK(std::abs(*seeded.seeded_saturation_over_gain - 5.08) <= 0.05);
    CHECK(seeded.seeded_feasible);
    CHECK(seeded.verdict == Verdict::SeededFeasible);

    p.seed_ratio = 1e-4;
    CHECK(assess(p).verdict == Verdict::NeitherFeasible);

    p.electron_count = 20;
    p.seed_ratio.reset();
    const auto small = assess(p);
    CHECK(small.verdict == Verdict::BothFeasible);
    CHECK_FALSE(small.warnings.empty());
}

TEST_CASE("seeded verdict is monotone in the seed ratio")
{
    auto p = reference_design();
    bool feasible = false;
    for (double r = 1e-4; r < 10; r *= 1.3) {
        p.seed_ratio = r;
        const auto v = assess(p);
        if (feasible)
            CHECK(v.seeded_feasible);
        feasible = feasible || v.seeded_feasible;
    }
    CHECK(feasible);
}

TEST_CASE("constraint flags are independent of lengths")
{
    auto p = reference_design();
    p.seed_ratio = 0.1;
    p.relative_energy_spread = 2e-4;
    const auto r = assess(p);
    CHECK_FALSE(r.spread_strict.satisfied);
    CHECK(r.spread_strict.margin < 0);
    CHECK(r.spread_loose.satisfied);
    CHECK(r.verdict == Verdict::SeededFeasible);

    p.interaction_length = 1.0;
    const auto longer = assess(p);
    CHECK_FALSE(longer.space_charge.satisfied);
    CHECK_FALSE(longer.spontaneous.satisfied);
}

TEST_CASE("quantum regime bands")
{
    auto p = reference_design();
    p.gamma0 *= std::cbrt(0.25 / 0.5); // alpha_N = 0.5
    auto r = assess(p);
    CHECK(r.quantum_status == QuantumRegime::Warn);
    CHECK_FALSE(r.warnings.empty());
    p.gamma0 *= std::cbrt(0.5 / 2.0); // alpha_N = 2
    r = assess(p);
    CHECK(r.quantum_status == QuantumRegime::Fail);
    CHECK_FALSE(r.quantum_regime.satisfied);
    Assumptions a;
    a.quantum_pass_threshold = 3;
    a.quantum_fail_threshold = 4;
    CHECK(assess(p, a).quantum_status == QuantumRegime::Pass);
}

TEST_CASE("missing or invalid inputs")
{
    auto p = reference_design();
    p.electron_count.reset();
    CHECK_THROWS_AS(assess(p), ConfigError);
    p.seed_ratio = 0.0;
    CHECK_THROWS_AS(assess(p), ConfigError);
    p = reference_design();
    p.gamma0 = 0.5;
    p.electron_density = -1;
    try {
        derive(p);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string m = e.what();
        CHECK(m.find("gamma0") != std::string::npos);
        CHECK(m.find("electron_density") != std::string::npos);
    }
}

TEST_CASE("design input schema")
{
    const auto in = design_input_from_json(std::string_view(R"({
        "schema_version": 1, "wiggler_wavelength": 1e-6, "wiggler_parameter": 0.1,
        "electron_density": 7e22, "gamma0": 30, "relative_energy_spread": 1e-4,
        "electron_count": 1e9, "seed_ratio": 0.1, "assumptions": {"r_sp_l": 0.25}})"));
    CHECK(in.params.electron_count == 1000000000u);
    CHECK(in.assumptions.r_sp_l == 0.25);
    CHECK(in.assumptions.k_p_l == 1.0);

    try {
        design_input_from_json(std::string_view(R"({"gamma-0": 30, "wiggler_wavelength": "x"})"));
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string m = e.what();
        CHECK(m.find("gamma-0") != std::string::npos);
        CHECK(m.find("gamma0") != std::string::npos);
        CHECK(m.find("wiggler_wavelength") != std::string::npos);
    }
    CHECK_THROWS_AS(design_input_from_json(std::string_view("{")), ConfigError);
    CHECK_THROWS_AS(design_input_from_json(std::string_view("[1]")), ConfigError);
    CHECK_THROWS_AS(design_input_from_json(std::string_view(R"({"schema_version": 2})")), ConfigError);
}

TEST_CASE("report serialisation")
{
    auto p = reference_design();
    p.seed_ratio = 0.1;
    const auto j = to_json(assess(p));
    CHECK(j["schema_version"] == 1);
    CHECK(j["verdict"] == "SeededFeasible");
    for (const char* k : {"quantum_regime", "spread_loose", "spread_strict", "space_charge", "spontaneous"}) {
        CHECK(j["constraints"][k].contains("margin"));
        CHECK(j["constraints"][k].contains("satisfied"));
    }
    CHECK(j["derived"]["quantum_parameter"].get<double>() == doctest::Approx(0.25));
}
