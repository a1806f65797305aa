// qfel command-line front end. Talks to the library only through qfel.h.
//
// Exit codes: 0 success, 2 configuration or usage error, 3 numeric failure,
// 4 sweep finished with failed points.

#include "qfel/qfel.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitPartial = 4;

struct Failure {
    qfel_status status;
    std::string message;
};

int exit_code(qfel_status s)
{
    switch (s) {
    case QFEL_OK:
        return 0;
    case QFEL_ERR_INVALID_ARGUMENT:
    case QFEL_ERR_DOMAIN:
    case QFEL_ERR_CONFIG:
        return kExitConfig;
    default:
        return kExitNumeric;
    }
}

void check(qfel_status s)
{
    if (s != QFEL_OK)
        throw Failure{s, qfel_last_error()};
}

[[noreturn]] void config_error(const std::string& message)
{
    throw Failure{QFEL_ERR_CONFIG, message};
}

std::string number(double v)
{
    if (std::isnan(v))
        return "";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text << std::flush;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        config_error("cannot open " + path + " for writing");
    out << text;
    if (!out)
        config_error("failed writing " + path);
}

std::string read_text(const std::string& path)
{
    if (path == "-")
        return {std::istreambuf_iterator<char>(std::cin), {}};
    std::ifstream in(path, std::ios::binary);
    if (!in)
        config_error("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), {}};
}

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::string str() const
    {
        std::string out;
        for (std::size_t i = 0; i < columns.size(); ++i)
            out += (i ? "," : "") + columns[i];
        out += '\n';
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                out += (i ? "," : "") + number(row[i]);
            out += '\n';
        }
        return out;
    }
};

struct ModelOptions {
    std::uint64_t electrons = 0;
    std::string seed = "fock";
    double n0 = 0.0;
    double detuning = 0.0;
    double alpha = 0.1;
};

struct GridOptions {
    double lmax = 15.0;
    std::size_t samples = 600;
};

struct RunOptions {
    double epsilon = 1e-3;
    std::string backend = "auto";
    std::size_t threads = 0;
};

struct OutputOptions {
    std::string output;
    std::string meta;
    std::string gnuplot;
};

void add_model(CLI::App* cmd, ModelOptions& m, bool need_electrons)
{
    auto* e = cmd->add_option("--electrons,-N", m.electrons, "number of electrons N")->check(CLI::PositiveNumber);
    if (need_electrons)
        e->required();
    cmd->add_option("--seed", m.seed, "seed field statistics")
        ->check(CLI::IsMember({"fock", "coherent", "thermal"}))
        ->capture_default_str();
    cmd->add_option("--n0", m.n0, "initial (mean) photon number")->check(CLI::NonNegativeNumber)->capture_default_str();
    cmd->add_option("--detuning", m.detuning, "detuning delta, |delta| < 1")->capture_default_str();
    cmd->add_option("--alpha", m.alpha, "quantum parameter alpha_N")->check(CLI::PositiveNumber)->capture_default_str();
}

void add_grid(CLI::App* cmd, GridOptions& g)
{
    cmd->add_option("--lmax", g.lmax, "largest L/L_g")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--samples", g.samples, "number of grid intervals")
        ->check(CLI::Range(std::size_t{2}, std::size_t{10000000}))
        ->capture_default_str();
}

void add_run(CLI::App* cmd, RunOptions& r)
{
    cmd->add_option("--epsilon", r.epsilon, "seed truncation tolerance")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--backend", r.backend, "propagator")
        ->check(CLI::IsMember({"auto", "spectral", "chebyshev"}))
        ->capture_default_str();
    cmd->add_option("--threads", r.threads, "worker threads (0: QFEL_THREADS or hardware)")->capture_default_str();
}

void add_output(CLI::App* cmd, OutputOptions& o)
{
    cmd->add_option("--output,-o", o.output, "output file (default: standard output)");
    cmd->add_option("--meta", o.meta, "write run provenance to this JSON file");
    cmd->add_option("--gnuplot", o.gnuplot, "write a gnuplot script for the output to this file");
}

qfel_seed_kind seed_kind(const std::string& s)
{
    if (s == "coherent")
        return QFEL_SEED_COHERENT;
    if (s == "thermal")
        return QFEL_SEED_THERMAL;
    return QFEL_SEED_FOCK;
}

qfel_backend backend_of(const std::string& s)
{
    if (s == "spectral")
        return QFEL_BACKEND_SPECTRAL;
    if (s == "chebyshev")
        return QFEL_BACKEND_CHEBYSHEV;
    return QFEL_BACKEND_AUTO;
}

std::uint64_t integral_photons(double n0)
{
    if (n0 != std::floor(n0) || n0 < 0 || n0 > 1e18)
        config_error("--n0 must be a non-negative integer here, got " + number(n0));
    return static_cast<std::uint64_t>(n0);
}

qfel_system_config system_config(const ModelOptions& m, std::uint64_t n0)
{
    qfel_system_config c{m.electrons, n0, m.detuning, m.alpha};
    char* warnings = nullptr;
    check(qfel_config_validate(&c, &warnings));
    std::unique_ptr<char, decltype(&qfel_string_free)> guard(warnings, qfel_string_free);
    if (warnings && *warnings)
        std::cerr << "warning: " << warnings << '\n';
    return c;
}

std::vector<double> grid(const GridOptions& g)
{
    std::vector<double> lengths(g.samples + 1);
    check(qfel_uniform_lengths(g.lmax, g.samples, lengths.data(), lengths.size()));
    return lengths;
}

class Ensemble {
public:
    explicit Ensemble(std::size_t threads) { check(qfel_ensemble_create(threads, &handle_)); }
    ~Ensemble() { qfel_ensemble_destroy(handle_); }
    Ensemble(const Ensemble&) = delete;
    Ensemble& operator=(const Ensemble&) = delete;

    std::size_t threads() const { return qfel_ensemble_threads(handle_); }

    std::vector<qfel_photon_statistics> moments(const ModelOptions& m, const qfel_system_config& tmpl,
                                                const std::vector<double>& lengths, const RunOptions& r)
    {
        std::vector<qfel_photon_statistics> out(lengths.size());
        check(qfel_ensemble_mixed_moments(handle_, seed_kind(m.seed), m.n0, &tmpl, lengths.data(), lengths.size(),
                                          r.epsilon, backend_of(r.backend), out.data()));
        return out;
    }

private:
    qfel_ensemble* handle_ = nullptr;
};

std::string utc_now()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_meta(const OutputOptions& o, const std::vector<std::string>& argv, nlohmann::json extra)
{
    if (o.meta.empty())
        return;
    extra["schema_version"] = 1;
    extra["tool"] = "qfel";
    extra["library_version"] = qfel_version();
    extra["command_line"] = argv;
    extra["created_utc"] = utc_now();
    write_text(o.meta, extra.dump(2) + "\n");
}

void write_gnuplot(const OutputOptions& o, const std::vector<std::string>& columns, const std::string& title)
{
    if (o.gnuplot.empty())
        return;
    const std::string data = o.output.empty() || o.output == "-" ? "data.csv" : o.output;
    std::string script = "# " + title + "\nset datafile separator ','\nset key autotitle columnhead\n"
                         "set xlabel '" + columns.front() + "'\n";
    script += "# columns:";
    for (std::size_t i = 0; i < columns.size(); ++i)
        script += " " + std::to_string(i + 1) + "=" + columns[i];
    script += "\nplot";
    for (std::size_t i = 1; i < columns.size(); ++i)
        script += std::string(i > 1 ? "," : "") + " '" + data + "' using 1:" + std::to_string(i + 1) + " with lines";
    script += "\n";
    write_text(o.gnuplot, script);
}

int run_evolve(const ModelOptions& m, const GridOptions& g, const RunOptions& r, const OutputOptions& o,
               const std::vector<std::string>& argv)
{
    if (m.seed == "fock")
        integral_photons(m.n0);
    const auto tmpl = system_config(m, 0);
    const auto lengths = grid(g);
    Ensemble ensemble(r.threads);
    const auto stats = ensemble.moments(m, tmpl, lengths, r);

    CsvTable table{{"L_over_Lg", "mean", "variance", "fano", "captured_mass"}, {}};
    for (const auto& s : stats)
        table.rows.push_back({s.length_over_gain, s.mean, s.variance, s.fano_defined ? s.fano : NAN, s.captured_mass});
    write_text(o.output, table.str());
    write_gnuplot(o, table.columns, "photon statistics");
    write_meta(o, argv, {{"command", "evolve"}, {"threads", ensemble.threads()}});
    return 0;
}

nlohmann::json optional_number(const std::optional<double>& v)
{
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

int run_analytic(const ModelOptions& m, const GridOptions& g, const OutputOptions& o, const std::string& sidecar,
                 const std::vector<std::string>& argv)
{
    if (m.seed != "fock")
        config_error("the closed-form curve describes Fock seeds only");
    const auto cfg = system_config(m, integral_photons(m.n0));
    const auto lengths = grid(g);

    CsvTable table{{"L_over_Lg", "mean_analytic"}, {}};
    for (double l : lengths) {
        double n = 0.0;
        check(qfel_mean_photon_analytic(l, &cfg, &n));
        table.rows.push_back({l, n});
    }

    qfel_cubic_roots roots{};
    check(qfel_roots(&cfg, &roots));
    nlohmann::json side = {{"schema_version", 1}, {"n_plus", roots.n_plus}, {"n_minus", roots.n_minus},
                           {"gain", roots.gain != 0}};
    std::optional<double> modulus;
    std::optional<double> exact;
    std::optional<double> asymptotic;
    if (roots.gain) {
        qfel_analytic_curve p{};
        check(qfel_curve_params(&cfg, &p));
        modulus = p.modulus;
        double v = 0.0;
        check(qfel_saturation_length(&cfg, QFEL_SATURATION_EXACT, &v));
        exact = v;
        if (qfel_saturation_length(&cfg, QFEL_SATURATION_ASYMPTOTIC, &v) == QFEL_OK)
            asymptotic = v;
    }
    side["modulus"] = optional_number(modulus);
    side["L_max_exact"] = optional_number(exact);
    side["L_max_asymptotic"] = optional_number(asymptotic);
    side["asymptotic_reliable"] = m.electrons >= 100;

    write_text(o.output, table.str());
    std::string side_path = sidecar;
    if (side_path.empty() && !o.output.empty() && o.output != "-")
        side_path = o.output + ".json";
    if (!side_path.empty())
        write_text(side_path, side.dump(2) + "\n");
    write_gnuplot(o, table.columns, "closed-form mean photon number");
    write_meta(o, argv, {{"command", "analytic"}});
    return 0;
}

struct SweepOptions {
    std::string vary;
    std::vector<double> values;
    std::optional<double> from;
    std::optional<double> to;
    std::size_t count = 0;
    bool log = false;
    bool alpha_units = false;
};

std::vector<double> sweep_values(const SweepOptions& s)
{
    std::vector<double> v = s.values;
    if (s.from || s.to || s.count) {
        if (!v.empty())
            config_error("give either --values or --from/--to/--count, not both");
        if (!s.from || !s.to || s.count == 0)
            config_error("a range needs --from, --to and a positive --count");
        const double a = *s.from;
        const double b = *s.to;
        if (s.log && (a <= 0 || b <= 0))
            config_error("a logarithmic range needs positive end points");
        for (std::size_t i = 0; i < s.count; ++i) {
            const double t = s.count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(s.count - 1);
            v.push_back(s.log ? std::exp(std::log(a) + t * (std::log(b) - std::log(a))) : a + t * (b - a));
        }
    }
    if (v.empty())
        config_error("sweep needs at least one value");
    for (double x : v)
        if (!std::isfinite(x))
            config_error("sweep values must be finite");
    return v;
}

int run_sweep(ModelOptions m, const GridOptions& g, const RunOptions& r, const OutputOptions& o,
              const SweepOptions& s, const std::vector<std::string>& argv)
{
    const auto values = sweep_values(s);
    if (s.vary != "electron_count" && m.electrons == 0)
        config_error("--electrons is required unless electron_count is swept");
    const double seed_ratio = m.electrons > 0 ? m.n0 / static_cast<double>(m.electrons) : 0.0;
    const auto lengths = grid(g);
    Ensemble ensemble(r.threads);

    CsvTable table{{"value", "n_max_numeric", "L_max_numeric", "n_max_analytic", "L_max_analytic"}, {}};
    bool any_failed = false;
    for (double value : values) {
        std::vector<double> row{value, NAN, NAN, NAN, NAN};
        ModelOptions point = m;
        try {
            if (s.vary == "electron_count") {
                if (value < 1 || value != std::floor(value))
                    config_error("electron_count values must be positive integers");
                point.electrons = static_cast<std::uint64_t>(value);
                // Keep the seed ratio fixed while N changes.
                if (m.electrons > 0)
                    point.n0 = seed_ratio * value;
            } else if (s.vary == "detuning") {
                point.detuning = s.alpha_units ? value * m.alpha : value;
            } else {
                if (value < 0)
                    config_error("seed_ratio values must be non-negative");
                point.n0 = value * static_cast<double>(point.electrons);
            }
            if (point.seed == "fock")
                point.n0 = std::round(point.n0);

            const auto cfg = system_config(point, static_cast<std::uint64_t>(std::llround(point.n0)));
            qfel_cubic_roots roots{};
            check(qfel_roots(&cfg, &roots));
            row[3] = roots.n_plus;
            double lmax = 0.0;
            check(qfel_saturation_length(&cfg, QFEL_SATURATION_EXACT, &lmax));
            row[4] = lmax;

            const auto stats = ensemble.moments(point, cfg, lengths, r);
            std::vector<double> mean;
            mean.reserve(stats.size());
            for (const auto& st : stats)
                mean.push_back(st.mean);
            qfel_peak peak{};
            check(qfel_find_first_maximum(lengths.data(), mean.data(), mean.size(), &peak));
            row[1] = peak.value;
            row[2] = peak.position;
        } catch (const Failure& f) {
            any_failed = true;
            std::cerr << "error: " << s.vary << "=" << number(value) << ": " << f.message << '\n';
        }
        table.rows.push_back(std::move(row));
    }

    write_text(o.output, table.str());
    write_gnuplot(o, table.columns, "sweep over " + s.vary);
    write_meta(o, argv, {{"command", "sweep"}, {"threads", ensemble.threads()}});
    return any_failed ? kExitPartial : 0;
}

int run_design(const std::string& input, const OutputOptions& o, const std::vector<std::string>& argv)
{
    const auto text = read_text(input);
    char* report = nullptr;
    check(qfel_design_json(text.c_str(), &report));
    std::unique_ptr<char, decltype(&qfel_string_free)> guard(report, qfel_string_free);
    write_text(o.output, report);
    write_meta(o, argv, {{"command", "design"}});
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    const std::vector<std::string> args(argv, argv + argc);

    CLI::App app{"Quantum free-electron laser dynamics, closed-form saturation and lab-frame feasibility"};
    app.set_version_flag("--version", std::string(qfel_version()));
    app.require_subcommand(1);

    ModelOptions model;
    GridOptions grid_options;
    RunOptions run;
    OutputOptions output;
    SweepOptions sweep;
    std::string sidecar;
    std::string design_input;

    auto* evolve = app.add_subcommand("evolve", "exact photon statistics versus L/L_g (CSV)");
    add_model(evolve, model, true);
    add_grid(evolve, grid_options);
    add_run(evolve, run);
    add_output(evolve, output);

    auto* analytic = app.add_subcommand("analytic", "closed-form mean photon number versus L/L_g (CSV + JSON)");
    add_model(analytic, model, true);
    add_grid(analytic, grid_options);
    add_output(analytic, output);
    analytic->add_option("--sidecar", sidecar, "JSON file for roots and saturation lengths (default: OUTPUT.json)");

    auto* sweep_cmd = app.add_subcommand("sweep", "first maximum and its position over a parameter range (CSV)");
    add_model(sweep_cmd, model, false);
    add_grid(sweep_cmd, grid_options);
    add_run(sweep_cmd, run);
    add_output(sweep_cmd, output);
    sweep_cmd->add_option("--vary", sweep.vary, "swept variable")
        ->required()
        ->check(CLI::IsMember({"electron_count", "detuning", "seed_ratio"}));
    sweep_cmd->add_option("--values", sweep.values, "explicit values, comma separated")->delimiter(',');
    sweep_cmd->add_option("--from", sweep.from, "range start");
    sweep_cmd->add_option("--to", sweep.to, "range end (inclusive)");
    sweep_cmd->add_option("--count", sweep.count, "number of range points");
    sweep_cmd->add_flag("--log", sweep.log, "logarithmic spacing");
    sweep_cmd->add_flag("--alpha-units", sweep.alpha_units, "detuning values are given in units of alpha_N");

    auto* design = app.add_subcommand("design", "feasibility report for laboratory parameters (JSON in, JSON out)");
    design->add_option("input", design_input, "JSON parameter file, - for standard input")->required();
    design->add_option("--output,-o", output.output, "report file (default: standard output)");
    design->add_option("--meta", output.meta, "write run provenance to this JSON file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*evolve)
            return run_evolve(model, grid_options, run, output, args);
        if (*analytic)
            return run_analytic(model, grid_options, output, sidecar, args);
        if (*sweep_cmd)
            return run_sweep(model, grid_options, run, output, sweep, args);
        return run_design(design_input, output, args);
    } catch (const Failure& f) {
        std::cerr << "error: " << qfel_status_string(f.status) << ": " << f.message << '\n';
        return exit_code(f.status);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
}
