#include "lbeq/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "lbeq/checks.hpp"
#include "lbeq/fourier.hpp"
#include "lbeq/scheme_parse.hpp"
#include "lbeq/sim.hpp"

namespace lbeq {

namespace {

SchemeSpec load_scheme(const std::string& source) {
    for (const std::string& name : builtin_scheme_names())
        if (name == source) return builtin_scheme(source);
    if (std::filesystem::exists(source)) return parse_scheme_file(source);
    std::ostringstream os;
    os << "scheme '" << source << "' is neither a built-in (";
    bool first = true;
    for (const std::string& name : builtin_scheme_names()) {
        if (!first) os << ", ";
        os << name;
        first = false;
    }
    os << ") nor an existing file";
    throw std::invalid_argument(os.str());
}

void print_warnings(const SchemeSpec& spec, std::ostream& err) {
    for (const Diagnostic& d : validate(spec))
        if (d.severity == Diagnostic::Severity::warning)
            err << "warning: " << d.message << "\n";
}

// Stable parameter values for the shipped schemes, so the numeric commands
// work out of the box; --bind overrides entry by entry.  File schemes get no
// defaults.
std::vector<std::pair<std::string, Rat>> default_bindings(const std::string& source) {
    auto r = [](long n, long d) { return Rat(Int(n), Int(d)); };
    if (source == "d1q3")
        return {{"lambda", Rat(1)},
                {"u0", r(1, 5)},
                {"ce", r(1, 3)},
                {"sigma_j", r(3, 5)},
                {"sigma_e", r(9, 20)}};
    if (source == "d2q9-isothermal" || source == "d2q9-acoustics")
        return {{"lambda", Rat(1)},
                {"sigma_e", r(1, 2)},
                {"sigma_x", r(1, 2)},
                {"sigma_q", r(2, 5)},
                {"sigma_h", r(11, 20)}};
    return {};
}

std::map<std::string, double> numeric_bindings(const RunConfig& config) {
    std::map<std::string, double> out;
    for (const auto& [name, value] : default_bindings(config.scheme))
        out[name] = value.convert_to<double>();
    for (const auto& [name, value] : config.bindings)
        out[name] = value.convert_to<double>();
    return out;
}

// Routes the primary artifact to the --out path when one was given.
void emit(const RunConfig& config, const std::string& text, std::ostream& out) {
    if (config.out.empty()) {
        out << text;
        return;
    }
    std::ofstream os(config.out, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file '" + config.out + "'");
    os << text;
    if (!os.flush())
        throw std::runtime_error("short write to output file '" + config.out + "'");
}

int run_derive(const RunConfig& config, std::ostream& out, std::ostream& err) {
    if (!config.bindings.empty())
        throw std::invalid_argument(
            "derive output is symbolic; --bind applies to symbol-check and simulate");
    SchemeSpec spec = load_scheme(config.scheme);
    print_warnings(spec, err);
    Expansion e = expand(compile(spec), config.engine, config.order);
    emit(config, render_report(e, config.format), out);
    return 0;
}

int run_symbol_check(const RunConfig& config, std::ostream& out, std::ostream& err) {
    SchemeSpec spec = load_scheme(config.scheme);
    if (!config.linearize_at.empty()) {
        spec = linearize(spec, config.linearize_at);
    } else if (!spec.linear_equilibrium) {
        throw std::invalid_argument(
            "symbol-check needs a linear equilibrium; pass --linearize w0... (one value "
            "per conserved moment) to analyze the tangent scheme at that state");
    }
    print_warnings(spec, err);
    MomentCompilation c = compile(spec);

    std::vector<double> k = config.wavevector;
    if (k.empty())
        k = spec.d == 1 ? std::vector<double>{0.9} : std::vector<double>{0.7, 0.31};
    if ((int)k.size() != spec.d) {
        std::ostringstream os;
        os << "--k needs " << spec.d << " component" << (spec.d == 1 ? "" : "s")
           << " for this scheme, got " << k.size();
        throw std::invalid_argument(os.str());
    }

    std::map<std::string, double> bindings = numeric_bindings(config);
    std::vector<OrderCheck> checks;
    for (int m = 1; m <= config.order; ++m)
        checks.push_back(order_check(c, m, k, bindings, 1.0));

    std::ostringstream os;
    os << order_check_csv(checks);
    os << std::fixed << std::setprecision(3);
    for (const OrderCheck& oc : checks)
        os << "# truncation " << oc.truncation << ": slope " << oc.slope << "\n";
    emit(config, os.str(), out);
    return 0;
}

void append_series(std::ostringstream& os, const SchemeSpec& spec,
                   const BenchmarkResult& r) {
    os << "\nstep,time,amplitude";
    for (int i = 0; i < spec.N; ++i) os << ",total_" << spec.moment_names[i];
    os << "\n" << std::scientific << std::setprecision(12);
    for (const SeriesSample& s : r.series) {
        os << s.step << "," << s.time << "," << s.amplitude;
        for (double t : s.totals) os << "," << t;
        os << "\n";
    }
}

int run_simulate(const RunConfig& config, std::ostream& out, std::ostream& err) {
    SchemeSpec spec = load_scheme(config.scheme);
    print_warnings(spec, err);
    std::map<std::string, double> bindings = numeric_bindings(config);

    LatticeState end;
    BenchmarkResult r;
    if (spec.d == 2 && spec.N == 3) {
        int res = config.resolution ? config.resolution : 64;
        double amp = config.amplitude ? config.amplitude : 1e-3;
        r = shear_wave_benchmark(spec, res, amp, bindings, &end);
    } else if (spec.d == 1 && spec.N == 1) {
        if (config.amplitude != 0)
            throw std::invalid_argument("--amplitude applies to the shear benchmark only");
        int res = config.resolution ? config.resolution : 1024;
        r = scalar_decay_benchmark(spec, res, bindings, &end);
    } else {
        throw std::invalid_argument(
            "no benchmark fits this scheme shape; need d=2 with 3 conserved moments "
            "(shear wave) or d=1 with 1 (scalar decay)");
    }
    if (!config.snapshot.empty()) save_snapshot(end, config.snapshot);

    std::ostringstream os;
    os << "benchmark: " << r.quantity << " of " << spec.name << " (" << r.notes << ")\n";
    os << "resolution:";
    for (int n : r.resolution) os << " " << n;
    os << "\n" << std::scientific << std::setprecision(6);
    os << "measured: " << r.measured << "\n";
    os << "predicted: " << r.predicted << "\n";
    os << "relative error: " << r.relative_error << "\n";
    os << "r-squared: " << std::fixed << std::setprecision(6) << r.r_squared << "\n";
    os << "fit samples: " << r.samples << "\n";
    os << "steps: " << r.steps << "\n";
    if (r.phase_error_order2 != 0 || r.phase_error_order3 != 0)
        os << std::scientific << std::setprecision(6)
           << "phase error, series cut after dt^2: " << r.phase_error_order2 << "\n"
           << "phase error, series cut after dt^3: " << r.phase_error_order3 << "\n";
    append_series(os, spec, r);
    emit(config, os.str(), out);
    return 0;
}

int run_validate(const RunConfig& config, std::ostream& out, std::ostream&) {
    std::vector<CheckResult> results = run_reference_checks();
    std::ostringstream os;
    int failed = 0;
    for (const CheckResult& r : results) {
        os << (r.pass ? "PASS " : "FAIL ") << r.name << "\n";
        if (!r.pass) {
            os << "  " << r.detail << "\n";
            ++failed;
        }
    }
    os << (results.size() - failed) << "/" << results.size() << " checks passed\n";
    emit(config, os.str(), out);
    return failed == 0 ? 0 : 1;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        if (config.format != ReportFormat::text && config.command != Command::derive)
            throw std::invalid_argument("--format applies to derive only");
        switch (config.command) {
            case Command::derive: return run_derive(config, out, err);
            case Command::symbol_check: return run_symbol_check(config, out, err);
            case Command::simulate: return run_simulate(config, out, err);
            case Command::validate: return run_validate(config, out, err);
        }
        throw std::logic_error("unreachable");
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

int cli_main(int argc, char** argv) {
    CLI::App app{"equivalent-equation toolkit for lattice Boltzmann schemes", "lbeq"};
    app.require_subcommand(1);

    RunConfig config;
    std::string engine = "taylor";
    std::string format = "text";
    std::vector<std::string> binds;
    std::vector<std::string> linearize_at;

    auto scheme_opt = [&](CLI::App* sub) {
        sub->add_option("--scheme", config.scheme,
                        "built-in scheme name or scheme file path")
            ->required();
    };
    auto bind_opt = [&](CLI::App* sub) {
        sub->add_option("--bind", binds,
                        "parameter value as name=rational, e.g. sigma_x=1/2; "
                        "overrides the built-in defaults");
    };
    auto out_opt = [&](CLI::App* sub) {
        sub->add_option("--out", config.out, "write the output to this file");
    };

    CLI::App* derive =
        app.add_subcommand("derive", "print the equivalent-equation report");
    derive->callback([&] { config.command = Command::derive; });
    scheme_opt(derive);
    derive->add_option("--engine", engine, "expansion engine: ce, taylor or linear")
        ->capture_default_str();
    derive->add_option("--order", config.order, "highest dt order kept, 1..4")
        ->check(CLI::Range(1, 4))
        ->capture_default_str();
    derive->add_option("--format", format, "report format: text, latex or tree")
        ->capture_default_str();
    out_opt(derive);

    CLI::App* symbol = app.add_subcommand(
        "symbol-check", "compare the truncated series against the exact symbol");
    symbol->callback([&] { config.command = Command::symbol_check; });
    scheme_opt(symbol);
    symbol->add_option("--order", config.order, "highest truncation checked, 1..4")
        ->check(CLI::Range(1, 4))
        ->capture_default_str();
    bind_opt(symbol);
    symbol->add_option("--k", config.wavevector,
                       "wavevector components (default 0.9 in 1d, 0.7 0.31 in 2d)");
    symbol->add_option("--linearize", linearize_at,
                       "conserved state at which to linearize, one rational per moment");
    out_opt(symbol);

    CLI::App* simulate =
        app.add_subcommand("simulate", "run the decay benchmark fitting this scheme");
    simulate->callback([&] { config.command = Command::simulate; });
    scheme_opt(simulate);
    bind_opt(simulate);
    simulate->add_option("--resolution", config.resolution,
                         "grid extent per axis (default 64 in 2d, 1024 in 1d)")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--amplitude", config.amplitude,
                         "shear wave amplitude (default 1e-3)")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--snapshot", config.snapshot,
                         "write the final populations to this file");
    out_opt(simulate);

    CLI::App* validate_cmd = app.add_subcommand(
        "validate", "run the built-in reference checklist and report pass/fail");
    validate_cmd->callback([&] { config.command = Command::validate; });
    out_opt(validate_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        config.engine = parse_engine(engine);
        config.format = parse_format(format);
        for (const std::string& b : binds) {
            auto eq = b.find('=');
            if (eq == std::string::npos || eq == 0)
                throw std::invalid_argument("--bind expects name=value, got '" + b + "'");
            config.bindings.emplace_back(b.substr(0, eq),
                                         parse_rational(b.substr(eq + 1)));
        }
        for (const std::string& w : linearize_at)
            config.linearize_at.push_back(parse_rational(w));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    return run(config, std::cout, std::cerr);
}

}  // namespace lbeq
