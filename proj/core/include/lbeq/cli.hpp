// Command line front end.  Exposed as a library entry point so the test
// suite can drive the exact code path the installed binary runs.
#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "lbeq/expand.hpp"
#include "lbeq/report.hpp"

namespace lbeq {

enum class Command { derive, symbol_check, simulate, validate };

// One parsed invocation.  The zero values of resolution and amplitude mean
// "use the benchmark default", an empty wavevector picks a fixed off-axis
// default for the scheme's dimension.
struct RunConfig {
    Command command = Command::derive;
    std::string scheme;  // built-in name, or a path to a scheme file
    Engine engine = Engine::taylor;
    int order = 2;
    std::vector<std::pair<std::string, Rat>> bindings;  // --bind name=value
    ReportFormat format = ReportFormat::text;
    std::string out;  // primary artifact path; empty writes to the stream

    std::vector<double> wavevector;  // symbol-check sample point
    std::vector<Rat> linearize_at;   // symbol-check on a nonlinear scheme
    int resolution = 0;              // simulate grid extent
    double amplitude = 0;            // simulate, shear benchmark only
    std::string snapshot;            // simulate: write final populations here
};

// Executes one command.  The primary artifact goes to `out` (or to the
// config's output path), warnings and error messages to `err`.  Returns the
// process exit code: 0 success, 1 a requested check failed, 2 input error.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Flag parsing wrapped around run().  Exit codes as above; --help prints to
// stdout and returns 0.
int cli_main(int argc, char** argv);

}  // namespace lbeq
