// Direct numerical runs of a scheme on a periodic grid: relax the moments
// toward equilibrium, then shift every population along its lattice link.
// Exact unit-CFL transport keeps the conserved totals permutation-invariant,
// so measured transport coefficients can be compared against the expansion
// without boundary or interpolation artifacts.
#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "lbeq/scheme.hpp"

namespace lbeq {

// One equilibrium moment flattened for pointwise evaluation: a ratio of
// polynomial term lists over the conserved moments.
struct CompiledEquilibrium {
    struct Term {
        double c = 0;
        std::vector<std::pair<int, int>> powers;  // (conserved index, exponent)
    };
    std::vector<Term> num, den;  // empty den means 1

    double eval(const double* w) const;
};

// Scheme frozen to plain numbers for one parameter binding: moment matrix
// and inverse, relaxation rates, equilibria, and integer transport links.
struct NumericScheme {
    SchemeSpec spec;
    int d = 1, q = 1, n = 1;
    std::vector<double> moment, inverse;           // q x q, row major
    std::vector<double> rate;                      // q - n, in (0, 2]
    std::vector<CompiledEquilibrium> equilibrium;  // q - n
    std::vector<std::vector<int>> shift;           // q links, one cell each axis

    // q x (q-n) collision update: inverse columns of the nonconserved
    // moments, corrected so the conserved rows of moment*fold vanish to well
    // below rounding.  Applied to the equilibrium defect each step.
    std::vector<double> fold;
};

// Evaluates every symbolic ingredient at the bindings; throws
// std::invalid_argument when a parameter is missing or a rate leaves (0, 2].
NumericScheme compile_numeric(const SchemeSpec& spec,
                              const std::map<std::string, double>& bindings);

// Populations on a periodic grid, one plane per stencil velocity, plus the
// scratch planes the update sweeps through.
struct LatticeState {
    NumericScheme scheme;
    std::vector<int> shape;  // extents, scheme.d entries
    long nodes = 0;
    std::vector<std::vector<double>> f;  // q planes of `nodes` values
    long step_index = 0;

    std::vector<std::vector<double>> moments;  // scratch, q planes
    std::vector<std::vector<double>> post;     // scratch, q planes
};

LatticeState make_state(const NumericScheme& scheme, const std::vector<int>& shape);

// Overwrite the populations with the local equilibrium of the conserved
// moments produced by `w` (receives node coordinates, fills n values).
void set_equilibrium(LatticeState& state,
                     const std::function<void(const int*, double*)>& w);

// One relax-and-shift update.  Conserved moments are untouched by
// construction: only the equilibrium defect is folded back into the
// populations.  Throws std::runtime_error naming the step index when a
// non-finite value appears.
void step(LatticeState& state);
void run(LatticeState& state, long steps);

// Compensated grid totals of the n conserved moments.
std::vector<double> conserved_totals(const LatticeState& state);

// One sampled instant of a benchmark run: the tracked modal amplitude plus
// the grid totals of the conserved moments.
struct SeriesSample {
    long step = 0;
    double time = 0;
    double amplitude = 0;
    std::vector<double> totals;
};

// Measurement of a decaying mode against the equivalent-equation prediction.
struct BenchmarkResult {
    std::string quantity;
    double measured = 0;
    double predicted = 0;
    double relative_error = 0;
    std::vector<int> resolution;
    double r_squared = 0;  // log-amplitude fit quality
    int samples = 0;       // points inside the fit window
    long steps = 0;        // total updates across the runs
    double phase_error_order2 = 0;  // scalar benchmark only
    double phase_error_order3 = 0;
    std::string notes;
    std::vector<SeriesSample> series;  // decay-phase samples, in step order
};

// Transverse shear wave v = A sin(2 pi x) on a resolution^2 grid over the
// unit square: fits the exponential decay of the sine mode and compares the
// kinematic viscosity against the second-order expansion coefficient.
// Needs a two-dimensional scheme conserving (density, both momenta) and an
// amplitude within the low-Mach bound 0.05.
// When `final_state` is given it receives the populations at the end of the
// decay run.
BenchmarkResult shear_wave_benchmark(const SchemeSpec& spec, int resolution,
                                     double amplitude,
                                     const std::map<std::string, double>& bindings,
                                     LatticeState* final_state = nullptr);

// Advected sine of the conserved scalar on `resolution` nodes over the unit
// interval: measures the diffusivity of the fundamental mode against the
// second-order symbol, and tracks the phase of a short wave near
// k dx = 0.2 against the truncated symbol with and without the third-order
// term.  Needs a one-dimensional scheme with a single conserved moment.
BenchmarkResult scalar_decay_benchmark(const SchemeSpec& spec, int resolution,
                                       const std::map<std::string, double>& bindings,
                                       LatticeState* final_state = nullptr);

// Raw snapshot of the populations, in the flat binary layout documented in
// docs/snapshot-format.md: little-endian int32 header (dimension, extents,
// stencil size, element code 0 for float64) followed by the population
// planes in row-major node order.  The reader checks the header against the
// scheme and throws std::runtime_error on any mismatch.
void save_snapshot(const LatticeState& state, const std::string& path);
LatticeState read_snapshot(const NumericScheme& scheme, const std::string& path);

}  // namespace lbeq
