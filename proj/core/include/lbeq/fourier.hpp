// Fourier-side validation of a linear scheme: the exact one-step
// amplification matrix at a wavevector is compared against the growth rates
// predicted by the truncated equivalent system.  The defect between the two
// shrinks like dt^m when the series is cut after m terms, and the fitted
// slope is the measured consistency order.
#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "lbeq/expand.hpp"

namespace lbeq {

using Cplx = std::complex<double>;
using CMatrix = std::vector<std::vector<Cplx>>;

// Numeric values for scheme parameters, resolved to registered symbols.
std::map<int, double> resolve_bindings(const std::map<std::string, double>& by_name);

// Evaluate an operator matrix at wavevector k: each d_alpha becomes i*k_alpha.
CMatrix operator_symbol(const OperatorMatrix& m, const std::vector<double>& k,
                        const std::map<int, double>& bindings);

// exp(a) by scaling and squaring with a Taylor core (relative tolerance
// around 1e-14; matrices here are at most 9x9).
CMatrix matrix_exp(const CMatrix& a);

CMatrix matrix_mul(const CMatrix& a, const CMatrix& b);

// Eigenvalues of a square complex matrix.
std::vector<Cplx> eigenvalues(const CMatrix& a);

// Exact one-step update in moment space at wavevector k: relax toward the
// linear equilibrium, then transport for dt.  Requires a linear equilibrium
// and bindings for every free parameter (velocity scale, relaxation symbols).
CMatrix amplification(const MomentCompilation& c, const std::vector<double>& k, double dt,
                      const std::map<int, double>& bindings);

struct OrderCheck {
    int truncation = 4;           // series terms kept
    std::vector<double> dts;      // sampled steps, largest first
    std::vector<double> defects;  // eigenvalue-rate mismatch at each step
    std::vector<bool> used;       // false where the defect hit the roundoff floor
    double slope = 0;             // least-squares order estimate over used points
};

// Sweeps dt = t0 * 2^-4 .. 2^-10 at the fixed physical wavevector k, matching
// the principal log of the conserved amplification eigenvalues against the
// eigenvalues of the truncated symbol series.
OrderCheck order_check(const MomentCompilation& c, int truncation,
                       const std::vector<double>& k,
                       const std::map<std::string, double>& bindings, double t0);

// CSV table (dt, defect, used) per truncation, for the command line.
std::string order_check_csv(const std::vector<OrderCheck>& checks);

}  // namespace lbeq
