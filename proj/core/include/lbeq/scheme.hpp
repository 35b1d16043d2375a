// Scheme descriptions and their compiled form.
//
// A scheme is a velocity stencil (integer offsets scaled by a velocity
// symbol), an invertible moment matrix, the number of leading conserved
// moments, one relaxation rule per remaining moment, and an equilibrium for
// those moments (a matrix acting on the conserved ones, or arbitrary jet
// expressions of them).
//
// Compilation inverts the moment matrix, forms the first-order operator
// matrix  L = M diag(sum_a v_a d_a) M^{-1},  splits it into blocks around the
// conserved/nonconserved boundary, caches the blocks of L^2 and L^3, and
// turns each relaxation rule into its half-shifted coefficient
// sigma = 1/s - 1/2.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lbeq/jet.hpp"
#include "lbeq/opmatrix.hpp"

namespace lbeq {

struct Diagnostic {
    enum class Severity { error, warning };
    Severity severity = Severity::error;
    std::string message;
};

struct RelaxRule {
    enum class Kind {
        numeric,       // rational rate s
        rate_symbol,   // symbolic rate s, sigma = (2-s)/(2s)
        henon_symbol,  // sigma itself kept as a named parameter
    };
    Kind kind = Kind::numeric;
    Rat s{1};
    int param = -1;

    static RelaxRule rate(const Rat& s);
    static RelaxRule rate_param(const std::string& name);
    static RelaxRule sigma_param(const std::string& name);

    bool operator==(const RelaxRule&) const = default;
};

struct SchemeSpec {
    std::string name;
    int d = 1;  // spatial dimension
    int q = 1;  // stencil size
    int N = 1;  // leading conserved moments
    std::vector<std::vector<int>> stencil;           // q rows of d integer offsets
    int lambda_param = -1;                           // velocity scale symbol
    std::vector<std::vector<Scalar>> moment_matrix;  // q x q
    std::vector<std::string> moment_names;           // q
    std::vector<RelaxRule> relax;                    // q - N

    bool linear_equilibrium = false;
    std::vector<std::vector<Scalar>> E;   // (q-N) x N when linear
    std::vector<JetExpr> equilibrium;     // q - N jets when nonlinear

    Scalar lambda() const { return Scalar::param(lambda_param); }

    // Equilibrium moments as jets of the conserved fields, for either kind.
    std::vector<JetExpr> equilibrium_jets() const;

    bool operator==(const SchemeSpec&) const = default;
};

struct MomentCompilation {
    SchemeSpec spec;

    OperatorMatrix lambda_op;  // q x q, first order
    OperatorMatrix A, B, C, D;
    OperatorMatrix A2, B2, C2, D2;
    OperatorMatrix A3, B3, C3, D3;
    OperatorMatrix m_inv;

    std::vector<Scalar> sigma;  // q - N half-shifted relaxation coefficients
    std::vector<JetExpr> phi;   // equilibrium jets
    std::vector<JetExpr> w;     // conserved fields as jets
};

// Structural and stability checks; errors make the spec unusable, warnings
// flag suspicious but admissible choices.
std::vector<Diagnostic> validate(const SchemeSpec& spec);

// Throws std::invalid_argument collecting the validation errors.
MomentCompilation compile(const SchemeSpec& spec);

// Tangent scheme at a conserved state: the equilibrium is replaced by its
// derivative matrix evaluated there.
SchemeSpec linearize(const SchemeSpec& spec, const std::vector<Rat>& w0);

// Built-in schemes: "d1q3", "d2q9-isothermal", "d2q9-acoustics".
SchemeSpec builtin_scheme(const std::string& name);
std::vector<std::string> builtin_scheme_names();

// The nine-velocity scheme with a configurable pressure law (default
// lambda^2 rho / 3) and last-moment equilibrium (default 0).
SchemeSpec builtin_d2q9(std::optional<JetExpr> pressure = std::nullopt,
                        std::optional<JetExpr> phi_h = std::nullopt);

}  // namespace lbeq
