// Equivalent-equation expansion: the conserved moments of a compiled scheme
// satisfy  d_t W + sum_j dt^(j-1) Gamma_j(W) = O(dt^order),  with defect
// series Psi_j for the nonconserved moments.  Three engines produce the
// Gamma_j:
//
//  - chapman_enskog: the continuous two-scale expansion, relaxation folded
//    into the half-shifted coefficients sigma;
//  - taylor: the discrete-time expansion of the actual scheme, which adds
//    finite-step corrections from third order on;
//  - linear: closed-form operator recurrences, only for schemes whose
//    equilibrium is a matrix E acting on the conserved moments.
#pragma once

#include <string>
#include <vector>

#include "lbeq/scheme.hpp"

namespace lbeq {

enum class Engine { chapman_enskog, taylor, linear };

std::string engine_name(Engine e);
Engine parse_engine(const std::string& name);  // throws std::invalid_argument

struct Expansion {
    Engine engine = Engine::taylor;
    std::string scheme;
    int order = 1;
    int dim = 1;
    std::vector<std::string> field_names;   // conserved moments
    std::vector<std::string> defect_names;  // nonconserved moments

    // gamma[j-1][i]: i-th conserved component of Gamma_j, j = 1..order.
    std::vector<std::vector<JetExpr>> gamma;
    // psi[j-1][k]: k-th nonconserved component of Psi_j, j = 1..min(order, 3).
    std::vector<std::vector<JetExpr>> psi;

    // Linear engine only: Gamma_j = alpha_j W and Psi_j = beta_j W as
    // operator matrices (N x N and (q-N) x N).
    std::vector<OperatorMatrix> alpha;
    std::vector<OperatorMatrix> beta;

    bool operator==(const Expansion&) const = default;
};

// Runs one engine to the requested order (1..4).  The linear engine throws
// std::invalid_argument on a scheme without a linear equilibrium.
Expansion expand(const MomentCompilation& c, Engine engine, int order);

// Residual of the equilibrium moments under the first-order conserved
// dynamics; equals -Psi_1 identically.
std::vector<JetExpr> conservation_defect(const MomentCompilation& c);

// Second-order correction rebuilt directly from the defect: for each
// conserved row, the sigma-weighted first-order coupling applied to the
// defect components.  Equals Gamma_2 identically.
std::vector<JetExpr> second_order_form(const MomentCompilation& c);

}  // namespace lbeq
