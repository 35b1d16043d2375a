#include "lbeq/expand.hpp"

#include <stdexcept>

namespace lbeq {

std::string engine_name(Engine e) {
    switch (e) {
        case Engine::chapman_enskog: return "ce";
        case Engine::taylor: return "taylor";
        case Engine::linear: return "linear";
    }
    throw std::logic_error("unreachable");
}

Engine parse_engine(const std::string& name) {
    if (name == "ce") return Engine::chapman_enskog;
    if (name == "taylor") return Engine::taylor;
    if (name == "linear") return Engine::linear;
    throw std::invalid_argument("unknown engine '" + name + "' (expected ce, taylor or linear)");
}

namespace {

using Jets = std::vector<JetExpr>;

Jets sig(const MomentCompilation& c, const Jets& v) { return jets_diag(c.sigma, v); }

Scalar frac(long n, long d) { return Scalar(Rat(n, d)); }

// First-order conserved dynamics shared by every engine.
Jets gamma_one(const MomentCompilation& c) {
    return jets_add(apply_operator(c.A, c.w), apply_operator(c.B, c.phi));
}

Jets psi_one(const MomentCompilation& c, const Jets& g1) {
    return jets_sub(frechet(c.phi, g1),
                    jets_add(apply_operator(c.C, c.w), apply_operator(c.D, c.phi)));
}

void expand_ce(const MomentCompilation& c, int order, Expansion& out) {
    Jets g1 = gamma_one(c);
    Jets p1 = psi_one(c, g1);
    out.gamma.push_back(g1);
    out.psi.push_back(p1);
    if (order < 2) return;

    Jets sp1 = sig(c, p1);
    Jets g2 = apply_operator(c.B, sp1);
    Jets p2 = jets_add(sig(c, frechet(p1, g1)),
                       jets_sub(frechet(c.phi, g2), apply_operator(c.D, sp1)));
    out.gamma.push_back(g2);
    out.psi.push_back(p2);
    if (order < 3) return;

    Jets sp2 = sig(c, p2);
    Jets g3 = apply_operator(c.B, sp2);
    Jets p3 = jets_add(jets_add(sig(c, frechet(p1, g2)),
                                jets_sub(frechet(c.phi, g3), apply_operator(c.D, sp2))),
                       sig(c, frechet(p2, g1)));
    out.gamma.push_back(g3);
    out.psi.push_back(p3);
    if (order < 4) return;

    out.gamma.push_back(apply_operator(c.B, sig(c, p3)));
}

void expand_taylor(const MomentCompilation& c, int order, Expansion& out) {
    Jets g1 = gamma_one(c);
    Jets p1 = psi_one(c, g1);
    out.gamma.push_back(g1);
    out.psi.push_back(p1);
    if (order < 2) return;

    Jets sp1 = sig(c, p1);
    Jets g2 = apply_operator(c.B, sp1);
    Jets dp1_g1 = frechet(p1, g1);
    Jets p2 = jets_add(sig(c, dp1_g1),
                       jets_sub(frechet(c.phi, g2), apply_operator(c.D, sp1)));
    out.gamma.push_back(g2);
    out.psi.push_back(p2);
    if (order < 3) return;

    Jets sp2 = sig(c, p2);
    Jets g3 = jets_add(apply_operator(c.B, sp2),
                       jets_sub(jets_scale(apply_operator(c.B2, p1), frac(1, 12)),
                                jets_scale(apply_operator(c.B, dp1_g1), frac(1, 6))));
    Jets ddp1 = second_directional(p1, g1);
    Jets p3 = jets_add(sig(c, frechet(p1, g2)),
                       jets_sub(frechet(c.phi, g3), apply_operator(c.D, sp2)));
    p3 = jets_add(p3, sig(c, frechet(p2, g1)));
    p3 = jets_add(p3, jets_scale(apply_operator(c.D, dp1_g1), frac(1, 6)));
    p3 = jets_sub(p3, jets_scale(apply_operator(c.D2, p1), frac(1, 12)));
    p3 = jets_sub(p3, jets_scale(ddp1, frac(1, 12)));
    out.gamma.push_back(g3);
    out.psi.push_back(p3);
    if (order < 4) return;

    // gamma_j in the paper-free sense: equilibrium response to Gamma_j.
    Jets eq1 = frechet(c.phi, g1);
    Jets eq2 = frechet(c.phi, g2);
    Jets mixed = jets_add(frechet(eq1, g2), frechet(eq2, g1));

    Jets g4 = apply_operator(c.B, sig(c, p3));
    g4 = jets_add(g4, jets_scale(apply_operator(c.B2, p2), frac(1, 4)));
    g4 = jets_add(g4, jets_scale(apply_operator(c.B, apply_operator(c.D2, sp1)), frac(1, 6)));
    g4 = jets_sub(g4, jets_scale(apply_operator(c.A, apply_operator(c.B, p2)), frac(1, 6)));
    g4 = jets_sub(g4, jets_scale(apply_operator(c.B, mixed), frac(1, 6)));
    g4 = jets_sub(g4, jets_scale(apply_operator(c.B, sig(c, ddp1)), frac(1, 6)));
    out.gamma.push_back(g4);
}

OperatorMatrix sigma_diag(const MomentCompilation& c) {
    int n = (int)c.sigma.size();
    OperatorMatrix m(n, n, c.spec.d);
    for (int i = 0; i < n; ++i) m.at(i, i) = DiffOp::identity(c.spec.d).scaled(c.sigma[i]);
    return m;
}

void expand_linear(const MomentCompilation& c, int order, Expansion& out) {
    if (!c.spec.linear_equilibrium)
        throw std::invalid_argument(
            "linear engine requires a scheme with a linear equilibrium (linearize it first)");

    OperatorMatrix e = OperatorMatrix::from_scalars(c.spec.E, c.spec.d);
    OperatorMatrix s = sigma_diag(c);

    OperatorMatrix a1 = c.A + c.B * e;
    OperatorMatrix b1 = e * a1 - c.C - c.D * e;
    out.alpha.push_back(a1);
    out.beta.push_back(b1);
    if (order >= 2) {
        OperatorMatrix sb1 = s * b1;
        OperatorMatrix a2 = c.B * sb1;
        OperatorMatrix b2 = sb1 * a1 + e * a2 - c.D * sb1;
        out.alpha.push_back(a2);
        out.beta.push_back(b2);
        if (order >= 3) {
            OperatorMatrix sb2 = s * b2;
            OperatorMatrix b1a1 = b1 * a1;
            OperatorMatrix a3 = c.B * sb2 + (c.B2 * b1).scaled(frac(1, 12)) -
                                (c.B * b1a1).scaled(frac(1, 6));
            OperatorMatrix b3 = sb1 * out.alpha[1] + e * a3 - c.D * sb2 + sb2 * a1 +
                                (c.D * b1a1).scaled(frac(1, 6)) -
                                (c.D2 * b1).scaled(frac(1, 12)) -
                                (b1a1 * a1).scaled(frac(1, 12));
            out.alpha.push_back(a3);
            out.beta.push_back(b3);
            if (order >= 4) {
                OperatorMatrix a4 = c.B * (s * b3) + (c.B2 * b2).scaled(frac(1, 4)) +
                                    (c.B * (c.D2 * sb1)).scaled(frac(1, 6)) -
                                    (c.A * (c.B * b2)).scaled(frac(1, 6)) -
                                    (c.B * (e * (a1 * out.alpha[1]))).scaled(frac(1, 6)) -
                                    (c.B * (e * (out.alpha[1] * a1))).scaled(frac(1, 6)) -
                                    (c.B * (s * (b1a1 * a1))).scaled(frac(1, 6));
                out.alpha.push_back(a4);
            }
        }
    }

    for (const OperatorMatrix& a : out.alpha) out.gamma.push_back(apply_operator(a, c.w));
    for (const OperatorMatrix& b : out.beta) out.psi.push_back(apply_operator(b, c.w));
}

}  // namespace

Expansion expand(const MomentCompilation& c, Engine engine, int order) {
    if (order < 1 || order > 4)
        throw std::invalid_argument("expansion order must be between 1 and 4");

    Expansion out;
    out.engine = engine;
    out.scheme = c.spec.name;
    out.order = order;
    out.dim = c.spec.d;
    out.field_names.assign(c.spec.moment_names.begin(), c.spec.moment_names.begin() + c.spec.N);
    out.defect_names.assign(c.spec.moment_names.begin() + c.spec.N, c.spec.moment_names.end());

    switch (engine) {
        case Engine::chapman_enskog: expand_ce(c, order, out); break;
        case Engine::taylor: expand_taylor(c, order, out); break;
        case Engine::linear: expand_linear(c, order, out); break;
    }
    return out;
}

std::vector<JetExpr> conservation_defect(const MomentCompilation& c) {
    Jets g1 = gamma_one(c);
    return jets_sub(jets_add(apply_operator(c.C, c.w), apply_operator(c.D, c.phi)),
                    frechet(c.phi, g1));
}

std::vector<JetExpr> second_order_form(const MomentCompilation& c) {
    Jets theta = conservation_defect(c);
    const int n = c.spec.N, d = c.spec.d;

    std::vector<JetExpr> g2(n);
    std::vector<int> mu(d, 0);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < c.spec.q - n; ++k) {
            for (int axis = 0; axis < d; ++axis) {
                mu.assign(d, 0);
                mu[axis] = 1;
                Scalar coeff = c.B.at(i, k).coefficient(mu);
                if (coeff.is_zero()) continue;
                g2[i] -= total_derivative(theta[k], axis).scaled(coeff * c.sigma[k]);
            }
        }
    }
    return g2;
}

}  // namespace lbeq
