#include "lbeq/scheme.hpp"

#include <set>
#include <sstream>
#include <stdexcept>

namespace lbeq {

RelaxRule RelaxRule::rate(const Rat& s) {
    RelaxRule r;
    r.kind = Kind::numeric;
    r.s = s;
    return r;
}

RelaxRule RelaxRule::rate_param(const std::string& name) {
    RelaxRule r;
    r.kind = Kind::rate_symbol;
    r.param = param_intern(name);
    return r;
}

RelaxRule RelaxRule::sigma_param(const std::string& name) {
    RelaxRule r;
    r.kind = Kind::henon_symbol;
    r.param = param_intern(name);
    return r;
}

std::vector<JetExpr> SchemeSpec::equilibrium_jets() const {
    if (!linear_equilibrium) return equilibrium;
    std::vector<JetExpr> phi;
    phi.reserve(E.size());
    for (const auto& row : E) {
        JetExpr p;
        for (int k = 0; k < N; ++k) p += JetExpr::field(k, d).scaled(row[k]);
        phi.push_back(p);
    }
    return phi;
}

namespace {

void err(std::vector<Diagnostic>& out, std::string msg) {
    out.push_back({Diagnostic::Severity::error, std::move(msg)});
}

void warn(std::vector<Diagnostic>& out, std::string msg) {
    out.push_back({Diagnostic::Severity::warning, std::move(msg)});
}

// Every variable of a jet polynomial names an undifferentiated conserved
// field; anything else disqualifies an equilibrium expression.
bool jet_poly_is_state_function(const JetPoly& p, int n_conserved, bool& has_derivative,
                                bool& has_foreign_field) {
    std::set<int> vars;
    p.collect_vars(vars);
    for (int id : vars) {
        const JetVarKey& k = jetvar_key(id);
        if (k.field >= n_conserved) has_foreign_field = true;
        if (k.order() != 0) has_derivative = true;
    }
    return !has_derivative && !has_foreign_field;
}

}  // namespace

std::vector<Diagnostic> validate(const SchemeSpec& spec) {
    std::vector<Diagnostic> out;

    if (spec.d < 1 || spec.d > 3) err(out, "dimension must be 1, 2 or 3");
    if (spec.q < 2) err(out, "at least two velocities are required");
    if (spec.N < 1 || spec.N >= spec.q)
        err(out, "conserved moment count must lie strictly between 0 and q");
    if (spec.lambda_param < 0) err(out, "no velocity scale symbol set");

    if ((int)spec.stencil.size() != spec.q) {
        err(out, "stencil must list exactly q velocities");
    } else {
        for (int j = 0; j < spec.q; ++j)
            if ((int)spec.stencil[j].size() != spec.d)
                err(out, "velocity " + std::to_string(j) + " does not have d components");
        std::set<std::vector<int>> seen;
        for (const auto& v : spec.stencil)
            if (!seen.insert(v).second) warn(out, "duplicate velocity in stencil");
    }

    if ((int)spec.moment_names.size() != spec.q) {
        err(out, "moment name list must have q entries");
    } else {
        std::set<std::string> seen;
        for (const auto& n : spec.moment_names)
            if (!seen.insert(n).second) err(out, "duplicate moment name '" + n + "'");
    }
    auto moment_name = [&](int i) {
        return i < (int)spec.moment_names.size() ? spec.moment_names[i]
                                                 : std::to_string(i);
    };

    bool shape_ok = (int)spec.moment_matrix.size() == spec.q;
    if (shape_ok)
        for (const auto& row : spec.moment_matrix)
            if ((int)row.size() != spec.q) shape_ok = false;
    if (!shape_ok) {
        err(out, "moment matrix must be q x q");
    } else {
        try {
            OperatorMatrix::from_scalars(spec.moment_matrix, std::max(spec.d, 1)).inverse();
        } catch (const std::runtime_error&) {
            err(out, "moment matrix is singular");
        }
    }

    if ((int)spec.relax.size() != spec.q - spec.N) {
        err(out, "need one relaxation rule per nonconserved moment");
    } else {
        for (int i = 0; i < (int)spec.relax.size(); ++i) {
            const RelaxRule& r = spec.relax[i];
            std::string who = "'" + moment_name(spec.N + i) + "'";
            if (r.kind == RelaxRule::Kind::numeric) {
                if (r.s <= 0 || r.s > 2)
                    err(out, "relaxation rate for " + who + " is " + rat_to_string(r.s) +
                                 ", outside (0, 2]");
                else if (r.s == 2)
                    warn(out, "relaxation rate for " + who +
                                  " is 2; this moment relaxes without dissipation");
            } else if (r.param < 0) {
                err(out, "relaxation rule for " + who + " names no symbol");
            }
        }
    }

    if (spec.linear_equilibrium) {
        bool ok = (int)spec.E.size() == spec.q - spec.N;
        if (ok)
            for (const auto& row : spec.E)
                if ((int)row.size() != spec.N) ok = false;
        if (!ok) err(out, "equilibrium matrix must be (q-N) x N");
    } else {
        if ((int)spec.equilibrium.size() != spec.q - spec.N) {
            err(out, "need one equilibrium expression per nonconserved moment");
        } else {
            for (int i = 0; i < (int)spec.equilibrium.size(); ++i) {
                bool has_deriv = false, has_foreign = false;
                jet_poly_is_state_function(spec.equilibrium[i].num(), spec.N, has_deriv,
                                           has_foreign);
                jet_poly_is_state_function(spec.equilibrium[i].den(), spec.N, has_deriv,
                                           has_foreign);
                std::string who = "'" + moment_name(spec.N + i) + "'";
                if (has_foreign)
                    err(out, "equilibrium for " + who + " depends on a nonconserved field");
                if (has_deriv)
                    err(out, "equilibrium for " + who + " involves field derivatives");
            }
        }
    }

    return out;
}

MomentCompilation compile(const SchemeSpec& spec) {
    std::string errors;
    for (const Diagnostic& d : validate(spec)) {
        if (d.severity != Diagnostic::Severity::error) continue;
        if (!errors.empty()) errors += "; ";
        errors += d.message;
    }
    if (!errors.empty()) throw std::invalid_argument("invalid scheme: " + errors);

    MomentCompilation c;
    c.spec = spec;
    const int q = spec.q, N = spec.N, d = spec.d;

    OperatorMatrix m = OperatorMatrix::from_scalars(spec.moment_matrix, d);
    c.m_inv = m.inverse();

    Scalar lam = spec.lambda();
    OperatorMatrix v(q, q, d);
    for (int j = 0; j < q; ++j) {
        DiffOp vj(d);
        for (int a = 0; a < d; ++a) {
            int s = spec.stencil[j][a];
            if (s != 0) vj = vj + DiffOp::d(d, a).scaled(lam * Scalar(s));
        }
        v.at(j, j) = vj;
    }

    c.lambda_op = m * v * c.m_inv;
    OperatorMatrix l2 = c.lambda_op * c.lambda_op;
    OperatorMatrix l3 = l2 * c.lambda_op;

    auto split = [&](const OperatorMatrix& x, OperatorMatrix& a, OperatorMatrix& b,
                     OperatorMatrix& cc, OperatorMatrix& dd) {
        a = x.block(0, 0, N, N);
        b = x.block(0, N, N, q - N);
        cc = x.block(N, 0, q - N, N);
        dd = x.block(N, N, q - N, q - N);
    };
    split(c.lambda_op, c.A, c.B, c.C, c.D);
    split(l2, c.A2, c.B2, c.C2, c.D2);
    split(l3, c.A3, c.B3, c.C3, c.D3);

    c.sigma.reserve(q - N);
    for (const RelaxRule& r : spec.relax) {
        switch (r.kind) {
            case RelaxRule::Kind::numeric:
                c.sigma.push_back(Scalar(Rat(1) / r.s - Rat(1, 2)));
                break;
            case RelaxRule::Kind::rate_symbol: {
                Scalar s = Scalar::param(r.param);
                c.sigma.push_back((Scalar(2) - s) / (Scalar(2) * s));
                break;
            }
            case RelaxRule::Kind::henon_symbol:
                c.sigma.push_back(Scalar::param(r.param));
                break;
        }
    }

    c.phi = spec.equilibrium_jets();
    c.w.reserve(N);
    for (int k = 0; k < N; ++k) c.w.push_back(JetExpr::field(k, d));
    return c;
}

SchemeSpec linearize(const SchemeSpec& spec, const std::vector<Rat>& w0) {
    if ((int)w0.size() != spec.N)
        throw std::invalid_argument("linearization point must have N components");

    SchemeSpec lin = spec;
    lin.name = spec.name + "-linearized";
    lin.linear_equilibrium = true;
    lin.equilibrium.clear();
    lin.E.assign(spec.q - spec.N, std::vector<Scalar>(spec.N));

    std::vector<JetExpr> phi = spec.equilibrium_jets();
    for (int i = 0; i < spec.q - spec.N; ++i) {
        for (int k = 0; k < spec.N; ++k) {
            // Derivative with respect to one field: direction is the k-th
            // unit vector, whose spatial derivatives all vanish.
            std::vector<JetExpr> ek(spec.N);
            ek[k] = JetExpr(Rat(1));
            JetExpr partial = frechet(phi[i], ek);
            for (int j = 0; j < spec.N; ++j)
                partial = substitute_field(partial, j, JetExpr(w0[j]));
            lin.E[i][k] = partial.scalar_value();
        }
    }
    return lin;
}

namespace {

SchemeSpec make_d1q3() {
    SchemeSpec s;
    s.name = "d1q3";
    s.d = 1;
    s.q = 3;
    s.N = 1;
    s.stencil = {{0}, {1}, {-1}};
    s.lambda_param = param_intern("lambda");
    Scalar l = s.lambda(), l2 = l.pow(2);
    s.moment_matrix = {
        {Scalar(1), Scalar(1), Scalar(1)},
        {Scalar(0), l, -l},
        {Scalar(-2) * l2, l2, l2},
    };
    s.moment_names = {"rho", "J", "e"};
    s.relax = {RelaxRule::sigma_param("sigma_j"), RelaxRule::sigma_param("sigma_e")};
    s.linear_equilibrium = true;
    // Advective flux u0*rho and energy ce*lambda^2*rho; both coefficients
    // stay symbolic so one scheme covers the whole family.
    s.E = {{Scalar::param("u0")}, {Scalar::param("ce") * l2}};
    return s;
}

}  // namespace

SchemeSpec builtin_d2q9(std::optional<JetExpr> pressure, std::optional<JetExpr> phi_h) {
    SchemeSpec s;
    s.name = "d2q9-isothermal";
    s.d = 2;
    s.q = 9;
    s.N = 3;
    s.stencil = {{0, 0},  {1, 0},   {0, 1},  {-1, 0}, {0, -1},
                 {1, 1},  {-1, 1},  {-1, -1}, {1, -1}};
    s.lambda_param = param_intern("lambda");
    Scalar l = s.lambda();
    Scalar l2 = l.pow(2), l3 = l.pow(3), l4 = l.pow(4);
    Scalar o = Scalar(1), z = Scalar(0);
    s.moment_matrix = {
        {o, o, o, o, o, o, o, o, o},
        {z, l, z, -l, z, l, -l, -l, l},
        {z, z, l, z, -l, l, l, -l, -l},
        {Scalar(-4) * l2, -l2, -l2, -l2, -l2, Scalar(2) * l2, Scalar(2) * l2,
         Scalar(2) * l2, Scalar(2) * l2},
        {z, l2, -l2, l2, -l2, z, z, z, z},
        {z, z, z, z, z, l2, -l2, l2, -l2},
        {z, Scalar(-2) * l3, z, Scalar(2) * l3, z, l3, -l3, -l3, l3},
        {z, z, Scalar(-2) * l3, z, Scalar(2) * l3, l3, l3, -l3, -l3},
        {Scalar(4) * l4, Scalar(-2) * l4, Scalar(-2) * l4, Scalar(-2) * l4,
         Scalar(-2) * l4, l4, l4, l4, l4},
    };
    s.moment_names = {"rho", "Jx", "Jy", "eps", "xx", "xy", "qx", "qy", "h"};
    s.relax = {RelaxRule::sigma_param("sigma_e"), RelaxRule::sigma_param("sigma_x"),
               RelaxRule::sigma_param("sigma_x"), RelaxRule::sigma_param("sigma_q"),
               RelaxRule::sigma_param("sigma_q"), RelaxRule::sigma_param("sigma_h")};

    JetExpr rho = JetExpr::field(0, 2);
    JetExpr jx = JetExpr::field(1, 2);
    JetExpr jy = JetExpr::field(2, 2);
    JetExpr j_sq = jx * jx + jy * jy;
    JetExpr p = pressure ? *pressure : rho.scaled(l2 / Scalar(3));

    s.equilibrium = {
        p.scaled(Scalar(6)) - rho.scaled(Scalar(4) * l2) + (j_sq / rho).scaled(Scalar(3)),
        (jx * jx - jy * jy) / rho,
        jx * jy / rho,
        jx.scaled(-l2) + (j_sq * jx / (rho * rho)).scaled(Scalar(3)),
        jy.scaled(-l2) + (j_sq * jy / (rho * rho)).scaled(Scalar(3)),
        phi_h ? *phi_h : JetExpr(),
    };
    return s;
}

SchemeSpec builtin_scheme(const std::string& name) {
    if (name == "d1q3") return make_d1q3();
    if (name == "d2q9-isothermal") return builtin_d2q9();
    if (name == "d2q9-acoustics") {
        SchemeSpec lin = linearize(builtin_d2q9(), {Rat(1), Rat(0), Rat(0)});
        lin.name = "d2q9-acoustics";
        return lin;
    }
    std::ostringstream os;
    os << "unknown scheme '" << name << "'; available:";
    for (const auto& n : builtin_scheme_names()) os << " " << n;
    throw std::invalid_argument(os.str());
}

std::vector<std::string> builtin_scheme_names() {
    return {"d1q3", "d2q9-acoustics", "d2q9-isothermal"};
}

}  // namespace lbeq
