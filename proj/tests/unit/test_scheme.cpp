// Scheme compilation: moment operators pinned against hand-derived matrices,
// relaxation coefficient mapping, linearization, validation diagnostics and
// the text format round trip.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "lbeq/scheme.hpp"
#include "lbeq/scheme_parse.hpp"

using namespace lbeq;

namespace {

Scalar lam() { return Scalar::param("lambda"); }
Scalar q(long n, long d) { return Scalar(Rat(n, d)); }

// Entry c * d_axis^1 of a first-order operator.
DiffOp d1(int dim, int axis, const Scalar& c) { return DiffOp::d(dim, axis).scaled(c); }

OperatorMatrix rows_to_matrix(int dim, const std::vector<std::vector<DiffOp>>& rows) {
    OperatorMatrix m((int)rows.size(), (int)rows[0].size(), dim);
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) m.at(i, j) = rows[i][j];
    return m;
}

bool has_error(const std::vector<Diagnostic>& ds, const std::string& needle) {
    for (const auto& d : ds)
        if (d.severity == Diagnostic::Severity::error &&
            d.message.find(needle) != std::string::npos)
            return true;
    return false;
}

bool has_warning(const std::vector<Diagnostic>& ds, const std::string& needle) {
    for (const auto& d : ds)
        if (d.severity == Diagnostic::Severity::warning &&
            d.message.find(needle) != std::string::npos)
            return true;
    return false;
}

}  // namespace

TEST_CASE("three-velocity scheme compiles to the known moment operator") {
    SchemeSpec spec = builtin_scheme("d1q3");
    CHECK(spec.q == 3);
    CHECK(spec.N == 1);
    MomentCompilation c = compile(spec);

    DiffOp z(1);
    Scalar l2 = lam().pow(2);
    OperatorMatrix expected = rows_to_matrix(
        1, {{z, d1(1, 0, Scalar(1)), z},
            {d1(1, 0, q(2, 3) * l2), z, d1(1, 0, q(1, 3))},
            {z, d1(1, 0, l2), z}});
    CHECK(c.lambda_op == expected);

    // Half-shifted coefficients stay symbolic for this scheme.
    REQUIRE(c.sigma.size() == 2);
    CHECK(c.sigma[0] == Scalar::param("sigma_j"));
    CHECK(c.sigma[1] == Scalar::param("sigma_e"));

    // Linear equilibrium turned into jets of the single conserved field.
    REQUIRE(c.phi.size() == 2);
    CHECK(c.phi[0] == JetExpr::field(0, 1).scaled(Scalar::param("u0")));
    CHECK(c.phi[1] == JetExpr::field(0, 1).scaled(Scalar::param("ce") * l2));
}

TEST_CASE("nine-velocity scheme compiles to the known moment operator") {
    MomentCompilation c = compile(builtin_scheme("d2q9-isothermal"));

    DiffOp z(2);
    Scalar l2 = lam().pow(2);
    auto X = [&](const Scalar& s) { return d1(2, 0, s); };
    auto Y = [&](const Scalar& s) { return d1(2, 1, s); };
    Scalar one(1);

    OperatorMatrix expected = rows_to_matrix(
        2,
        {
            {z, X(one), Y(one), z, z, z, z, z, z},
            {X(q(2, 3) * l2), z, z, X(q(1, 6)), X(q(1, 2)), Y(one), z, z, z},
            {Y(q(2, 3) * l2), z, z, Y(q(1, 6)), Y(q(-1, 2)), X(one), z, z, z},
            {z, X(l2), Y(l2), z, z, z, X(one), Y(one), z},
            {z, X(q(1, 3) * l2), Y(q(-1, 3) * l2), z, z, z, X(q(-1, 3)), Y(q(1, 3)), z},
            {z, Y(q(2, 3) * l2), X(q(2, 3) * l2), z, z, z, Y(q(1, 3)), X(q(1, 3)), z},
            {z, z, z, X(q(1, 3) * l2), X(-l2), Y(l2), z, z, X(q(1, 3))},
            {z, z, z, Y(q(1, 3) * l2), Y(l2), X(l2), z, z, Y(q(1, 3))},
            {z, z, z, z, z, z, X(l2), Y(l2), z},
        });
    CHECK(c.lambda_op == expected);

    REQUIRE(c.sigma.size() == 6);
    CHECK(c.sigma[1] == Scalar::param("sigma_x"));
    CHECK(c.sigma[2] == Scalar::param("sigma_x"));
    CHECK(c.sigma[5] == Scalar::param("sigma_h"));
}

TEST_CASE("cached square and cube agree with blockwise products") {
    for (const char* name : {"d1q3", "d2q9-isothermal"}) {
        CAPTURE(name);
        MomentCompilation c = compile(builtin_scheme(name));
        CHECK(c.A2 == c.A * c.A + c.B * c.C);
        CHECK(c.B2 == c.A * c.B + c.B * c.D);
        CHECK(c.C2 == c.C * c.A + c.D * c.C);
        CHECK(c.D2 == c.C * c.B + c.D * c.D);
        CHECK(c.A3 == c.A2 * c.A + c.B2 * c.C);
        CHECK(c.B3 == c.A2 * c.B + c.B2 * c.D);
        CHECK(c.C3 == c.C2 * c.A + c.D2 * c.C);
        CHECK(c.D3 == c.C2 * c.B + c.D2 * c.D);
    }
}

TEST_CASE("relaxation rules map to half-shifted coefficients") {
    SchemeSpec spec = builtin_scheme("d1q3");

    spec.relax = {RelaxRule::rate(Rat(1)), RelaxRule::rate(Rat(3, 2))};
    MomentCompilation c = compile(spec);
    CHECK(c.sigma[0] == q(1, 2));
    CHECK(c.sigma[1] == q(1, 6));

    spec.relax = {RelaxRule::rate(Rat(2)), RelaxRule::rate_param("s_e")};
    c = compile(spec);
    CHECK(c.sigma[0] == Scalar(0));
    Scalar s = Scalar::param("s_e");
    CHECK(c.sigma[1] == (Scalar(2) - s) / (Scalar(2) * s));
    // 1/s - 1/2 is the same function; the canonical forms must collapse.
    CHECK(c.sigma[1] == s.invert() - q(1, 2));
}

TEST_CASE("validation flags bad rates, shapes and equilibria") {
    SchemeSpec good = builtin_scheme("d2q9-isothermal");
    CHECK(validate(good).empty());

    SchemeSpec bad = good;
    bad.relax[2] = RelaxRule::rate(Rat(5, 2));
    CHECK(has_error(validate(bad), "outside (0, 2]"));
    CHECK(has_error(validate(bad), "'xy'"));
    CHECK_THROWS_AS((void)compile(bad), std::invalid_argument);

    bad = good;
    bad.relax[0] = RelaxRule::rate(Rat(2));
    CHECK(validate(bad).size() == 1);
    CHECK(has_warning(validate(bad), "without dissipation"));
    CHECK_NOTHROW((void)compile(bad));  // warnings do not block compilation

    bad = good;
    bad.moment_matrix[8] = bad.moment_matrix[3];
    CHECK(has_error(validate(bad), "singular"));

    bad = good;
    bad.stencil.pop_back();
    CHECK(has_error(validate(bad), "exactly q velocities"));

    bad = good;
    bad.moment_names[1] = "rho";
    CHECK(has_error(validate(bad), "duplicate moment name"));

    bad = good;
    bad.equilibrium[0] = total_derivative(bad.equilibrium[0], 0);
    CHECK(has_error(validate(bad), "field derivatives"));

    bad = good;
    bad.equilibrium[0] = JetExpr::field(4, 2);
    CHECK(has_error(validate(bad), "nonconserved field"));

    CHECK_THROWS_WITH_AS((void)builtin_scheme("d3q27"),
                         doctest::Contains("unknown scheme 'd3q27'"),
                         std::invalid_argument);
}

TEST_CASE("linearizing the nine-velocity scheme at rest gives the acoustic matrix") {
    SchemeSpec lin = builtin_scheme("d2q9-acoustics");
    REQUIRE(lin.linear_equilibrium);
    REQUIRE(lin.E.size() == 6);

    Scalar l2 = lam().pow(2), zero(0);
    CHECK(lin.E[0] == std::vector<Scalar>{Scalar(-2) * l2, zero, zero});  // eps
    CHECK(lin.E[1] == std::vector<Scalar>{zero, zero, zero});             // xx
    CHECK(lin.E[2] == std::vector<Scalar>{zero, zero, zero});             // xy
    CHECK(lin.E[3] == std::vector<Scalar>{zero, -l2, zero});              // qx
    CHECK(lin.E[4] == std::vector<Scalar>{zero, zero, -l2});              // qy
    CHECK(lin.E[5] == std::vector<Scalar>{zero, zero, zero});             // h

    // Linearizing at a moving state picks up the convective terms:
    // d/dJx of Jx Jy / rho at (1, u, v) is v.
    SchemeSpec mv = linearize(builtin_d2q9(), {Rat(1), Rat(1, 10), Rat(1, 5)});
    CHECK(mv.E[2][1] == q(1, 5));
    CHECK(mv.E[2][2] == q(1, 10));
    CHECK(mv.E[2][0] == q(-1, 50));  // -uv/rho^2 at the same state

    CHECK_THROWS_AS((void)linearize(builtin_d2q9(), {Rat(1)}), std::invalid_argument);
}

TEST_CASE("scheme files reproduce the built-in schemes") {
    SchemeSpec d1 = parse_scheme_file(SCHEME_DIR "/d1q3.scheme");
    CHECK(d1 == builtin_scheme("d1q3"));

    SchemeSpec d2 = parse_scheme_file(SCHEME_DIR "/d2q9-isothermal.scheme");
    CHECK(d2 == builtin_scheme("d2q9-isothermal"));
    CHECK(validate(d2).empty());
}

TEST_CASE("parse errors carry exact positions") {
    auto expect_error = [](const std::string& text, int line, int col,
                           const std::string& needle) {
        CAPTURE(text);
        try {
            (void)parse_scheme_text(text, "t.scheme");
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.path == "t.scheme");
            CHECK(e.line == line);
            CHECK(e.col == col);
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
            if (line > 0) {
                std::string prefix = "t.scheme:" + std::to_string(line) + ":" +
                                     std::to_string(col) + ":";
                CHECK(std::string(e.what()).rfind(prefix, 0) == 0);
            }
        }
    };

    expect_error("x = 1\n", 1, 1, "before any section");
    expect_error("[nowhere]\n", 1, 1, "unknown section");
    expect_error("[lattice]\n  dimension = 7\n", 2, 15, "between 1 and 3");
    expect_error("[lattice]\ndimension = 2\nvelocities = (1,2,3)\n", 3, 14,
                 "3 components, expected 2");
    expect_error("[lattice]\nvelocities = (1)\n", 2, 14, "dimension before velocities");
    expect_error("[moments]\nnames = a b\nmatrix c = 1\n", 3, 8, "unknown moment 'c'");
    expect_error("[moments]\nnames = a b\nmatrix b = 1 $ 1\n", 3, 14,
                 "unexpected character '$'");
    expect_error("[moments]\nnames = a b\nmatrix b = 1 2*\n", 3, 16,
                 "unexpected end of expression");
    expect_error("[relaxation]\nnames = s:1\n", 2, 1, "unknown moment 'names'");
    expect_error("", 0, 0, "missing dimension");
    expect_error("[lattice]\ndimension = 1\nvelocities = (0) (1) (-1)\n", 0, 0,
                 "missing moment names");

    // Open a file that does not exist.
    CHECK_THROWS_WITH_AS((void)parse_scheme_file("/nonexistent/x.scheme"),
                         doctest::Contains("cannot open"), ParseError);
}

TEST_CASE("expression parser handles precedence, powers and fields") {
    std::vector<std::string> fields = {"rho", "Jx"};
    JetExpr rho = JetExpr::field(0, 2), jx = JetExpr::field(1, 2);

    CHECK(parse_jet_expr("rho + 2*Jx", fields, 2) == rho + jx.scaled(Scalar(2)));
    CHECK(parse_jet_expr("-rho^2", fields, 2) == -(rho * rho));
    CHECK(parse_jet_expr("(Jx^2 - rho)/rho", fields, 2) == (jx * jx - rho) / rho);
    CHECK(parse_jet_expr("3/2*rho", fields, 2) == rho.scaled(q(3, 2)));
    CHECK(parse_jet_expr("lambda^-2", {}, 1) == JetExpr(lam().pow(-2)));
    CHECK(parse_scalar_expr("1/4 + 0.75") == Scalar(1));
    CHECK(parse_scalar_expr("(2 - s)/(2*s)") ==
          (Scalar(2) - Scalar::param("s")) / (Scalar(2) * Scalar::param("s")));

    CHECK_THROWS_AS((void)parse_jet_expr("rho/(rho - rho)", fields, 2), ParseError);
    CHECK_THROWS_AS((void)parse_scalar_expr("2^x"), ParseError);
    // Dividing by a derivative is rejected by the jet algebra, reported with
    // the position of the slash.
    try {
        (void)parse_jet_expr("1/0", fields, 2);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.col == 2);
    }
}
