// Expansion engines: pinned low-order results on the built-in schemes, the
// defect and second-order-form identities, the continuous/discrete engine
// relation, and exact agreement of the jet and operator routes on random
// linear schemes.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "lbeq/expand.hpp"
#include "random_scheme.hpp"

using namespace lbeq;

namespace {

Scalar frac(long n, long d) { return Scalar(Rat(n, d)); }

void check_jets_equal(const std::vector<JetExpr>& a, const std::vector<JetExpr>& b) {
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CAPTURE(i);
        CHECK(a[i] == b[i]);
    }
}

// The discrete-minus-continuous third-order difference, rebuilt from first
// order data: (1/12) B2 Psi_1 - (1/6) B dPsi_1.Gamma_1.
std::vector<JetExpr> third_order_delta(const MomentCompilation& c,
                                       const std::vector<JetExpr>& g1,
                                       const std::vector<JetExpr>& p1) {
    return jets_sub(jets_scale(apply_operator(c.B2, p1), frac(1, 12)),
                    jets_scale(apply_operator(c.B, frechet(p1, g1)), frac(1, 6)));
}

void check_engine_relations(const MomentCompilation& c, int order) {
    Expansion tay = expand(c, Engine::taylor, order);
    Expansion ce = expand(c, Engine::chapman_enskog, order);

    // Identical through second order.
    check_jets_equal(tay.gamma[0], ce.gamma[0]);
    check_jets_equal(tay.psi[0], ce.psi[0]);
    if (order >= 2) {
        check_jets_equal(tay.gamma[1], ce.gamma[1]);
        check_jets_equal(tay.psi[1], ce.psi[1]);
    }
    // Finite-step corrections enter at third order.
    if (order >= 3)
        check_jets_equal(jets_sub(tay.gamma[2], ce.gamma[2]),
                         third_order_delta(c, tay.gamma[0], tay.psi[0]));

    // Defect and second-order reconstructions.
    check_jets_equal(conservation_defect(c), jets_scale(tay.psi[0], Scalar(-1)));
    if (order >= 2) check_jets_equal(second_order_form(c), tay.gamma[1]);
}

}  // namespace

TEST_CASE("three-velocity scheme expands to advection-diffusion") {
    MomentCompilation c = compile(builtin_scheme("d1q3"));
    Expansion ex = expand(c, Engine::taylor, 2);

    JetExpr rho = JetExpr::field(0, 1);
    JetExpr dx = total_derivative(rho, 0);
    JetExpr dxx = total_derivative(dx, 0);
    Scalar u0 = Scalar::param("u0"), ce = Scalar::param("ce");
    Scalar l2 = Scalar::param("lambda").pow(2);
    Scalar sj = Scalar::param("sigma_j");

    CHECK(ex.gamma[0][0] == dx.scaled(u0));

    Scalar flux_defect = u0 * u0 - (Scalar(2) + ce) * l2 * frac(1, 3);
    CHECK(ex.psi[0][0] == dx.scaled(flux_defect));
    CHECK(ex.psi[0][1] == dx.scaled((ce - Scalar(1)) * l2 * u0));

    // Diffusive correction carried by the flux relaxation alone.
    CHECK(ex.gamma[1][0] == dxx.scaled(sj * flux_defect));
}

TEST_CASE("expansion components are homogeneous in derivative order") {
    for (const char* name : {"d1q3", "d2q9-acoustics"}) {
        CAPTURE(name);
        MomentCompilation c = compile(builtin_scheme(name));
        Expansion ex = expand(c, Engine::taylor, 4);
        REQUIRE(ex.gamma.size() == 4);
        REQUIRE(ex.psi.size() == 3);
        for (int j = 0; j < 4; ++j)
            for (const JetExpr& g : ex.gamma[j]) CHECK(is_homogeneous(g, j + 1));
        for (int j = 0; j < 3; ++j)
            for (const JetExpr& p : ex.psi[j]) CHECK(is_homogeneous(p, j + 1));
    }

    MomentCompilation c = compile(builtin_scheme("d2q9-isothermal"));
    Expansion ex = expand(c, Engine::taylor, 2);
    for (int j = 0; j < 2; ++j)
        for (const JetExpr& g : ex.gamma[j]) CHECK(is_homogeneous(g, j + 1));
}

TEST_CASE("engine relations hold on the built-in schemes") {
    check_engine_relations(compile(builtin_scheme("d1q3")), 4);
    check_engine_relations(compile(builtin_scheme("d2q9-acoustics")), 3);
    check_engine_relations(compile(builtin_scheme("d2q9-isothermal")), 2);
}

TEST_CASE("jet and operator routes agree on every linear built-in") {
    for (const char* name : {"d1q3", "d2q9-acoustics"}) {
        CAPTURE(name);
        MomentCompilation c = compile(builtin_scheme(name));
        Expansion tay = expand(c, Engine::taylor, 4);
        Expansion lin = expand(c, Engine::linear, 4);

        REQUIRE(lin.alpha.size() == 4);
        REQUIRE(lin.beta.size() == 3);
        for (int j = 0; j < 4; ++j) check_jets_equal(tay.gamma[j], lin.gamma[j]);
        for (int j = 0; j < 3; ++j) check_jets_equal(tay.psi[j], lin.psi[j]);

        // The stored operators reproduce the jets when applied to the fields.
        for (int j = 0; j < 4; ++j)
            check_jets_equal(apply_operator(lin.alpha[j], c.w), lin.gamma[j]);
    }
}

TEST_CASE("random linear schemes: all exact identities at once") {
    std::mt19937 rng(20260823);
    for (int i = 0; i < 8; ++i) {
        CAPTURE(i);
        MomentCompilation c = compile(lbeq_test::random_linear_scheme(rng, i));
        Expansion tay = expand(c, Engine::taylor, 4);
        Expansion lin = expand(c, Engine::linear, 4);
        for (int j = 0; j < 4; ++j) check_jets_equal(tay.gamma[j], lin.gamma[j]);
        for (int j = 0; j < 3; ++j) check_jets_equal(tay.psi[j], lin.psi[j]);
        check_engine_relations(c, 3);
    }
}

TEST_CASE("engine selection and order limits") {
    MomentCompilation c = compile(builtin_scheme("d1q3"));
    CHECK_THROWS_AS((void)expand(c, Engine::taylor, 0), std::invalid_argument);
    CHECK_THROWS_AS((void)expand(c, Engine::taylor, 5), std::invalid_argument);

    MomentCompilation nl = compile(builtin_scheme("d2q9-isothermal"));
    CHECK_THROWS_WITH_AS((void)expand(nl, Engine::linear, 2),
                         doctest::Contains("linear equilibrium"), std::invalid_argument);

    for (Engine e : {Engine::chapman_enskog, Engine::taylor, Engine::linear})
        CHECK(parse_engine(engine_name(e)) == e);
    CHECK_THROWS_AS((void)parse_engine("newton"), std::invalid_argument);

    // Order 1 still exposes the first defect.
    Expansion ex = expand(c, Engine::taylor, 1);
    CHECK(ex.gamma.size() == 1);
    CHECK(ex.psi.size() == 1);
}
