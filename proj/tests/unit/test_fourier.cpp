// Fourier symbols and the order check.  The matrix exponential is pinned
// against closed forms, and the transport factor is cross-checked through the
// population-space route where streaming is a plain diagonal phase.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "lbeq/fourier.hpp"

using namespace lbeq;

namespace {

const double TOL = 1e-13;

CMatrix cm(std::initializer_list<std::initializer_list<Cplx>> rows) {
    CMatrix m;
    for (auto& r : rows) m.emplace_back(r);
    return m;
}

double mat_dist(const CMatrix& a, const CMatrix& b) {
    double acc = 0;
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a[i].size(); ++j) acc += std::norm(a[i][j] - b[i][j]);
    return std::sqrt(acc);
}

CMatrix identity(int n) {
    CMatrix m(n, std::vector<Cplx>(n, 0.0));
    for (int i = 0; i < n; ++i) m[i][i] = 1.0;
    return m;
}

}  // namespace

TEST_CASE("matrix exponential matches closed forms") {
    // Diagonal.
    CMatrix d = matrix_exp(cm({{1.0, 0.0}, {0.0, Cplx(0, M_PI)}}));
    CHECK(std::abs(d[0][0] - std::exp(1.0)) < TOL);
    CHECK(std::abs(d[1][1] - Cplx(-1.0, 0.0)) < 1e-12);
    CHECK(std::abs(d[0][1]) < TOL);

    // Nilpotent: exp([[0,1],[0,0]]) = [[1,1],[0,1]].
    CHECK(mat_dist(matrix_exp(cm({{0.0, 1.0}, {0.0, 0.0}})),
                   cm({{1.0, 1.0}, {0.0, 1.0}})) < TOL);

    // Rotation generator.
    double th = 2.31;
    CMatrix rot = matrix_exp(cm({{0.0, -th}, {th, 0.0}}));
    CHECK(mat_dist(rot, cm({{std::cos(th), -std::sin(th)}, {std::sin(th), std::cos(th)}})) <
          1e-12);

    // exp(A) exp(-A) = I, exp(2A) = exp(A)^2 on a dense complex matrix.
    CMatrix a = cm({{Cplx(0.3, 1.1), Cplx(-2.0, 0.4), 0.7},
                    {Cplx(1.5, -0.2), 0.0, Cplx(0.1, 0.1)},
                    {Cplx(-0.8, 2.2), 1.0, Cplx(0.2, -1.7)}});
    CMatrix na = a;
    for (auto& r : na)
        for (auto& x : r) x = -x;
    CHECK(mat_dist(matrix_mul(matrix_exp(a), matrix_exp(na)), identity(3)) < 1e-11);
    CMatrix a2 = a;
    for (auto& r : a2)
        for (auto& x : r) x *= 2.0;
    CHECK(mat_dist(matrix_exp(a2), matrix_mul(matrix_exp(a), matrix_exp(a))) < 1e-10);
}

TEST_CASE("operator symbols evaluate entries at i k") {
    MomentCompilation c = compile(builtin_scheme("d1q3"));
    auto bind = resolve_bindings({{"lambda", 2.0}});
    CMatrix sym = operator_symbol(c.lambda_op, {0.5}, bind);
    CHECK(std::abs(sym[0][1] - Cplx(0, 0.5)) < TOL);           // d_x -> i k
    CHECK(std::abs(sym[1][0] - Cplx(0, 0.5 * 8.0 / 3.0)) < TOL);  // (2/3) lambda^2 d_x
    CHECK(std::abs(sym[1][2] - Cplx(0, 0.5 / 3.0)) < TOL);
    CHECK(std::abs(sym[0][0]) < TOL);

    CHECK_THROWS_AS((void)operator_symbol(c.lambda_op, {0.5, 0.5}, bind),
                    std::invalid_argument);
}

TEST_CASE("transport factor agrees with the population-space phase") {
    // exp(-dt sym(Lambda)) must equal M diag(exp(-i k v_j dt)) M^-1 because
    // Lambda is exactly that conjugated advection operator.
    for (const char* name : {"d1q3", "d2q9-acoustics"}) {
        CAPTURE(name);
        MomentCompilation c = compile(builtin_scheme(name));
        double lambda = 1.3, dt = 0.37;
        auto bind = resolve_bindings({{"lambda", lambda}});
        std::vector<double> k(c.spec.d);
        for (int a = 0; a < c.spec.d; ++a) k[a] = 0.8 - 0.3 * a;

        CMatrix lam = operator_symbol(c.lambda_op, k, bind);
        for (auto& row : lam)
            for (Cplx& x : row) x *= -dt;
        CMatrix actual = matrix_exp(lam);

        OperatorMatrix m_exact = OperatorMatrix::from_scalars(c.spec.moment_matrix, c.spec.d);
        CMatrix m_num = operator_symbol(m_exact, k, bind);
        CMatrix minv_num = operator_symbol(c.m_inv, k, bind);
        CMatrix phase(c.spec.q, std::vector<Cplx>(c.spec.q, 0.0));
        for (int j = 0; j < c.spec.q; ++j) {
            double kv = 0;
            for (int a = 0; a < c.spec.d; ++a) kv += k[a] * lambda * c.spec.stencil[j][a];
            phase[j][j] = std::exp(Cplx(0, -kv * dt));
        }
        CHECK(mat_dist(actual, matrix_mul(m_num, matrix_mul(phase, minv_num))) < 1e-12);
    }
}

TEST_CASE("amplification at zero wavevector is the bare relaxation") {
    MomentCompilation c = compile(builtin_scheme("d1q3"));
    auto bind = resolve_bindings(
        {{"lambda", 1.0}, {"u0", 0.2}, {"ce", 1.0 / 3.0}, {"sigma_j", 0.6}, {"sigma_e", 0.45}});
    CMatrix g = amplification(c, {0.0}, 0.25, bind);

    double sj = 1.0 / (0.6 + 0.5), se = 1.0 / (0.45 + 0.5);
    CHECK(std::abs(g[0][0] - 1.0) < TOL);
    CHECK(std::abs(g[1][1] - (1.0 - sj)) < TOL);
    CHECK(std::abs(g[2][2] - (1.0 - se)) < TOL);
    CHECK(std::abs(g[1][0] - sj * 0.2) < TOL);          // flux pulled to u0 rho
    CHECK(std::abs(g[2][0] - se * 1.0 / 3.0) < TOL);    // energy pulled to ce lambda^2 rho

    MomentCompilation nl = compile(builtin_scheme("d2q9-isothermal"));
    CHECK_THROWS_AS((void)amplification(nl, {0.0, 0.0}, 0.1, bind), std::invalid_argument);
}

TEST_CASE("order check slopes track the truncation order") {
    std::map<std::string, double> bind = {
        {"lambda", 1.0}, {"u0", 0.2}, {"ce", 1.0 / 3.0}, {"sigma_j", 0.6}, {"sigma_e", 0.45}};
    MomentCompilation c = compile(builtin_scheme("d1q3"));

    OrderCheck full = order_check(c, 4, {0.9}, bind, 1.0);
    CAPTURE(full.slope);
    CHECK(full.slope >= 3.7);
    REQUIRE(full.dts.size() == 7);
    CHECK(full.dts.front() == doctest::Approx(1.0 / 16));
    CHECK(full.dts.back() == doctest::Approx(std::pow(2.0, -10)));

    for (int m = 1; m <= 3; ++m) {
        OrderCheck t = order_check(c, m, {0.9}, bind, 1.0);
        CAPTURE(m);
        CAPTURE(t.slope);
        CHECK(t.slope > m - 0.3);
        CHECK(t.slope < m + 0.3);
    }

    std::string csv = order_check_csv({full});
    CHECK(csv.rfind("truncation,dt,defect,used\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 8);

    CHECK_THROWS_AS((void)order_check(c, 0, {0.9}, bind, 1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)order_check(c, 5, {0.9}, bind, 1.0), std::invalid_argument);
}

TEST_CASE("order check covers the linearized nine-velocity scheme") {
    std::map<std::string, double> bind = {{"lambda", 1.0},   {"sigma_e", 0.5},
                                          {"sigma_x", 0.5},  {"sigma_q", 0.4},
                                          {"sigma_h", 0.55}};
    MomentCompilation c = compile(builtin_scheme("d2q9-acoustics"));
    OrderCheck full = order_check(c, 4, {0.7, 0.31}, bind, 1.0);
    CAPTURE(full.slope);
    CHECK(full.slope >= 3.7);

    OrderCheck first = order_check(c, 1, {0.7, 0.31}, bind, 1.0);
    CAPTURE(first.slope);
    CHECK(first.slope > 0.7);
    CHECK(first.slope < 1.3);
}
