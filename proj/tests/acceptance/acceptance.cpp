// Project acceptance gate: nine end-to-end criteria covering the operator
// tables, the second-order fluid physics, exact cross-engine identities on a
// 50-scheme random set, symbol-defect slopes, the viscosity benchmark with
// grid refinement, and long-run conservation.  One pass/fail line per
// criterion; exits nonzero when any fails or overruns its time budget.
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "lbeq/checks.hpp"
#include "lbeq/expand.hpp"
#include "lbeq/fourier.hpp"
#include "lbeq/sim.hpp"
#include "random_scheme.hpp"

using namespace lbeq;

namespace {

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw Failure(what);
}

void require_jets_equal(const std::vector<JetExpr>& a, const std::vector<JetExpr>& b,
                        const std::string& what) {
    require(a.size() == b.size(), what + ": size mismatch");
    for (size_t i = 0; i < a.size(); ++i)
        require(a[i] == b[i], what + ": component " + std::to_string(i) + " differs");
}

void require_checks(const std::vector<CheckResult>& results) {
    for (const CheckResult& r : results)
        require(r.pass, r.name + ": " + r.detail);
}

Scalar frac(long n, long d) { return Scalar(Rat(n, d)); }

// The random linear schemes shared by criteria 3, 4, 5 and 9, each with its
// discrete and operator-route expansions.  Built once, by the first user.
struct RandomSet {
    std::vector<MomentCompilation> schemes;
    std::vector<Expansion> taylor;  // order 4
    std::vector<Expansion> linear;  // order 4

    void ensure_built() {
        if (!schemes.empty()) return;
        std::mt19937 rng(987654321);
        for (int i = 0; i < 50; ++i) {
            schemes.push_back(compile(lbeq_test::random_linear_scheme(rng, i)));
            taylor.push_back(expand(schemes.back(), Engine::taylor, 4));
            linear.push_back(expand(schemes.back(), Engine::linear, 4));
        }
    }
};

RandomSet random_set;

// ------------------------------------------------------------- criteria

// 1. The compiled nine-velocity moment operator equals its hand-written
//    table entry by entry (the three-velocity table rides along).
void criterion_operator_table() { require_checks(check_operator_tables()); }

// 2. Order-2 momentum dynamics of the nine-velocity scheme: gamma_2 equals
//    the divergence of the viscous stress (mu = lambda^2 rho sigma_x / 3,
//    zeta = lambda^2 rho sigma_e / 3 per unit step) up to exactly the cubic
//    velocity residuals, as closed-form expressions.
void criterion_viscous_form() { require_checks(check_viscous_form()); }

// 3. On every random scheme the discrete expansion coincides with the
//    operator route: gamma_j = alpha_j W for j = 1..4 and psi_j = beta_j W
//    for j = 1..3, exactly.
void criterion_operator_route() {
    random_set.ensure_built();
    for (size_t i = 0; i < random_set.schemes.size(); ++i) {
        const MomentCompilation& c = random_set.schemes[i];
        const Expansion& tay = random_set.taylor[i];
        const Expansion& lin = random_set.linear[i];
        const std::string tag = "scheme " + std::to_string(i);
        require(lin.alpha.size() == 4 && lin.beta.size() == 3,
                tag + ": operator series incomplete");
        for (int j = 0; j < 4; ++j)
            require_jets_equal(tay.gamma[j], apply_operator(lin.alpha[j], c.w),
                               tag + ": gamma_" + std::to_string(j + 1));
        for (int j = 0; j < 3; ++j)
            require_jets_equal(tay.psi[j], apply_operator(lin.beta[j], c.w),
                               tag + ": psi_" + std::to_string(j + 1));
    }
}

// 4. Continuous vs discrete engine on the random set: identical gamma_1,
//    psi_1, gamma_2, psi_2, and the third-order difference equals
//    (1/12) B2 psi_1 - (1/6) B dpsi_1.gamma_1, exactly.
void criterion_engine_delta() {
    random_set.ensure_built();
    for (size_t i = 0; i < random_set.schemes.size(); ++i) {
        const MomentCompilation& c = random_set.schemes[i];
        const Expansion& tay = random_set.taylor[i];
        Expansion ce = expand(c, Engine::chapman_enskog, 3);
        const std::string tag = "scheme " + std::to_string(i);
        require_jets_equal(tay.gamma[0], ce.gamma[0], tag + ": gamma_1");
        require_jets_equal(tay.psi[0], ce.psi[0], tag + ": psi_1");
        require_jets_equal(tay.gamma[1], ce.gamma[1], tag + ": gamma_2");
        require_jets_equal(tay.psi[1], ce.psi[1], tag + ": psi_2");
        std::vector<JetExpr> delta =
            jets_sub(jets_scale(apply_operator(c.B2, tay.psi[0]), frac(1, 12)),
                     jets_scale(apply_operator(c.B, frechet(tay.psi[0], tay.gamma[0])),
                                frac(1, 6)));
        require_jets_equal(jets_sub(tay.gamma[2], ce.gamma[2]), delta,
                           tag + ": third-order step correction");
    }
}

// 5. The second-order form rebuilt from the defect equals gamma_2 on the
//    nine-velocity scheme and on every random scheme.
void criterion_second_order_form() {
    MomentCompilation d2q9 = compile(builtin_scheme("d2q9-isothermal"));
    require_jets_equal(second_order_form(d2q9), expand(d2q9, Engine::taylor, 2).gamma[1],
                       "d2q9-isothermal");
    random_set.ensure_built();
    for (size_t i = 0; i < random_set.schemes.size(); ++i)
        require_jets_equal(second_order_form(random_set.schemes[i]),
                           random_set.taylor[i].gamma[1],
                           "scheme " + std::to_string(i));
}

// 6. Symbol defect slopes: the full series fits order >= 3.7 over
//    dt = 2^-4 .. 2^-10 on the three-velocity scheme and the linearized
//    nine-velocity scheme, and cutting the series after m terms fits
//    m +- 0.3 for m = 1, 2, 3.
void criterion_symbol_slopes() {
    struct Case {
        const char* scheme;
        std::vector<double> k;
        std::map<std::string, double> bind;
    };
    const std::vector<Case> cases = {
        {"d1q3",
         {0.9},
         {{"lambda", 1.0}, {"u0", 0.2}, {"ce", 1.0 / 3.0}, {"sigma_j", 0.6},
          {"sigma_e", 0.45}}},
        {"d2q9-acoustics",
         {0.7, 0.31},
         {{"lambda", 1.0}, {"sigma_e", 0.5}, {"sigma_x", 0.5}, {"sigma_q", 0.4},
          {"sigma_h", 0.55}}},
    };
    for (const Case& cs : cases) {
        MomentCompilation c = compile(builtin_scheme(cs.scheme));
        OrderCheck full = order_check(c, 4, cs.k, cs.bind, 1.0);
        std::ostringstream os;
        os << cs.scheme << ": full-series slope " << full.slope;
        require(full.slope >= 3.7, os.str() + " below 3.7");
        for (int m = 1; m <= 3; ++m) {
            OrderCheck t = order_check(c, m, cs.k, cs.bind, 1.0);
            std::ostringstream ts;
            ts << cs.scheme << ": truncation " << m << " slope " << t.slope;
            require(std::abs(t.slope - m) < 0.3, ts.str() + " outside +-0.3");
        }
    }
}

// 7. Shear-wave viscosity at 128^2 with sigma_x = 1/2 and a low-Mach
//    amplitude lands within 2% of the order-2 coefficient, and the error
//    shrinks on refinement to 256^2.
void criterion_viscosity_benchmark() {
    const std::map<std::string, double> bind = {{"lambda", 1.0}, {"sigma_e", 0.6},
                                                {"sigma_x", 0.5}, {"sigma_q", 0.8},
                                                {"sigma_h", 0.7}};
    SchemeSpec spec = builtin_scheme("d2q9-isothermal");
    BenchmarkResult coarse = shear_wave_benchmark(spec, 128, 1e-3, bind);
    {
        std::ostringstream os;
        os << "128^2 relative error " << coarse.relative_error;
        require(coarse.relative_error < 0.02, os.str() + " above 2%");
    }
    BenchmarkResult fine = shear_wave_benchmark(spec, 256, 1e-3, bind);
    std::ostringstream os;
    os << "refinement: " << coarse.relative_error << " -> " << fine.relative_error;
    require(fine.relative_error < coarse.relative_error, os.str() + " did not shrink");
}

// 8. Grid totals of mass and momentum on a randomized state move by less
//    than 1e-12 relative over 10^4 steps.
void criterion_conservation_drift() {
    const int res = 48;
    NumericScheme ns = compile_numeric(
        builtin_scheme("d2q9-isothermal"),
        {{"lambda", 1.0}, {"sigma_e", 0.6}, {"sigma_x", 0.5}, {"sigma_q", 0.8},
         {"sigma_h", 0.7}});

    std::mt19937 rng(424242);
    std::uniform_real_distribution<double> drho(0.9, 1.1), dj(0.02, 0.08),
        noise(-1e-3, 1e-3);
    std::vector<double> rho(res * res), jx(res * res), jy(res * res);
    for (int i = 0; i < res * res; ++i) {
        rho[i] = drho(rng);
        jx[i] = dj(rng);
        jy[i] = dj(rng);
    }

    LatticeState st = make_state(ns, {res, res});
    set_equilibrium(st, [&](const int* coord, double* w) {
        int i = coord[0] * res + coord[1];
        w[0] = rho[i];
        w[1] = jx[i];
        w[2] = jy[i];
    });
    // Push the populations off equilibrium so the relaxation stays active.
    for (int j = 0; j < ns.q; ++j)
        for (long i = 0; i < st.nodes; ++i) st.f[j][i] += noise(rng);

    std::vector<double> before = conserved_totals(st);
    run(st, 10000);
    std::vector<double> after = conserved_totals(st);
    for (size_t k = 0; k < before.size(); ++k) {
        double drift = std::abs(after[k] - before[k]) / std::abs(before[k]);
        std::ostringstream os;
        os << "total " << k << " drifted " << drift << " relative";
        require(drift < 1e-12, os.str());
    }
}

// 9. conservation_defect equals -psi_1 exactly on every built-in scheme and
//    every random scheme.
void criterion_defect_identity() {
    for (const std::string& name : builtin_scheme_names()) {
        MomentCompilation c = compile(builtin_scheme(name));
        require_jets_equal(conservation_defect(c),
                           jets_scale(expand(c, Engine::taylor, 1).psi[0], Scalar(-1)),
                           name);
    }
    random_set.ensure_built();
    for (size_t i = 0; i < random_set.schemes.size(); ++i)
        require_jets_equal(conservation_defect(random_set.schemes[i]),
                           jets_scale(random_set.taylor[i].psi[0], Scalar(-1)),
                           "scheme " + std::to_string(i));
}

// ------------------------------------------------------------- harness

struct Criterion {
    std::string title;
    double limit_seconds;  // 0 = no stated budget
    std::function<void()> body;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"nine-velocity operator table matches the hand transcription", 1,
         criterion_operator_table},
        {"order-2 momentum terms are the viscous divergence plus cubic residuals", 30,
         criterion_viscous_form},
        {"discrete expansion equals the operator route on 50 random schemes", 0,
         criterion_operator_route},
        {"continuous/discrete engines: low orders equal, step correction exact", 0,
         criterion_engine_delta},
        {"defect-built second-order form equals gamma_2 everywhere", 0,
         criterion_second_order_form},
        {"symbol defect slopes track the truncation orders", 60,
         criterion_symbol_slopes},
        {"shear viscosity within 2% at 128^2 and improving at 256^2", 300,
         criterion_viscosity_benchmark},
        {"mass and momentum totals drift below 1e-12 over 10^4 steps", 0,
         criterion_conservation_drift},
        {"conservation defect equals minus psi_1 everywhere", 0,
         criterion_defect_identity},
    };

    int failed = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        const Criterion& c = criteria[i];
        auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = true;
        try {
            c.body();
        } catch (const std::exception& e) {
            ok = false;
            detail = e.what();
        }
        double elapsed = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
        if (ok && c.limit_seconds > 0 && elapsed > c.limit_seconds) {
            ok = false;
            std::ostringstream os;
            os << "over the " << c.limit_seconds << " s budget";
            detail = os.str();
        }
        if (!ok) ++failed;

        std::cout << "[" << i + 1 << "/" << criteria.size() << "] "
                  << (ok ? "PASS" : "FAIL") << "  " << c.title << "  ("
                  << std::fixed << std::setprecision(2) << elapsed << " s";
        if (c.limit_seconds > 0)
            std::cout << ", budget " << std::setprecision(0) << c.limit_seconds << " s";
        std::cout << ")\n";
        std::cout.unsetf(std::ios::fixed);
        std::cout << std::setprecision(6);
        if (!detail.empty()) std::cout << "       " << detail << "\n";
        std::cout.flush();
    }

    std::cout << (criteria.size() - failed) << "/" << criteria.size()
              << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
