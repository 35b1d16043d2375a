#include "lbeq/fourier.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace lbeq {

std::map<int, double> resolve_bindings(const std::map<std::string, double>& by_name) {
    std::map<int, double> out;
    for (const auto& [name, value] : by_name) out[param_intern(name)] = value;
    return out;
}

CMatrix operator_symbol(const OperatorMatrix& m, const std::vector<double>& k,
                        const std::map<int, double>& bindings) {
    if ((int)k.size() != m.dim())
        throw std::invalid_argument("wavevector dimension does not match the operator");
    CMatrix out(m.rows(), std::vector<Cplx>(m.cols()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            Cplx acc = 0;
            for (const auto& t : m.at(i, j).poly().terms()) {
                Cplx v = t.c.evaluate(bindings);
                for (const auto& [axis, e] : t.m.factors())
                    for (int p = 0; p < e; ++p) v *= Cplx(0, k[axis]);
                acc += v;
            }
            out[i][j] = acc;
        }
    return out;
}

namespace {

using EMatrix = Eigen::MatrixXcd;

EMatrix to_eigen(const CMatrix& a) {
    EMatrix m((int)a.size(), a.empty() ? 0 : (int)a[0].size());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) m(i, j) = a[i][j];
    return m;
}

CMatrix from_eigen(const EMatrix& m) {
    CMatrix a(m.rows(), std::vector<Cplx>(m.cols()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) a[i][j] = m(i, j);
    return a;
}

}  // namespace

CMatrix matrix_mul(const CMatrix& a, const CMatrix& b) {
    return from_eigen(to_eigen(a) * to_eigen(b));
}

CMatrix matrix_exp(const CMatrix& a) {
    EMatrix m = to_eigen(a);
    if (m.rows() != m.cols()) throw std::invalid_argument("matrix_exp: square matrix required");

    int squarings = 0;
    double norm = m.norm();
    if (norm > 0.5) {
        squarings = (int)std::ceil(std::log2(norm / 0.5));
        m /= std::pow(2.0, squarings);
    }

    EMatrix sum = EMatrix::Identity(m.rows(), m.cols());
    EMatrix term = sum;
    for (int n = 1; n <= 60; ++n) {
        term = (term * m) / double(n);
        sum += term;
        if (term.norm() <= 1e-16 * sum.norm()) break;
    }
    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    return from_eigen(sum);
}

std::vector<Cplx> eigenvalues(const CMatrix& a) {
    EMatrix m = to_eigen(a);
    if (m.rows() != m.cols()) throw std::invalid_argument("eigenvalues: square matrix required");
    Eigen::ComplexEigenSolver<EMatrix> solver(m, false);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigenvalue iteration failed to converge");
    std::vector<Cplx> out(m.rows());
    for (int i = 0; i < m.rows(); ++i) out[i] = solver.eigenvalues()(i);
    return out;
}

CMatrix amplification(const MomentCompilation& c, const std::vector<double>& k, double dt,
                      const std::map<int, double>& bindings) {
    if (!c.spec.linear_equilibrium)
        throw std::invalid_argument("amplification requires a linear equilibrium");
    const int q = c.spec.q, n = c.spec.N;

    // Relaxation in moment space: conserved rows untouched, the rest pulled
    // toward E W at rate s = 1/(sigma + 1/2).
    CMatrix relax(q, std::vector<Cplx>(q, 0.0));
    for (int i = 0; i < n; ++i) relax[i][i] = 1.0;
    for (int i = 0; i < q - n; ++i) {
        double s = 1.0 / (c.sigma[i].evaluate(bindings) + 0.5);
        relax[n + i][n + i] = 1.0 - s;
        for (int j = 0; j < n; ++j)
            relax[n + i][j] = s * c.spec.E[i][j].evaluate(bindings);
    }

    CMatrix lam = operator_symbol(c.lambda_op, k, bindings);
    for (auto& row : lam)
        for (Cplx& x : row) x *= -dt;
    return matrix_mul(matrix_exp(lam), relax);
}

namespace {

// Best pairing between two small eigenvalue sets, exhaustive over
// permutations (n stays tiny for conserved blocks).
double matched_distance(std::vector<Cplx> x, const std::vector<Cplx>& y) {
    const int n = (int)x.size();
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double acc = 0;
        for (int i = 0; i < n; ++i) acc += std::norm(x[i] - y[perm[i]]);
        best = std::min(best, acc);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::sqrt(best);
}

}  // namespace

OrderCheck order_check(const MomentCompilation& c, int truncation,
                       const std::vector<double>& k,
                       const std::map<std::string, double>& bindings, double t0) {
    if (truncation < 1 || truncation > 4)
        throw std::invalid_argument("truncation must be between 1 and 4");
    std::map<int, double> bound = resolve_bindings(bindings);
    Expansion series = expand(c, Engine::linear, truncation);
    const int n = c.spec.N;

    std::vector<CMatrix> alpha_sym;
    for (const OperatorMatrix& a : series.alpha)
        alpha_sym.push_back(operator_symbol(a, k, bound));

    OrderCheck out;
    out.truncation = truncation;
    for (int e = 4; e <= 10; ++e) {
        double dt = t0 * std::pow(2.0, -e);

        // Conserved modes of the exact step: the n eigenvalues nearest 1.
        std::vector<Cplx> g = eigenvalues(amplification(c, k, dt, bound));
        std::sort(g.begin(), g.end(),
                  [](Cplx a, Cplx b) { return std::abs(a - 1.0) < std::abs(b - 1.0); });
        std::vector<Cplx> rates(n);
        for (int i = 0; i < n; ++i) rates[i] = std::log(g[i]) / dt;

        // Growth rates of the truncated equivalent system.
        CMatrix acc(n, std::vector<Cplx>(n, 0.0));
        double scale = 1.0;
        for (int j = 0; j < truncation; ++j) {
            for (int r = 0; r < n; ++r)
                for (int s = 0; s < n; ++s) acc[r][s] -= scale * alpha_sym[j][r][s];
            scale *= dt;
        }
        std::vector<Cplx> predicted = eigenvalues(acc);

        out.dts.push_back(dt);
        out.defects.push_back(matched_distance(rates, predicted));
    }

    // Least-squares slope in log-log, skipping roundoff-floored points.  A
    // resolvable defect shrinks at least ~2x per halving of dt; once the
    // sequence stops decreasing it has hit the rate roundoff floor (about
    // eps/dt), so that point and everything below stay out of the fit.
    out.used.assign(out.dts.size(), true);
    for (size_t i = 0; i < out.dts.size(); ++i)
        if (out.defects[i] < 1e-13 ||
            (i > 0 && (!out.used[i - 1] || out.defects[i] > out.defects[i - 1] / 1.5)))
            out.used[i] = false;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (size_t i = 0; i < out.dts.size(); ++i) {
        if (!out.used[i]) continue;
        double x = std::log(out.dts[i]), y = std::log(out.defects[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    out.slope = m >= 2 ? (m * sxy - sx * sy) / (m * sxx - sx * sx) : 0.0;
    return out;
}

std::string order_check_csv(const std::vector<OrderCheck>& checks) {
    std::ostringstream os;
    os << "truncation,dt,defect,used\n";
    os.precision(15);
    for (const OrderCheck& c : checks)
        for (size_t i = 0; i < c.dts.size(); ++i)
            os << c.truncation << "," << c.dts[i] << "," << c.defects[i] << ","
               << (c.used[i] ? 1 : 0) << "\n";
    return os.str();
}

}  // namespace lbeq
