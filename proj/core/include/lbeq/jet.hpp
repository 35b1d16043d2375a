// Jet expressions: rational functions of conserved fields and their spatial
// derivatives, with Scalar coefficients.  A jet variable is (field,
// multi-index); the denominator may involve the fields themselves but never
// their derivatives, which keeps total differentiation closed.
//
// The calculus needed by every expansion engine lives here: total spatial
// derivatives, application of operator matrices, and directional (Frechet)
// derivatives with respect to the conserved fields.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "lbeq/opmatrix.hpp"
#include "lbeq/poly.hpp"
#include "lbeq/scalar.hpp"
#include "lbeq/symbols.hpp"

namespace lbeq {

using JetPoly = Poly<Scalar>;

class JetExpr {
public:
    JetExpr() = default;  // zero
    explicit JetExpr(const Scalar& c) : num_(c) {}
    explicit JetExpr(const Rat& r) : num_(Scalar(r)) {}

    // The undifferentiated field k in a d-dimensional scheme.
    static JetExpr field(int k, int dim);
    static JetExpr var(int id);
    static JetExpr from_num_den(JetPoly n, JetPoly d);

    const JetPoly& num() const { return num_; }
    const JetPoly& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_scalar() const;    // no jet variables at all
    Scalar scalar_value() const;  // pre: is_scalar()

    JetExpr operator-() const;
    JetExpr operator+(const JetExpr&) const;
    JetExpr operator-(const JetExpr&) const;
    JetExpr operator*(const JetExpr&) const;
    JetExpr operator/(const JetExpr&) const;
    JetExpr& operator+=(const JetExpr& o) { return *this = *this + o; }
    JetExpr& operator-=(const JetExpr& o) { return *this = *this - o; }
    JetExpr scaled(const Scalar& c) const;
    JetExpr pow(int e) const;

    bool operator==(const JetExpr&) const = default;

private:
    JetPoly num_;            // zero by default
    JetPoly den_{Scalar(1)};  // monic, order-0 variables only
};

// Total derivative along one spatial axis (chain rule through every jet
// variable; Scalar coefficients are constants).
JetExpr total_derivative(const JetExpr& e, int axis);

// Iterated total derivative, the multi-index encoded as an axis monomial.
JetExpr derive_mono(const JetExpr& e, const Mono& mu);

// Row-wise application of a differential operator matrix to a jet vector.
std::vector<JetExpr> apply_operator(const OperatorMatrix& op, const std::vector<JetExpr>& v);

// Directional derivative with respect to the conserved fields:
// dF(W).G = sum over jet variables (k, mu) of dF/d(k,mu) * D^mu G_k.
JetExpr frechet(const JetExpr& f, const std::vector<JetExpr>& g);
std::vector<JetExpr> frechet(const std::vector<JetExpr>& f, const std::vector<JetExpr>& g);

// Second directional derivative along the same direction, computed as the
// nested first derivative d(dF.G).G.
JetExpr second_directional(const JetExpr& f, const std::vector<JetExpr>& g);
std::vector<JetExpr> second_directional(const std::vector<JetExpr>& f,
                                        const std::vector<JetExpr>& g);

// Replace field k (and all its derivatives, consistently) by an expression.
JetExpr substitute_field(const JetExpr& e, int field, const JetExpr& repl);

// Replace a scalar parameter inside every coefficient.
JetExpr substitute_param(const JetExpr& e, int param, const Scalar& value);

// Total derivative order of a jet monomial (sum of orders times exponents).
int mono_jet_order(const Mono& m);

// Every numerator monomial carries total derivative order exactly `order`
// (zero expressions are homogeneous of any order).
bool is_homogeneous(const JetExpr& e, int order);

// Rendering; field display names indexed by field id.
std::string jet_str(const JetExpr& e, const std::vector<std::string>& names);
std::string jet_latex(const JetExpr& e, const std::vector<std::string>& names);

// Small vector helpers shared by the expansion engines.
std::vector<JetExpr> jets_add(const std::vector<JetExpr>& a, const std::vector<JetExpr>& b);
std::vector<JetExpr> jets_sub(const std::vector<JetExpr>& a, const std::vector<JetExpr>& b);
std::vector<JetExpr> jets_scale(const std::vector<JetExpr>& a, const Scalar& c);
// Componentwise multiply by a diagonal of Scalars.
std::vector<JetExpr> jets_diag(const std::vector<Scalar>& d, const std::vector<JetExpr>& a);

}  // namespace lbeq
