// Exact rational functions over the registered parameters, with big-integer
// polynomial numerator and denominator kept coprime and sign-normalized
// (positive leading coefficient in the denominator).  These are the
// coefficients of every differential operator and jet expression.
#pragma once

#include <map>
#include <set>
#include <string>

#include "lbeq/poly.hpp"
#include "lbeq/symbols.hpp"

namespace lbeq {

class Scalar {
public:
    Scalar() = default;  // zero
    Scalar(long v);
    explicit Scalar(const Rat& r);
    static Scalar param(int id);
    static Scalar param(const std::string& name);
    static Scalar from_num_den(Poly<Int> n, Poly<Int> d);

    const Poly<Int>& num() const { return num_; }
    const Poly<Int>& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const;
    bool is_rational() const { return num_.is_constant() && den_.is_constant(); }
    Rat rational_value() const;  // pre: is_rational()

    Scalar operator-() const;
    Scalar operator+(const Scalar&) const;
    Scalar operator-(const Scalar&) const;
    Scalar operator*(const Scalar&) const;
    Scalar operator/(const Scalar&) const;  // throws std::domain_error on zero divisor
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

    Scalar invert() const;
    Scalar pow(int e) const;  // negative exponents invert

    Scalar substitute(int param, const Scalar& value) const;
    void collect_params(std::set<int>& out) const;

    // Numeric value under the given parameter bindings; throws
    // std::invalid_argument on an unbound parameter and std::domain_error
    // when the denominator vanishes.
    double evaluate(const std::map<int, double>& bindings) const;

    std::string str() const;
    std::string latex() const;

    // True when the value prints as a single product (no sum, denominator at
    // most a monomial), so renderers can skip parentheses around it.
    bool is_single_product() const;

    // Sign of the leading numerator coefficient; renderers use this to fold
    // the sign into "+ / -" separators.
    bool leading_negative() const { return !num_.is_zero() && num_.leading().c < 0; }

    bool operator==(const Scalar&) const = default;

private:
    Poly<Int> num_;             // zero by default
    Poly<Int> den_{Int(1)};
};

template <>
struct coeff_traits<Scalar> {
    static constexpr bool is_field = true;
    static Scalar zero() { return Scalar(); }
    static Scalar one() { return Scalar(1); }
    static Scalar from_int(long v) { return Scalar(v); }
    static bool is_zero(const Scalar& c) { return c.is_zero(); }
    static bool is_one(const Scalar& c) { return c.is_one(); }
    static Scalar divide(const Scalar& a, const Scalar& b) { return a / b; }
};

// Rendering helpers shared by the operator and jet printers.
std::string latex_symbol(const std::string& name);
std::string poly_int_str(const Poly<Int>& p, bool latex);

}  // namespace lbeq
