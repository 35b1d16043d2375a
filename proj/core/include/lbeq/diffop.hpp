// Constant-coefficient differential operators: polynomials in the partial
// derivative symbols of each axis, with Scalar coefficients.  Composition is
// plain polynomial multiplication and therefore commutative.
#pragma once

#include <string>
#include <vector>

#include "lbeq/poly.hpp"
#include "lbeq/scalar.hpp"

namespace lbeq {

class DiffOp {
public:
    explicit DiffOp(int dim = 1) : dim_(dim) {}
    DiffOp(int dim, const Scalar& c) : dim_(dim), p_(c) {}
    DiffOp(int dim, Poly<Scalar> p) : dim_(dim), p_(std::move(p)) {}

    static DiffOp identity(int dim) { return DiffOp(dim, Scalar(1)); }

    // The first-order operator along one axis.
    static DiffOp d(int dim, int axis);

    int dim() const { return dim_; }
    const Poly<Scalar>& poly() const { return p_; }
    bool is_zero() const { return p_.is_zero(); }

    // Highest total derivative order appearing.
    int order() const { return p_.total_degree(); }

    // True when no derivative symbol appears (a pure Scalar multiple).
    bool is_scalar() const { return p_.is_constant(); }
    Scalar scalar_part() const { return p_.constant(); }

    // Coefficient of the derivative multi-index mu (size dim).
    Scalar coefficient(const std::vector<int>& mu) const;

    DiffOp operator+(const DiffOp& o) const;
    DiffOp operator-(const DiffOp& o) const;
    DiffOp operator*(const DiffOp& o) const;
    DiffOp operator-() const { return DiffOp(dim_, -p_); }
    DiffOp scaled(const Scalar& c) const { return DiffOp(dim_, p_.scaled(c)); }

    bool operator==(const DiffOp& o) const { return dim_ == o.dim_ && p_ == o.p_; }

    std::string str() const;
    std::string latex() const;

private:
    void check_dim(const DiffOp& o) const;

    int dim_ = 1;
    Poly<Scalar> p_;
};

// Axis display names: x, y, z for low dimensions, x0, x1, ... beyond.
std::string axis_name(int axis, int dim);

}  // namespace lbeq
