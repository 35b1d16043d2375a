// Dense matrices of differential operators, with block extraction and an
// exact inverse for derivative-free matrices.
#pragma once

#include <vector>

#include "lbeq/diffop.hpp"

namespace lbeq {

class OperatorMatrix {
public:
    OperatorMatrix() = default;
    OperatorMatrix(int rows, int cols, int dim)
        : rows_(rows), cols_(cols), dim_(dim), a_(rows * cols, DiffOp(dim)) {}

    static OperatorMatrix identity(int n, int dim);
    static OperatorMatrix from_scalars(const std::vector<std::vector<Scalar>>& m, int dim);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int dim() const { return dim_; }

    DiffOp& at(int i, int j) { return a_[i * cols_ + j]; }
    const DiffOp& at(int i, int j) const { return a_[i * cols_ + j]; }

    OperatorMatrix operator+(const OperatorMatrix&) const;
    OperatorMatrix operator-(const OperatorMatrix&) const;
    OperatorMatrix operator*(const OperatorMatrix&) const;
    OperatorMatrix scaled(const Scalar&) const;
    OperatorMatrix operator-() const;

    OperatorMatrix block(int r0, int c0, int nr, int nc) const;
    void set_block(int r0, int c0, const OperatorMatrix& m);

    // True when every entry is derivative-free.
    bool is_scalar() const;
    std::vector<std::vector<Scalar>> to_scalars() const;

    // Exact inverse of a derivative-free square matrix (fraction-free
    // elimination; every division along the way is exact).  Throws
    // std::runtime_error naming the first column without a usable pivot.
    OperatorMatrix inverse() const;

    bool is_zero() const;
    bool operator==(const OperatorMatrix&) const = default;

private:
    int rows_ = 0, cols_ = 0, dim_ = 1;
    std::vector<DiffOp> a_;
};

}  // namespace lbeq
