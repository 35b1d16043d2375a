#include "lbeq/opmatrix.hpp"

#include <stdexcept>
#include <string>

namespace lbeq {

OperatorMatrix OperatorMatrix::identity(int n, int dim) {
    OperatorMatrix m(n, n, dim);
    for (int i = 0; i < n; ++i) m.at(i, i) = DiffOp::identity(dim);
    return m;
}

OperatorMatrix OperatorMatrix::from_scalars(const std::vector<std::vector<Scalar>>& m, int dim) {
    int rows = static_cast<int>(m.size());
    int cols = rows == 0 ? 0 : static_cast<int>(m[0].size());
    OperatorMatrix r(rows, cols, dim);
    for (int i = 0; i < rows; ++i) {
        if (static_cast<int>(m[i].size()) != cols)
            throw std::invalid_argument("OperatorMatrix: ragged scalar matrix");
        for (int j = 0; j < cols; ++j) r.at(i, j) = DiffOp(dim, m[i][j]);
    }
    return r;
}

OperatorMatrix OperatorMatrix::operator+(const OperatorMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_ || dim_ != o.dim_)
        throw std::invalid_argument("OperatorMatrix: shape mismatch in addition");
    OperatorMatrix r = *this;
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = r.a_[i] + o.a_[i];
    return r;
}

OperatorMatrix OperatorMatrix::operator-(const OperatorMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_ || dim_ != o.dim_)
        throw std::invalid_argument("OperatorMatrix: shape mismatch in subtraction");
    OperatorMatrix r = *this;
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = r.a_[i] - o.a_[i];
    return r;
}

OperatorMatrix OperatorMatrix::operator*(const OperatorMatrix& o) const {
    if (cols_ != o.rows_ || dim_ != o.dim_)
        throw std::invalid_argument("OperatorMatrix: shape mismatch in product");
    OperatorMatrix r(rows_, o.cols_, dim_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const DiffOp& aik = at(i, k);
            if (aik.is_zero()) continue;
            for (int j = 0; j < o.cols_; ++j) {
                const DiffOp& bkj = o.at(k, j);
                if (bkj.is_zero()) continue;
                r.at(i, j) = r.at(i, j) + aik * bkj;
            }
        }
    return r;
}

OperatorMatrix OperatorMatrix::scaled(const Scalar& c) const {
    OperatorMatrix r = *this;
    for (auto& e : r.a_) e = e.scaled(c);
    return r;
}

OperatorMatrix OperatorMatrix::operator-() const {
    OperatorMatrix r = *this;
    for (auto& e : r.a_) e = -e;
    return r;
}

OperatorMatrix OperatorMatrix::block(int r0, int c0, int nr, int nc) const {
    if (r0 < 0 || c0 < 0 || r0 + nr > rows_ || c0 + nc > cols_)
        throw std::invalid_argument("OperatorMatrix: block out of range");
    OperatorMatrix r(nr, nc, dim_);
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nc; ++j) r.at(i, j) = at(r0 + i, c0 + j);
    return r;
}

void OperatorMatrix::set_block(int r0, int c0, const OperatorMatrix& m) {
    if (r0 + m.rows() > rows_ || c0 + m.cols() > cols_)
        throw std::invalid_argument("OperatorMatrix: block out of range");
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) at(r0 + i, c0 + j) = m.at(i, j);
}

bool OperatorMatrix::is_scalar() const {
    for (const auto& e : a_)
        if (!e.is_zero() && !e.is_scalar()) return false;
    return true;
}

std::vector<std::vector<Scalar>> OperatorMatrix::to_scalars() const {
    std::vector<std::vector<Scalar>> m(rows_, std::vector<Scalar>(cols_));
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) {
            const DiffOp& e = at(i, j);
            if (e.is_zero()) continue;
            if (!e.is_scalar())
                throw std::invalid_argument("OperatorMatrix: entry carries derivatives");
            m[i][j] = e.scalar_part();
        }
    return m;
}

OperatorMatrix OperatorMatrix::inverse() const {
    if (rows_ != cols_) throw std::invalid_argument("OperatorMatrix: inverse of non-square matrix");
    const int n = rows_;
    auto s = to_scalars();  // rejects derivative entries

    // Fraction-free Gauss-Jordan: one-step elimination dividing by the
    // previous pivot keeps every division exact, with the left half ending as
    // d*I for the final pivot d.
    std::vector<std::vector<Scalar>> aug(n, std::vector<Scalar>(2 * n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) aug[i][j] = s[i][j];
        aug[i][n + i] = Scalar(1);
    }
    Scalar prev(1);
    for (int k = 0; k < n; ++k) {
        int piv = -1;
        for (int r = k; r < n; ++r)
            if (!aug[r][k].is_zero()) {
                piv = r;
                break;
            }
        if (piv < 0)
            throw std::runtime_error("singular matrix: no usable pivot in column " +
                                     std::to_string(k));
        std::swap(aug[k], aug[piv]);
        const Scalar p = aug[k][k];
        for (int i = 0; i < n; ++i) {
            if (i == k) continue;
            const Scalar f = aug[i][k];
            for (int j = 0; j < 2 * n; ++j) {
                if (j == k) continue;
                aug[i][j] = (p * aug[i][j] - f * aug[k][j]) / prev;
            }
            aug[i][k] = Scalar();
        }
        prev = p;
    }
    const Scalar d = aug[n - 1][n - 1];
    OperatorMatrix r(n, n, dim_);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r.at(i, j) = DiffOp(dim_, aug[i][n + j] / d);
    return r;
}

bool OperatorMatrix::is_zero() const {
    for (const auto& e : a_)
        if (!e.is_zero()) return false;
    return true;
}

}  // namespace lbeq
