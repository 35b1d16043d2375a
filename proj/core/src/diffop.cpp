#include "lbeq/diffop.hpp"

#include <sstream>
#include <stdexcept>

namespace lbeq {

DiffOp DiffOp::d(int dim, int axis) {
    if (axis < 0 || axis >= dim) throw std::invalid_argument("DiffOp::d: axis out of range");
    return DiffOp(dim, Poly<Scalar>::variable(axis));
}

Scalar DiffOp::coefficient(const std::vector<int>& mu) const {
    if (static_cast<int>(mu.size()) != dim_)
        throw std::invalid_argument("DiffOp::coefficient: multi-index size mismatch");
    std::vector<Mono::Factor> f;
    for (int a = 0; a < dim_; ++a)
        if (mu[a] > 0) f.emplace_back(a, mu[a]);
    Mono target = Mono::from_factors(std::move(f));
    for (const auto& t : p_.terms())
        if (t.m == target) return t.c;
    return Scalar();
}

void DiffOp::check_dim(const DiffOp& o) const {
    if (dim_ != o.dim_) throw std::invalid_argument("DiffOp: dimension mismatch");
}

DiffOp DiffOp::operator+(const DiffOp& o) const {
    check_dim(o);
    return DiffOp(dim_, p_ + o.p_);
}

DiffOp DiffOp::operator-(const DiffOp& o) const {
    check_dim(o);
    return DiffOp(dim_, p_ - o.p_);
}

DiffOp DiffOp::operator*(const DiffOp& o) const {
    check_dim(o);
    return DiffOp(dim_, p_ * o.p_);
}

std::string axis_name(int axis, int dim) {
    static const char* xyz[] = {"x", "y", "z"};
    if (dim <= 3) return xyz[axis];
    return "x" + std::to_string(axis);
}

namespace {

std::string mono_deriv_str(const Mono& m, int dim, bool latex) {
    std::ostringstream os;
    bool first = true;
    for (auto& [axis, exp] : m.factors()) {
        if (!first) os << (latex ? " " : "*");
        first = false;
        if (latex) {
            os << "\\partial_{" << axis_name(axis, dim) << "}";
            if (exp > 1) os << "^{" << exp << "}";
        } else {
            os << "d" << axis_name(axis, dim);
            if (exp > 1) os << "^" << exp;
        }
    }
    return os.str();
}

}  // namespace

std::string DiffOp::str() const {
    if (p_.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : p_.terms()) {
        if (!first) os << " + ";
        first = false;
        std::string c = t.c.str();
        bool unit = t.c.is_one();
        if (t.m.is_one()) {
            os << c;
            continue;
        }
        if (!unit) os << (t.c.is_single_product() ? c : "(" + c + ")") << "*";
        os << mono_deriv_str(t.m, dim_, false);
    }
    return os.str();
}

std::string DiffOp::latex() const {
    if (p_.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : p_.terms()) {
        if (!first) os << " + ";
        first = false;
        if (t.m.is_one()) {
            os << t.c.latex();
            continue;
        }
        if (!t.c.is_one()) os << t.c.latex() << " \\, ";
        os << mono_deriv_str(t.m, dim_, true);
    }
    return os.str();
}

}  // namespace lbeq
